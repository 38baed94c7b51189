"""From a Cayley table to a Cuntz-algebra blueprint.

    python demos/monoid_to_blueprint.py
"""

from sogkit import (
    FinMonoid, MonoidMap, SogElement, block_monoid, check_axioms, descriptor_name,
    emit_blueprint, fg_submonoid_cover, presentation_from_monoid, realize_block,
    retract_witness,
)
from sogkit.oracle import brute_refinement

# Z/2 with a new zero adjoined: 1bar + 1bar = 0bar
table = [[0, 1, 2], [1, 2, 1], [2, 1, 2]]
M = FinMonoid(table, 0, ["0", "1bar", "0bar"])
report = check_axioms(M)
print("axiom flags:", dict(report.flags), "all pass:", report.all_pass)

P, iso = presentation_from_monoid(M)
print("presentation valid:", P.validate().valid)
print("element map:", {M.labels[k]: (v.idem, v.grp) for k, v in iso.items()})

cover = fg_submonoid_cover(P, P.generators())
print("cover semilattice size:", cover.N.lam.size)

W = retract_witness(P)
print("retract through", len(W.factors), "cyclic blocks, checked exhaustively:", W.exhaustive)

# The diamond semilattice M3 fails refinement
m3 = [[0, 1, 2, 3, 4], [1, 1, 4, 4, 4], [2, 4, 2, 4, 4], [3, 4, 4, 3, 4], [4, 4, 4, 4, 4]]
N = FinMonoid(m3, 0, ["0", "x", "y", "z", "1"])
ok, w = brute_refinement(N)
print("M3 refinement:", ok, "witness:", " + ".join(N.labels[i] for i in w[:2]), "=",
      " + ".join(N.labels[i] for i in w[2:]))

# Blocks and their algebras
for spec in [(2, 1), (0, 4), (0, -1), (5, 7)]:
    print("block", spec, "->", descriptor_name(realize_block(spec)))

# A two-stage inductive system: multiplication by 2 on Z
P1, P2 = block_monoid([(0, 1)]), block_monoid([(0, 2)])
double = MonoidMap.from_function(P1, P2, lambda x: SogElement(x.idem, (2 * x.grp[0],)))
bp = emit_blueprint([P1, P2], [double])
print("blueprint stages:", bp.stage_names())
