"""Finitely generated approximations of homomorphisms satisfying the purity condition.

Given ``phi: D -> Sub G`` with ``G_u`` pure in ``G_v`` whenever ``u <= v`` and a
finitely generated ``H``, ``pure_approximation`` returns ``psi`` with
finitely generated values, the same two properties, and
``H & G_u <= psi(u) <= G_u``.  The construction splits ``G`` into its torsion
part and the free quotient ``G/T(G)``:

* on the quotient, a distributive envelope of ``pi(H)`` is split along the
  lattice and lifted back into ``G`` (the map ``alpha``);
* what the lift misses is torsion, handled by ``approx_torsion``, which
  decomposes along complements ``G_p = G_{p_*} + K_p`` inside ``G[m]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .dlat import FinDistLattice, FinPoset, bits, mask_label
from .errors import NotPure, PreconditionViolated, PurityRequired, TorsionRequired
from .fgab import (Subgroup, TorsionSplit, direct_complement, is_pure,
                   torsion_split)
from .intmat import combine, lcm, solve_rows
from .lathom import (SubgroupHom, _decompose, distributive_envelope, purity_violations,
                     validate_hom)

__all__ = [
    "ApproxResult", "hom_m_torsion", "hom_torsion_parts", "approx_torsion",
    "pure_approximation", "pure_witness", "two_chain",
]


@dataclass
class ApproxResult:
    """The approximation ``psi`` together with what it was checked against."""

    phi: SubgroupHom
    H: Subgroup
    psi: SubgroupHom
    certificate: list[tuple[int, Subgroup, Subgroup, Subgroup]] = field(default_factory=list)
    purity_violations: list[tuple[int, int]] = field(default_factory=list)
    hom_valid: bool = True

    def sandwich_holds(self) -> bool:
        return all(low <= mid <= high for _, low, mid, high in self.certificate)

    @property
    def ok(self) -> bool:
        return self.hom_valid and not self.purity_violations and self.sandwich_holds()


def _certify(phi: SubgroupHom, H: Subgroup, psi: SubgroupHom) -> ApproxResult:
    cert = [(u, H & phi.table[u], psi.table[u], phi.table[u]) for u in phi.lattice.elements]
    res = ApproxResult(phi, H, psi, cert, purity_violations(psi), validate_hom(psi).valid)
    if not res.ok:
        raise RuntimeError("approximation failed its own certificate")
    return res


def _require_purity(phi: SubgroupHom) -> None:
    if not validate_hom(phi).valid:
        raise PreconditionViolated("phi is not a lattice homomorphism")
    bad = purity_violations(phi)
    if bad:
        u, v = bad[0]
        raise PurityRequired(f"G_{mask_label(u)} is not pure in G_{mask_label(v)}")


def hom_m_torsion(phi: SubgroupHom, m: int, split: TorsionSplit | None = None) -> SubgroupHom:
    """``u -> G_u[m]``, a lattice homomorphism satisfying the purity condition."""
    if m <= 0:
        raise ValueError("m must be positive")
    _require_purity(phi)
    ts = split or torsion_split(phi.group)
    Gm = ts.m_torsion(m)
    out = phi.map_values(lambda Gu: Gu & Gm)
    _recheck(out)
    return out


def _recheck(psi: SubgroupHom) -> None:
    if not validate_hom(psi).valid or purity_violations(psi):
        raise RuntimeError("induced map lost the lattice or purity property")


def hom_torsion_parts(phi: SubgroupHom):
    """``(T(phi), phibar, split)``: torsion parts ``T(G_u)`` and images ``pi(G_u)`` in ``G/T(G)``."""
    _require_purity(phi)
    ts = torsion_split(phi.group)
    T = ts.torsion
    tphi = phi.map_values(lambda Gu: Gu & T)
    bar = SubgroupHom(phi.lattice, ts.quotient,
                      {u: ts.pi_subgroup(Gu) for u, Gu in phi.table.items()})
    _recheck(tphi)
    _recheck(bar)
    return tphi, bar, ts


def _torsion_pieces(phi: SubgroupHom, H: Subgroup, ts: TorsionSplit) -> SubgroupHom:
    L = phi.lattice
    G = phi.group
    H1 = H & phi.top
    m = 1
    for g in H1.nonzero_generators():
        m = lcm(m, G.element_order(g))
    if m == 1:
        return SubgroupHom.constant(L, G.trivial())
    Gm = ts.m_torsion(m)
    phim = phi.map_values(lambda Gu: Gu & Gm)
    K = {p: direct_complement(phim.table[L.lower_cover(p)], phim.at(p)) for p in range(L.rank)}
    parts = {-1: phim.bottom}
    parts.update(K)
    collected: dict[int, list] = {q: [] for q in parts}
    for u in L.elements:
        local = {-1: parts[-1]}
        local.update({p: K[p] for p in bits(u)})
        pieces = _decompose((H1 & phi.table[u]).nonzero_generators(), local, G)
        for q, vs in pieces.items():
            collected[q].extend(vs)
    small = {q: Subgroup(G, vs) for q, vs in collected.items()}
    table = {}
    for u in L.elements:
        acc = small[-1]
        for p in bits(u):
            acc = acc + small[p]
        table[u] = acc
    return SubgroupHom(L, G, table)


def approx_torsion(phi: SubgroupHom, H: Subgroup) -> ApproxResult:
    """Approximation when every value of ``phi`` is a torsion (finite) subgroup.

    ``m`` is the least common multiple of the orders of the generators of
    ``H & G_1``; everything happens inside ``G[m]``.
    """
    _require_purity(phi)
    if not phi.top.is_finite():
        raise TorsionRequired("G_1 has elements of infinite order")
    if H.group != phi.group:
        raise PreconditionViolated("H and phi live in different groups")
    psi = _torsion_pieces(phi, H, torsion_split(phi.group))
    return _certify(phi, H, psi)


def pure_approximation(phi: SubgroupHom, H: Subgroup) -> ApproxResult:
    """Finitely generated ``psi`` with ``H & G_u <= psi(u) <= G_u`` and the purity condition."""
    if H.group != phi.group:
        raise PreconditionViolated("H and phi live in different groups")
    tphi, bar, ts = hom_torsion_parts(phi)
    L = phi.lattice
    G = phi.group
    A = H & phi.top

    Q = ts.quotient
    Hbar = distributive_envelope(ts.pi_subgroup(A), bar, check=False)
    Hb = {u: Hbar & bar.table[u] for u in L.elements}
    # lift a basis of Hbar_0 through G_0 and of each complement Kbar_p through G_p
    basis_bar, lifts = [], []
    for b in Hb[0].basis:
        basis_bar.append(b)
        lifts.append(ts.lift(b, phi.bottom))
    owner = [-1] * len(basis_bar)
    for p in range(L.rank):
        Kbar = direct_complement(Hb[L.lower_cover(p)], Hb[L.principal(p)])
        for b in Kbar.basis:
            basis_bar.append(b)
            lifts.append(ts.lift(b, phi.at(p)))
            owner.append(p)

    def alpha(xbar):
        c = solve_rows(basis_bar, xbar, Q.rank)
        if c is None:
            raise RuntimeError("element outside the envelope")
        return combine(c, lifts, G.rank)

    Hu = {}
    for u in L.elements:
        Hu[u] = Subgroup(G, [lifts[i] for i, o in enumerate(owner) if o == -1 or (u >> o) & 1])
    disc = []
    for u in L.elements:
        for a in (A & phi.table[u]).nonzero_generators():
            d = [x - y for x, y in zip(a, alpha(ts.pi(a)))]
            if not G.is_zero(d):
                disc.append(d)
    B = Subgroup(G, disc)
    if not B <= ts.torsion:
        raise RuntimeError("lift discrepancy is not torsion")
    Gp = _torsion_pieces(tphi, B, ts)
    if not (Gp.top & Hu[L.top]).is_trivial():
        raise RuntimeError("torsion part meets the lifted free part")
    psi = SubgroupHom(L, G, {u: Gp.table[u] + Hu[u] for u in L.elements})
    return _certify(phi, H, psi)


def two_chain(A: Subgroup, B: Subgroup) -> SubgroupHom:
    """The homomorphism from the two-element chain sending ``0 -> A`` and ``1 -> B``."""
    L = FinDistLattice(FinPoset(1))
    return SubgroupHom(L, A.group, {0: A, 1: B})


def pure_witness(A: Subgroup, B: Subgroup, H: Subgroup):
    """Finitely generated ``A' <= A``, ``B' <= B`` with ``A & H <= A'``, ``H <= B'``, ``A'`` a summand of ``B'``.

    Returns ``(A', B', K)`` where ``K`` is a complement of ``A'`` in ``B'``.
    """
    if not A <= B:
        raise PreconditionViolated("A must lie inside B")
    if not H <= B:
        raise PreconditionViolated("H must lie inside B")
    if not is_pure(A, B):
        raise NotPure("A is not pure in B")
    res = pure_approximation(two_chain(A, B), H)
    A2, B2 = res.psi.table[0], res.psi.table[1]
    K = direct_complement(A2, B2)
    return A2, B2, K
