"""Subgroup-valued lattice maps: purity, distributive elements and their envelope.

    python demos/purity_and_envelope.py
"""

from sogkit import (
    FgAbGroup, FinPoset, SubgroupHom, check_purity_condition, chardistr_extract,
    distributive_envelope, is_distributive_element, is_pure, lattice_from_poset,
    pure_approximation, purity_violations, validate_hom,
)
from sogkit.oracle import brute_purity

# 2Z inside Z is not pure: 2 = 2*1 but 1 is not in 2Z
Z = FgAbGroup.free(1)
A, B = Z.subgroup([[2]]), Z.whole()
print("2Z pure in Z:", is_pure(A, B), "| oracle:", brute_purity(A, B))

# The chain 0 < 2Z < Z as a map from the three-element chain
chain3 = lattice_from_poset(FinPoset(2, [(0, 1)]))
phi = SubgroupHom.from_irreducibles(chain3, Z, {0: A, 1: B}, bottom=Z.trivial())
print("lattice laws hold:", validate_hom(phi).valid)
print("purity condition:", check_purity_condition(phi), "violations:", purity_violations(phi))

# Replacing the image by something pure
H = Z.subgroup([[6]])
chain = lattice_from_poset(FinPoset(1, []))
res = pure_approximation(SubgroupHom.from_irreducibles(chain, Z, {0: Z.whole()}), H)
print("pure approximation of <6> inside a pure chain:",
      [res.psi(u).generators for u in chain.elements], "certificate ok:", res.ok)

# Two independent axes of (Z/2)^2: the diagonal is not distributive
V = FgAbGroup.cyclic_sum([2, 2])
square = lattice_from_poset(FinPoset(2, []))
axes = SubgroupHom.from_irreducibles(square, V, {0: V.subgroup([[1, 0]]), 1: V.subgroup([[0, 1]])})
diag = V.subgroup([[1, 1]])
first = V.subgroup([[1, 0]])
print("diagonal distributive:", is_distributive_element(diag, axes))
print("first axis distributive:", is_distributive_element(first, axes))
print("family of the first axis:", {p: s.generators for p, s in chardistr_extract(first, axes).values.items()})
env = distributive_envelope(diag, axes)
print("envelope of the diagonal:", env.generators, "is whole group:", env == V.whole())
