import random

import pytest
from hypothesis import given, strategies as st

from sogkit import (
    AmbientMismatch, FgAbGroup, IntMatrix, NoPreimage, NotASummand, NotContained, Subgroup,
    direct_complement, group_from_relations, is_pure, smith_normal_form, subgroup_intersection,
    subgroup_membership, subgroup_sum, torsion_split,
)
from sogkit.generators import abelian_groups_up_to, random_group, random_subgroup
from sogkit.intmat import matmul_rows
from sogkit.oracle import all_subgroups, brute_purity

matrices = st.integers(1, 6).flatmap(
    lambda r: st.integers(1, 6).flatmap(
        lambda c: st.lists(st.lists(st.integers(-20, 20), min_size=c, max_size=c),
                           min_size=r, max_size=r)))


def assert_snf(A):
    U, D, V = smith_normal_form(A)
    assert matmul_rows(matmul_rows(U.to_rows(), A), V.to_rows()) == D.to_rows()
    assert abs(U.det()) == 1 and abs(V.det()) == 1
    assert D.is_diagonal()
    d = D.diagonal()
    assert all(x >= 0 for x in d)
    for a, b in zip(d, d[1:]):
        assert (a == 0 and b == 0) or (a != 0 and b % a == 0)
    return U, D, V


# -- Smith normal form ---------------------------------------------------------


def test_snf_zero_matrix_fixed_point():
    U, D, V = assert_snf([[0]])
    assert D.to_rows() == [[0]] and U.to_rows() == [[1]] and V.to_rows() == [[1]]


def test_snf_coprime_diagonal():
    assert assert_snf([[2, 0], [0, 3]])[1].diagonal() == [1, 6]


def test_snf_gcd_two():
    assert assert_snf([[2, 4], [6, 8]])[1].diagonal() == [2, 4]


@given(matrices)
def test_snf_certificate(A):
    assert_snf(A)


def test_snf_rectangular_and_degenerate():
    assert_snf([[0, 0, 0]])
    assert_snf([[1], [2], [3]])
    assert_snf([[4, 6, 10]])
    assert assert_snf([[4, 6, 10]])[1].diagonal() == [2]


# -- groups --------------------------------------------------------------------


def test_group_from_relations_examples():
    Z = group_from_relations(1, [])
    assert Z.invariants == [0]
    assert group_from_relations(1, [[4]]).invariants == [4]
    G = group_from_relations(2, [[2, 0], [0, 3]])
    assert G.invariants == [6]
    assert G.order() == 6
    assert G.invariant_factors == [1, 6]


def test_group_from_relations_dimension_mismatch():
    with pytest.raises(ValueError):
        group_from_relations(2, [[1, 2, 3]])


def test_elements_are_coset_representatives():
    G = FgAbGroup.cyclic_sum([0, 4])
    assert G.element([3, 5]) == G.element([3, 1])
    assert G.element([0, 4]).is_zero()
    assert G.element_order([0, 2]) == 2
    assert G.element_order([1, 0]) == 0


def test_abelian_group_census():
    # number of abelian groups of each order 1..16 sums to 25
    assert len(abelian_groups_up_to(16)) == 25


# -- subgroups -------------------------------------------------------------------


def test_membership_examples():
    G = FgAbGroup.free(2)
    H = G.subgroup([(1, 1), (1, -1)])
    assert subgroup_membership((0, 0), H) == [0, 0]
    assert subgroup_membership((2, 0), H) == [1, 1]
    assert subgroup_membership((1, 0), H) is None


def test_sum_examples():
    Z = FgAbGroup.free(1)
    A = Z.subgroup([[2]])
    assert A + Z.trivial() == A
    assert subgroup_sum(A, Z.subgroup([[3]])) == Z.whole()
    Z2 = FgAbGroup.free(2)
    assert Z2.subgroup([(1, 0)]) + Z2.subgroup([(0, 1)]) == Z2.whole()


def test_intersection_examples():
    Z = FgAbGroup.free(1)
    A = Z.subgroup([[2]])
    assert A & A == A
    assert subgroup_intersection(A, Z.subgroup([[3]])) == Z.subgroup([[6]])
    Z2 = FgAbGroup.free(2)
    assert (Z2.subgroup([(1, 1)]) & Z2.subgroup([(1, 0)])).is_trivial()


def test_ambient_mismatch():
    A = FgAbGroup.free(1).whole()
    B = FgAbGroup.free(2).whole()
    with pytest.raises(AmbientMismatch):
        subgroup_sum(A, B)


def test_purity_examples():
    Z = FgAbGroup.free(1)
    assert is_pure(Z.trivial(), Z.whole())
    assert is_pure(Z.whole(), Z.whole())
    assert not is_pure(Z.subgroup([[2]]), Z.whole())
    Z2 = FgAbGroup.free(2)
    assert is_pure(Z2.subgroup([(1, 0)]), Z2.whole())


def test_purity_requires_containment():
    Z = FgAbGroup.free(1)
    with pytest.raises(NotContained):
        is_pure(Z.whole(), Z.subgroup([[2]]))


def test_direct_complement_examples():
    Z2 = FgAbGroup.free(2)
    A = Z2.subgroup([(1, 0)])
    K = direct_complement(A, Z2.whole())
    assert (A & K).is_trivial() and A + K == Z2.whole()
    A = Z2.subgroup([(1, 1)])
    K = direct_complement(A, Z2.whole())
    (k,) = K.nonzero_generators()
    assert abs(IntMatrix.from_rows([(1, 1), k]).det()) == 1
    Z4 = FgAbGroup.cyclic_sum([4])
    with pytest.raises(NotASummand):
        direct_complement(Z4.subgroup([[2]]), Z4.whole())


def test_torsion_split_examples():
    ts = torsion_split(FgAbGroup.free(2))
    assert ts.torsion.is_trivial() and ts.quotient.rank == 2
    G = FgAbGroup.cyclic_sum([0, 4])
    ts = torsion_split(G)
    assert ts.torsion == G.subgroup([(0, 1)])
    assert ts.m_torsion(2) == G.subgroup([(0, 2)])
    H = G.subgroup([(1, 3)])
    x = ts.lift(ts.pi((1, 0)), H)
    assert H.contains(x) and ts.pi(x) == ts.pi((1, 0))
    assert G.reduce(x) == G.reduce((1, 3))
    with pytest.raises(NoPreimage):
        ts.lift(ts.pi((1, 0)), G.subgroup([(2, 0)]))


def test_subgroup_counts():
    # counts of subgroups of small elementary and homocyclic groups
    assert len(all_subgroups(FgAbGroup.cyclic_sum([2, 2, 2, 2]))) == 67
    assert len(all_subgroups(FgAbGroup.cyclic_sum([4, 4]))) == 15
    assert len(all_subgroups(FgAbGroup.cyclic_sum([2, 2, 4]))) == 27


# -- properties ------------------------------------------------------------------


@given(st.randoms(use_true_random=False))
def test_canonical_form_ignores_generator_choice(r):
    G = random_group(r)
    H = random_subgroup(r, G.whole(), max_gens=3)
    gens = list(H.generators)
    extra = []
    for _ in range(r.randint(0, 3)):
        c = [r.randint(-3, 3) for _ in gens]
        extra.append([sum(ci * g[j] for ci, g in zip(c, gens)) for j in range(G.rank)])
    shuffled = gens + extra
    r.shuffle(shuffled)
    H2 = Subgroup(G, shuffled)
    assert H2.canonical_form.to_rows() == H.canonical_form.to_rows()
    assert H2 == H


@given(st.randoms(use_true_random=False))
def test_hierarchy_and_random_purity_agreement(r):
    G = random_group(r, max_free=2, max_torsion=16)
    B = random_subgroup(r, G.whole(), max_gens=3)
    A = random_subgroup(r, B, max_gens=2)
    pure = is_pure(A, B)
    assert pure == brute_purity(A, B)
    try:
        K = direct_complement(A, B)
    except NotASummand:
        assert not pure
    else:
        assert pure and (A & K).is_trivial() and A + K == B
    assert A <= B


def _modular_law_holds(subs):
    for A in subs:
        for C in subs:
            if not C <= A:
                continue
            for B in subs:
                if A & (B + C) != (A & B) + C:
                    return False
    return True


@pytest.mark.parametrize("orders", [[2, 4], [8], [2, 2, 2], [3, 3], [2, 6]])
def test_modular_law_exhaustive(orders):
    G = FgAbGroup.cyclic_sum(orders)
    subs = [G.subgroup(gens) for _, gens in all_subgroups(G)]
    assert _modular_law_holds(subs)


@given(st.randoms(use_true_random=False))
def test_modular_law_random_z3(r):
    G = FgAbGroup.free(3)
    A = random_subgroup(r, G.whole(), max_gens=3)
    C = random_subgroup(r, A, max_gens=2)
    B = random_subgroup(r, G.whole(), max_gens=2)
    assert A & (B + C) == (A & B) + C


@pytest.mark.parametrize("orders", [[2, 4], [4, 4], [2, 2, 2], [16], [2, 8]])
def test_purity_transitive_on_chains(orders):
    G = FgAbGroup.cyclic_sum(orders)
    subs = [G.subgroup(gens) for _, gens in all_subgroups(G)]
    pure = {(i, j): is_pure(a, b) for i, a in enumerate(subs) for j, b in enumerate(subs)
            if a <= b}
    for (i, j), p in pure.items():
        if not p:
            continue
        for (j2, k), q in pure.items():
            if j2 == j and q:
                assert pure[(i, k)]


def test_torsion_split_random(rng):
    for _ in range(40):
        G = random_group(rng)
        ts = torsion_split(G)
        assert ts.quotient.rank == G.free_rank
        for g in ts.torsion.generators:
            assert G.element_order(g) > 0
        H = random_subgroup(rng, G.whole(), max_gens=2)
        for g in H.generators:
            x = ts.lift(ts.pi(g), H)
            assert H.contains(x) and ts.pi(x) == ts.pi(g)


def test_cyclic_decomposition_coordinates(rng):
    for _ in range(40):
        G = random_group(rng)
        H = random_subgroup(rng, G.whole(), max_gens=3)
        dec = H.decomposition
        for g in H.generators:
            assert G.reduce(dec.element(dec.coordinates(g))) == G.reduce(g)
        assert sorted(m for m in dec.moduli if m) == sorted(m for m in H.invariants() if m)


def test_finite_elements_enumeration():
    G = FgAbGroup.cyclic_sum([2, 4])
    assert len(set(G.whole().elements())) == 8
    assert len(set(G.subgroup([(1, 2)]).elements())) == 2


def test_random_seeded_snf_batch():
    r = random.Random(7)
    for _ in range(200):
        rows, cols = r.randint(1, 6), r.randint(1, 6)
        assert_snf([[r.randint(-20, 20) for _ in range(cols)] for _ in range(rows)])
