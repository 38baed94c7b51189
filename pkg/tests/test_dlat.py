from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from sogkit import (
    ElementBoundExceeded, FinPoset, FinSemilattice, NotDistributive, ideal_lattice,
    join_irreducible_data, lattice_from_poset, sublattice_generated,
)
from sogkit.dlat import FinDistLattice, lattice_of_family
from sogkit.generators import random_poset

posets = st.randoms(use_true_random=False).map(lambda r: random_poset(r, max_size=5))


def join_closed_downsets(S: FinSemilattice) -> set[frozenset]:
    """Independent count: nonempty subsets closed downward and under joins."""
    out = set()
    n = S.size
    for k in range(1, n + 1):
        for sub in combinations(range(n), k):
            A = frozenset(sub)
            if any(S.leq(y, x) and y not in A for x in A for y in range(n)):
                continue
            if any(S.join(x, y) not in A for x in A for y in A):
                continue
            out.add(A)
    return out


def diamond() -> FinSemilattice:
    # 0, a, b, 1 with a + b = 1
    return FinSemilattice([[0, 1, 2, 3], [1, 1, 3, 3], [2, 3, 2, 3], [3, 3, 3, 3]], 0,
                          ["0", "a", "b", "1"])


def m3() -> FinSemilattice:
    t = [[0, 1, 2, 3, 4], [1, 1, 4, 4, 4], [2, 4, 2, 4, 4], [3, 4, 4, 3, 4], [4, 4, 4, 4, 4]]
    return FinSemilattice(t, 0, ["0", "x", "y", "z", "1"])


# -- posets and lattices ---------------------------------------------------------


def test_empty_poset_gives_one_element_lattice():
    L = lattice_from_poset(FinPoset(0))
    assert L.elements == (0,)
    assert L.top == L.bottom == 0


def test_antichain_gives_boolean_square():
    L = lattice_from_poset(FinPoset.antichain(2))
    assert sorted(L.elements) == [0, 1, 2, 3]


def test_chain_gives_longer_chain():
    L = lattice_from_poset(FinPoset.chain(2))
    assert L.elements == (0, 1, 3)


def test_poset_rejects_cycles():
    with pytest.raises(ValueError):
        FinPoset(2, [(0, 1), (1, 0)])


def test_element_bound():
    with pytest.raises(ElementBoundExceeded):
        lattice_from_poset(FinPoset.antichain(6), bound=10)


def test_join_irreducibles_boolean():
    L = lattice_from_poset(FinPoset.antichain(2))
    data = join_irreducible_data(L)
    assert data.irreducibles == [1, 2]
    assert data.lower_cover == {0: 0, 1: 0}


def test_join_irreducibles_three_chain():
    L = lattice_from_poset(FinPoset.chain(2))
    data = join_irreducible_data(L)
    # a = {0}, 1 = {0, 1}; 1_* = a, a_* = 0
    assert data.irreducibles == [1, 3]
    assert data.lower_cover == {0: 0, 1: 1}


@given(posets)
def test_birkhoff_identity_and_lower_covers(P):
    L = lattice_from_poset(P)
    data = join_irreducible_data(L)
    for a in L.elements:
        acc = 0
        for p in data.below(a):
            acc |= data.irreducibles[p]
        assert acc == a
    for p, j in enumerate(data.irreducibles):
        strictly_below = [x for x in L.elements if L.leq(x, j) and x != j]
        maximal = [x for x in strictly_below
                   if not any(y != x and L.leq(x, y) for y in strictly_below)]
        assert maximal == [data.lower_cover[p]]


@given(posets)
def test_round_trip_through_irreducibles(P):
    L = lattice_from_poset(P)
    irr = [a for a in L.elements if len(L.lower_covers(a)) == 1]
    less = [(i, j) for i, a in enumerate(irr) for j, b in enumerate(irr)
            if i != j and L.leq(a, b)]
    L2 = lattice_from_poset(FinPoset(len(irr), less))
    iso = {}
    for a in L2.elements:
        m = 0
        for i in range(len(irr)):
            if a >> i & 1:
                m |= irr[i]
        iso[a] = m
    assert sorted(iso.values()) == sorted(L.elements)
    for a in L2.elements:
        for b in L2.elements:
            assert iso[a | b] == iso[a] | iso[b]
            assert iso[a & b] == iso[a] & iso[b]


@given(posets)
def test_distributive_law(P):
    L = lattice_from_poset(P)
    els = L.elements
    if len(els) > 64:
        return
    for x in els:
        for y in els:
            for z in els:
                assert L.meet(x, L.join(y, z)) == L.join(L.meet(x, y), L.meet(x, z))


def test_is_element_and_covers():
    L = lattice_from_poset(FinPoset.chain(3))
    assert L.is_element(3) and not L.is_element(2)
    assert L.upper_covers(1) == [3]
    assert L.lower_covers(7) == [3]


# -- semilattices and ideals -----------------------------------------------------


def test_semilattice_validation():
    with pytest.raises(ValueError):
        FinSemilattice([[0, 1], [0, 1]])
    with pytest.raises(ValueError):
        FinSemilattice([[0, 1], [1, 0]])


def test_ideal_lattice_two_chain():
    I = ideal_lattice(FinSemilattice.chain(2))
    assert I.ideals == [frozenset({0}), frozenset({0, 1})]
    assert I.distributive
    assert all(0 in I.ideals[I.principal[e]] for e in range(2))


def test_ideal_lattice_diamond_has_four_ideals():
    # every ideal of a finite semilattice is principal, so the diamond has 4
    S = diamond()
    I = ideal_lattice(S)
    assert len(I.ideals) == 4
    assert set(I.ideals) == join_closed_downsets(S)
    assert I.distributive


def test_ideal_lattice_reports_m3():
    I = ideal_lattice(m3())
    assert not I.distributive
    assert I.witness is not None
    assert I.lattice is None


def test_m3_has_no_birkhoff_model():
    with pytest.raises(NotDistributive):
        m3().as_lattice()


def _all_semilattices(n):
    """Join-semilattices on 0..n-1 with zero 0, as lattices of sets in small powersets."""
    seen = set()
    universe = range(1, 1 << 3)
    for fam in combinations(universe, n - 1):
        sets = [0] + list(fam)
        idx = {s: i for i, s in enumerate(sets)}
        if any((a | b) not in idx for a in sets for b in sets):
            continue
        S = FinSemilattice([[idx[a | b] for b in sets] for a in sets], 0)
        if S.table not in seen:
            seen.add(S.table)
            yield S


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_ideals_are_join_closed_downsets(n):
    count = 0
    for S in _all_semilattices(n):
        I = ideal_lattice(S)
        assert set(I.ideals) == join_closed_downsets(S)
        assert len(I.ideals) == S.size
        count += 1
    assert count > 0


def test_ideal_lattice_mask_matches_order():
    S = diamond()
    I = ideal_lattice(S)
    for e in range(S.size):
        for f in range(S.size):
            assert S.leq(e, f) == I.lattice.leq(I.mask[e], I.mask[f])
            assert I.mask[S.join(e, f)] == I.mask[e] | I.mask[f]


# -- sublattices -----------------------------------------------------------------


def test_sublattice_single_element():
    L = lattice_from_poset(FinPoset.antichain(2))
    sub = sublattice_generated(L, [1])
    assert len(sub.lattice.elements) == 1


def test_sublattice_two_incomparable():
    L = lattice_from_poset(FinPoset.antichain(3))
    sub = sublattice_generated(L, [1, 2])
    assert sorted(sub.members) == [0, 1, 2, 3]
    assert len(sub.lattice.elements) == 4
    assert sub.lattice.poset == FinPoset.antichain(2)


@given(posets, st.randoms(use_true_random=False))
def test_generated_sublattice_closed_and_embedded(P, r):
    L = lattice_from_poset(P)
    els = L.elements
    gens = r.sample(els, min(len(els), r.randint(1, 3)))
    sub = sublattice_generated(L, gens)
    members = set(sub.members)
    assert set(gens) <= members
    for a in members:
        for b in members:
            assert a | b in members and a & b in members
    D = sub.lattice
    for x in D.elements:
        for y in D.elements:
            assert sub.embed[x | y] == sub.embed[x] | sub.embed[y]
            assert sub.embed[x & y] == sub.embed[x] & sub.embed[y]


def test_sublattice_rejects_foreign_elements():
    L = lattice_from_poset(FinPoset.chain(2))
    with pytest.raises(ValueError):
        sublattice_generated(L, [2])


def test_lattice_of_family_rejects_unclosed():
    with pytest.raises(NotDistributive):
        lattice_of_family([0, 1, 2])


def test_fin_dist_lattice_downsets_within():
    L = FinDistLattice(FinPoset.chain(3))
    assert L.downsets_within(3) == [0, 1, 3]
