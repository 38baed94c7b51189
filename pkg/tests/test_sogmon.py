import random

import pytest
from hypothesis import given, strategies as st

from sogkit import (
    BadSpec, Block, ElementNotInMonoid, FgAbGroup, FinMonoid, FinPoset, FinSemilattice,
    InvalidElement, InvalidPresentation, NotALattice, NotRegular, PurityFailure, SogElement,
    SogPresentation, block_monoid, brute_refinement, check_axioms, decompose_regular, direct_sum,
    fg_submonoid_cover, lattice_from_poset, presentation_from_hom, presentation_from_monoid,
    retract_witness, sog_add,
)
from sogkit.generators import commutative_monoids, random_clifford_monoid, random_hom

seeds = st.randoms(use_true_random=False)


def z2_block():
    return FinMonoid([[0, 1, 2], [1, 1, 2], [2, 2, 1]], 0, ["0", "0bar", "1bar"])


def m3_monoid():
    t = [[0, 1, 2, 3, 4], [1, 1, 4, 4, 4], [2, 4, 2, 4, 4], [3, 4, 4, 3, 4], [4, 4, 4, 4, 4]]
    return FinMonoid(t, 0, ["0", "x", "y", "z", "1"])


def chain_presentation():
    """Lambda = 3-chain 0 < a < b over Z^2 with G_a = Z(1,0) and G_b = Z^2."""
    lam = FinSemilattice.chain(3)
    G = FgAbGroup.free(2)
    return SogPresentation(lam, G, [G.trivial(), G.subgroup([(1, 0)]), G.whole()])


def check_retract(W):
    """Independent re-check of a retract witness on all pairs it claims to cover."""
    P, B = W.P, W.B
    xs = P.elements() if W.exhaustive else P.generators()
    ys = B.elements() if W.exhaustive else B.generators()
    for x in xs:
        assert W.g(W.f(x)) == x
        assert B.contains(W.f(x))
        for x2 in xs:
            assert W.f(P.add(x, x2)) == B.add(W.f(x), W.f(x2))
    for y in ys:
        assert P.contains(W.g(y))
        for y2 in ys:
            assert W.g(B.add(y, y2)) == P.add(W.g(y), W.g(y2))
    assert W.f(P.zero) == B.zero and W.g(B.zero) == P.zero


# -- FinMonoid -------------------------------------------------------------------


def test_finmonoid_validation():
    with pytest.raises(ValueError):
        FinMonoid([[0, 1], [0, 1]])          # not commutative
    with pytest.raises(ValueError):
        FinMonoid([[1, 1], [1, 1]])          # zero not neutral


def test_z2_block_axioms():
    rep = check_axioms(z2_block())
    assert rep.all_pass
    assert list(rep.flags) == ["regular", "conical", "refinement", "emb", "pur"]


def test_m3_fails_refinement_only():
    rep = check_axioms(m3_monoid())
    assert not rep["refinement"]
    assert rep.witnesses["refinement"] == (1, 2, 1, 3)
    assert rep["regular"] and rep["conical"]
    assert brute_refinement(m3_monoid())[1] == (1, 2, 1, 3)


def test_semilattices_are_regular():
    for k in range(1, 5):
        assert check_axioms(FinMonoid(FinSemilattice.chain(k).table))["regular"]
        assert check_axioms(FinMonoid(FinSemilattice.boolean(2).table))["regular"]


def test_group_is_not_conical():
    Z4 = FinMonoid([[(a + b) % 4 for b in range(4)] for a in range(4)])
    rep = check_axioms(Z4)
    assert not rep["conical"]
    assert rep["regular"]


def test_non_regular_monoid():
    # N truncated at 2: 1 + 1 = 2, 2 + x = 2; 2 is idempotent but 1 is not in its group
    M = FinMonoid([[0, 1, 2], [1, 2, 2], [2, 2, 2]])
    rep = check_axioms(M)
    assert not rep["regular"]
    with pytest.raises(NotRegular):
        decompose_regular(M)


def test_emb_failure():
    # (Z/2 u {0}) with an extra top idempotent absorbing the group: j is not injective
    t = [[0, 1, 2, 3], [1, 1, 2, 3], [2, 2, 1, 3], [3, 3, 3, 3]]
    rep = check_axioms(FinMonoid(t))
    assert not rep["emb"]


# -- decomposition ---------------------------------------------------------------


def test_decompose_semilattice():
    dec = decompose_regular(FinMonoid(FinSemilattice.boolean(2).table))
    assert all(len(c) == 1 for c in dec.component)


def test_decompose_z2_block():
    dec = decompose_regular(z2_block())
    assert dec.lam.size == 2
    sizes = sorted(len(c) for c in dec.component)
    assert sizes == [1, 2]
    top = dec.lam.top
    G, _ = dec.group_of(top)
    assert G.invariants == [2]


def test_decompose_group():
    Z4 = FinMonoid([[(a + b) % 4 for b in range(4)] for a in range(4)])
    dec = decompose_regular(Z4)
    assert dec.lam.size == 1 and dec.component == [[0, 1, 2, 3]]


def _decomposition_laws(M):
    dec = decompose_regular(M)
    parts = sorted(x for c in dec.component for x in c)
    assert parts == list(range(M.size))
    lam = dec.lam
    for i, C in enumerate(dec.component):
        e = dec.idempotents[i]
        for x in C:
            assert M.add[x][e] == x
            assert any(M.add[x][y] == e for y in C)
    for a in range(lam.size):
        for b in range(lam.size):
            if not lam.leq(a, b):
                continue
            jab = dec.natural_map(a, b)
            for x in dec.component[a]:
                for y in dec.component[a]:
                    assert jab[M.add[x][y]] == M.add[jab[x]][jab[y]]
            for c in range(lam.size):
                if lam.leq(b, c):
                    jbc, jac = dec.natural_map(b, c), dec.natural_map(a, c)
                    assert all(jbc[jab[x]] == jac[x] for x in dec.component[a])


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_decomposition_laws_exhaustive(k):
    for t in commutative_monoids(k):
        M = FinMonoid(t)
        if check_axioms(M)["regular"]:
            _decomposition_laws(M)


def test_monoid_census():
    assert [len(commutative_monoids(k)) for k in range(1, 5)] == [1, 2, 5, 19]


# -- presentations ---------------------------------------------------------------


def test_sog_add_examples():
    P = block_monoid([2])
    one = P.element(1, [1])
    assert sog_add(one, P.zero, P) == one
    assert sog_add(one, one, P) == P.element(1, [0])
    Q = block_monoid([0])
    g = Q.element(1, [5])
    assert Q.add(g, Q.element(1, [-5])) == Q.element(1, [0])


def test_sog_add_rejects_foreign_elements():
    P = block_monoid([2])
    with pytest.raises(InvalidElement):
        sog_add(SogElement(0, (1,)), P.zero, P)


def test_presentation_preorder():
    P = chain_presentation()
    a = P.element(1, [3, 0])
    b = P.element(2, [1, 1])
    assert P.leq(P.zero, a) and P.leq(a, b)
    assert not P.leq(b, a)
    assert P.leq(P.element(1, [0, 0]), a)


def test_presentation_validate_flags():
    P = chain_presentation()
    assert P.validate().valid
    G = P.group
    bad = SogPresentation(P.lam, G, [G.trivial(), G.subgroup([(2, 0)]), G.whole()])
    rep = bad.validate()
    assert not rep.relative_purity and not rep.valid
    bad0 = SogPresentation(P.lam, G, [G.subgroup([(1, 0)])] * 2 + [G.whole()])
    assert not bad0.validate().zero_trivial


def test_presentation_from_hom_is_valid(rng):
    for _ in range(20):
        inst = random_hom(rng, bottom=False)
        P = presentation_from_hom(inst.phi)
        rep = P.validate()
        assert rep.valid
        assert check_axioms(P).all_pass


def test_presentation_round_trip_z2_block():
    M = z2_block()
    P, iso = presentation_from_monoid(M)
    assert P.validate().valid
    for x in range(M.size):
        for y in range(M.size):
            assert iso[M.add[x][y]] == P.add(iso[x], iso[y])
    assert len(set(iso.values())) == M.size == P.size()


def _hard_direction(M):
    P, iso = presentation_from_monoid(M)
    assert P.validate().valid
    assert len(set(iso.values())) == M.size == P.size()
    for x in range(M.size):
        for y in range(M.size):
            assert iso[M.add[x][y]] == P.add(iso[x], iso[y])
    gens = P.generators()
    for X in (gens, [P.zero], gens[: max(1, len(gens) // 2)]):
        cov = fg_submonoid_cover(P, X)
        assert cov.N.validate().valid
        for x in X:
            assert cov.include(_find(cov, x)) == x


def _find(cov, x):
    for i, e in enumerate(cov.lam_map):
        if e == x.idem and cov.N.groups[i].contains(x.grp):
            return SogElement(i, x.grp)
    raise AssertionError(f"{x} not covered")


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_hard_direction_exhaustive(k):
    passing = 0
    for t in commutative_monoids(k):
        M = FinMonoid(t)
        rep = check_axioms(M)
        if rep.all_pass:
            passing += 1
            _hard_direction(M)
    assert passing > 0


@given(seeds)
def test_hard_direction_random_clifford(r):
    draw = random_clifford_monoid(r, max_size=8)
    if draw is None:
        return
    t, labels = draw
    M = FinMonoid(t, 0, labels)
    rep = check_axioms(M)
    assert rep["refinement"] == brute_refinement(M)[0]
    if rep.all_pass:
        _hard_direction(M)


@given(seeds)
def test_presentation_refinement_agrees_with_table(r):
    inst = random_hom(r, max_free=0, max_torsion=6, bottom=False, max_size=3)
    P = presentation_from_hom(inst.phi)
    if P.size() > 40:
        return
    M, _ = P.to_monoid()
    assert check_axioms(P)["refinement"] == brute_refinement(M)[0]
    assert check_axioms(M).flags == check_axioms(P).flags


# -- blocks ----------------------------------------------------------------------


def test_block_examples():
    P = block_monoid([2])
    assert P.size() == 3
    assert check_axioms(P).all_pass
    Q = block_monoid(["Z"])
    assert Q.groups[1].invariants() == [0]
    R = block_monoid([("cyclic", 2), ("infinite",)])
    assert R.lam.size == 4
    assert sorted(R.groups[3].invariants()) == [0, 2]
    assert check_axioms(R).all_pass


def test_block_units():
    P = block_monoid([("cyclic", 2, 1), ("infinite", -1)])
    assert P.unit == SogElement(3, P.group.reduce([1, -1]))
    assert block_monoid([2]).unit is None


def test_block_bad_spec():
    with pytest.raises(BadSpec):
        block_monoid([-1])
    with pytest.raises(BadSpec):
        Block(-3)
    with pytest.raises(BadSpec):
        block_monoid([("mystery", 2)])


def test_direct_sum_matches_block_monoid():
    a, b = block_monoid([2, 0]), block_monoid([3])
    s = direct_sum(a, b)
    c = block_monoid([2, 0, 3])
    assert s.lam.table == c.lam.table
    assert s.groups == c.groups


@pytest.mark.parametrize("spec", [[1], [2], [5], [0], [2, 3], [0, 0], [4, 0, 2], [0, 6, 1]])
def test_block_sums_pass_axioms(spec):
    rep = check_axioms(block_monoid(spec))
    assert rep.all_pass, rep.witnesses


# -- covers ----------------------------------------------------------------------


def test_cover_of_zero():
    P = chain_presentation()
    cov = fg_submonoid_cover(P, [])
    assert cov.N.lam.size == 1
    assert cov.N.groups[0].is_trivial()


def test_cover_chain_example():
    P = chain_presentation()
    x = P.element(2, [1, 1])
    cov = fg_submonoid_cover(P, [x])
    assert cov.N.validate().valid
    assert check_axioms(cov.N).all_pass
    assert cov.include(_find(cov, x)) == x


def test_cover_by_generators_keeps_carrier():
    P = block_monoid([2, 3])
    cov = fg_submonoid_cover(P, P.generators())
    assert sorted(cov.lam_map) == list(range(P.lam.size))
    for i, e in enumerate(cov.lam_map):
        assert cov.N.groups[i] == P.groups[e]
    again = fg_submonoid_cover(cov.N, cov.N.generators())
    assert again.N.lam.size == cov.N.lam.size
    assert [again.N.groups[i] for i in range(again.N.lam.size)] == \
        [cov.N.groups[e] for e in again.lam_map]


def test_cover_rejects_bad_input():
    P = chain_presentation()
    with pytest.raises(ElementNotInMonoid):
        fg_submonoid_cover(P, [SogElement(1, (0, 1))])
    G = P.group
    bad = SogPresentation(P.lam, G, [G.trivial(), G.subgroup([(2, 0)]), G.whole()])
    with pytest.raises(InvalidPresentation):
        fg_submonoid_cover(bad, [])


@given(seeds)
def test_cover_random(r):
    P = presentation_from_hom(random_hom(r, bottom=False, max_size=3).phi)
    gens = P.generators()
    X = r.sample(gens, r.randint(0, min(4, len(gens))))
    cov = fg_submonoid_cover(P, X)
    assert cov.N.validate().valid
    for x in X:
        assert cov.include(_find(cov, x)) == x
    for i, e in enumerate(cov.lam_map):
        assert cov.N.groups[i] <= P.groups[e]


# -- retracts --------------------------------------------------------------------


def test_retract_boolean_blocks_is_isomorphism():
    P = block_monoid([2, 3])
    W = retract_witness(P)
    assert W.exhaustive
    assert W.B.size() == P.size()
    check_retract(W)
    assert {W.f(x) for x in P.elements()} == set(W.B.elements())


def test_retract_trivial_three_chain():
    lam = FinSemilattice.chain(3)
    G = FgAbGroup.free(0)
    P = SogPresentation(lam, G, [G.trivial()] * 3)
    W = retract_witness(P)
    assert W.B.lam.size == 4 and W.B.size() == 4
    assert W.exhaustive
    check_retract(W)
    assert [W.g(W.f(x)) for x in P.elements()] == P.elements()


def test_retract_chain_example():
    P = chain_presentation()
    W = retract_witness(P)
    assert not W.exhaustive
    assert [d for _, d, _ in W.factors] == [0, 0]
    check_retract(W)


def test_retract_rejects_non_lattice():
    lam = FinSemilattice([[0, 1, 2, 3, 4], [1, 1, 4, 4, 4], [2, 4, 2, 4, 4],
                          [3, 4, 4, 3, 4], [4, 4, 4, 4, 4]])
    G = FgAbGroup.free(0)
    P = SogPresentation(lam, G, [G.trivial()] * 5)
    with pytest.raises(NotALattice):
        retract_witness(P)


def test_retract_rejects_impure():
    lam = FinSemilattice.chain(2)
    G = FgAbGroup.cyclic_sum([4])
    P = SogPresentation(lam, G, [G.trivial(), G.whole()])
    assert retract_witness(P).exhaustive
    with pytest.raises((PurityFailure, InvalidPresentation)):
        retract_witness(SogPresentation(FinSemilattice.chain(3), G,
                                        [G.trivial(), G.subgroup([[2]]), G.whole()]))


@given(seeds)
def test_retract_random_finite(r):
    L = lattice_from_poset(FinPoset.chain(r.randint(0, 2))) if r.random() < 0.3 else None
    inst = random_hom(r, L, max_free=0, max_torsion=8, bottom=False, max_size=3)
    W = retract_witness(presentation_from_hom(inst.phi))
    check_retract(W)


@given(seeds)
def test_retract_random_mixed(r):
    inst = random_hom(r, max_free=2, max_torsion=8, bottom=False, max_size=3)
    W = retract_witness(presentation_from_hom(inst.phi))
    check_retract(W)


def test_retract_z2_block_from_table():
    P, _ = presentation_from_monoid(z2_block())
    W = retract_witness(P)
    check_retract(W)
    assert [d for _, d, _ in W.factors] == [2]


def test_random_clifford_seeded_batch():
    r = random.Random(5)
    done = 0
    while done < 30:
        draw = random_clifford_monoid(r)
        if draw is None:
            continue
        M = FinMonoid(draw[0])
        if check_axioms(M).all_pass:
            P, _ = presentation_from_monoid(M)
            check_retract(retract_witness(P))
        done += 1
