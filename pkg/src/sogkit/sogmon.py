"""Regular conical refinement monoids.

Two representations:

* ``FinMonoid``: a finite commutative monoid given by its Cayley table; every
  axiom is checked by brute force.
* ``SogPresentation``: a semilattice of groups ``M = U {e} x G_e`` inside
  ``Lambda x G``, where ``Lambda`` is a finite semilattice and the ``G_e`` are
  subgroups of a finitely generated abelian group ``G``.  Axioms reduce to
  subgroup algebra.

``decompose_regular`` and ``presentation_from_monoid`` turn the first kind
into the second; ``fg_submonoid_cover`` finds finitely generated valid
submonoids containing a given finite set; ``retract_witness`` exhibits a
presentation over a distributive lattice as a retract of a direct sum of
blocks ``(Z/n) u {0}`` and ``Z u {0}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

from .dlat import (FinSemilattice, bits, ideal_lattice, sublattice_generated)
from .errors import (BadSpec, ElementNotInMonoid, InvalidElement, InvalidPresentation,
                     NotALattice, NotASummand, NotRegular, PurityFailure)
from .fgab import FgAbGroup, Subgroup, direct_complement, is_pure
from .intmat import solve_rows
from .lathom import SubgroupHom
from .pureapprox import ApproxResult, pure_approximation

__all__ = [
    "FinMonoid", "SogPresentation", "SogElement", "AxiomReport", "PresentationReport",
    "RegularDecomposition", "Block", "CoverResult", "RetractWitness", "sog_add",
    "check_axioms", "decompose_regular", "presentation_from_monoid", "presentation_from_hom", "block_monoid",
    "direct_sum", "fg_submonoid_cover", "retract_witness",
]


# ----------------------------------------------------------------------------
# Cayley-table monoids


class FinMonoid:
    """Finite commutative monoid on ``0..size-1`` with addition table ``add``."""

    def __init__(self, add: Sequence[Sequence[int]], zero: int = 0, labels: Sequence[str] | None = None):
        k = len(add)
        table = tuple(tuple(int(x) for x in row) for row in add)
        if k == 0:
            raise ValueError("a monoid has at least one element")
        if any(len(r) != k for r in table):
            raise ValueError("addition table must be square")
        if not 0 <= zero < k:
            raise ValueError("zero index out of range")
        for a in range(k):
            if table[zero][a] != a:
                raise ValueError(f"zero is not neutral for {a}")
            for b in range(k):
                if not 0 <= table[a][b] < k:
                    raise ValueError("table entry out of range")
                if table[a][b] != table[b][a]:
                    raise ValueError(f"addition is not commutative at ({a},{b})")
        for a in range(k):
            for b in range(k):
                ab = table[a][b]
                for c in range(k):
                    if table[ab][c] != table[a][table[b][c]]:
                        raise ValueError(f"addition is not associative at ({a},{b},{c})")
        self.size = k
        self.add = table
        self.zero = zero
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(k))

    def plus(self, a: int, b: int) -> int:
        return self.add[a][b]

    def multiple(self, n: int, x: int) -> int:
        acc = self.zero
        for _ in range(n):
            acc = self.add[acc][x]
        return acc

    def leq(self, x: int, y: int) -> bool:
        """Algebraic preorder: ``x + z = y`` for some ``z``."""
        return y in self.add[x]

    def idempotents(self) -> list[int]:
        return [x for x in range(self.size) if self.add[x][x] == x]

    def __eq__(self, other):
        return isinstance(other, FinMonoid) and (self.add, self.zero) == (other.add, other.zero)

    def __hash__(self):
        return hash((self.add, self.zero))

    def __repr__(self):
        return f"FinMonoid(size={self.size})"


@dataclass
class AxiomReport:
    """Flags ``regular, conical, refinement, emb, pur`` with witnesses for failures."""

    flags: dict[str, bool]
    witnesses: dict[str, object] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def __getitem__(self, key):
        return self.flags[key]

    @property
    def all_pass(self) -> bool:
        return all(self.flags.values())


FLAG_NAMES = ("regular", "conical", "refinement", "emb", "pur")


def _monoid_refinement(M: FinMonoid):
    k, add = M.size, M.add
    # solutions[c][b] = all t with c + t = b
    solutions = [[[] for _ in range(k)] for _ in range(k)]
    for c in range(k):
        for t in range(k):
            solutions[c][add[c][t]].append(t)
    for a0, a1, b0, b1 in product(range(k), repeat=4):
        if add[a0][a1] != add[b0][b1]:
            continue
        ok = False
        for c00 in range(k):
            for c01 in solutions[c00][a0]:
                for c10 in solutions[c00][b0]:
                    for c11 in solutions[c10][a1]:
                        if add[c01][c11] == b1:
                            ok = True
                            break
                    if ok:
                        break
                if ok:
                    break
            if ok:
                break
        if not ok:
            return (a0, a1, b0, b1)
    return None


def _regular_failure(M: FinMonoid):
    for x in range(M.size):
        if not M.leq(M.add[x][x], x):
            return x
    return None


@dataclass
class RegularDecomposition:
    """``M`` as a semilattice of groups.

    ``idempotents[i]`` is the element of ``M`` standing for index ``i`` of
    ``lam``; ``component[i]`` lists the elements of ``G_M[e]``; ``idem_of[x]``
    is the index of the component containing ``x``.
    """

    monoid: FinMonoid
    lam: FinSemilattice
    idempotents: list[int]
    component: list[list[int]]
    idem_of: list[int]

    def natural_map(self, a: int, b: int) -> dict[int, int]:
        """``j_{a,b}: x -> x + e_b`` for ``a <= b`` (indices into ``lam``)."""
        if not self.lam.leq(a, b):
            raise ValueError("natural maps need a <= b")
        eb = self.idempotents[b]
        return {x: self.monoid.add[x][eb] for x in self.component[a]}

    def group_of(self, i: int) -> tuple[FgAbGroup, dict[int, tuple]]:
        """Present ``G_M[e_i]`` as an ``FgAbGroup``; returns the group and element -> coordinates."""
        return _cayley_group(self.monoid, self.component[i], self.idempotents[i])


def _cayley_group(M: FinMonoid, elems: list[int], unit: int):
    idx = {x: i for i, x in enumerate(elems)}
    n = len(elems)
    rels = []
    for x in elems:
        for y in elems:
            r = [0] * n
            r[idx[x]] += 1
            r[idx[y]] += 1
            r[idx[M.add[x][y]]] -= 1
            if any(r):
                rels.append(tuple(r))
    e = [0] * n
    e[idx[unit]] = 1
    rels.append(tuple(e))
    G = FgAbGroup(n, tuple(rels))
    coords = {}
    for x in elems:
        v = [0] * n
        v[idx[x]] = 1
        coords[x] = G.reduce(v)
    return G, coords


def decompose_regular(M: FinMonoid) -> RegularDecomposition:
    """Split a regular monoid into its group components over ``Lambda(M)``."""
    bad = _regular_failure(M)
    if bad is not None:
        raise NotRegular(bad)
    idem = M.idempotents()
    index = {e: i for i, e in enumerate(idem)}
    idem_of = []
    for x in range(M.size):
        y, seen = x, set()
        while M.add[y][y] != y:
            if y in seen:
                raise NotRegular(x, f"no multiple of {x} is idempotent")
            seen.add(y)
            y = M.add[y][x]
        if not (M.leq(y, x) and M.leq(x, y)):
            raise NotRegular(x, f"{x} does not lie in the group of its idempotent")
        idem_of.append(index[y])
    comps = [[x for x in range(M.size) if idem_of[x] == i] for i in range(len(idem))]
    for i, e in enumerate(idem):
        C = comps[i]
        for x in C:
            if M.add[x][e] != x:
                raise NotRegular(x, "idempotent is not neutral in its component")
            if not any(M.add[x][y] == e for y in C):
                raise NotRegular(x, "element has no inverse in its component")
            for y in C:
                if idem_of[M.add[x][y]] != i:
                    raise NotRegular(x, "component is not closed under addition")
    table = [[index[M.add[a][b]] for b in idem] for a in idem]
    lam = FinSemilattice(table, index[M.zero], [M.labels[e] for e in idem])
    return RegularDecomposition(M, lam, idem, comps, idem_of)


def _pure_in_finite(M: FinMonoid, sub: set[int], comp: list[int]):
    """Element ``y`` of ``comp`` and ``n`` with ``n y`` in ``sub`` but not in ``n sub``."""
    size = len(comp)
    for n in range(1, size + 1):
        nsub = {M.multiple(n, r) for r in sub}
        for y in comp:
            ny = M.multiple(n, y)
            if ny in sub and ny not in nsub:
                return n, y
    return None


def _check_finmonoid(M: FinMonoid) -> AxiomReport:
    flags, wit = {}, {}
    bad = _regular_failure(M)
    flags["regular"] = bad is None
    if bad is not None:
        wit["regular"] = bad
    conical = None
    for x in range(M.size):
        for y in range(M.size):
            if M.add[x][y] == M.zero and (x != M.zero or y != M.zero):
                conical = (x, y)
                break
        if conical:
            break
    flags["conical"] = conical is None
    if conical:
        wit["conical"] = conical
    ref = _monoid_refinement(M)
    flags["refinement"] = ref is None
    if ref:
        wit["refinement"] = ref
    notes = []
    if flags["regular"]:
        dec = decompose_regular(M)
        lam = dec.lam
        emb = pur = None
        for a in range(lam.size):
            for b in range(lam.size):
                if a == b or not lam.leq(a, b):
                    continue
                j = dec.natural_map(a, b)
                if emb is None and len(set(j.values())) != len(j):
                    emb = (a, b)
                if pur is None:
                    hit = _pure_in_finite(M, set(j.values()), dec.component[b])
                    if hit is not None:
                        pur = (a, b, hit[0], hit[1])
        flags["emb"], flags["pur"] = emb is None, pur is None
        if emb:
            wit["emb"] = emb
        if pur:
            wit["pur"] = pur
    else:
        flags["emb"] = flags["pur"] = False
        notes.append("natural maps are only defined for regular monoids")
    return AxiomReport({k: flags[k] for k in FLAG_NAMES}, wit, notes)


# ----------------------------------------------------------------------------
# Presentations


@dataclass(frozen=True)
class SogElement:
    idem: int
    grp: tuple[int, ...]


@dataclass
class PresentationReport:
    distributive: bool
    zero_trivial: bool
    relative_purity: bool
    join_law: bool
    meet_law: bool
    ambient_purity: bool
    failures: list[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return (self.distributive and self.zero_trivial and self.relative_purity
                and self.join_law and self.meet_law)

    def __bool__(self):
        return self.valid


class SogPresentation:
    """``U {e} x G_e`` for a finite semilattice ``lam`` and subgroups ``groups[e]`` of ``group``.

    ``unit``, when set, is a distinguished element (an order-unit label).
    """

    def __init__(self, lam: FinSemilattice, group: FgAbGroup, groups: Sequence[Subgroup],
                 unit: SogElement | None = None):
        if len(groups) != lam.size:
            raise InvalidPresentation("one subgroup per semilattice element is required")
        for H in groups:
            if H.group != group:
                raise InvalidPresentation("subgroups must live in the ambient group")
        self.lam = lam
        self.group = group
        self.groups = tuple(groups)
        self.unit = unit
        if unit is not None:
            self.check_element(unit)

    # -- elements --------------------------------------------------------------

    def element(self, e: int, g: Sequence[int]) -> SogElement:
        x = SogElement(e, self.group.reduce(g))
        self.check_element(x)
        return x

    def check_element(self, x: SogElement) -> None:
        if not 0 <= x.idem < self.lam.size:
            raise InvalidElement(f"idempotent index {x.idem} out of range")
        if len(x.grp) != self.group.rank or not self.groups[x.idem].contains(x.grp):
            raise InvalidElement(f"{x.grp} is not in G_{self.lam.labels[x.idem]}")

    def contains(self, x: SogElement) -> bool:
        try:
            self.check_element(x)
        except InvalidElement:
            return False
        return True

    @property
    def zero(self) -> SogElement:
        return SogElement(self.lam.zero, (0,) * self.group.rank)

    def add(self, x: SogElement, y: SogElement) -> SogElement:
        return sog_add(x, y, self)

    def leq(self, x: SogElement, y: SogElement) -> bool:
        """``x <= y`` iff some ``(f, z)`` in the monoid has ``x + (f, z) = y``."""
        d = [b - a for a, b in zip(x.grp, y.grp)]
        for f in range(self.lam.size):
            if self.lam.join(x.idem, f) == y.idem and self.groups[f].contains(d):
                return True
        return False

    def generators(self) -> list[SogElement]:
        """A finite monoid generating set.

        ``(e, 0)`` for every ``e``, plus ``(e, +-g)`` for generators ``g`` of
        ``G_e`` whenever ``G_e`` is larger than the sum of the ``G_f`` below it.
        """
        out = []
        zero = self.group.trivial()
        for e in range(self.lam.size):
            out.append(SogElement(e, (0,) * self.group.rank))
            below = zero
            for f in range(self.lam.size):
                if f != e and self.lam.leq(f, e):
                    below = below + self.groups[f]
            if self.groups[e] <= below:
                continue
            for g in self.groups[e].nonzero_generators():
                out.append(SogElement(e, g))
                out.append(SogElement(e, self.group.reduce([-a for a in g])))
        return list(dict.fromkeys(out))

    def is_finite(self) -> bool:
        return all(H.is_finite() for H in self.groups)

    def size(self) -> int:
        return sum(H.order() for H in self.groups) if self.is_finite() else 0

    def elements(self) -> list[SogElement]:
        if not self.is_finite():
            raise ValueError("presentation has infinitely many elements")
        return [SogElement(e, g) for e in range(self.lam.size) for g in sorted(self.groups[e].elements())]

    def to_monoid(self) -> tuple[FinMonoid, list[SogElement]]:
        els = self.elements()
        idx = {x: i for i, x in enumerate(els)}
        table = [[idx[self.add(x, y)] for y in els] for x in els]
        labels = [f"({self.lam.labels[x.idem]},{list(x.grp)})" for x in els]
        return FinMonoid(table, idx[self.zero], labels), els

    # -- validity ----------------------------------------------------------------

    def validate(self) -> PresentationReport:
        lam, Gs = self.lam, self.groups
        fails = []
        dist = lam.is_distributive()
        if not dist:
            fails.append("semilattice is not distributive")
        zero = Gs[lam.zero].is_trivial()
        if not zero:
            fails.append("G_0 is not trivial")
        rel = True
        for b in range(lam.size):
            for a in lam.lower_covers(b):
                if not Gs[a] <= Gs[b] or not is_pure(Gs[a], Gs[b]):
                    rel = False
                    fails.append(f"G_{lam.labels[a]} is not pure in G_{lam.labels[b]}")
        join = meet = True
        for a in range(lam.size):
            for b in range(a + 1, lam.size):
                if Gs[a] + Gs[b] != Gs[lam.join(a, b)]:
                    join = False
                    fails.append(f"join law fails at ({lam.labels[a]},{lam.labels[b]})")
                if Gs[a] & Gs[b] != Gs[lam.meet(a, b)]:
                    meet = False
                    fails.append(f"meet law fails at ({lam.labels[a]},{lam.labels[b]})")
        whole = self.group.whole()
        amb = all(is_pure(H, whole) for H in Gs)
        return PresentationReport(dist, zero, rel, join, meet, amb, fails)

    def __repr__(self):
        return f"SogPresentation(lam={self.lam.size} elements, group={self.group.describe()})"


def sog_add(x: SogElement, y: SogElement, P: SogPresentation) -> SogElement:
    P.check_element(x)
    P.check_element(y)
    e = P.lam.join(x.idem, y.idem)
    g = P.group.reduce([a + b for a, b in zip(x.grp, y.grp)])
    if not P.groups[e].contains(g):
        raise InvalidElement("sum leaves G_{e+f}; the presentation violates the join law")
    return SogElement(e, g)


def _check_presentation(P: SogPresentation, brute_limit: int = 64) -> AxiomReport:
    lam, Gs = P.lam, P.groups
    flags, wit, notes = {}, {}, []
    flags["regular"] = True
    flags["conical"] = Gs[lam.zero].is_trivial()
    if not flags["conical"]:
        wit["conical"] = Gs[lam.zero].nonzero_generators()[0]
    emb = pur = None
    for a in range(lam.size):
        for b in range(lam.size):
            if a == b or not lam.leq(a, b):
                continue
            # j_{a,b}(a, g) = (b, g): injective as soon as G_a <= G_b
            if emb is None and not Gs[a] <= Gs[b]:
                emb = (a, b)
            elif pur is None and Gs[a] <= Gs[b] and not is_pure(Gs[a], Gs[b]):
                pur = (a, b)
    flags["emb"], flags["pur"] = emb is None, pur is None
    if emb:
        wit["emb"] = emb
    if pur:
        wit["pur"] = pur
    rep = P.validate()
    ref_struct = rep.distributive and rep.join_law and rep.meet_law
    flags["refinement"] = ref_struct
    if not ref_struct:
        wit["refinement"] = rep.failures[:1]
    if P.is_finite() and P.size() <= brute_limit:
        M, _ = P.to_monoid()
        brute = _monoid_refinement(M) is None
        if brute != ref_struct:
            notes.append(f"structural refinement {ref_struct} but table scan {brute}")
            flags["refinement"] = brute
    return AxiomReport({k: flags[k] for k in FLAG_NAMES}, wit, notes)


def check_axioms(M) -> AxiomReport:
    """The five flags for a ``FinMonoid`` (brute force) or a ``SogPresentation``."""
    if isinstance(M, FinMonoid):
        return _check_finmonoid(M)
    if isinstance(M, SogPresentation):
        return _check_presentation(M)
    raise TypeError("expected a FinMonoid or a SogPresentation")


def presentation_from_monoid(M: FinMonoid) -> tuple[SogPresentation, dict[int, SogElement]]:
    """Rebuild ``M`` as ``U {e} x G_e`` inside ``Lambda(M) x G_M[top]``.

    ``G_e`` is the image of the natural map into the top component, which is
    injective under (emb).  Also returns the isomorphism ``M -> presentation``.
    """
    dec = decompose_regular(M)
    lam = dec.lam
    top = lam.top
    G, coords = dec.group_of(top)
    groups = []
    for i in range(lam.size):
        j = dec.natural_map(i, top)
        groups.append(Subgroup(G, [coords[y] for y in j.values()]))
    P = SogPresentation(lam, G, groups)
    etop = dec.idempotents[top]
    iso = {x: SogElement(dec.idem_of[x], coords[M.add[x][etop]]) for x in range(M.size)}
    return P, iso


def presentation_from_hom(phi: SubgroupHom) -> SogPresentation:
    """``U {u} x G_u`` over the join-semilattice of the lattice of ``phi``."""
    lam, masks = FinSemilattice.from_lattice(phi.lattice)
    return SogPresentation(lam, phi.group, [phi.table[m] for m in masks])


# ----------------------------------------------------------------------------
# Blocks and direct sums


@dataclass(frozen=True)
class Block:
    """``(Z/order) u {0}``, or ``Z u {0}`` when ``order == 0``; ``unit`` is an optional label."""

    order: int
    unit: int | None = None

    def __post_init__(self):
        if self.order < 0:
            raise BadSpec("block order must be >= 1, or 0 for Z")

    def describe(self) -> str:
        g = "Z" if self.order == 0 else f"Z/{self.order}"
        return f"({g} u {{0}})"


def _as_block(b) -> Block:
    if isinstance(b, Block):
        return b
    if isinstance(b, int):
        if b < 0:
            raise BadSpec(f"bad block order {b}")
        return Block(b)
    if isinstance(b, str):
        if b in ("Z", "infinite"):
            return Block(0)
        raise BadSpec(f"unknown block {b!r}")
    if isinstance(b, (tuple, list)) and len(b) == 2 and all(isinstance(x, int) for x in b):
        if b[0] < 0:
            raise BadSpec(f"bad block order {b[0]}")
        return Block(b[0], b[1])
    if isinstance(b, (tuple, list)) and b:
        kind = b[0]
        rest = list(b[1:])
        if kind == "cyclic" and rest and isinstance(rest[0], int) and rest[0] >= 1:
            return Block(rest[0], rest[1] if len(rest) > 1 else None)
        if kind in ("infinite", "Z"):
            return Block(0, rest[0] if rest else None)
    raise BadSpec(f"cannot read block spec {b!r}")


def block_monoid(spec: Iterable) -> SogPresentation:
    """Direct sum of blocks over the Boolean lattice ``2^k`` with coordinate subgroups.

    Entries of ``spec`` may be ``Block`` values, ints (``0`` for ``Z``),
    ``(order, unit)`` pairs, ``("cyclic", n[, unit])`` or ``("infinite"[, unit])``.  When every block
    carries a unit, the presentation's ``unit`` is the corresponding element
    over the top idempotent.
    """
    blocks = [_as_block(b) for b in spec]
    k = len(blocks)
    lam = FinSemilattice.boolean(k)
    G = FgAbGroup.cyclic_sum([b.order for b in blocks])
    groups = []
    for S in range(1 << k):
        gens = []
        for i in bits(S):
            e = [0] * k
            e[i] = 1
            gens.append(e)
        groups.append(Subgroup(G, gens))
    unit = None
    if k and all(b.unit is not None for b in blocks):
        unit = SogElement((1 << k) - 1, G.reduce([b.unit for b in blocks]))
    P = SogPresentation(lam, G, groups, unit)
    P.blocks = blocks
    return P


def direct_sum(P: SogPresentation, Q: SogPresentation) -> SogPresentation:
    """``P + Q`` over the product semilattice; ``(e, f)`` has index ``e + |P| * f``.

    With this indexing ``direct_sum(block_monoid(a), block_monoid(b))`` equals
    ``block_monoid(a + b)``.
    """
    a, b = P.lam.size, Q.lam.size
    pairs = [(e, f) for f in range(b) for e in range(a)]
    table = [[P.lam.join(e1, e2) + a * Q.lam.join(f1, f2) for e2, f2 in pairs] for e1, f1 in pairs]
    labels = [f"({P.lam.labels[e]},{Q.lam.labels[f]})" for e, f in pairs]
    lam = FinSemilattice(table, P.lam.zero + a * Q.lam.zero, labels)
    n1, n2 = P.group.rank, Q.group.rank
    rels = tuple(tuple(r) + (0,) * n2 for r in P.group.relations) + \
        tuple((0,) * n1 + tuple(r) for r in Q.group.relations)
    G = FgAbGroup(n1 + n2, rels)
    groups = []
    for e, f in pairs:
        gens = [tuple(g) + (0,) * n2 for g in P.groups[e].generators]
        gens += [(0,) * n1 + tuple(g) for g in Q.groups[f].generators]
        groups.append(Subgroup(G, gens))
    unit = None
    if P.unit is not None and Q.unit is not None:
        unit = SogElement(P.unit.idem + a * Q.unit.idem, G.reduce(P.unit.grp + Q.unit.grp))
    S = SogPresentation(lam, G, groups, unit)
    pb, qb = getattr(P, "blocks", None), getattr(Q, "blocks", None)
    S.blocks = pb + qb if pb is not None and qb is not None else None
    return S


# ----------------------------------------------------------------------------
# Finitely generated covers


@dataclass
class CoverResult:
    """``N`` and its inclusion into ``P``.

    ``N.lam`` is the finite sublattice of ideals generated by the principal
    ideals of the idempotents of ``X``; ``lam_map[i]`` is the idempotent of
    ``P`` that index ``i`` of ``N.lam`` stands for (the largest element of the
    ideal).  ``complements[P]`` holds a complement of ``G'_{P_*}`` in ``G'_P``
    per join-irreducible.
    """

    N: SogPresentation
    lam_map: list[int]
    complements: dict[int, Subgroup]
    approximation: ApproxResult

    def include(self, x: SogElement) -> SogElement:
        return SogElement(self.lam_map[x.idem], x.grp)

    def carrier_key(self) -> frozenset:
        """Hashable description of the carrier as a subset of ``P``."""
        return frozenset((self.lam_map[i], H.basis) for i, H in enumerate(self.N.groups))


def fg_submonoid_cover(P: SogPresentation, X: Iterable[SogElement]) -> CoverResult:
    """Finitely generated valid ``N`` with ``X <= N <= P``."""
    rep = P.validate()
    if not rep.valid:
        raise InvalidPresentation("; ".join(rep.failures))
    X = list(X)
    for x in X:
        if not P.contains(x):
            raise ElementNotInMonoid(f"{x} is not in the presentation")
    X.append(P.zero)
    lam = P.lam
    IL = ideal_lattice(lam)
    L, mask = IL.lattice, IL.mask
    of_mask = {m: e for e, m in enumerate(mask)}
    sub = sublattice_generated(L, [mask[x.idem] for x in X])
    D = sub.lattice
    top_of = {a: of_mask[sub.embed[a]] for a in D.elements}
    phi = SubgroupHom(D, P.group, {a: P.groups[top_of[a]] for a in D.elements})
    K = Subgroup(P.group, [x.grp for x in X])
    res = pure_approximation(phi, K)
    psi = res.psi
    complements = {}
    for p in range(D.rank):
        try:
            complements[p] = direct_complement(psi.table[D.lower_cover(p)], psi.at(p))
        except NotASummand as exc:  # pragma: no cover - ruled out by the purity condition
            raise RuntimeError("approximation lost purity") from exc
    els = list(D.elements)
    idx = {a: i for i, a in enumerate(els)}
    table = [[idx[a | b] for b in els] for a in els]
    Nlam = FinSemilattice(table, idx[0], [lam.labels[top_of[a]] for a in els])
    N = SogPresentation(Nlam, P.group, [psi.table[a] for a in els])
    nrep = N.validate()
    if not nrep.valid:
        raise RuntimeError("cover failed validation: " + "; ".join(nrep.failures))
    lam_map = [top_of[a] for a in els]
    result = CoverResult(N, lam_map, complements, res)
    for x in X:
        own = sub.restrict[mask[x.idem]]
        if lam_map[idx[own]] != x.idem or not N.groups[idx[own]].contains(x.grp):
            raise RuntimeError(f"cover misses {x}")
    return result


# ----------------------------------------------------------------------------
# Retracts onto block sums


@dataclass
class RetractWitness:
    """``P`` as a retract of the block sum ``B``: ``g(f(x)) == x`` for every ``x`` in ``P``.

    ``factors[i] = (p, d, generator)``: coordinate ``i`` of ``B`` is a cyclic
    factor of order ``d`` of the complement ``K_p``.
    """

    P: SogPresentation
    B: SogPresentation
    factors: list[tuple[int, int, tuple]]
    irreducibles: list[int]
    complements: dict[int, Subgroup]
    checked_pairs: int = 0
    exhaustive: bool = False

    def f(self, x: SogElement) -> SogElement:
        P = self.P
        P.check_element(x)
        lam = P.lam
        below = [i for i, p in enumerate(self.irreducibles) if lam.leq(p, x.idem)]
        stacked, owner = [], []
        for i in below:
            for g in self.complements[i].nonzero_generators():
                stacked.append(g)
                owner.append(i)
        n = P.group.rank
        if stacked:
            c = solve_rows(stacked + P.group._relation_hnf[0], list(x.grp), n)
            if c is None:
                raise RuntimeError("group part does not split over the complements")
        else:
            c = []
        comp = {i: [0] * n for i in below}
        for ci, g, i in zip(c, stacked, owner):
            if ci:
                comp[i] = [a + ci * b for a, b in zip(comp[i], g)]
        mask = 0
        coords = [0] * len(self.factors)
        for j, (i, d, _) in enumerate(self.factors):
            if i in comp:
                mask |= 1 << j
        for i in below:
            dec = self.complements[i].decomposition
            vals = dec.coordinates(comp[i])
            js = [j for j, (ii, _, _) in enumerate(self.factors) if ii == i]
            # trivial complements carry a single order-1 placeholder factor
            for j, v in zip(js, vals):
                coords[j] = v
        return SogElement(mask, self.B.group.reduce(coords))

    def g(self, y: SogElement) -> SogElement:
        P = self.P
        self.B.check_element(y)
        idem = P.lam.zero
        acc = [0] * P.group.rank
        for j in bits(y.idem):
            i, d, gen = self.factors[j]
            idem = P.lam.join(idem, self.irreducibles[i])
            c = y.grp[j]
            acc = [a + c * b for a, b in zip(acc, gen)]
        return SogElement(idem, P.group.reduce(acc))


def retract_witness(P: SogPresentation, exhaustive_limit: int = 512) -> RetractWitness:
    """Exhibit ``P`` as a retract of a direct sum of blocks.

    ``Lambda`` must be a distributive lattice.  For each join-irreducible
    ``p`` a complement ``K_p`` of ``G_{p_*}`` in ``G_p`` is split into cyclic
    factors, one block per factor.  Homomorphism laws and ``g o f = id`` are
    checked on all pairs when both carriers are small and finite, otherwise
    on pairs of generators.
    """
    lam = P.lam
    if not lam.is_distributive():
        raise NotALattice("the semilattice is not a distributive lattice")
    rep = P.validate()
    if not rep.valid:
        raise InvalidPresentation("; ".join(rep.failures))
    irr = list(lam.join_irreducibles)
    complements = {}
    for i, p in enumerate(irr):
        (ps,) = lam.lower_covers(p)
        try:
            complements[i] = direct_complement(P.groups[ps], P.groups[p])
        except NotASummand as exc:
            raise PurityFailure(f"G at {lam.labels[ps]} is not a summand at {lam.labels[p]}") from exc
    factors = []
    for i in range(len(irr)):
        dec = complements[i].decomposition
        if not dec.moduli:
            factors.append((i, 1, (0,) * P.group.rank))
        for d, gen in zip(dec.moduli, dec.generators):
            factors.append((i, d, tuple(gen)))
    B = block_monoid([d for _, d, _ in factors])
    W = RetractWitness(P, B, factors, irr, complements)
    finite = P.is_finite() and B.is_finite() and P.size() <= exhaustive_limit \
        and B.size() <= exhaustive_limit
    xs = P.elements() if finite else P.generators()
    ys = B.elements() if finite else B.generators()
    count = 0
    for x in xs:
        if W.g(W.f(x)) != x:
            raise RuntimeError(f"g(f(x)) != x at {x}")
    for x in xs:
        fx = W.f(x)
        for x2 in xs:
            if W.f(P.add(x, x2)) != B.add(fx, W.f(x2)):
                raise RuntimeError("f is not additive")
            count += 1
    for y in ys:
        gy = W.g(y)
        for y2 in ys:
            if W.g(B.add(y, y2)) != P.add(gy, W.g(y2)):
                raise RuntimeError("g is not additive")
            count += 1
    if W.f(P.zero) != B.zero or W.g(B.zero) != P.zero:
        raise RuntimeError("zero is not preserved")
    W.checked_pairs = count
    W.exhaustive = finite
    return W
