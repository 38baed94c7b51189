"""Finite distributive lattices as down-set lattices, and finite semilattices.

An element of a ``FinDistLattice`` is an ``int`` bitmask: bit ``p`` is set when
the join-irreducible ``p`` of the underlying poset lies below the element.
Join is ``|``, meet is ``&``, and the order is subset inclusion.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import ElementBoundExceeded, NotDistributive

DEFAULT_ELEMENT_BOUND = 2 ** 20

__all__ = [
    "FinPoset", "FinDistLattice", "FinSemilattice", "JoinIrreducibleData",
    "IdealLattice", "Sublattice", "lattice_from_poset", "join_irreducible_data",
    "ideal_lattice", "sublattice_generated", "bits", "popcount", "mask_label",
    "parse_mask_label",
]


def bits(mask: int) -> Iterator[int]:
    """Indices of the set bits of ``mask``, ascending."""
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def mask_label(mask: int) -> str:
    return "{" + ",".join(str(i) for i in bits(mask)) + "}"


def parse_mask_label(label: str) -> int:
    s = label.strip()
    if not (s.startswith("{") and s.endswith("}")):
        raise ValueError(f"bad lattice element label {label!r}")
    body = s[1:-1].strip()
    mask = 0
    if body:
        for part in body.split(","):
            mask |= 1 << int(part)
    return mask


class FinPoset:
    """Finite poset on ``0..size-1``; ``below[p]`` is the bitmask of ``{q : q <= p}``."""

    def __init__(self, size: int, less: Iterable[tuple[int, int]] = ()):
        if size < 0:
            raise ValueError("negative poset size")
        below = [1 << i for i in range(size)]
        for i, j in less:
            if not (0 <= i < size and 0 <= j < size):
                raise ValueError(f"pair ({i},{j}) out of range")
            below[j] |= 1 << i
        # transitive closure
        changed = True
        while changed:
            changed = False
            for p in range(size):
                acc = below[p]
                for q in bits(below[p]):
                    acc |= below[q]
                if acc != below[p]:
                    below[p] = acc
                    changed = True
        for p in range(size):
            for q in bits(below[p] & ~(1 << p)):
                if below[q] >> p & 1:
                    raise ValueError(f"order is not antisymmetric: {p} and {q}")
        self.size = size
        self.below = tuple(below)

    @classmethod
    def from_below(cls, below: Sequence[int]) -> "FinPoset":
        less = [(q, p) for p, m in enumerate(below) for q in bits(m) if q != p]
        return cls(len(below), less)

    @classmethod
    def chain(cls, k: int) -> "FinPoset":
        return cls(k, [(i, i + 1) for i in range(k - 1)])

    @classmethod
    def antichain(cls, k: int) -> "FinPoset":
        return cls(k, ())

    def leq(self, p: int, q: int) -> bool:
        return bool(self.below[q] >> p & 1)

    def less_pairs(self) -> list[tuple[int, int]]:
        return [(q, p) for p in range(self.size) for q in bits(self.below[p]) if q != p]

    def cover_pairs(self) -> list[tuple[int, int]]:
        out = []
        for p in range(self.size):
            strict = self.below[p] & ~(1 << p)
            for q in bits(strict):
                if not any(r != q and self.below[r] >> q & 1 for r in bits(strict)):
                    out.append((q, p))
        return out

    @cached_property
    def linear_extension(self) -> tuple[int, ...]:
        """Fixed linear extension: fewer predecessors first, ties by index."""
        return tuple(sorted(range(self.size), key=lambda p: (popcount(self.below[p]), p)))

    def __eq__(self, other):
        return isinstance(other, FinPoset) and self.below == other.below

    def __hash__(self):
        return hash(self.below)

    def __repr__(self):
        return f"FinPoset(size={self.size}, less={self.less_pairs()})"


class FinDistLattice:
    """Lattice of down-sets of a finite poset."""

    def __init__(self, poset: FinPoset, bound: int = DEFAULT_ELEMENT_BOUND):
        self.poset = poset
        self.bound = bound
        self.top = (1 << poset.size) - 1
        self.bottom = 0

    @property
    def rank(self) -> int:
        """Number of join-irreducibles."""
        return self.poset.size

    # -- elements ------------------------------------------------------------

    def downsets_within(self, support: int) -> list[int]:
        """All down-sets contained in the down-set ``support``, sorted by size then value."""
        order = [p for p in self.poset.linear_extension if support >> p & 1]
        below = self.poset.below
        out = [0]
        for p in order:
            strict = below[p] & ~(1 << p)
            extra = [d | (1 << p) for d in out if strict & ~d == 0]
            out.extend(extra)
            if len(out) > self.bound:
                raise ElementBoundExceeded(
                    f"more than {self.bound} down-sets; raise the bound or shrink the poset")
        out.sort(key=lambda m: (popcount(m), m))
        return out

    @cached_property
    def elements(self) -> tuple[int, ...]:
        return tuple(self.downsets_within(self.top))

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def is_element(self, mask: int) -> bool:
        if mask & ~self.top:
            return False
        below = self.poset.below
        return all(below[p] & ~mask == 0 for p in bits(mask))

    def join(self, a: int, b: int) -> int:
        return a | b

    def meet(self, a: int, b: int) -> int:
        return a & b

    def leq(self, a: int, b: int) -> bool:
        return a & ~b == 0

    # -- join-irreducibles -------------------------------------------------

    def principal(self, p: int) -> int:
        return self.poset.below[p]

    def lower_cover(self, p: int) -> int:
        """``p_*``: the unique lower cover of the join-irreducible ``p``."""
        return self.poset.below[p] & ~(1 << p)

    def J(self, a: int) -> list[int]:
        """Join-irreducibles below ``a`` (as poset indices)."""
        return list(bits(a))

    def upper_covers(self, u: int) -> list[int]:
        below = self.poset.below
        return [u | (1 << p) for p in range(self.poset.size)
                if not u >> p & 1 and below[p] & ~(1 << p) & ~u == 0]

    def lower_covers(self, u: int) -> list[int]:
        below = self.poset.below
        return [u & ~(1 << p) for p in bits(u)
                if not any(below[q] >> p & 1 for q in bits(u) if q != p)]

    def covering_pairs(self) -> Iterator[tuple[int, int]]:
        for u in self.elements:
            for v in self.upper_covers(u):
                yield u, v

    def label(self, a: int) -> str:
        return mask_label(a)

    def parse(self, label: str) -> int:
        m = parse_mask_label(label)
        if not self.is_element(m):
            raise ValueError(f"{label} is not a down-set of the poset")
        return m

    def __repr__(self):
        return f"FinDistLattice({self.poset!r})"


def lattice_from_poset(P: FinPoset, bound: int = DEFAULT_ELEMENT_BOUND) -> FinDistLattice:
    """Lattice of down-sets of ``P``; materializes the elements (bounded)."""
    L = FinDistLattice(P, bound)
    L.elements  # noqa: B018 - materialize so the bound is enforced here
    return L


@dataclass
class JoinIrreducibleData:
    irreducibles: list[int]          # the principal down-sets, one per poset element
    lower_cover: dict[int, int]      # poset index -> mask of p_*
    lattice: FinDistLattice

    def below(self, a: int) -> list[int]:
        return self.lattice.J(a)


def join_irreducible_data(L: FinDistLattice) -> JoinIrreducibleData:
    k = L.poset.size
    return JoinIrreducibleData([L.principal(p) for p in range(k)],
                               {p: L.lower_cover(p) for p in range(k)}, L)


# ----------------------------------------------------------------------------
# Set families closed under union and intersection


@dataclass
class Sublattice:
    """A finite sublattice of some ``FinDistLattice`` with its own down-set model.

    ``embed[x]`` maps an element ``x`` of ``lattice`` to the corresponding
    element of the ambient lattice; ``restrict`` is the inverse map.
    """

    lattice: FinDistLattice
    embed: dict[int, int]
    restrict: dict[int, int]
    members: list[int] = field(default_factory=list)


def lattice_of_family(members: Iterable[int]) -> Sublattice:
    """Model a finite family of bitmasks closed under ``|`` and ``&`` as a down-set lattice."""
    fam = sorted(set(members), key=lambda m: (popcount(m), m))
    if not fam:
        raise ValueError("empty family")
    bottom = fam[0]
    irr = []
    for x in fam:
        if x == bottom:
            continue
        acc = bottom
        for y in fam:
            if y != x and y & ~x == 0:
                acc |= y
        if acc != x:
            irr.append(x)
    less = [(i, j) for i, a in enumerate(irr) for j, b in enumerate(irr)
            if i != j and a & ~b == 0]
    L = FinDistLattice(FinPoset(len(irr), less))
    embed, restrict = {}, {}
    for x in fam:
        own = 0
        for i, a in enumerate(irr):
            if a & ~x == 0:
                own |= 1 << i
        embed[own] = x
        restrict[x] = own
    if len(embed) != len(fam) or len(L.elements) != len(fam):
        raise NotDistributive("family is not closed under union and intersection")
    return Sublattice(L, embed, restrict, fam)


def sublattice_generated(L: FinDistLattice, S: Iterable[int]) -> Sublattice:
    """Smallest subset of ``L`` containing ``S`` closed under join and meet."""
    gens = list(S)
    if not gens:
        raise ValueError("generating set must be nonempty")
    for g in gens:
        if not L.is_element(g):
            raise ValueError(f"{mask_label(g)} is not an element of the lattice")
    closed = set(gens)
    frontier = list(closed)
    while frontier:
        new = []
        snapshot = list(closed)
        for a in frontier:
            for b in snapshot:
                for c in (a | b, a & b):
                    if c not in closed:
                        closed.add(c)
                        new.append(c)
        frontier = new
    return lattice_of_family(closed)


# ----------------------------------------------------------------------------
# Semilattices


class FinSemilattice:
    """Finite join-semilattice with zero, given by its join table."""

    def __init__(self, join: Sequence[Sequence[int]], zero: int = 0,
                 labels: Sequence[str] | None = None):
        k = len(join)
        table = tuple(tuple(int(x) for x in row) for row in join)
        if any(len(r) != k for r in table):
            raise ValueError("join table must be square")
        if not 0 <= zero < k:
            raise ValueError("zero index out of range")
        for a in range(k):
            if table[a][a] != a:
                raise ValueError(f"join is not idempotent at {a}")
            if table[zero][a] != a:
                raise ValueError(f"zero is not neutral for {a}")
            for b in range(k):
                x = table[a][b]
                if not 0 <= x < k:
                    raise ValueError("join table entry out of range")
                if x != table[b][a]:
                    raise ValueError(f"join is not commutative at ({a},{b})")
        for a in range(k):
            for b in range(k):
                ab = table[a][b]
                for c in range(k):
                    if table[ab][c] != table[a][table[b][c]]:
                        raise ValueError(f"join is not associative at ({a},{b},{c})")
        self.size = k
        self.table = table
        self.zero = zero
        self.labels = tuple(labels) if labels is not None else tuple(str(i) for i in range(k))
        if len(self.labels) != k:
            raise ValueError("label count does not match table size")

    @classmethod
    def from_lattice(cls, L: FinDistLattice) -> tuple["FinSemilattice", list[int]]:
        """The join-semilattice of ``L``; also returns index -> mask."""
        els = list(L.elements)
        idx = {m: i for i, m in enumerate(els)}
        table = [[idx[a | b] for b in els] for a in els]
        return cls(table, idx[0], [mask_label(m) for m in els]), els

    @classmethod
    def boolean(cls, k: int) -> "FinSemilattice":
        n = 1 << k
        return cls([[a | b for b in range(n)] for a in range(n)], 0,
                   [mask_label(a) for a in range(n)])

    @classmethod
    def chain(cls, k: int) -> "FinSemilattice":
        return cls([[max(a, b) for b in range(k)] for a in range(k)], 0)

    def join(self, a: int, b: int) -> int:
        return self.table[a][b]

    def join_all(self, xs: Iterable[int]) -> int:
        acc = self.zero
        for x in xs:
            acc = self.table[acc][x]
        return acc

    def leq(self, a: int, b: int) -> bool:
        return self.table[a][b] == b

    def down(self, e: int) -> frozenset[int]:
        return frozenset(x for x in range(self.size) if self.leq(x, e))

    @cached_property
    def top(self) -> int:
        return self.join_all(range(self.size))

    def meet(self, a: int, b: int) -> int:
        """Join of all common lower bounds (a finite join-semilattice with 0 is a lattice)."""
        return self.join_all(x for x in range(self.size) if self.leq(x, a) and self.leq(x, b))

    def lower_covers(self, e: int) -> list[int]:
        strict = [x for x in range(self.size) if x != e and self.leq(x, e)]
        return [x for x in strict if not any(y != x and self.leq(x, y) for y in strict)]

    @cached_property
    def join_irreducibles(self) -> tuple[int, ...]:
        return tuple(e for e in range(self.size) if e != self.zero and len(self.lower_covers(e)) == 1)

    def refinement_failure(self) -> tuple[int, int, int, int] | None:
        """First ``(a0, a1, b0, b1)`` with ``a0+a1 = b0+b1`` admitting no refinement.

        In a semilattice a refinement exists iff the largest candidate matrix
        ``c_ij = a_i & b_j`` works, so the scan is quartic.
        """
        k = self.size
        t = self.table
        m = [[self.meet(a, b) for b in range(k)] for a in range(k)]
        for a0 in range(k):
            for a1 in range(k):
                s = t[a0][a1]
                for b0 in range(k):
                    for b1 in range(k):
                        if t[b0][b1] != s:
                            continue
                        if (t[m[a0][b0]][m[a0][b1]] != a0 or t[m[a1][b0]][m[a1][b1]] != a1
                                or t[m[a0][b0]][m[a1][b0]] != b0 or t[m[a0][b1]][m[a1][b1]] != b1):
                            return a0, a1, b0, b1
        return None

    def is_distributive(self) -> bool:
        return self.refinement_failure() is None

    def as_lattice(self) -> tuple[FinDistLattice, list[int]]:
        """Birkhoff model of a distributive semilattice; returns (lattice, element -> mask)."""
        if not self.is_distributive():
            raise NotDistributive("semilattice fails refinement")
        irr = list(self.join_irreducibles)
        less = [(i, j) for i, a in enumerate(irr) for j, b in enumerate(irr)
                if i != j and self.leq(a, b)]
        L = FinDistLattice(FinPoset(len(irr), less))
        to_mask = []
        for e in range(self.size):
            m = 0
            for i, a in enumerate(irr):
                if self.leq(a, e):
                    m |= 1 << i
            to_mask.append(m)
        return L, to_mask

    def __eq__(self, other):
        return isinstance(other, FinSemilattice) and (self.table, self.zero) == (other.table, other.zero)

    def __hash__(self):
        return hash((self.table, self.zero))

    def __repr__(self):
        return f"FinSemilattice(size={self.size}, zero={self.zero})"


@dataclass
class IdealLattice:
    """Ideals of a finite semilattice.

    ``ideals`` lists the ideals as frozensets and ``principal[e]`` is the index
    of ``[0, e]``.  When the semilattice is distributive, ``lattice`` is the
    Birkhoff model and ``mask[i]`` the down-set of ideal ``i``.
    """

    semilattice: FinSemilattice
    ideals: list[frozenset[int]]
    principal: list[int]
    distributive: bool
    witness: tuple[int, int, int, int] | None
    lattice: FinDistLattice | None = None
    mask: list[int] | None = None

    def index_of_mask(self, m: int) -> int:
        assert self.mask is not None
        return self.mask.index(m)

    def top_of(self, i: int) -> int:
        """Largest element of ideal ``i``."""
        return self.semilattice.join_all(self.ideals[i])


def ideal_lattice(S: FinSemilattice) -> IdealLattice:
    """Ideals (nonempty join-closed down-sets) of ``S``.

    In a finite semilattice every ideal is principal, so they are listed as
    ``[0, e]``.  A failing distributivity check is reported in the result.
    """
    ideals = [S.down(e) for e in range(S.size)]
    principal = list(range(S.size))
    witness = S.refinement_failure()
    if witness is not None:
        return IdealLattice(S, ideals, principal, False, witness)
    L, to_mask = S.as_lattice()
    return IdealLattice(S, ideals, principal, True, None, L, to_mask)
