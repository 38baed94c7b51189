"""Finitely generated abelian groups, their elements and subgroups.

A group is presented as ``Z^n / L_R`` where ``L_R`` is the lattice spanned by
the relation vectors.  Subgroups of ``G`` correspond to lattices ``L`` with
``L_R <= L <= Z^n``; the echelon Hermite basis of ``L`` is the canonical form,
so two generating sets of the same subgroup compare equal bit for bit.

Purity is decided by trying to split ``B -> B/A``: put ``B/A`` into Smith
form, and for every cyclic factor ``Z/d`` look for a lift of order dividing
``d``.  The lifts, when they all exist, generate a complement.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, reduce
from itertools import product
from math import gcd
from typing import Iterable, Iterator, Sequence

from .errors import (AmbientMismatch, DimensionMismatch, NoPreimage,
                     NotASummand, NotContained)
from .intmat import (IntMatrix, as_rows, combine, hnf_rows, lattice_intersection,
                     lcm, matvec, reduce_vector, smith_rows, solve_rows)

Vector = tuple[int, ...]

__all__ = [
    "FgAbGroup", "GroupElement", "Subgroup", "TorsionSplit", "CyclicDecomposition",
    "group_from_relations", "subgroup_membership", "subgroup_sum",
    "subgroup_intersection", "is_pure", "direct_complement", "torsion_split",
]


@dataclass(frozen=True)
class FgAbGroup:
    """``Z^rank`` modulo the span of ``relations`` (a tuple of relation vectors)."""

    rank: int
    relations: tuple[Vector, ...] = ()

    def __post_init__(self):
        for r in self.relations:
            if len(r) != self.rank:
                raise DimensionMismatch(f"relation {r} has length {len(r)}, expected {self.rank}")

    # -- constructors -------------------------------------------------------

    @classmethod
    def free(cls, n: int) -> "FgAbGroup":
        return cls(n, ())

    @classmethod
    def cyclic_sum(cls, orders: Sequence[int]) -> "FgAbGroup":
        """``Z/n_1 + ... + Z/n_k``, with ``0`` standing for ``Z``."""
        k = len(orders)
        rels = []
        for i, d in enumerate(orders):
            if d < 0:
                raise ValueError("cyclic orders must be nonnegative")
            if d:
                rels.append(tuple(d if j == i else 0 for j in range(k)))
        return cls(k, tuple(rels))

    # -- cached structure ---------------------------------------------------

    @cached_property
    def _relation_hnf(self) -> tuple[list[list[int]], list[int]]:
        return hnf_rows(self.relations, self.rank)

    @cached_property
    def _smith(self):
        # Columns of R are relations.  U R V = D; coordinates y = U x.
        n = self.rank
        R = [[r[i] for r in self.relations] for i in range(n)]
        m = len(self.relations)
        U, D, _, Ui, _ = smith_rows(R, m, inverses=True)
        moduli = [D[i][i] if i < m else 0 for i in range(n)]
        return U, Ui, moduli

    @property
    def relations_matrix(self) -> IntMatrix:
        return IntMatrix.from_columns(self.relations, self.rank)

    @property
    def invariant_factors(self) -> list[int]:
        """Full Smith diagonal, unit factors included, zeros (free rank) last."""
        return list(self._smith[2])

    @property
    def invariants(self) -> list[int]:
        """Reported isomorphism type: nontrivial torsion factors then zeros."""
        return [d for d in self._smith[2] if d != 1]

    @property
    def free_rank(self) -> int:
        return sum(1 for d in self._smith[2] if d == 0)

    @property
    def torsion_invariants(self) -> list[int]:
        return [d for d in self._smith[2] if d > 1]

    def is_finite(self) -> bool:
        return self.free_rank == 0

    def order(self) -> int:
        """Group order, or 0 if infinite."""
        if not self.is_finite():
            return 0
        return reduce(lambda a, b: a * b, self._smith[2], 1)

    def exponent(self) -> int:
        """Least common multiple of element orders (0 if infinite)."""
        return reduce(lcm, self._smith[2], 1) if self.is_finite() else 0

    def describe(self) -> str:
        parts = [f"Z/{d}" if d else "Z" for d in self.invariants]
        return " + ".join(parts) if parts else "0"

    # -- elements -------------------------------------------------------------

    def reduce(self, v: Sequence[int]) -> Vector:
        if len(v) != self.rank:
            raise DimensionMismatch(f"vector of length {len(v)} in a group of rank {self.rank}")
        basis, pivots = self._relation_hnf
        return tuple(reduce_vector(v, basis, pivots))

    def element(self, v: Sequence[int]) -> "GroupElement":
        return GroupElement(self, self.reduce(v))

    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.rank)

    def is_zero(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def smith_coordinates(self, v: Sequence[int]) -> list[int]:
        return matvec(self._smith[0], v)

    def element_order(self, v: Sequence[int]) -> int:
        """Order of ``v`` in the group, 0 if infinite."""
        y = self.smith_coordinates(v)
        order = 1
        for yi, d in zip(y, self._smith[2]):
            if d == 0:
                if yi:
                    return 0
            else:
                order = lcm(order, d // gcd(d, yi))
        return order

    def unit_vectors(self) -> list[Vector]:
        return [tuple(1 if j == i else 0 for j in range(self.rank)) for i in range(self.rank)]

    def whole(self) -> "Subgroup":
        return Subgroup(self, self.unit_vectors())

    def trivial(self) -> "Subgroup":
        return Subgroup(self, ())

    def subgroup(self, generators: Iterable[Sequence[int]]) -> "Subgroup":
        return Subgroup(self, generators)

    def __repr__(self):
        return f"FgAbGroup(rank={self.rank}, relations={list(map(list, self.relations))})"


def group_from_relations(n: int, R) -> FgAbGroup:
    """The group ``Z^n / colspan(R)``; ``R`` has ``n`` rows, one relation per column."""
    if isinstance(R, IntMatrix):
        if R.rows != n and not (R.rows == 0 and R.cols == 0):
            raise DimensionMismatch(f"relation matrix has {R.rows} rows, expected {n}")
        cols = R.columns() if R.rows else []
        return FgAbGroup(n, tuple(tuple(c) for c in cols))
    rows = as_rows(R) if R is not None else []
    if not rows or all(len(r) == 0 for r in rows):
        if rows and len(rows) != n:
            raise DimensionMismatch(f"relation matrix has {len(rows)} rows, expected {n}")
        return FgAbGroup(n, ())
    if len(rows) != n:
        raise DimensionMismatch(f"relation matrix has {len(rows)} rows, expected {n}")
    m = len(rows[0])
    if any(len(r) != m for r in rows):
        raise DimensionMismatch("ragged relation matrix")
    return FgAbGroup(n, tuple(tuple(rows[i][j] for i in range(n)) for j in range(m)))


@dataclass(frozen=True)
class GroupElement:
    group: FgAbGroup
    coords: Vector

    def __add__(self, other: "GroupElement") -> "GroupElement":
        _same(self.group, other.group)
        return self.group.element([a + b for a, b in zip(self.coords, other.coords)])

    def __neg__(self) -> "GroupElement":
        return self.group.element([-a for a in self.coords])

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def __rmul__(self, k: int) -> "GroupElement":
        return self.group.element([k * a for a in self.coords])

    def is_zero(self) -> bool:
        return not any(self.coords)

    def order(self) -> int:
        return self.group.element_order(self.coords)

    def __repr__(self):
        return f"GroupElement{self.coords}"


def _same(g: FgAbGroup, h: FgAbGroup) -> None:
    if g is not h and g != h:
        raise AmbientMismatch("operands live in different groups")


def _vec(x, group: FgAbGroup) -> Vector:
    if isinstance(x, GroupElement):
        _same(x.group, group)
        return x.coords
    v = tuple(int(a) for a in x)
    if len(v) != group.rank:
        raise DimensionMismatch(f"vector of length {len(v)} in a group of rank {group.rank}")
    return v


class Subgroup:
    """Subgroup of an ``FgAbGroup`` given by generating elements.

    ``basis``/``pivots`` hold the echelon Hermite basis of the preimage lattice
    in ``Z^n`` (relations included); equality and hashing use it.
    """


    def __init__(self, group: FgAbGroup, generators: Iterable[Sequence[int]] = (), *, _hnf=None):
        self.group = group
        gens = tuple(_vec(g, group) for g in generators)
        if _hnf is None:
            basis, pivots = hnf_rows(list(gens) + group._relation_hnf[0], group.rank)
        else:
            basis, pivots = _hnf
        self.basis = tuple(tuple(r) for r in basis)
        self.pivots = tuple(pivots)
        self.generators = gens

    @classmethod
    def _from_lattice(cls, group: FgAbGroup, vectors) -> "Subgroup":
        basis, pivots = hnf_rows(list(vectors) + group._relation_hnf[0], group.rank)
        gens = []
        seen = set()
        for row in basis:
            g = group.reduce(row)
            if any(g) and g not in seen:
                seen.add(g)
                gens.append(g)
        return cls(group, gens, _hnf=(basis, pivots))

    # -- identity ---------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.basis == other.basis and self.group == other.group

    def __hash__(self):
        return hash(self.basis)

    @property
    def canonical_form(self) -> IntMatrix:
        """Column Hermite form of ``[generators | relations]`` (one basis vector per column)."""
        return IntMatrix.from_columns(self.basis, self.group.rank)

    def __repr__(self):
        return f"Subgroup({[list(g) for g in self.nonzero_generators()]})"

    # -- queries ----------------------------------------------------------

    def nonzero_generators(self) -> list[Vector]:
        out, seen = [], set()
        for g in self.generators:
            r = self.group.reduce(g)
            if any(r) and r not in seen:
                seen.add(r)
                out.append(r)
        return out

    def contains(self, x) -> bool:
        v = _vec(x, self.group)
        return not any(reduce_vector(v, self.basis, self.pivots))

    __contains__ = contains

    def reduce_mod(self, x) -> Vector:
        """Canonical representative of the coset ``x + H``."""
        return tuple(reduce_vector(_vec(x, self.group), self.basis, self.pivots))

    def witness(self, x) -> list[int] | None:
        """Coefficients expressing ``x`` over ``generators`` modulo relations."""
        v = _vec(x, self.group)
        if not self.generators:
            return [] if self.group.is_zero(v) else None
        rels = self.group._relation_hnf[0]
        c = solve_rows(list(self.generators) + rels, v, self.group.rank)
        return None if c is None else c[:len(self.generators)]

    def __le__(self, other: "Subgroup") -> bool:
        _same(self.group, other.group)
        return all(not any(reduce_vector(r, other.basis, other.pivots)) for r in self.basis)

    def __ge__(self, other: "Subgroup") -> bool:
        return other <= self

    def __lt__(self, other: "Subgroup") -> bool:
        return self <= other and self != other

    def __add__(self, other: "Subgroup") -> "Subgroup":
        _same(self.group, other.group)
        return Subgroup._from_lattice(self.group, self.basis + other.basis)

    def __and__(self, other: "Subgroup") -> "Subgroup":
        _same(self.group, other.group)
        vecs = lattice_intersection([list(r) for r in self.basis],
                                    [list(r) for r in other.basis], self.group.rank)
        return Subgroup._from_lattice(self.group, vecs)

    def is_trivial(self) -> bool:
        return self.basis == tuple(map(tuple, self.group._relation_hnf[0]))

    def scaled(self, m: int) -> "Subgroup":
        """The subgroup ``mH``."""
        return Subgroup(self.group, [[m * a for a in g] for g in self.generators])

    @cached_property
    def decomposition(self) -> "CyclicDecomposition":
        return _cyclic_decomposition(self)

    def invariants(self) -> list[int]:
        return list(self.decomposition.moduli)

    def is_finite(self) -> bool:
        return all(d != 0 for d in self.decomposition.moduli)

    def order(self) -> int:
        """Number of elements, 0 if infinite."""
        mods = self.decomposition.moduli
        if any(d == 0 for d in mods):
            return 0
        return reduce(lambda a, b: a * b, mods, 1)

    def exponent(self) -> int:
        mods = self.decomposition.moduli
        if any(d == 0 for d in mods):
            return 0
        return reduce(lcm, mods, 1)

    def is_cyclic(self) -> bool:
        return len(self.decomposition.moduli) <= 1

    def elements(self) -> Iterator[Vector]:
        """All elements as canonical coordinate vectors (finite subgroups only)."""
        dec = self.decomposition
        if any(d == 0 for d in dec.moduli):
            raise ValueError("cannot enumerate an infinite subgroup")
        n = self.group.rank
        for coeffs in product(*[range(d) for d in dec.moduli]):
            yield self.group.reduce(combine(coeffs, dec.generators, n))


@dataclass
class CyclicDecomposition:
    """``H = (+) <generators[j]>`` with ``generators[j]`` of order ``moduli[j]`` (0 = infinite)."""

    subgroup: Subgroup
    moduli: list[int]
    generators: list[Vector]
    _keep: list[int] = field(repr=False)
    _V: list[list[int]] = field(repr=False)

    def coordinates(self, x) -> list[int]:
        """Coordinates of ``x`` in the cyclic basis, reduced into ``[0, d)``."""
        H = self.subgroup
        v = list(_vec(x, H.group))
        c = []
        for row, p in zip(H.basis, H.pivots):
            q, r = divmod(v[p], row[p])
            if r:
                raise NotContained(f"{tuple(v)} is not in the subgroup")
            c.append(q)
            if q:
                for j in range(p, len(v)):
                    if row[j]:
                        v[j] -= q * row[j]
        if any(v):
            raise NotContained(f"{tuple(x)} is not in the subgroup")
        cv = [sum(c[i] * self._V[i][j] for i in range(len(c))) for j in range(len(c))]
        out = []
        for j in self._keep:
            d = self.moduli[len(out)]
            out.append(cv[j] % d if d else cv[j])
        return out

    def element(self, coords: Sequence[int]) -> Vector:
        return self.subgroup.group.reduce(combine(coords, self.generators, self.subgroup.group.rank))


def _cyclic_decomposition(H: Subgroup) -> CyclicDecomposition:
    G = H.group
    P = [list(r) for r in H.basis]
    k = len(P)
    # relation lattice in coordinates of P
    M = []
    for r in G._relation_hnf[0]:
        v = list(r)
        c = []
        for row, p in zip(H.basis, H.pivots):
            q = v[p] // row[p]
            c.append(q)
            if q:
                for j in range(p, len(v)):
                    if row[j]:
                        v[j] -= q * row[j]
        M.append(c)
    if M:
        _, D, V, _, Vi = smith_rows(M, k, inverses=True)
        diag = [D[i][i] if i < len(M) else 0 for i in range(k)]
    else:
        V = [[1 if i == j else 0 for j in range(k)] for i in range(k)]
        Vi = V
        diag = [0] * k
    newbasis = [combine(Vi[j], P, G.rank) for j in range(k)]
    keep = [j for j in range(k) if diag[j] != 1]
    return CyclicDecomposition(H, [diag[j] for j in keep],
                               [G.reduce(newbasis[j]) for j in keep], keep, V)


# ----------------------------------------------------------------------------
# Module-level operations


def subgroup_membership(x, H: Subgroup) -> list[int] | None:
    """Witness coefficients for ``x`` in ``H`` over ``H.generators``, or None."""
    if isinstance(x, GroupElement):
        _same(x.group, H.group)
    return H.witness(x)


def subgroup_sum(A: Subgroup, B: Subgroup) -> Subgroup:
    return A + B


def subgroup_intersection(A: Subgroup, B: Subgroup) -> Subgroup:
    return A & B


def _coords_in(basis, pivots, v):
    v = list(v)
    c = []
    for row, p in zip(basis, pivots):
        q = v[p] // row[p]
        c.append(q)
        if q:
            for j in range(p, len(v)):
                if row[j]:
                    v[j] -= q * row[j]
    return c


def _splitting(A: Subgroup, B: Subgroup) -> list[list[int]] | None:
    """Generators of a complement of ``A`` in ``B`` or None if ``B -> B/A`` does not split."""
    G = A.group
    n = G.rank
    P = [list(r) for r in B.basis]
    k = len(P)
    M = [_coords_in(B.basis, B.pivots, r) for r in A.basis]
    if M:
        _, D, _, _, Vi = smith_rows(M, k, inverses=True)
        diag = [D[i][i] if i < len(M) else 0 for i in range(k)]
    else:
        Vi = [[1 if i == j else 0 for j in range(k)] for i in range(k)]
        diag = [0] * k
    rels = G._relation_hnf[0]
    lifts = []
    for j in range(k):
        d = diag[j]
        if d == 1:
            continue
        pj = combine(Vi[j], P, n)
        if d == 0:
            lifts.append(pj)
            continue
        # need a in A with d*(pj + a) in L_R
        target = [-d * x for x in pj]
        c = solve_rows([[d * x for x in a] for a in A.basis] + rels, target, n)
        if c is None:
            return None
        lifts.append([x + y for x, y in zip(pj, combine(c[:len(A.basis)], A.basis, n))])
    return lifts


def is_pure(A: Subgroup, B: Subgroup) -> bool:
    """True iff ``A`` is pure in ``B`` (decided by splitting ``B -> B/A``)."""
    _same(A.group, B.group)
    if not A <= B:
        raise NotContained("is_pure requires A <= B")
    return _splitting(A, B) is not None


def direct_complement(A: Subgroup, B: Subgroup) -> Subgroup:
    """Some ``K`` with ``A & K == 0`` and ``A + K == B``; raises NotASummand otherwise."""
    _same(A.group, B.group)
    if not A <= B:
        raise NotContained("direct_complement requires A <= B")
    lifts = _splitting(A, B)
    if lifts is None:
        raise NotASummand("B -> B/A does not split")
    return Subgroup._from_lattice(A.group, lifts)


# ----------------------------------------------------------------------------
# Torsion


class TorsionSplit:
    """Torsion subgroup, ``m``-torsion, and the projection onto ``G/T(G)``."""

    def __init__(self, group: FgAbGroup):
        self.group = group
        U, Ui, moduli = group._smith
        self._U = U
        n = group.rank
        self._free_idx = [i for i in range(n) if moduli[i] == 0]
        self._tors_idx = [i for i in range(n) if moduli[i] > 1]
        self._moduli = moduli
        self._cols = [[Ui[r][i] for r in range(n)] for i in range(n)]
        self.quotient = FgAbGroup.free(len(self._free_idx))
        self.torsion = Subgroup(group, [self._cols[i] for i in self._tors_idx])

    def m_torsion(self, m: int) -> Subgroup:
        """``G[m] = {x : m x = 0}``."""
        if m <= 0:
            raise ValueError("m must be positive")
        gens = []
        for i in self._tors_idx:
            d = self._moduli[i]
            gens.append([(d // gcd(d, m)) * x for x in self._cols[i]])
        return Subgroup(self.group, gens)

    def pi(self, x) -> Vector:
        v = _vec(x, self.group)
        U = self._U
        return tuple(sum(a * b for a, b in zip(U[i], v)) for i in self._free_idx)

    def pi_subgroup(self, H: Subgroup) -> Subgroup:
        _same(H.group, self.group)
        return Subgroup(self.quotient, [self.pi(g) for g in H.generators])

    def lift(self, xbar: Sequence[int], H: Subgroup) -> Vector:
        """Some ``x`` in ``H`` with ``pi(x) == xbar``; raises NoPreimage otherwise."""
        _same(H.group, self.group)
        xbar = tuple(int(a) for a in xbar)
        gens = list(H.generators)
        if not gens:
            if any(xbar):
                raise NoPreimage(f"{xbar} has no preimage in the trivial subgroup")
            return (0,) * self.group.rank
        c = solve_rows([self.pi(g) for g in gens], xbar, self.quotient.rank)
        if c is None:
            raise NoPreimage(f"{xbar} is not in pi(H)")
        return self.group.reduce(combine(c, gens, self.group.rank))


def torsion_split(G: FgAbGroup) -> TorsionSplit:
    return TorsionSplit(G)
