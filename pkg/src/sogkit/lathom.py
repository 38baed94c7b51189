"""Lattice homomorphisms ``D -> Sub G`` and elements distributive with respect to them.

``SubgroupHom`` stores the full table ``u -> G_u`` over the down-set model of
``D``.  The main algorithm is ``distributive_envelope``, which enlarges a
finitely generated ``A <= G_1`` to a finitely generated subgroup ``B`` for
which ``u -> B & G_u`` is again a lattice homomorphism.  It keeps a monotone
family ``(A_p)`` indexed by join-irreducibles and repairs one irreducible at a
time, recursing into the interval below ``p_*``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .dlat import FinDistLattice, FinPoset, bits, mask_label
from .errors import (FamilyInvalid, NotDistributive, PreconditionViolated)
from .fgab import FgAbGroup, Subgroup, is_pure
from .intmat import combine, solve_rows

__all__ = [
    "SubgroupHom", "HomReport", "DistrFamily", "EnvelopeTrace", "validate_hom",
    "check_purity_condition", "purity_violations", "is_distributive_element",
    "distributivity_failure", "chardistr_extract", "chardistr_reconstruct",
    "distributive_envelope",
]


class SubgroupHom:
    """A map ``u -> G_u`` from every element of a finite distributive lattice into ``Sub G``."""

    def __init__(self, lattice: FinDistLattice, group: FgAbGroup, table: Mapping[int, Subgroup]):
        self.lattice = lattice
        self.group = group
        self.table = dict(table)
        missing = [u for u in lattice.elements if u not in self.table]
        extra = [u for u in self.table if not lattice.is_element(u)]
        if missing or extra:
            raise ValueError(f"table must cover exactly the lattice elements "
                             f"(missing {[mask_label(u) for u in missing]}, "
                             f"extra {[mask_label(u) for u in extra]})")
        for u, H in self.table.items():
            if H.group != group:
                raise ValueError(f"value at {mask_label(u)} lives in a different group")

    @classmethod
    def from_irreducibles(cls, lattice: FinDistLattice, group: FgAbGroup,
                          values: Mapping[int, Subgroup], bottom: Subgroup | None = None) -> "SubgroupHom":
        """``G_u = G_0 + sum(values[p] for p in J(u))``; a join homomorphism by construction."""
        G0 = bottom if bottom is not None else group.trivial()
        table = {}
        for u in lattice.elements:
            acc = G0
            for p in bits(u):
                acc = acc + values[p]
            table[u] = acc
        return cls(lattice, group, table)

    @classmethod
    def constant(cls, lattice: FinDistLattice, H: Subgroup) -> "SubgroupHom":
        return cls(lattice, H.group, {u: H for u in lattice.elements})

    def __call__(self, u: int) -> Subgroup:
        return self.table[u]

    @property
    def bottom(self) -> Subgroup:
        return self.table[0]

    @property
    def top(self) -> Subgroup:
        return self.table[self.lattice.top]

    def at(self, p: int) -> Subgroup:
        """Value at the join-irreducible with poset index ``p``."""
        return self.table[self.lattice.principal(p)]

    def map_values(self, f, group: FgAbGroup | None = None) -> "SubgroupHom":
        return SubgroupHom(self.lattice, group or self.group,
                           {u: f(H) for u, H in self.table.items()})

    def __eq__(self, other):
        return (isinstance(other, SubgroupHom) and self.lattice.poset == other.lattice.poset
                and self.table == other.table)

    def __repr__(self):
        body = ", ".join(f"{mask_label(u)}: {self.table[u]!r}" for u in self.lattice.elements)
        return f"SubgroupHom({body})"


@dataclass
class HomReport:
    join_violations: list[tuple[int, int]] = field(default_factory=list)
    meet_violations: list[tuple[int, int]] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.join_violations and not self.meet_violations

    def __bool__(self):
        return self.valid


def validate_hom(phi: SubgroupHom) -> HomReport:
    """List every pair violating the join law or the meet law."""
    report = HomReport()
    els = phi.lattice.elements
    T = phi.table
    for i, u in enumerate(els):
        for v in els[i + 1:]:
            if T[u | v] != T[u] + T[v]:
                report.join_violations.append((u, v))
            if T[u & v] != T[u] & T[v]:
                report.meet_violations.append((u, v))
    return report


def purity_violations(phi: SubgroupHom) -> list[tuple[int, int]]:
    """Covering pairs ``u < v`` with ``G_u`` not pure in ``G_v``."""
    out = []
    for u, v in phi.lattice.covering_pairs():
        Gu, Gv = phi.table[u], phi.table[v]
        if not Gu <= Gv or not is_pure(Gu, Gv):
            out.append((u, v))
    return out


def check_purity_condition(phi: SubgroupHom) -> bool:
    """True iff ``G_u`` is pure in ``G_v`` whenever ``u <= v``.

    Purity is transitive, so covering pairs suffice.
    """
    return not purity_violations(phi)


# ----------------------------------------------------------------------------
# Distributive elements


def _meets(a: Subgroup, phi: SubgroupHom, support: int | None = None) -> dict[int, Subgroup]:
    L = phi.lattice
    els = L.elements if support is None else L.downsets_within(support)
    return {u: a & phi.table[u] for u in els}


def distributivity_failure(a: Subgroup, phi: SubgroupHom, support: int | None = None):
    """First pair ``(x, y)`` with ``a & G_{x|y}`` not inside ``(a & G_x) + (a & G_y)``."""
    m = _meets(a, phi, support)
    els = list(m)
    for i, x in enumerate(els):
        for y in els[i + 1:]:
            if x & ~y == 0 or y & ~x == 0:
                continue
            if not m[x | y] <= m[x] + m[y]:
                return x, y
    return None


def is_distributive_element(a: Subgroup, phi: SubgroupHom, support: int | None = None) -> bool:
    """Whether ``u -> a & G_u`` is a lattice homomorphism (one-sided pair scan).

    With ``support`` the scan is restricted to the interval below it.
    """
    return distributivity_failure(a, phi, support) is None


@dataclass
class DistrFamily:
    """Family ``p -> a_p`` over the join-irreducibles, plus the bottom part ``a_0``.

    ``bottom`` plays the role of ``a & G_0``; it is the trivial subgroup
    whenever ``G_0 = 0``.
    """

    values: dict[int, Subgroup]
    bottom: Subgroup

    def at(self, u: int) -> Subgroup:
        """``a_u = a_0 + sum(a_p for p in J(u))``."""
        acc = self.bottom
        for p in bits(u):
            acc = acc + self.values[p]
        return acc

    def total(self) -> Subgroup:
        acc = self.bottom
        for p in sorted(self.values):
            acc = acc + self.values[p]
        return acc

    def violations(self, phi: SubgroupHom) -> list[tuple[str, str]]:
        """All failing conditions as ``(condition, detail)``, in order (i), (ii), (iii)."""
        L = phi.lattice
        out = []
        if not self.bottom <= phi.bottom:
            out.append(("i", "bottom part not inside G_0"))
        for p in range(L.rank):
            if not self.values[p] <= phi.at(p):
                out.append(("i", f"a_{p} not inside G_{p}"))
        for p in range(L.rank):
            if not self.bottom <= self.values[p]:
                out.append(("ii", f"bottom part not inside a_{p}"))
            for q in bits(L.lower_cover(p)):
                if not self.values[q] <= self.values[p]:
                    out.append(("ii", f"a_{q} not inside a_{p}"))
        for p in range(L.rank):
            ps = L.lower_cover(p)
            if self.values[p] & phi.table[ps] != self.at(ps):
                out.append(("iii", f"a_{p} & G_(p_*) differs from the join below p_* at p={p}"))
        return out


def chardistr_extract(a: Subgroup, phi: SubgroupHom) -> DistrFamily:
    """The family ``a_p = a & G_p``; raises NotDistributive if it fails (iii) or (iv)."""
    if not a <= phi.top:
        raise PreconditionViolated("a must lie inside G_1")
    L = phi.lattice
    fam = DistrFamily({p: a & phi.at(p) for p in range(L.rank)}, a & phi.bottom)
    for cond, detail in fam.violations(phi):
        raise NotDistributive(f"condition ({cond}) fails: {detail}")
    if fam.total() != a:
        raise NotDistributive("condition (iv) fails: a is not the join of the a_p")
    return fam


def chardistr_reconstruct(F: DistrFamily, phi: SubgroupHom) -> Subgroup:
    """``a = a_0 + sum(a_p)`` for a family satisfying (i)-(iii).

    The result is distributive with ``a & G_u = a_u`` for every ``u``; both
    facts are re-checked before returning.
    """
    bad = F.violations(phi)
    if bad:
        raise FamilyInvalid(*bad[0])
    a = F.total()
    for u in phi.lattice.elements:
        if a & phi.table[u] != F.at(u):
            raise RuntimeError(f"reconstruction mismatch at {mask_label(u)}")
    if not is_distributive_element(a, phi):
        raise RuntimeError("reconstructed element is not distributive")
    return a


# ----------------------------------------------------------------------------
# Envelope


@dataclass
class EnvelopeTrace:
    """Per-level record of the repair loop: ``(support, repaired irreducibles)``."""

    levels: list[tuple[int, list[int]]] = field(default_factory=list)

    def max_iterations(self) -> int:
        return max((len(ps) for _, ps in self.levels), default=0)


def _decompose(vectors, parts: dict[int, Subgroup], group: FgAbGroup) -> dict[int, list]:
    """Split each vector as a sum of elements of ``parts[q]``; returns the pieces per ``q``."""
    keys = sorted(parts)
    stacked, owner = [], []
    for q in keys:
        for g in parts[q].nonzero_generators():
            stacked.append(g)
            owner.append(q)
    rels = group._relation_hnf[0]
    pieces: dict[int, list] = {q: [] for q in keys}
    n = group.rank
    for v in vectors:
        if group.is_zero(v):
            continue
        c = solve_rows(stacked + rels, v, n)
        if c is None:
            raise PreconditionViolated(f"{tuple(v)} is not in the sum of the given subgroups")
        for q in keys:
            idx = [i for i, o in enumerate(owner) if o == q]
            piece = combine([c[i] for i in idx], [stacked[i] for i in idx], n)
            if any(piece):
                pieces[q].append(piece)
    return pieces


class _Envelope:
    def __init__(self, phi: SubgroupHom, trace: EnvelopeTrace | None):
        self.phi = phi
        self.L = phi.lattice
        self.G = phi.group
        self.trace = trace

    def fam_at(self, fam: dict[int, Subgroup], u: int) -> Subgroup:
        acc = self.G.trivial()
        for q in bits(u):
            acc = acc + fam[q]
        return acc

    def N(self, fam: dict[int, Subgroup]) -> set[int]:
        T = self.phi.table
        out = set()
        for p in fam:
            ps = self.L.lower_cover(p)
            if fam[p] & T[ps] == self.fam_at(fam, ps):
                out.add(p)
        return out

    def run(self, support: int, A: Subgroup) -> Subgroup:
        L, T, G = self.L, self.phi.table, self.G
        if support == 0:
            # G_0 is trivial here, so A is too
            return A & T[0]
        if is_distributive_element(A, self.phi, support):
            return A
        order = [p for p in L.poset.linear_extension if support >> p & 1]
        pieces = _decompose(A.nonzero_generators(), {p: self.phi.at(p) for p in order}, G)
        first = {p: Subgroup(G, pieces[p]) for p in order}
        fam = {}
        for p in order:
            acc = G.trivial()
            for q in bits(L.principal(p)):
                acc = acc + first[q]
            fam[p] = acc
        assert A <= self.fam_at(fam, support)
        repaired = []
        Nset = self.N(fam)
        for p in order:
            if p in Nset:
                continue
            ps = L.lower_cover(p)
            X = fam[p] & T[ps]
            H = _decompose(X.nonzero_generators(), {q: self.phi.at(q) for q in bits(ps)}, G)
            Hsum = Subgroup(G, [v for q in H for v in H[q]])
            C = self.run(ps, Hsum)
            assert X <= C <= T[ps]
            new = {q: fam[q] + (C & T[ps & L.principal(q)]) for q in order}
            newN = self.N(new)
            assert all(fam[q] <= new[q] for q in order)
            assert Nset | {p} <= newN, "repair step lost an irreducible"
            fam, Nset = new, newN
            repaired.append(p)
        assert len(repaired) <= len(order)
        if self.trace is not None:
            self.trace.levels.append((support, repaired))
        B = self.fam_at(fam, support)
        assert A <= B
        return B


def _adjoin_bottom(phi: SubgroupHom) -> tuple[SubgroupHom, int]:
    """Put a new irreducible (index 0) under every old one, valued at ``G_0``.

    Returns the lifted hom; old element ``u`` becomes ``(u << 1) | 1``.
    """
    P = phi.lattice.poset
    k = P.size
    less = [(0, p + 1) for p in range(k)] + [(i + 1, j + 1) for i, j in P.less_pairs()]
    Lp = FinDistLattice(FinPoset(k + 1, less), phi.lattice.bound)
    table = {0: phi.group.trivial()}
    for u in phi.lattice.elements:
        table[(u << 1) | 1] = phi.table[u]
    return SubgroupHom(Lp, phi.group, table), 1


def distributive_envelope(A: Subgroup, phi: SubgroupHom, trace: EnvelopeTrace | None = None,
                          check: bool = True) -> Subgroup:
    """Finitely generated ``B`` with ``A <= B <= G_1`` and ``B`` distributive for ``phi``.

    No minimality is claimed.  Pass an ``EnvelopeTrace`` to record how many
    repair steps each recursion level took (never more than the number of
    irreducibles in play).
    """
    if A.group != phi.group:
        raise PreconditionViolated("A and phi live in different groups")
    if not A <= phi.top:
        raise PreconditionViolated("A must lie inside G_1")
    if check and not validate_hom(phi).valid:
        raise PreconditionViolated("phi is not a lattice homomorphism")
    work = phi
    if not phi.bottom.is_trivial():
        work, _ = _adjoin_bottom(phi)
    B = _Envelope(work, trace).run(work.lattice.top, A)
    if not (A <= B <= phi.top):
        raise RuntimeError("envelope escaped the sandwich A <= B <= G_1")
    if not is_distributive_element(B, phi):
        raise RuntimeError("envelope is not distributive")
    return B
