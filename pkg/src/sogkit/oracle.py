"""Brute-force reference checks.

Nothing here calls the normal-form or splitting code used by the algebraic
fast paths: integer lattices are handled by a small echelon routine written
for this module, and finite groups are enumerated element by element.  The
point is to catch algebra bugs, so clarity wins over speed.

Purity range.  For ``A <= B`` with ``B/A`` of exponent ``e`` it is enough to
test ``n`` dividing ``e``: if ``nx`` and ``ex`` lie in ``A`` then so does
``gx`` for ``g = gcd(n, e)``, and ``gx = ga`` gives ``nx = na``.  Whether
``nx in A`` implies ``nx in nA`` does not depend on the representative of the
coset ``x + A``, so one representative per coset is scanned.

When ``B/A`` is not torsion, ``B`` is first replaced by the saturation
``A* = {x in B : nx in A for some n >= 1}``.  Every purity obstruction ``x``
lies in ``A*`` and ``A*/A`` is finite, so the scan above applies to it.
``A*`` is found with exact rational elimination: ``x`` is in ``A*`` iff it
lies in the rational span of ``A`` together with the relations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceeded

__all__ = ["OracleBudget", "brute_purity", "brute_refinement", "brute_distributive",
           "enumerate_subgroup", "all_subgroups"]


@dataclass(frozen=True)
class OracleBudget:
    element_bound: int = 20000
    multiple_bound: int = 20000

    def __post_init__(self):
        if self.element_bound <= 0 or self.multiple_bound <= 0:
            raise ValueError("budget bounds must be positive")


DEFAULT_BUDGET = OracleBudget()


def _echelon(vectors, dim):
    rows = [list(v) for v in vectors if any(v)]
    out = []
    for c in range(dim):
        live = [r for r in rows if r[c] != 0]
        rest = [r for r in rows if r[c] == 0]
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[c]))
            piv = live[0]
            nxt = [piv]
            for r in live[1:]:
                q = r[c] // piv[c]
                r = [x - q * y for x, y in zip(r, piv)]
                if r[c] != 0:
                    nxt.append(r)
                elif any(r):
                    rest.append(r)
            live = nxt
        if live:
            piv = live[0]
            if piv[c] < 0:
                piv = [-x for x in piv]
            out.append((c, piv))
        rows = rest
    return out


def _reduce(v, ech):
    v = list(v)
    for c, row in ech:
        q = v[c] // row[c]
        if q:
            v = [x - q * y for x, y in zip(v, row)]
    return tuple(v)


def _member(v, ech) -> bool:
    return not any(_reduce(v, ech))


def _scale(k, v):
    return [k * x for x in v]


def _add(u, v):
    return [x + y for x, y in zip(u, v)]


def _rational_annihilator(rows, dim):
    """Integer vectors ``w`` with ``r . w == 0`` for every row ``r`` (a rational basis)."""
    M = [[Fraction(x) for x in r] for r in rows]
    pivots = []
    i = 0
    for c in range(dim):
        p = next((j for j in range(i, len(M)) if M[j][c] != 0), None)
        if p is None:
            continue
        M[i], M[p] = M[p], M[i]
        inv = M[i][c]
        M[i] = [x / inv for x in M[i]]
        for j in range(len(M)):
            if j != i and M[j][c] != 0:
                f = M[j][c]
                M[j] = [x - f * y for x, y in zip(M[j], M[i])]
        pivots.append(c)
        i += 1
    out = []
    for free in range(dim):
        if free in pivots:
            continue
        w = [Fraction(0)] * dim
        w[free] = Fraction(1)
        for row, c in zip(M, pivots):
            w[c] = -row[free]
        den = 1
        for x in w:
            den = den * x.denominator // _gcd(den, x.denominator)
        out.append([int(x * den) for x in w])
    return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def _saturation(agens, bgens, rels, dim):
    """Generators of ``{x in B : nx in A for some n}``, as combinations of ``bgens``."""
    W = _rational_annihilator(agens + rels, dim)
    if not W:
        return bgens
    k = len(bgens)
    m = len(W)
    aug = []
    for i, b in enumerate(bgens):
        img = [sum(x * y for x, y in zip(b, w)) for w in W]
        aug.append(img + [1 if j == i else 0 for j in range(k)])
    out = []
    for _, row in _echelon(aug, m + k):
        if not any(row[:m]):
            coeffs = row[m:]
            v = [0] * dim
            for c, b in zip(coeffs, bgens):
                if c:
                    v = _add(v, _scale(c, b))
            out.append(v)
    return out


def brute_purity(A, B, budget: OracleBudget = DEFAULT_BUDGET) -> bool:
    """Definitional purity: ``nB & A == nA`` for all relevant ``n``.

    The scan runs over the saturation of ``A`` in ``B``.  Raises
    BudgetExceeded when its exponent over ``A`` exceeds
    ``budget.multiple_bound`` or when the coset box is too large.
    """
    G = A.group
    n = G.rank
    rels = [list(r) for r in G.relations]
    agens = [list(g) for g in A.generators]
    bgens = [list(g) for g in B.generators if any(g)]
    LA = _echelon(agens + rels, n)
    LB = _echelon(bgens + rels, n)
    for g in agens:
        if not _member(g, LB):
            raise ValueError("brute_purity requires A <= B")
    bgens = [g for g in _saturation(agens, bgens, rels, n) if any(g)]
    e = 1
    for b in bgens:
        k = next((k for k in range(1, budget.multiple_bound + 1) if _member(_scale(k, b), LA)), None)
        if k is None:
            raise BudgetExceeded(f"B/A has an element of order above {budget.multiple_bound}")
        e = e * k // _gcd(e, k)
    cosets = {_reduce([0] * n, LA)}
    frontier = list(cosets)
    while frontier:
        nxt = []
        for x in frontier:
            for b in bgens:
                y = _reduce(_add(x, b), LA)
                if y not in cosets:
                    cosets.add(y)
                    nxt.append(y)
                    if len(cosets) > budget.element_bound:
                        raise BudgetExceeded("too many cosets of A in its saturation")
        frontier = nxt
    divisors = [k for k in range(1, e + 1) if e % k == 0]
    scaled = {k: _echelon([_scale(k, a) for a in agens] + rels, n) for k in divisors}
    for x in sorted(cosets):
        for k in divisors:
            kx = _scale(k, x)
            if _member(kx, LA) and not _member(kx, scaled[k]):
                return False
    return True


# ----------------------------------------------------------------------------
# Finite monoids


def brute_refinement(M, budget: OracleBudget = DEFAULT_BUDGET):
    """Scan every equation ``a0 + a1 = b0 + b1`` for a refinement matrix.

    ``M`` is anything with ``size`` and an ``add`` table.  Returns
    ``(True, None)`` or ``(False, (a0, a1, b0, b1))`` for the first
    equation in lexicographic order that has no refinement.
    """
    k = M.size
    if k > budget.element_bound:
        raise BudgetExceeded(f"monoid of size {k} is over budget")
    add = M.add
    splits = [[] for _ in range(k)]
    for x in range(k):
        for y in range(k):
            splits[add[x][y]].append((x, y))
    for a0 in range(k):
        for a1 in range(k):
            s = add[a0][a1]
            for b0 in range(k):
                for b1 in range(k):
                    if add[b0][b1] != s:
                        continue
                    found = False
                    for c00, c01 in splits[a0]:
                        for c10, c11 in splits[a1]:
                            if add[c00][c10] == b0 and add[c01][c11] == b1:
                                found = True
                                break
                        if found:
                            break
                    if not found:
                        return False, (a0, a1, b0, b1)
    return True, None


# ----------------------------------------------------------------------------
# Finite groups, element by element


def _relations_echelon(G):
    return _echelon([list(r) for r in G.relations], G.rank)


def enumerate_subgroup(G, generators, budget: OracleBudget = DEFAULT_BUDGET, ech=None) -> frozenset:
    """All elements of the subgroup generated by ``generators`` (canonical vectors)."""
    ech = ech if ech is not None else _relations_echelon(G)
    gens = [_reduce(g, ech) for g in generators]
    gens = [g for g in gens if any(g)]
    zero = tuple([0] * G.rank)
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = _reduce(_add(x, g), ech)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > budget.element_bound:
                        raise BudgetExceeded("subgroup has too many elements (or is infinite)")
        frontier = nxt
    return frozenset(seen)


def all_subgroups(G, budget: OracleBudget = DEFAULT_BUDGET) -> list[tuple[frozenset, list]]:
    """Every subgroup of a finite group as ``(element set, generators)``.

    Subgroups are grown from cyclic ones by adding one cyclic subgroup at a
    time, so each comes with a short generating list.
    """
    ech = _relations_echelon(G)
    unit = [[1 if i == j else 0 for j in range(G.rank)] for i in range(G.rank)]
    whole = enumerate_subgroup(G, unit, budget, ech)
    cyclic = {}
    for x in sorted(whole):
        C = enumerate_subgroup(G, [x], budget, ech)
        cyclic.setdefault(C, list(x))
    subs = {C: ([g] if any(g) else []) for C, g in cyclic.items()}
    frontier = list(subs)
    while frontier:
        nxt = []
        for S in frontier:
            for C, g in cyclic.items():
                if C <= S:
                    continue
                T = _set_sum(S, C, ech)
                if T not in subs:
                    subs[T] = subs[S] + [g]
                    nxt.append(T)
        frontier = nxt
    return sorted(subs.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))


def _set_sum(S, T, ech) -> frozenset:
    return frozenset(_reduce(_add(s, t), ech) for s in S for t in T)


def brute_distributive(a, phi, budget: OracleBudget = DEFAULT_BUDGET) -> bool:
    """Check both lattice laws for ``u -> a & G_u`` on element sets."""
    G = phi.group
    ech = _relations_echelon(G)
    A = enumerate_subgroup(G, a.generators, budget, ech)
    vals = {u: A & enumerate_subgroup(G, phi.table[u].generators, budget, ech)
            for u in phi.lattice.elements}
    els = list(vals)
    for x in els:
        for y in els:
            if vals[x | y] != _set_sum(vals[x], vals[y], ech):
                return False
            if vals[x & y] != vals[x] & vals[y]:
                return False
    return True
