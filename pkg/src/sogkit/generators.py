"""Random instances for property tests and demos.

Homomorphisms ``D -> Sub G`` are built as direct sums: every join-irreducible
``p`` (and the bottom) owns a few cyclic coordinates, ``G_u`` is the sum of
the blocks owned by ``J(u)``, and a random unimodular change of coordinates
hides the block structure.  Scaling a block's generators gives instances that
break the purity condition on purpose.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import permutations

from .dlat import FinDistLattice, FinPoset, bits, mask_label
from .fgab import FgAbGroup, Subgroup
from .intmat import identity_rows, matvec
from .lathom import SubgroupHom

__all__ = [
    "random_poset", "random_lattice", "random_unimodular", "random_torsion_orders",
    "HomInstance", "random_hom", "random_subgroup", "random_diagonal", "random_group", "abelian_groups_up_to",
    "commutative_monoids", "random_clifford_monoid",
]

TORSION_CHOICES = (2, 3, 4, 2, 8, 5, 6, 2, 3)


def random_poset(rng: random.Random, max_size: int = 4, min_size: int = 0) -> FinPoset:
    k = rng.randint(min_size, max_size)
    density = rng.random()
    less = [(i, j) for i in range(k) for j in range(i + 1, k) if rng.random() < density * 0.6]
    perm = list(range(k))
    rng.shuffle(perm)
    return FinPoset(k, [(perm[i], perm[j]) for i, j in less])


def random_lattice(rng: random.Random, max_size: int = 4, min_size: int = 0) -> FinDistLattice:
    return FinDistLattice(random_poset(rng, max_size, min_size))


def random_unimodular(rng: random.Random, n: int, steps: int | None = None) -> list[list[int]]:
    U = identity_rows(n)
    if n < 2:
        return U
    for _ in range(steps if steps is not None else 3 * n):
        i, j = rng.sample(range(n), 2)
        c = rng.choice((-2, -1, 1, 2))
        U[i] = [a + c * b for a, b in zip(U[i], U[j])]
    return U


def random_torsion_orders(rng: random.Random, max_order: int = 16, max_pieces: int = 3) -> list[int]:
    out, total = [], 1
    for _ in range(rng.randint(0, max_pieces)):
        d = rng.choice(TORSION_CHOICES)
        if total * d > max_order:
            break
        out.append(d)
        total *= d
    return out


def random_group(rng: random.Random, max_free: int = 3, max_torsion: int = 16) -> FgAbGroup:
    """``Z^r + T`` with hidden coordinates."""
    orders = [0] * rng.randint(0, max_free) + random_torsion_orders(rng, max_torsion)
    rng.shuffle(orders)
    G = FgAbGroup.cyclic_sum(orders)
    return _twist(G, random_unimodular(rng, G.rank))[0]


def _twist(G: FgAbGroup, U):
    """Apply the coordinate change ``x -> U x``; returns (new group, map on vectors)."""
    rels = tuple(tuple(matvec(U, r)) for r in G.relations)
    return FgAbGroup(G.rank, rels), (lambda v: tuple(matvec(U, v)))


def random_subgroup(rng: random.Random, H: Subgroup, max_gens: int = 2, span: int = 2) -> Subgroup:
    """Subgroup generated by a few random combinations of ``H``'s generators."""
    gens = H.nonzero_generators()
    G = H.group
    if not gens:
        return G.trivial()
    out = []
    for _ in range(rng.randint(0, max_gens)):
        c = [rng.randint(-span, span) for _ in gens]
        out.append([sum(ci * g[j] for ci, g in zip(c, gens)) for j in range(G.rank)])
    return Subgroup(G, out)


def random_diagonal(rng: random.Random, phi: SubgroupHom, parts: int = 2) -> Subgroup:
    """Subgroup generated by sums of random elements taken from several ``G_p``.

    Mixing irreducibles this way usually breaks distributivity with respect
    to ``phi``, which plain random subgroups rarely do.
    """
    G = phi.group
    k = phi.lattice.rank
    gens = []
    for _ in range(rng.randint(1, 2)):
        v = [0] * G.rank
        for p in rng.sample(range(k), min(k, parts)) if k else []:
            x = random_subgroup(rng, phi.at(p), max_gens=1)
            for g in x.generators:
                v = [a + b for a, b in zip(v, g)]
        gens.append(v)
    return Subgroup(G, gens)


@dataclass
class HomInstance:
    phi: SubgroupHom
    blocks: dict          # owner (-1 = bottom, else poset index) -> subgroup K_owner
    pure: bool            # True when the construction guarantees the purity condition


def random_hom(rng: random.Random, lattice: FinDistLattice | None = None, *, max_free: int = 3,
               max_torsion: int = 16, pure: bool = True, bottom: bool | None = None,
               extra: bool = True, max_size: int = 4, loose: float = 0.25) -> HomInstance:
    """Random lattice homomorphism built from a hidden direct sum.

    With probability ``loose`` per coordinate the whole configuration is
    embedded non-purely (coordinate ``Z/d`` sits inside ``Z/(c*d)``), so
    ``G_1`` need not be pure in ``G``.
    """
    L = lattice if lattice is not None else random_lattice(rng, max_size)
    k = L.rank
    free = rng.randint(0, max_free)
    tors = random_torsion_orders(rng, max_torsion)
    orders = [0] * free + tors
    rng.shuffle(orders)
    owners_pool = list(range(k))
    if bottom is None:
        bottom = rng.random() < 0.3
    if bottom:
        owners_pool.append(-1)
    owner = []
    for _ in orders:
        if owners_pool and (not extra or rng.random() < 0.85):
            owner.append(rng.choice(owners_pool))
        else:
            owner.append(None)
    scale = []
    total = 1
    for d in orders:
        total *= d if d else 1
    ambient = []
    for d in orders:
        c = 1
        if rng.random() < loose:
            c = rng.choice((2, 3))
            if d and total * c > max_torsion:
                c = 1
            elif d:
                total *= c
        scale.append(c)
        ambient.append(d * c)
    G0 = FgAbGroup.cyclic_sum(ambient)
    n = G0.rank
    U = random_unimodular(rng, n)
    G, move = _twist(G0, U)
    scaled = False
    blocks = {}
    for o in [-1] + list(range(k)):
        gens = []
        for i, (d, w) in enumerate(zip(orders, owner)):
            if w != o:
                continue
            e = [0] * n
            e[i] = scale[i]
            if not pure and rng.random() < 0.5 and d != 1:
                c = rng.choice((2, 3))
                if d == 0 or d % c == 0:
                    e[i] = c * scale[i]
                    scaled = True
            gens.append(move(e))
        blocks[o] = Subgroup(G, gens)
    table = {}
    for u in L.elements:
        acc = blocks[-1]
        for p in bits(u):
            acc = acc + blocks[p]
        table[u] = acc
    phi = SubgroupHom(L, G, table)
    return HomInstance(phi, blocks, pure or not scaled)


def _partitions(n: int, largest: int | None = None):
    largest = n if largest is None else largest
    if n == 0:
        yield []
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield [k] + rest


def abelian_groups_up_to(order: int) -> list[FgAbGroup]:
    """One group per isomorphism type of finite abelian group of order at most ``order``."""
    out = []
    for N in range(1, order + 1):
        fac, m, p = [], N, 2
        while m > 1:
            if m % p == 0:
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                fac.append((p, e))
            p += 1
        choices = [[[p ** k for k in part] for part in _partitions(e)] for p, e in fac]
        combos = [[]]
        for ch in choices:
            combos = [c + x for c in combos for x in ch]
        for c in combos:
            out.append(FgAbGroup.cyclic_sum(c) if c else FgAbGroup(0, ()))
    return out


def commutative_monoids(k: int) -> list[tuple[tuple[int, ...], ...]]:
    """Addition tables of all commutative monoids of size ``k`` with zero ``0``, up to isomorphism.

    Plain backtracking with an associativity check after every cell; fine
    for ``k <= 5`` (78 monoids), slow beyond.
    """
    if k < 1:
        raise ValueError("size must be positive")
    T = [[None] * k for _ in range(k)]
    for a in range(k):
        T[0][a] = T[a][0] = a
    cells = [(i, j) for i in range(1, k) for j in range(i, k)]
    relabels = []
    for p in permutations(range(1, k)):
        fwd = (0,) + p
        inv = [0] * k
        for i, x in enumerate(fwd):
            inv[x] = i
        relabels.append((fwd, inv))
    seen: set = set()
    out = []

    def consistent():
        for a in range(1, k):
            for b in range(1, k):
                ab = T[a][b]
                if ab is None:
                    continue
                for c in range(1, k):
                    bc = T[b][c]
                    if bc is None:
                        continue
                    x, y = T[ab][c], T[a][bc]
                    if x is not None and y is not None and x != y:
                        return False
        return True

    def fill(n):
        if n == len(cells):
            tab = tuple(tuple(r) for r in T)
            canon = min(tuple(tuple(fwd[tab[inv[i]][inv[j]]] for j in range(k)) for i in range(k))
                        for fwd, inv in relabels)
            if canon not in seen:
                seen.add(canon)
                out.append(canon)
            return
        i, j = cells[n]
        for v in range(k):
            T[i][j] = T[j][i] = v
            if consistent():
                fill(n + 1)
        T[i][j] = T[j][i] = None

    fill(0)
    return out


def random_clifford_monoid(rng: random.Random, max_size: int = 8, max_free: int = 0,
                           faithful: float = 0.7):
    """Random finite semilattice of groups ``U_e S_e / N_e`` as a Cayley table.

    ``S_e`` and ``N_e <= S_e`` are increasing families of subgroups of a small
    finite group; the structure maps are induced by inclusion.  With
    probability ``faithful`` all ``N_e`` vanish, so the natural maps are
    injective.  Returns ``(table, labels)`` or ``None`` when the draw exceeds
    ``max_size`` elements.
    """
    L = random_lattice(rng, 3)
    els = list(L.elements)
    orders = random_torsion_orders(rng, 8, 2) or [1]
    G = FgAbGroup.cyclic_sum(orders)
    whole = G.whole()
    gens = {p: random_subgroup(rng, whole, 1, 3) for p in range(L.rank)}
    nker = {p: G.trivial() for p in range(L.rank)}
    if rng.random() >= faithful:
        nker = {p: random_subgroup(rng, gens[p], 1, 2) for p in range(L.rank)}
    S, N = {}, {}
    for u in els:
        s, n = G.trivial(), G.trivial()
        for p in bits(u):
            s, n = s + gens[p], n + nker[p]
        S[u], N[u] = s, n
    total = sum(S[u].order() // N[u].order() for u in els)
    if total > max_size:
        return None
    elems, index = [], {}
    for u in els:
        for g in sorted(S[u].elements()):
            key = (u, N[u].reduce_mod(g))
            if key not in index:
                index[key] = len(elems)
                elems.append(key)
    table = []
    for u, g in elems:
        row = []
        for v, h in elems:
            w = u | v
            row.append(index[(w, N[w].reduce_mod([a + b for a, b in zip(g, h)]))])
        table.append(row)
    labels = [f"{mask_label(u)}:{list(g)}" for u, g in elems]
    return table, labels
