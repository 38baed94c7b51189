"""V-monoid bookkeeping for Cuntz algebras and corners of O_inf.

Descriptors are symbolic: ``MatCuntz(m, n)`` is ``M_m(O_n)``, ``MatOInf(m)``
is ``M_m(O_inf)``, ``CornerOInf(k)`` is ``p_k O_inf p_k`` with
``p_k = 1 - sum_{i<=k} s_i s_i^*``.  Their V-monoids with the class of the
unit are

* ``M_m(O_n)``       -> ``((Z/(n-1)) u {0}, m mod (n-1))``
* ``M_m(O_inf)``     -> ``(Z u {0}, m)``
* ``p_k O_inf p_k``  -> ``(Z u {0}, -(k-1))``

``emit_blueprint`` turns a sequence of block sums with connecting monoid maps
into stage descriptors.  That the monoid maps lift to C*-homomorphisms is
recorded as a citation in the certificate, never computed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import (BadSpec, MapNotHomomorphism, MapNotNormalized, NotABlock,
                     StageNotInBbar)
from .intmat import solve_rows
from .sogmon import Block, SogElement, SogPresentation, block_monoid, check_axioms, direct_sum

__all__ = [
    "MatCuntz", "MatOInf", "CornerOInf", "DirectSum", "descriptor_name", "v_of_descriptor",
    "BlockData", "block_shape", "realize_block", "realize_stage", "corner_case",
    "MonoidMap", "Blueprint", "emit_blueprint", "special_rerealization", "LIFTING_CITATION",
]

LIFTING_CITATION = (
    "Each normalized monoid map between V-monoids of finite direct sums of M_m(O_n), "
    "M_m(O_inf) and corners p O_inf p is induced by a (unital) C*-homomorphism; "
    "this lifting is assumed, not computed."
)


@dataclass(frozen=True)
class MatCuntz:
    m: int
    n: int

    def __post_init__(self):
        if self.m < 1 or self.n < 2:
            raise BadSpec("MatCuntz needs m >= 1 and n >= 2")


@dataclass(frozen=True)
class MatOInf:
    m: int

    def __post_init__(self):
        if self.m < 1:
            raise BadSpec("MatOInf needs m >= 1")


@dataclass(frozen=True)
class CornerOInf:
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise BadSpec("CornerOInf needs k >= 1")


@dataclass(frozen=True)
class DirectSum:
    parts: tuple

    def __post_init__(self):
        if not self.parts:
            raise BadSpec("DirectSum needs at least one summand")
        object.__setattr__(self, "parts", tuple(self.parts))


def descriptor_name(d) -> str:
    if isinstance(d, MatCuntz):
        return f"O_{d.n}" if d.m == 1 else f"M_{d.m}(O_{d.n})"
    if isinstance(d, MatOInf):
        return "O_inf" if d.m == 1 else f"M_{d.m}(O_inf)"
    if isinstance(d, CornerOInf):
        return f"p_{d.k} O_inf p_{d.k}"
    if isinstance(d, DirectSum):
        return " + ".join(descriptor_name(p) for p in d.parts)
    raise BadSpec(f"not a descriptor: {d!r}")


def _descriptor_block(d) -> Block:
    if isinstance(d, MatCuntz):
        order = d.n - 1
        return Block(order, d.m % order)
    if isinstance(d, MatOInf):
        return Block(0, d.m)
    if isinstance(d, CornerOInf):
        return Block(0, -(d.k - 1))
    raise BadSpec(f"not a simple descriptor: {d!r}")


def v_of_descriptor(d) -> tuple[SogPresentation, SogElement]:
    """V-monoid of ``d`` as a presentation together with the class of the unit."""
    if isinstance(d, DirectSum):
        P, _ = v_of_descriptor(d.parts[0])
        for part in d.parts[1:]:
            P = direct_sum(P, v_of_descriptor(part)[0])
        return P, P.unit
    P = block_monoid([_descriptor_block(d)])
    return P, P.unit


# ----------------------------------------------------------------------------
# Recognizing block sums


@dataclass(frozen=True)
class BlockData:
    """One block of a block-sum presentation.

    ``atom`` is the atom of the Boolean semilattice owning the block,
    ``generator`` generates its group (zero for order 1) and ``unit`` is the
    coordinate of the presentation's unit, if any.
    """

    order: int
    atom: int
    generator: tuple
    unit: int | None

    def block(self) -> Block:
        return Block(self.order, self.unit)


def block_shape(P: SogPresentation) -> list[BlockData]:
    """Split ``P`` into blocks; raises StageNotInBbar unless ``P`` is a finite sum of blocks.

    Requires all five axioms, a Boolean semilattice and cyclic groups at the
    atoms.  The unit, when present, must sit over the top idempotent.
    """
    rep = check_axioms(P)
    if not rep.all_pass or not P.validate().valid:
        raise StageNotInBbar(f"stage fails the axioms: {rep.flags}")
    lam = P.lam
    atoms = [e for e in range(lam.size) if lam.lower_covers(e) == [lam.zero]]
    if (1 << len(atoms)) != lam.size or set(lam.join_irreducibles) != set(atoms):
        raise StageNotInBbar("semilattice is not Boolean")
    out = []
    for a in atoms:
        dec = P.groups[a].decomposition
        if len(dec.moduli) > 1:
            raise StageNotInBbar(f"group at atom {lam.labels[a]} is not cyclic")
        if dec.moduli:
            out.append((dec.moduli[0], a, tuple(dec.generators[0])))
        else:
            out.append((1, a, (0,) * P.group.rank))
    units = [None] * len(out)
    if P.unit is not None:
        u = P.unit
        if u.idem != lam.top:
            raise StageNotInBbar("unit is not an order-unit (its idempotent is not the top)")
        live = [i for i, (d, _, _) in enumerate(out) if d != 1]
        gens = [out[i][2] for i in live]
        c = solve_rows(gens + P.group._relation_hnf[0], list(u.grp), P.group.rank) if gens else []
        if c is None:
            raise StageNotInBbar("unit does not decompose over the blocks")
        units = [0] * len(out)
        for i, ci in zip(live, c):
            d = out[i][0]
            units[i] = ci % d if d else ci
    return [BlockData(d, a, g, un) for (d, a, g), un in zip(out, units)]


# ----------------------------------------------------------------------------
# Realization


def _as_unit_block(b) -> Block:
    if isinstance(b, Block):
        blk = b
    elif isinstance(b, (tuple, list)) and len(b) == 2 and all(isinstance(x, int) for x in b):
        blk = Block(b[0], b[1])
    elif isinstance(b, SogPresentation):
        shape = block_shape(b)
        if len(shape) != 1:
            raise NotABlock("presentation has more than one block")
        blk = shape[0].block()
    else:
        raise NotABlock(f"cannot read a block from {b!r}")
    if blk.unit is None:
        raise NotABlock("a block needs an order-unit to be realized")
    return blk


def realize_block(b) -> object:
    """Descriptor whose V-monoid with unit class is the block ``b``.

    ``b`` is a ``Block`` with a unit, a pair ``(order, unit)`` (order 0 for
    ``Z``) or a one-block presentation with a unit.  ``((Z/n) u {0}, m)``
    becomes ``M_m(O_{n+1})`` with ``1 <= m <= n``; ``(Z u {0}, k)`` becomes
    ``M_k(O_inf)`` for ``k > 0`` and ``p_{1-k} O_inf p_{1-k}`` otherwise.
    """
    blk = _as_unit_block(b)
    if blk.order >= 1:
        m = blk.unit % blk.order or blk.order
        return MatCuntz(m, blk.order + 1)
    k = blk.unit
    if k > 0:
        return MatOInf(k)
    return CornerOInf(1 - k)


def corner_case(k: int) -> tuple[str, str]:
    """Normal form of a corner of O_inf whose unit class is ``k`` in ``Z``.

    ``"a"``: ``M_k(O_inf)`` for ``k > 0``; ``"b"``: ``M_{-k}(p_2 O_inf p_2)``
    for ``k < 0``; ``"c"``: ``p_1 O_inf p_1`` for ``k = 0``.
    """
    if k > 0:
        return "a", descriptor_name(MatOInf(k))
    if k < 0:
        base = "p_2 O_inf p_2"
        return "b", base if k == -1 else f"M_{-k}({base})"
    return "c", "p_1 O_inf p_1"


def realize_stage(P: SogPresentation):
    """Descriptor for a block-sum stage with unit (a ``DirectSum`` when there are several blocks)."""
    shape = block_shape(P)
    if P.unit is None:
        raise NotABlock("stage has no order-unit")
    parts = tuple(realize_block(b.block()) for b in shape)
    return parts[0] if len(parts) == 1 else DirectSum(parts)


# ----------------------------------------------------------------------------
# Monoid maps between block sums


class MonoidMap:
    """A monoid map between block sums, given on block generators.

    ``table`` sends elements of ``source`` to elements of ``target``.  It must
    contain ``(e_i, 0)`` and ``(e_i, g_i)`` for every block ``i`` (``e_i`` the
    atom, ``g_i`` the block generator); ``(e_i, -g_i)`` is optional for infinite
    blocks.  Other entries, including the zero, are checked against the
    extension.
    """

    def __init__(self, source: SogPresentation, target: SogPresentation, table: dict):
        self.source = source
        self.target = target
        self.table = dict(table)
        self.shape = block_shape(source)
        rank = source.group.rank
        self._parts = []
        for b in self.shape:
            zero = SogElement(b.atom, (0,) * rank)
            gen = SogElement(b.atom, source.group.reduce(b.generator))
            neg = SogElement(b.atom, source.group.reduce([-x for x in b.generator]))
            if zero not in self.table or (b.order != 1 and gen not in self.table):
                raise MapNotHomomorphism(f"map table misses a generator of block at atom {b.atom}")
            a = self.table[zero]
            g = self.table.get(gen, a)
            self._parts.append((b, a, g, self.table.get(neg)))

    @classmethod
    def from_function(cls, source: SogPresentation, target: SogPresentation, fn) -> "MonoidMap":
        table = {source.zero: fn(source.zero)}
        rank = source.group.rank
        for b in block_shape(source):
            for v in ((0,) * rank, b.generator, tuple(-x for x in b.generator)):
                x = SogElement(b.atom, source.group.reduce(v))
                table[x] = fn(x)
        return cls(source, target, table)

    def _neg(self, y: SogElement) -> SogElement:
        return SogElement(y.idem, self.target.group.reduce([-v for v in y.grp]))

    def __call__(self, x: SogElement) -> SogElement:
        S, T = self.source, self.target
        S.check_element(x)
        rank = S.group.rank
        gens = [b.generator for b, _, _, _ in self._parts if b.order != 1]
        c = solve_rows(gens + S.group._relation_hnf[0], list(x.grp), rank) if gens else []
        live = iter(c)
        acc = T.zero
        for b, a, g, neg in self._parts:
            k = next(live) if b.order != 1 else 0
            if not S.lam.leq(b.atom, x.idem):
                continue
            if b.order:
                k %= b.order
            term = a
            step = g if k >= 0 else (neg if neg is not None else self._neg(g))
            for _ in range(abs(k)):
                term = T.add(term, step)
            acc = T.add(acc, term)
        return acc

    def homomorphism_failures(self) -> list[str]:
        """Relations of the block generators that the images violate."""
        T = self.target
        out = []
        for x, y in self.table.items():
            if not T.contains(y):
                out.append(f"image of {x} is not in the target")
        if out:
            return out
        z = self.table.get(self.source.zero)
        if z is not None and z != T.zero:
            out.append("zero is not sent to zero")
        for b, a, g, neg in self._parts:
            tag = f"block at atom {b.atom}"
            if T.add(a, a) != a:
                out.append(f"{tag}: image of the idempotent is not idempotent")
            if T.add(a, g) != g:
                out.append(f"{tag}: idempotent image does not fix the generator image")
            if b.order >= 1:
                acc = a
                for _ in range(b.order):
                    acc = T.add(acc, g)
                if acc != a:
                    out.append(f"{tag}: order relation fails")
            else:
                n = neg if neg is not None else self._neg(g)
                if not T.contains(n) or T.add(g, n) != a:
                    out.append(f"{tag}: generator image has no inverse over the idempotent image")
        if out:
            return out
        for x, y in self.table.items():
            if self(x) != y:
                out.append(f"table entry for {x} disagrees with the extension")
        return out

    def check_pairs(self, limit: int = 4096) -> int:
        """Additivity on element pairs (all pairs when the source is small and finite)."""
        S, T = self.source, self.target
        xs = S.elements() if S.is_finite() and S.size() ** 2 <= limit else S.generators()
        n = 0
        for x in xs:
            fx = self(x)
            for y in xs:
                if self(S.add(x, y)) != T.add(fx, self(y)):
                    raise MapNotHomomorphism(f"additivity fails at ({x}, {y})")
                n += 1
        return n


@dataclass
class Blueprint:
    stages: list
    maps: list[MonoidMap]
    units: list[SogElement | None]
    unital: bool
    certificate: dict = field(default_factory=dict)

    def stage_names(self) -> list[str]:
        return [descriptor_name(d) for d in self.stages]


def emit_blueprint(stages: Sequence[SogPresentation], maps: Sequence[MonoidMap | dict],
                   unital: bool = True) -> Blueprint:
    """Stage descriptors and a validity certificate for a sequence of block sums.

    Without ``unital`` the stages need no units; each stage is then realized
    with unit 1 on every block.
    """
    stages = list(stages)
    if len(maps) != max(0, len(stages) - 1):
        raise BadSpec("need one map between each pair of consecutive stages")
    shapes = []
    for i, P in enumerate(stages):
        try:
            shapes.append(block_shape(P))
        except StageNotInBbar as exc:
            raise StageNotInBbar(f"stage {i}: {exc}") from exc
        if unital and P.unit is None:
            raise StageNotInBbar(f"stage {i} has no order-unit")
    mm = []
    for i, m in enumerate(maps):
        if not isinstance(m, MonoidMap):
            m = MonoidMap(stages[i], stages[i + 1], m)
        if m.source is not stages[i] or m.target is not stages[i + 1]:
            raise BadSpec(f"map {i} does not connect stages {i} and {i + 1}")
        mm.append(m)
    records = []
    for i, m in enumerate(mm):
        fails = m.homomorphism_failures()
        if fails:
            raise MapNotHomomorphism(f"map {i}: {fails[0]}")
        pairs = m.check_pairs()
        rec = {"map": i, "homomorphism": True, "checked_pairs": pairs}
        if unital:
            if m(stages[i].unit) != stages[i + 1].unit:
                raise MapNotNormalized(f"map {i} does not send the unit to the unit")
            rec["normalized"] = True
        records.append(rec)
    descs = []
    for P, shape in zip(stages, shapes):
        blocks = [b.block() if unital else Block(b.order, 1) for b in shape]
        parts = tuple(realize_block(b) for b in blocks)
        descs.append(parts[0] if len(parts) == 1 else DirectSum(parts))
    cert = {
        "stages": [descriptor_name(d) for d in descs],
        "maps": records,
        "corner_cases": [[corner_case(b.unit)[1] for b in shape if b.order == 0 and b.unit is not None]
                         for shape in shapes] if unital else [],
        "citation": LIFTING_CITATION,
        "notes": ["target algebras are not restricted; lifting is out of scope"],
    }
    return Blueprint(descs, mm, [P.unit for P in stages], unital, cert)


def _blocks_of(d) -> list:
    parts = d.parts if isinstance(d, DirectSum) else (d,)
    return [_descriptor_block(p) for p in parts]


def special_rerealization(bp: Blueprint) -> list:
    """Stages using only ``M_m(O_n)`` and ``M_m(O_inf)`` with the same V-monoids, units forgotten.

    Each block is re-realized with unit 1; the V-monoid of every new stage is
    checked to have the same block orders as the original.
    """
    out = []
    for d in bp.stages:
        blocks = _blocks_of(d)
        parts = tuple(realize_block(Block(b.order, 1)) for b in blocks)
        for p in parts:
            if isinstance(p, CornerOInf):  # pragma: no cover - unit 1 never yields a corner
                raise RuntimeError("re-realization produced a corner")
        new = parts[0] if len(parts) == 1 else DirectSum(parts)
        if sorted(b.order for b in _blocks_of(new)) != sorted(b.order for b in blocks):
            raise RuntimeError("re-realization changed the V-monoid")
        out.append(new)
    return out
