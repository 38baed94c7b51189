"""JSON workspaces (schema ``sogkit/1``) and JSON views of results.

A workspace file is ``{"schema": "sogkit/1", "objects": [...]}`` where every
object has a unique ``name`` and a ``type``:

* ``group``: ``{"rank": n, "relations": [[...], ...]}`` with ``n`` rows and one
  relation per column, or ``{"orders": [2, 0]}`` for ``Z/2 + Z``.
* ``subgroup``: ``{"group": G, "generators": [[...], ...]}``.
* ``lattice``: ``{"size": k, "less": [[i, j], ...]}``, the poset of
  join-irreducibles.
* ``semilattice``: ``{"join": [[...]], "zero": 0, "labels": [...]}``,
  ``{"boolean": k}``, ``{"chain": k}`` or ``{"lattice": L}``.
* ``hom``: ``{"lattice": L, "group": G, "values": {"{0}": sub, ...}}`` over
  every element, or ``{"irreducibles": {"0": sub}, "bottom": sub}``.
* ``monoid``: ``{"size": k, "add": [[...]], "zero": 0}``.
* ``presentation``: ``{"semilattice": S, "group": G, "assignment": {e: sub}, "unit": [e, [g]]}``.
* ``blocks``: ``{"blocks": [[order, unit], ...]}`` (order 0 for Z; unit may be omitted).
* ``descriptor``: ``{"variant": "MatCuntz", "params": [1, 3]}``.
* ``elements``: ``{"presentation": P, "items": [[e, [g]], ...]}``.
* ``blueprint``: ``{"stages": [P, ...], "maps": [{"images": [[[e, [g]], [f, [h]]], ...]}], "unital": true}``.

A ``sub`` is a subgroup name or an inline list of generators; ``S`` and ``L``
may also be inline objects.  Semilattice elements are indices or labels.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .cuntz import CornerOInf, DirectSum, MatCuntz, MatOInf, MonoidMap, v_of_descriptor
from .dlat import FinDistLattice, FinPoset, FinSemilattice, mask_label, parse_mask_label
from .errors import ParseError, SogkitError, ValidationError, WorkspaceReferenceError
from .fgab import FgAbGroup, Subgroup, group_from_relations
from .lathom import SubgroupHom
from .sogmon import FinMonoid, SogElement, SogPresentation, block_monoid

__all__ = ["SCHEMA", "Workspace", "parse_input", "load_workspace", "dumps", "subgroup_json",
           "hom_json", "presentation_json", "element_json"]

SCHEMA = "sogkit/1"

DESCRIPTORS = {"MatCuntz": MatCuntz, "MatOInf": MatOInf, "CornerOInf": CornerOInf}


class Workspace:
    """Named objects in file order."""

    def __init__(self):
        self.objects: dict[str, Any] = {}
        self.kinds: dict[str, str] = {}
        self.commands: dict[str, list[str]] = {}

    def __getitem__(self, name):
        return self.objects[name]

    def __contains__(self, name):
        return name in self.objects

    def __len__(self):
        return len(self.objects)

    def names(self, kind: str | None = None) -> list[str]:
        return [n for n in self.objects if kind is None or self.kinds[n] == kind]


def dumps(obj) -> str:
    """Deterministic JSON text."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# ----------------------------------------------------------------------------
# Loading


class _Loader:
    def __init__(self, raw: dict[str, dict]):
        self.raw = raw
        self.ws = Workspace()
        self.active: set[str] = set()
        self.errors: list[SogkitError] = []

    def ref(self, name, kind: str | tuple, where: str):
        if not isinstance(name, str):
            raise ParseError(f"{where}: expected an object name, got {name!r}")
        if name not in self.raw:
            raise WorkspaceReferenceError(f"{where}: unknown object {name!r}")
        obj = self.build(name)
        kinds = (kind,) if isinstance(kind, str) else kind
        if self.ws.kinds[name] not in kinds:
            raise ValidationError(f"{where}: {name!r} is a {self.ws.kinds[name]}, expected {'/'.join(kinds)}")
        return obj

    def build(self, name: str):
        if name in self.ws.objects:
            return self.ws.objects[name]
        if name in self.active:
            raise WorkspaceReferenceError(f"circular reference through {name!r}")
        self.active.add(name)
        spec = self.raw[name]
        kind = spec.get("type")
        maker = getattr(self, f"make_{str(kind).replace('-', '_')}", None)
        if maker is None:
            raise ParseError(f"{name}: unknown type {kind!r}")
        try:
            obj = maker(name, spec)
        except SogkitError:
            raise
        except (ValueError, TypeError, KeyError, IndexError) as exc:
            raise ValidationError(f"{name}: {exc}") from exc
        finally:
            self.active.discard(name)
        self.ws.objects[name] = obj
        self.ws.kinds[name] = kind
        return obj

    # -- helpers ---------------------------------------------------------------

    @staticmethod
    def int_matrix(rows, where: str, width: int | None = None) -> list[list[int]]:
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise ParseError(f"{where}: expected a list of integer rows")
        for r in rows:
            if not all(isinstance(x, int) and not isinstance(x, bool) for x in r):
                raise ParseError(f"{where}: entries must be integers")
        if rows and len({len(r) for r in rows}) != 1:
            raise ParseError(f"{where}: matrix is not rectangular")
        if width is not None and rows and len(rows[0]) != width:
            raise ParseError(f"{where}: rows must have length {width}")
        return rows

    def subgroup(self, spec, G: FgAbGroup, where: str) -> Subgroup:
        if isinstance(spec, str):
            H = self.ref(spec, "subgroup", where)
            if H.group != G:
                raise ValidationError(f"{where}: subgroup {spec!r} lives in another group")
            return H
        return Subgroup(G, self.int_matrix(spec, where, G.rank))

    def semilattice(self, spec, where: str) -> FinSemilattice:
        if isinstance(spec, str):
            return self.ref(spec, "semilattice", where)
        if not isinstance(spec, dict):
            raise ParseError(f"{where}: expected a semilattice name or object")
        return self.make_semilattice(where, spec)

    def lattice(self, spec, where: str) -> FinDistLattice:
        if isinstance(spec, str):
            return self.ref(spec, "lattice", where)
        return self.make_lattice(where, spec)

    @staticmethod
    def lam_index(S: FinSemilattice, key, where: str) -> int:
        if isinstance(key, int) or (isinstance(key, str) and key.lstrip("-").isdigit()):
            i = int(key)
            if 0 <= i < S.size:
                return i
        if isinstance(key, str) and key in S.labels:
            return S.labels.index(key)
        raise ValidationError(f"{where}: {key!r} is not a semilattice element")

    def element(self, P: SogPresentation, item, where: str) -> SogElement:
        if not (isinstance(item, list) and len(item) == 2 and isinstance(item[1], list)):
            raise ParseError(f"{where}: elements are written [idempotent, [coordinates]]")
        e = self.lam_index(P.lam, item[0], where)
        g = self.int_matrix([item[1]], where, P.group.rank)[0]
        x = SogElement(e, P.group.reduce(g))
        if not P.contains(x):
            raise ValidationError(f"{where}: {item!r} is not an element of the presentation")
        return x

    # -- object makers -----------------------------------------------------------

    def make_group(self, name, spec):
        if "orders" in spec:
            orders = spec["orders"]
            if not isinstance(orders, list) or not all(isinstance(d, int) and d >= 0 for d in orders):
                raise ParseError(f"{name}: orders must be non-negative integers")
            return FgAbGroup.cyclic_sum(orders)
        n = spec.get("rank")
        if not isinstance(n, int) or n < 0:
            raise ParseError(f"{name}: rank must be a non-negative integer")
        rows = self.int_matrix(spec.get("relations", []), f"{name}.relations")
        if rows and len(rows) != n:
            raise ParseError(f"{name}: relations matrix needs {n} rows")
        return group_from_relations(n, rows)

    def make_subgroup(self, name, spec):
        G = self.ref(spec.get("group"), "group", name)
        return Subgroup(G, self.int_matrix(spec.get("generators", []), f"{name}.generators", G.rank))

    def make_lattice(self, name, spec):
        k = spec.get("size")
        if not isinstance(k, int) or k < 0:
            raise ParseError(f"{name}: size must be a non-negative integer")
        less = self.int_matrix(spec.get("less", []), f"{name}.less")
        return FinDistLattice(FinPoset(k, [tuple(p) for p in less]))

    def make_semilattice(self, name, spec):
        if "boolean" in spec:
            return FinSemilattice.boolean(int(spec["boolean"]))
        if "chain" in spec:
            return FinSemilattice.chain(int(spec["chain"]))
        if "lattice" in spec:
            return FinSemilattice.from_lattice(self.lattice(spec["lattice"], name))[0]
        table = self.int_matrix(spec.get("join"), f"{name}.join")
        return FinSemilattice(table, spec.get("zero", 0), spec.get("labels"))

    def make_hom(self, name, spec):
        L = self.lattice(spec.get("lattice"), name)
        G = self.ref(spec.get("group"), "group", name)
        if "values" in spec:
            table = {}
            for key, sub in spec["values"].items():
                try:
                    u = parse_mask_label(key)
                except (ValueError, TypeError) as exc:
                    raise ParseError(f"{name}: bad lattice label {key!r}") from exc
                if not L.is_element(u):
                    raise ValidationError(f"{name}: {key} is not a lattice element")
                table[u] = self.subgroup(sub, G, f"{name}.values[{key}]")
            return SubgroupHom(L, G, table)
        vals = {int(p): self.subgroup(s, G, f"{name}.irreducibles[{p}]")
                for p, s in spec.get("irreducibles", {}).items()}
        if set(vals) != set(range(L.rank)):
            raise ValidationError(f"{name}: need one value per join-irreducible")
        bottom = self.subgroup(spec["bottom"], G, f"{name}.bottom") if "bottom" in spec else None
        return SubgroupHom.from_irreducibles(L, G, vals, bottom)

    def make_monoid(self, name, spec):
        table = self.int_matrix(spec.get("add"), f"{name}.add")
        if "size" in spec and spec["size"] != len(table):
            raise ValidationError(f"{name}: size does not match the table")
        return FinMonoid(table, spec.get("zero", 0), spec.get("labels"))

    def make_presentation(self, name, spec):
        S = self.semilattice(spec.get("semilattice"), name)
        G = self.ref(spec.get("group"), "group", name)
        groups = [G.trivial()] * S.size
        seen = set()
        for key, sub in spec.get("assignment", {}).items():
            e = self.lam_index(S, key, f"{name}.assignment")
            groups[e] = self.subgroup(sub, G, f"{name}.assignment[{key}]")
            seen.add(e)
        if len(seen) != S.size:
            raise ValidationError(f"{name}: assignment must cover all {S.size} semilattice elements")
        P = SogPresentation(S, G, groups)
        if "unit" in spec:
            P.unit = self.element(P, spec["unit"], f"{name}.unit")
        return P

    def make_blocks(self, name, spec):
        out = []
        for b in spec.get("blocks", []):
            if isinstance(b, int):
                out.append(b)
            elif isinstance(b, list) and len(b) == 2:
                out.append(("infinite", b[1]) if b[0] == 0 else ("cyclic", b[0], b[1]))
            else:
                raise ParseError(f"{name}: blocks are orders or [order, unit] pairs")
        return block_monoid(out)

    def make_descriptor(self, name, spec):
        return v_of_descriptor(self.descriptor(spec, name))[0]

    def descriptor(self, spec, where):
        variant = spec.get("variant")
        if variant == "DirectSum":
            return DirectSum(tuple(self.descriptor(p, where) for p in spec.get("parts", [])))
        if variant not in DESCRIPTORS:
            raise ParseError(f"{where}: unknown descriptor variant {variant!r}")
        return DESCRIPTORS[variant](*spec.get("params", []))

    def make_elements(self, name, spec):
        P = self.ref(spec.get("presentation"), ("presentation", "blocks", "descriptor"), name)
        return P, [self.element(P, it, f"{name}.items") for it in spec.get("items", [])]

    def make_blueprint(self, name, spec):
        stages = [self.ref(s, ("presentation", "blocks", "descriptor"), name) for s in spec.get("stages", [])]
        maps = []
        for i, m in enumerate(spec.get("maps", [])):
            if i + 1 >= len(stages):
                raise ValidationError(f"{name}: more maps than stage transitions")
            table = {}
            for pair in m.get("images", []):
                if not (isinstance(pair, list) and len(pair) == 2):
                    raise ParseError(f"{name}.maps[{i}]: images are [source, target] pairs")
                x = self.element(stages[i], pair[0], f"{name}.maps[{i}]")
                y = self.element(stages[i + 1], pair[1], f"{name}.maps[{i}]")
                table[x] = y
            maps.append(table)
        return {"stages": stages, "maps": maps, "unital": bool(spec.get("unital", True))}


def _read(path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc})") from exc


def load_workspace(docs: list) -> Workspace:
    """Build a workspace from parsed JSON documents; collects every error.

    On failure raises the class of the first error, with the full list in
    ``.errors``.
    """
    raw: dict[str, dict] = {}
    commands: dict[str, list[str]] = {}
    errors: list[SogkitError] = []
    for d in docs:
        if not isinstance(d, dict):
            errors.append(ParseError("a workspace document must be a JSON object"))
            continue
        if d.get("schema") != SCHEMA:
            errors.append(ParseError(f"schema must be {SCHEMA!r}"))
            continue
        objs = d.get("objects", [])
        if not isinstance(objs, list):
            errors.append(ParseError("objects must be a list"))
            continue
        for o in objs:
            if not isinstance(o, dict) or not isinstance(o.get("name"), str):
                errors.append(ParseError(f"object without a name: {o!r}"))
            elif o["name"] in raw:
                errors.append(ValidationError(f"duplicate object name {o['name']!r}"))
            else:
                raw[o["name"]] = o
        for verb, args in d.get("commands", {}).items():
            commands[verb] = list(args)
    loader = _Loader(raw)
    for name in raw:
        try:
            loader.build(name)
        except SogkitError as exc:
            errors.append(exc)
    if errors:
        first = errors[0]
        exc = type(first)("; ".join(str(e) for e in errors))
        exc.errors = errors
        raise exc
    loader.ws.commands = commands
    return loader.ws


def parse_input(files) -> Workspace:
    """Read and validate one or more workspace files."""
    return load_workspace([_read(f) for f in files])


# ----------------------------------------------------------------------------
# JSON views


def subgroup_json(H: Subgroup) -> dict:
    return {"generators": [list(g) for g in H.nonzero_generators()],
            "invariants": list(H.invariants())}


def hom_json(phi: SubgroupHom) -> dict:
    return {mask_label(u): subgroup_json(phi.table[u]) for u in phi.lattice.elements}


def element_json(x: SogElement) -> list:
    return [x.idem, list(x.grp)]


def presentation_json(P: SogPresentation) -> dict:
    out = {
        "semilattice": {"join": [list(r) for r in P.lam.table], "zero": P.lam.zero,
                        "labels": list(P.lam.labels)},
        "group": {"rank": P.group.rank, "relation_vectors": [list(r) for r in P.group.relations],
                  "invariants": list(P.group.invariants)},
        "assignment": {str(e): subgroup_json(H) for e, H in enumerate(P.groups)},
    }
    if P.unit is not None:
        out["unit"] = element_json(P.unit)
    return out


def monoid_map_table(m: MonoidMap) -> list:
    return sorted([element_json(x), element_json(y)] for x, y in m.table.items())
