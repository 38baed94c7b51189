"""Command line front end: ``sogkit <verb> --in file.json [names...]``.

Exit codes: 0 when the checked property holds, 1 when it fails (the
certificate carries the witness), 2 on input errors.  Certificates are
printed as sorted, indented JSON, so identical inputs give identical bytes.
"""

from __future__ import annotations

import argparse
import sys
from typing import Callable

from .cuntz import MonoidMap, descriptor_name, emit_blueprint, special_rerealization
from .dlat import mask_label
from .errors import (BudgetExceeded, MapNotHomomorphism, MapNotNormalized, NotPure, NotRegular,
                     PreconditionViolated, PurityRequired, SogkitError, StageNotInBbar,
                     UnknownVerb)
from .fgab import is_pure
from .lathom import (EnvelopeTrace, distributive_envelope, distributivity_failure,
                     is_distributive_element, purity_violations, validate_hom)
from .oracle import OracleBudget, brute_distributive, brute_purity, brute_refinement
from .pureapprox import pure_approximation, pure_witness
from .serialize import (SCHEMA, Workspace, dumps, element_json, hom_json, parse_input,
                        presentation_json, subgroup_json)
from .sogmon import (FinMonoid, check_axioms, decompose_regular, fg_submonoid_cover,
                     retract_witness)

__all__ = ["main", "run_command", "VERBS"]

PRESENTATION_KINDS = ("presentation", "blocks", "descriptor")


class _Args:
    """Resolve positional object names, falling back to the only object of a kind."""

    def __init__(self, ws: Workspace, verb: str, names: list[str]):
        self.ws = ws
        self.names = list(names) or list(ws.commands.get(verb, []))
        self.pos = 0

    def take(self, kinds, role: str):
        kinds = (kinds,) if isinstance(kinds, str) else kinds
        if self.pos < len(self.names):
            name = self.names[self.pos]
            self.pos += 1
            if name not in self.ws:
                raise _InputError(f"unknown object {name!r} for {role}")
            if self.ws.kinds[name] not in kinds:
                raise _InputError(f"{name!r} is a {self.ws.kinds[name]}, {role} must be a {'/'.join(kinds)}")
            return name, self.ws[name]
        cands = [n for n in self.ws.names() if self.ws.kinds[n] in kinds]
        if len(cands) != 1:
            raise _InputError(f"name the {role} ({len(cands)} candidates of type {'/'.join(kinds)})")
        return cands[0], self.ws[cands[0]]


class _InputError(Exception):
    pass


def _budget(opts) -> OracleBudget:
    return OracleBudget(element_bound=opts.budget) if opts.budget else OracleBudget()


# ----------------------------------------------------------------------------
# Verbs: each returns (passed, result dict)


def _check_hom(a: _Args, opts):
    name, phi = a.take("hom", "hom")
    rep = validate_hom(phi)
    res = {"hom": name, "values": hom_json(phi),
           "join_violations": [[mask_label(u), mask_label(v)] for u, v in rep.join_violations],
           "meet_violations": [[mask_label(u), mask_label(v)] for u, v in rep.meet_violations]}
    return rep.valid, res


def _check_purity(a: _Args, opts):
    name, phi = a.take("hom", "hom")
    bad = purity_violations(phi)
    res = {"hom": name, "values": hom_json(phi), "violations": [[u, v] for u, v in bad],
           "violation_labels": [[mask_label(u), mask_label(v)] for u, v in bad]}
    if opts.oracle:
        res["oracle"] = _oracle_purity_pairs(phi, opts)
    return not bad, res


def _oracle_purity_pairs(phi, opts):
    out = []
    for u, v in phi.lattice.covering_pairs():
        A, B = phi.table[u], phi.table[v]
        try:
            brute = brute_purity(A, B, _budget(opts))
        except BudgetExceeded as exc:
            out.append({"pair": [u, v], "skipped": str(exc)})
            continue
        out.append({"pair": [u, v], "fast": is_pure(A, B), "oracle": brute})
    return out


def _distr_envelope(a: _Args, opts):
    hname, phi = a.take("hom", "hom")
    sname, A = a.take("subgroup", "subgroup")
    trace = EnvelopeTrace()
    try:
        B = distributive_envelope(A, phi, trace)
    except PreconditionViolated as exc:
        return False, {"hom": hname, "subgroup": sname, "error": str(exc)}
    fail = distributivity_failure(A, phi)
    res = {"hom": hname, "subgroup": sname, "input": subgroup_json(A),
           "input_distributive": fail is None, "envelope": subgroup_json(B),
           "envelope_meets": {mask_label(u): subgroup_json(B & phi.table[u]) for u in phi.lattice.elements},
           "max_iterations": trace.max_iterations(), "irreducibles": phi.lattice.rank}
    if opts.oracle:
        res["oracle"] = _oracle_distributive(B, phi, opts)
    return True, res


def _oracle_distributive(B, phi, opts):
    try:
        return {"fast": is_distributive_element(B, phi), "oracle": brute_distributive(B, phi, _budget(opts))}
    except BudgetExceeded as exc:
        return {"skipped": str(exc)}


def _pure_approx(a: _Args, opts):
    hname, phi = a.take("hom", "hom")
    sname, H = a.take("subgroup", "subgroup")
    try:
        r = pure_approximation(phi, H)
    except (PurityRequired, PreconditionViolated) as exc:
        return False, {"hom": hname, "subgroup": sname, "error": str(exc),
                       "violations": [[u, v] for u, v in purity_violations(phi)]}
    res = {"hom": hname, "subgroup": sname, "approximation": hom_json(r.psi),
           "sandwich": r.sandwich_holds(), "hom_valid": r.hom_valid,
           "purity_violations": [[u, v] for u, v in r.purity_violations]}
    return r.ok, res


def _pure_witness(a: _Args, opts):
    na, A = a.take("subgroup", "A")
    nb, B = a.take("subgroup", "B")
    nh, H = a.take("subgroup", "H")
    try:
        A2, B2, K = pure_witness(A, B, H)
    except (NotPure, PreconditionViolated) as exc:
        return False, {"A": na, "B": nb, "H": nh, "error": str(exc)}
    ok = (A2 & K).is_trivial() and A2 + K == B2
    return ok, {"A": na, "B": nb, "H": nh, "A_prime": subgroup_json(A2), "B_prime": subgroup_json(B2),
                "complement": subgroup_json(K)}


def _monoid_check(a: _Args, opts):
    name, M = a.take(("monoid",) + PRESENTATION_KINDS, "monoid")
    rep = check_axioms(M)
    res = {"monoid": name, "flags": rep.flags,
           "witnesses": {k: _plain(v) for k, v in rep.witnesses.items()}, "notes": rep.notes}
    if opts.oracle and isinstance(M, FinMonoid):
        ok, wit = brute_refinement(M, _budget(opts))
        res["oracle"] = {"refinement": ok, "witness": _plain(wit)}
    return rep.all_pass, res


def _plain(v):
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, (int, str, bool)) or v is None:
        return v
    return str(v)


def _monoid_decompose(a: _Args, opts):
    name, M = a.take("monoid", "monoid")
    try:
        dec = decompose_regular(M)
    except NotRegular as exc:
        return False, {"monoid": name, "error": str(exc), "witness": _plain(exc.witness)}
    lam = dec.lam
    comps = []
    for i, e in enumerate(dec.idempotents):
        G, _ = dec.group_of(i)
        comps.append({"idempotent": e, "elements": dec.component[i], "group": G.describe()})
    maps = []
    for x in range(lam.size):
        for y in range(lam.size):
            if x != y and lam.leq(x, y):
                j = dec.natural_map(x, y)
                maps.append({"from": dec.idempotents[x], "to": dec.idempotents[y],
                             "table": [[k, v] for k, v in sorted(j.items())],
                             "injective": len(set(j.values())) == len(j)})
    res = {"monoid": name, "semilattice": [list(r) for r in lam.table], "components": comps,
           "natural_maps": maps}
    return True, res


def _cover(a: _Args, opts):
    ename, (P, X) = a.take("elements", "element set")
    cv = fg_submonoid_cover(P, X)
    N = cv.N
    rep = N.validate()
    res = {"elements": ename, "items": [element_json(x) for x in X], "cover": presentation_json(N),
           "idempotent_map": cv.lam_map, "valid": rep.valid,
           "complements": {str(p): subgroup_json(K) for p, K in sorted(cv.complements.items())}}
    return rep.valid, res


def _retract(a: _Args, opts):
    name, P = a.take(PRESENTATION_KINDS, "presentation")
    W = retract_witness(P)
    res = {"presentation": name, "blocks": [[d, p] for p, d, _ in W.factors],
           "factor_generators": [list(g) for _, _, g in W.factors],
           "block_sum": presentation_json(W.B), "checked_pairs": W.checked_pairs,
           "exhaustive": W.exhaustive}
    return True, res


def _blueprint(a: _Args, opts):
    name, spec = a.take("blueprint", "blueprint")
    stages = spec["stages"]
    try:
        maps = [MonoidMap(stages[i], stages[i + 1], t) for i, t in enumerate(spec["maps"])]
        bp = emit_blueprint(stages, maps, spec["unital"])
    except (StageNotInBbar, MapNotHomomorphism, MapNotNormalized) as exc:
        return False, {"blueprint": name, "error": type(exc).__name__, "detail": str(exc)}
    res = {"blueprint": name, "stages": bp.stage_names(), "unital": bp.unital,
           "certificate": bp.certificate,
           "special_stages": [descriptor_name(d) for d in special_rerealization(bp)]}
    return True, res


def _oracle_check(a: _Args, opts):
    """Compare every fast path with its oracle across the workspace."""
    ws = a.ws
    budget = _budget(opts)
    rows, agree = [], True
    subs = ws.names("subgroup")
    for x in subs:
        for y in subs:
            A, B = ws[x], ws[y]
            if A.group != B.group or not A <= B:
                continue
            try:
                brute = brute_purity(A, B, budget)
            except BudgetExceeded as exc:
                rows.append({"check": "purity", "pair": [x, y], "skipped": str(exc)})
                continue
            fast = is_pure(A, B)
            agree &= fast == brute
            rows.append({"check": "purity", "pair": [x, y], "fast": fast, "oracle": brute})
    for m in ws.names("monoid"):
        fast = check_axioms(ws[m]).flags["refinement"]
        brute, wit = brute_refinement(ws[m], budget)
        agree &= fast == brute
        rows.append({"check": "refinement", "monoid": m, "fast": fast, "oracle": brute,
                     "witness": _plain(wit)})
    for h in ws.names("hom"):
        phi = ws[h]
        for s in subs:
            if ws[s].group != phi.group or not ws[s] <= phi.top:
                continue
            try:
                brute = brute_distributive(ws[s], phi, budget)
            except BudgetExceeded as exc:
                rows.append({"check": "distributive", "hom": h, "subgroup": s, "skipped": str(exc)})
                continue
            fast = is_distributive_element(ws[s], phi)
            agree &= fast == brute
            rows.append({"check": "distributive", "hom": h, "subgroup": s, "fast": fast, "oracle": brute})
    return agree, {"comparisons": rows, "agree": agree}


VERBS: dict[str, Callable] = {
    "check-hom": _check_hom,
    "check-purity": _check_purity,
    "distr-envelope": _distr_envelope,
    "pure-approx": _pure_approx,
    "pure-witness": _pure_witness,
    "monoid-check": _monoid_check,
    "monoid-decompose": _monoid_decompose,
    "cover": _cover,
    "retract": _retract,
    "blueprint": _blueprint,
    "oracle-check": _oracle_check,
}


def _error_cert(verb, errors) -> dict:
    return {"schema": SCHEMA, "verb": verb, "status": "error",
            "errors": [{"kind": type(e).__name__, "message": str(e)} for e in errors]}


def run_command(ws: Workspace, verb: str, names=(), oracle: bool = False,
                budget: int | None = None) -> tuple[int, dict]:
    """Run ``verb`` on a loaded workspace; returns ``(exit code, certificate)``."""
    if verb not in VERBS:
        raise UnknownVerb(f"unknown verb {verb!r}; choose from {', '.join(sorted(VERBS))}")
    opts = argparse.Namespace(oracle=oracle, budget=budget)
    try:
        passed, result = VERBS[verb](_Args(ws, verb, list(names)), opts)
    except _InputError as exc:
        return 2, _error_cert(verb, [exc])
    except SogkitError as exc:
        return 2, _error_cert(verb, getattr(exc, "errors", [exc]))
    cert = {"schema": SCHEMA, "verb": verb, "status": "pass" if passed else "fail", "result": result}
    return (0 if passed else 1), cert


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sogkit", description="Certificates for subgroup lattices, "
                                "refinement monoids and Cuntz-limit blueprints.")
    p.add_argument("verb", help=", ".join(VERBS))
    p.add_argument("names", nargs="*", help="object names the verb works on")
    p.add_argument("--in", dest="inputs", action="append", required=True, metavar="FILE",
                   help="workspace JSON file (repeatable)")
    p.add_argument("--oracle", action="store_true", help="add brute-force comparisons")
    p.add_argument("--budget", type=int, default=None, help="oracle element bound")
    p.add_argument("--out", default=None, help="also write the certificate here")
    return p


def main(argv=None) -> int:
    opts = build_parser().parse_intermixed_args(argv)
    verb = opts.verb
    if verb not in VERBS:
        code, cert = 2, _error_cert(verb, [UnknownVerb(f"unknown verb {verb!r}")])
    elif opts.budget is not None and opts.budget <= 0:
        code, cert = 2, _error_cert(verb, [ValueError("budget must be positive")])
    else:
        try:
            ws = parse_input(opts.inputs)
        except SogkitError as exc:
            code, cert = 2, _error_cert(verb, getattr(exc, "errors", [exc]))
        else:
            code, cert = run_command(ws, verb, opts.names, opts.oracle, opts.budget)
    text = dumps(cert)
    sys.stdout.write(text)
    if opts.out:
        with open(opts.out, "w") as fh:
            fh.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
