"""Command-line front end.

Exit codes: 0 success, 1 a check failed, 2 bad input. With ``--json`` every
command prints one JSON object on stdout, errors included; ``enumerate`` and
``search`` always do.
"""

import argparse
import json
import sys

import numpy as np

from . import bridges, catalog, frl, search
from . import finrel as fr
from ._report import AxiomError, Report
from .diagrams import DiagramSyntaxError, DiagramTypeError, evaluate, normal_form_term, normalize, to_text, typecheck
from .diagrams.normalize import NormalizationError
from .finrel import FinRel, FinSet
from .frob2 import (
    Frob2,
    Groupoid,
    check_frob2,
    check_groupoid,
    frob2_to_groupoid,
    groupoid_to_frob2,
    is_symmetric,
)
from .frob3 import (
    Connector,
    Frob3,
    check_connector,
    check_frob3,
    check_sliding,
    connector_to_frob3,
    frob3_to_connector,
    unit_candidates,
)
from .kernels import FROB2_FLAGS

SCHEMA = 1
KINDS = {Frob2: "frob2", Frob3: "frob3", Connector: "connector", Groupoid: "groupoid", FinRel: "rel"}
# flags that decide the exit code of `check` unless --require says otherwise
GATING = {
    "frob2": FROB2_FLAGS,
    "frob3": ("assoc", "dagger_symmetric"),
    "connector": None,  # all of them
    "groupoid": None,
    "rel": (),
}


class InputError(Exception):
    pass


def kind_of(value):
    for cls, name in KINDS.items():
        if isinstance(value, cls):
            return name
    raise InputError(f"{type(value).__name__} is not a structure")


def _load(path):
    try:
        return frl.load(path)
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from e


def _select(args, kinds=None):
    doc = _load(args.file)
    value = doc.get(args.name, kinds)
    if kinds and not isinstance(value, kinds):
        wanted = ", ".join(KINDS[k] for k in kinds)
        raise InputError(f"{args.name!r} is a {kind_of(value)}, expected {wanted}")
    return doc.name_of(value), value


def _flag_list(text):
    return [s for s in (text or "").replace(" ", "").split(",") if s]


def _elements(text, A):
    out = []
    for tok in _flag_list(text):
        try:
            out.append(A.labels.index(tok) if A.labels and tok in A.labels else A.index(int(tok)))
        except (ValueError, IndexError, KeyError) as e:
            raise InputError(f"{tok!r} is not an element of {A.name}") from e
    return out


def _renamed(value, name):
    """Give a constructed carrier a name the .frl writer accepts."""
    A = FinSet(name, value.A.size)
    if isinstance(value, Frob2):
        return Frob2(A, value.M, value.U)
    return Frob3(A, value.L)


def _frl_text(items):
    doc = frl.FrlDocument()
    for name, value in items:
        doc.add(name, value)
    return frl.dumps(doc)


# -- check ----------------------------------------------------------------------------


def _check_report(value):
    kind = kind_of(value)
    details = {}
    if kind == "frob2":
        rep = check_frob2(value)
        flags = dict(rep)
        flags["symmetric"] = is_symmetric(value)
        details["units"] = value.unit_elements
    elif kind == "frob3":
        flags = dict(check_frob3(value))
        flags["sliding"] = check_sliding(value)
        if value.n <= 8:
            details["unit_candidates"] = [list(map(int, E)) for E in unit_candidates(value)]
    elif kind == "connector":
        flags = dict(check_connector(value))
    elif kind == "groupoid":
        flags = dict(check_groupoid(value))
    else:
        flags = fr.relation_properties(value).as_dict()
    return kind, Report(flags, **details)


def cmd_check(args):
    name, value = _select(args)
    kind, rep = _check_report(value)
    gating = _flag_list(args.require) if args.require else GATING[kind]
    if gating is None:
        gating = list(rep)
    unknown = [f for f in gating if f not in rep]
    if unknown:
        raise InputError(f"unknown flags for {kind}: {', '.join(unknown)}")
    ok = all(rep[f] for f in gating)
    payload = {
        "command": "check",
        "name": name,
        "kind": kind,
        "axioms": list(rep),
        "required": list(gating),
        "flags": {k: bool(v) for k, v in rep.items()},
        "details": rep.details,
        "ok": ok,
    }
    lines = [f"{kind} {name}"]
    for k, v in rep.items():
        mark = "*" if k in gating else " "
        lines.append(f"  {mark} {k:<20} {'pass' if v else 'FAIL'}")
    for k, v in rep.details.items():
        lines.append(f"    {k}: {v}")
    return payload, "\n".join(lines), 0 if ok else 1


# -- convert --------------------------------------------------------------------------


def _to_frob2(value, unit):
    if isinstance(value, Frob2):
        return value
    if isinstance(value, Groupoid):
        return groupoid_to_frob2(value)
    t = value if isinstance(value, Frob3) else connector_to_frob3(value)
    if unit:
        E = _elements(unit, t.A)
    else:
        cands = unit_candidates(t)
        if not cands:
            raise AxiomError("convert", ["unital"])
        if len(cands) > 1:
            raise InputError(f"several unit candidates {[list(map(int, c)) for c in cands]}; pick one with --unit")
        E = cands[0]
    return bridges.three_to_two(t, E)


def _to_frob3(value):
    if isinstance(value, Frob3):
        return value
    if isinstance(value, Connector):
        return connector_to_frob3(value)
    if isinstance(value, Groupoid):
        value = groupoid_to_frob2(value)
    return bridges.two_to_three(value)


def convert(value, to, unit=None):
    if to == "frob2":
        return _to_frob2(value, unit)
    if to == "groupoid":
        return value if isinstance(value, Groupoid) else frob2_to_groupoid(_to_frob2(value, unit))
    if to == "frob3":
        if unit and isinstance(value, (Frob3, Connector)):
            raise InputError("--unit only applies when converting to frob2 or groupoid")
        return _to_frob3(value)
    if to == "connector":
        return value if isinstance(value, Connector) else frob3_to_connector(_to_frob3(value))
    raise InputError(f"unknown target kind {to!r}")


def cmd_convert(args):
    name, value = _select(args)
    result = convert(value, args.to, args.unit)
    out_name = args.out_name or f"{name}_{args.to}"
    text = _frl_text([(out_name, result)])
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    payload = {"command": "convert", "name": name, "to": args.to, "result": out_name, "frl": text}
    human = text.rstrip() if not args.out else f"wrote {out_name} to {args.out}"
    return payload, human, 0


# -- split and envelope -------------------------------------------------------------------


def cmd_split(args):
    name, value = _select(args, (Frob3, Connector, Frob2, Groupoid))
    t = _to_frob3(value)
    res = bridges.split_construction(t)
    out_name = f"{name}_split"
    f = _renamed(res.two_structure, f"{frl.safe_name(t.A.name)}_L")
    rep = check_frob2(f)
    flags = dict(rep)
    flags["symmetric"] = is_symmetric(f)
    classes = res.classes()
    payload = {
        "command": "split",
        "name": name,
        "result": out_name,
        "classes": classes,
        "axioms": list(flags),
        "flags": {k: bool(v) for k, v in flags.items()},
        "ok": all(flags.values()),
        "frl": _frl_text([(out_name, f)]),
    }
    lines = [payload["frl"].rstrip(), f"# {len(classes)} classes: {classes}"]
    lines += [f"# {k}: {'pass' if v else 'FAIL'}" for k, v in flags.items()]
    return payload, "\n".join(lines), 0 if payload["ok"] else 1


def cmd_envelope(args):
    name, value = _select(args, (Frob3, Connector, Frob2, Groupoid))
    t = _to_frob3(value)
    env = bridges.envelope(t)
    rep = bridges.check_envelope(env)
    f = _renamed(env.two_structure, f"E_{frl.safe_name(t.A.name)}")
    out_name = f"{name}_envelope"
    try:
        result = frob2_to_groupoid(f)
    except AxiomError:
        result = f
    tags = frl.Tags(out_name, tuple(tag for tag, _ in env.tags))
    text = _frl_text([(out_name, result), (f"{out_name}_tags", tags)])
    payload = {
        "command": "envelope",
        "name": name,
        "result": out_name,
        "kind": kind_of(result),
        "size": env.E.size,
        "blocks": {tag: len(env.block(tag)) for tag in bridges.TAGS},
        "axioms": list(rep),
        "flags": {k: bool(v) for k, v in rep.items()},
        "ok": rep.ok,
        "frl": text,
    }
    if isinstance(result, Groupoid):
        payload["objects"] = result.C0.size
    lines = [text.rstrip()] + [f"# {k}: {'pass' if v else 'FAIL'}" for k, v in rep.items()]
    return payload, "\n".join(lines), 0 if rep.ok else 1


# -- enumerate and search --------------------------------------------------------------------


def cmd_enumerate(args):
    try:
        if args.kind == "frob2":
            rep = search.enumerate_frob2(args.size, args.strategy or "auto")
        elif args.kind == "groupoid":
            rep = search.enumerate_groupoids(args.size)
        elif args.kind == "frob3":
            require = tuple(_flag_list(args.require)) or search.NORMAL_FLAGS
            rep = search.enumerate_frob3(args.size, require, args.strategy or "auto")
        else:
            rep = search.enumerate_connectors(args.size)
    except search.SearchTooLarge as e:
        raise InputError(str(e)) from e
    payload = {"command": "enumerate", **rep.as_dict()}
    human = f"{rep.kind} on {rep.n} elements: {rep.count} ({rep.strategy}, {rep.seconds:.2f}s)"
    return payload, human, 0


def cmd_search(args):
    name, g = _select(args, (Groupoid, Frob2))
    witness = search.find_cp_gap(g, args.max_codomain)
    f = groupoid_to_frob2(g) if isinstance(g, Groupoid) else g
    reason = None
    if witness is not None:
        mask = np.zeros(f.n, dtype=bool)
        mask[witness] = True
        reason = search.closure_failure(f, mask)
    payload = {
        "command": "search cp-gap",
        "name": name,
        "witness": witness,
        "closure_failure": list(reason) if reason else None,
    }
    human = "no CP subset that is not a subgroupoid" if witness is None else f"witness {witness}: not closed, {reason}"
    return payload, human, 0


# -- diagrams ---------------------------------------------------------------------------------


def builtin_structures():
    return {
        "T3": catalog.T3(),
        "TZ4": catalog.ternary_cyclic(4),
        "Tproj": catalog.Tproj(2),
        "Z2": bridges.two_to_three(catalog.cyclic(2)),
        "Z3": bridges.two_to_three(catalog.cyclic(3)),
    }


def _structure(args):
    if args.file:
        doc = _load(args.file)
        value = doc.get(args.structure, (Frob3, Frob2, Connector))
        return _to_frob3(value)
    builtins = builtin_structures()
    if args.structure not in builtins:
        raise InputError(f"unknown structure {args.structure!r}; give --file or one of {sorted(builtins)}")
    return builtins[args.structure]


def cmd_diagram_eval(args):
    t = _structure(args)
    in_w, out_w = typecheck(args.term, args.commutative)
    r = evaluate(args.term, t, args.commutative)
    pairs = [[list(r.src.decode(a)), list(r.dst.decode(b))] for a, b in zip(*np.nonzero(r.m))]
    payload = {
        "command": "diagram eval",
        "term": to_text(args.term) if not isinstance(args.term, str) else args.term,
        "type": ["".join(in_w), "".join(out_w)],
        "pairs": pairs,
    }
    lines = [f"{''.join(in_w) or 'I'} -> {''.join(out_w) or 'I'}, {len(pairs)} pairs"]
    lines += [f"  {tuple(a)} -> {tuple(b)}" for a, b in pairs]
    return payload, "\n".join(lines), 0


def cmd_diagram_normalize(args):
    desc = normalize(args.term, args.commutative)
    b = desc.bending
    nf = to_text(normal_form_term(desc))
    payload = {
        "command": "diagram normalize",
        "in": "".join(desc.in_word),
        "out": "".join(desc.out_word),
        "m": desc.m,
        "n": desc.n,
        "bending": {"input": b.input, "output": b.output, "perm": list(b.perm) if b.perm else None, "closed": b.closed},
        "normal_form": nf,
    }
    human = f"(m, n) = ({desc.m}, {desc.n})  bending in={b.input} out={b.output}"
    if b.perm:
        human += f" perm={list(b.perm)}"
    if b.closed:
        human += " closed"
    return payload, human + f"\n{nf}", 0


# -- plumbing ---------------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="frobrel", description="Frobenius structures in finite relations.")
    p.add_argument("--json", action="store_true", help="print a JSON report")
    sub = p.add_subparsers(dest="command", required=True)

    def with_file(sp):
        sp.add_argument("file")
        sp.add_argument("--name")
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)

    sp = sub.add_parser("check", help="run the checkers for one structure")
    with_file(sp)
    sp.add_argument("--require", help="comma-separated flags that decide the exit code")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("convert", help="convert between structure kinds")
    with_file(sp)
    sp.add_argument("--to", required=True, choices=["groupoid", "frob2", "frob3", "connector"])
    sp.add_argument("--unit", help="comma-separated unit elements for ternary to binary")
    sp.add_argument("--out", help="write the .frl result here instead of stdout")
    sp.add_argument("--out-name", help="declaration name of the result")
    sp.set_defaults(func=cmd_convert)

    for cmd, func, helptext in (
        ("split", cmd_split, "split a left idempotent structure through its classes"),
        ("envelope", cmd_envelope, "build the enveloping 2-structure"),
    ):
        sp = sub.add_parser(cmd, help=helptext)
        with_file(sp)
        sp.set_defaults(func=func)

    sp = sub.add_parser("enumerate", help="exhaustive enumeration on a small carrier")
    sp.add_argument("--kind", required=True, choices=["frob2", "groupoid", "frob3", "connector"])
    sp.add_argument("--size", required=True, type=int)
    sp.add_argument("--require", help="comma-separated frob3 flags (default: assoc,dagger_symmetric,normal)")
    sp.add_argument("--strategy")
    sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("search", help="counterexample searches")
    ssub = sp.add_subparsers(dest="what", required=True)
    cp = ssub.add_parser("cp-gap", help="a CP subset of a groupoid that is not a subgroupoid")
    with_file(cp)
    cp.add_argument("--max-codomain", type=int, default=10)
    cp.set_defaults(func=cmd_search)

    sp = sub.add_parser("diagram", help="string diagram terms")
    dsub = sp.add_subparsers(dest="what", required=True)
    ev = dsub.add_parser("eval", help="evaluate a term in a ternary structure")
    ev.add_argument("term")
    ev.add_argument("--structure", required=True)
    ev.add_argument("--file", help=".frl file holding the structure; builtins otherwise")
    ev.add_argument("--commutative", action="store_true")
    ev.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    ev.set_defaults(func=cmd_diagram_eval)
    nm = dsub.add_parser("normalize", help="spider normal form of a connected term")
    nm.add_argument("term")
    nm.add_argument("--commutative", action="store_true")
    nm.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    nm.set_defaults(func=cmd_diagram_normalize)
    return p


def _error_payload(kind, exc, **extra):
    err = {"type": kind, "message": str(exc), **extra}
    if isinstance(exc, frl.FrlError) and exc.line is not None:
        err.update(line=exc.line, col=exc.col)
    if isinstance(exc, DiagramSyntaxError):
        err.update(line=exc.line, col=exc.col)
    return {"schema": SCHEMA, "ok": False, "error": err}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload, human, code = args.func(args)
    except AxiomError as e:
        payload, human, code = _error_payload("axiom", e, flags=e.flags), f"error: {e}", 1
    except (InputError, frl.FrlError, DiagramSyntaxError, DiagramTypeError, NormalizationError, fr.ShapeError) as e:
        payload, human, code = _error_payload(type(e).__name__, e), f"error: {e}", 2
    else:
        payload = {"schema": SCHEMA, **payload}
        payload.setdefault("ok", code == 0)
    if args.json or args.command in ("enumerate", "search"):
        print(json.dumps(payload, indent=2))
    elif code and "error" in payload:
        print(human, file=sys.stderr)
    else:
        print(human)
    return code


if __name__ == "__main__":
    sys.exit(main())
