"""Command-line entry point: ``stature <command> ...``.

Exit codes: 0 success, 1 assertion or diff failure, 2 parse or invariant
error, 3 undecided q-verdict.  Failures print a JSON error object on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import artin, closure as cl
from .graph import GraphError, connected_components, describe, fiber_product, project_second
from .formats import (
    InvariantViolation,
    ParseError,
    decode_certificate,
    decode_graph,
    encode_certificate,
    graph_to_dict,
)

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_UNKNOWN = 0, 1, 2, 3


class CommandFailed(Exception):
    def __init__(self, message: str, code: int = EXIT_FAIL, detail=None):
        super().__init__(message)
        self.code = code
        self.detail = detail


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1, ensure_ascii=False)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _build(name: str, n: int):
    if name == "W":
        return artin.build_W(n)
    if name == "ngon":
        return artin.build_red_ngon(n)
    if name == "X1":
        return artin.build_X1(n)
    if name == "X2":
        return artin.build_X2(n)
    if n != 4:
        raise artin.BadParameter(f"{name} is defined for n = 4")
    cert = cl.closure(4)
    return cert.element(name).graph


def cmd_build(args) -> tuple[object, int]:
    g = _build(args.graph, args.n)
    for _ in range(args.beta):
        g = artin.beta(g, args.n)
    return graph_to_dict(g, args.n), EXIT_OK


def cmd_fiber(args):
    left, n1 = decode_graph(_read(args.left))
    right, n2 = decode_graph(_read(args.right))
    if n1 != n2:
        raise InvariantViolation(f"operands disagree on n ({n1} vs {n2})")
    comps = connected_components(fiber_product(left, right))
    out = []
    for c in comps:
        if args.project:
            c = project_second(c).renumbered()
        out.append({"census": describe(c), "graph": graph_to_dict(c, n1)})
    summary = sorted(len(c) for c in comps)
    return {"n": n1, "sizes": summary, "components": out}, EXIT_OK


def cmd_qcheck(args):
    g, n = decode_graph(_read(args.file))
    fillable = artin.q_fillable(g, n)
    verdicts = []
    for c in connected_components(g):
        v = artin.q_contractible(c, n, args.limit) if c.edges else True
        verdicts.append("unknown" if v is None else v)
    if "unknown" in verdicts:
        overall = "unknown"
    else:
        overall = all(verdicts)
    report = {
        "fillable": fillable,
        "contractible": overall,
        "components": verdicts,
        "cells": artin.q_complex(g, n).census(),
    }
    return report, EXIT_UNKNOWN if overall == "unknown" else EXIT_OK


def cmd_closure(args):
    cert = cl.closure(args.n, limit=args.limit, max_rounds=args.max_rounds)
    summary = {
        "n": cert.n,
        "rounds": cert.rounds,
        "elements": [e.name for e in cert.elements],
        "maximal": cert.maximal,
        "q_bucket": len(cert.q_bucket),
    }
    if args.out:
        Path(args.out).write_text(encode_certificate(cert))
        return summary, EXIT_OK
    return None, EXIT_OK, encode_certificate(cert)


def cmd_table(args):
    cert = decode_certificate(_read(args.cert))
    rows = cl.compare_table(cl.build_table(cert, args.limit))
    ok = all(r["match"] for r in rows)
    return {"rows": rows, "match": ok}, EXIT_OK if ok else EXIT_FAIL


def cmd_verify(args):
    cert = decode_certificate(_read(args.cert))
    problems = cl.verify_certificate(cert, args.limit)
    return {"n": cert.n, "maximal": cert.maximal, "problems": problems, "ok": not problems}, (
        EXIT_FAIL if problems else EXIT_OK
    )


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stature")
    sub = p.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="emit a named graph as JSON")
    b.add_argument("--graph", required=True, choices=["W", "X1", "X2", "ngon", "Y1", "Y2", "Y3"])
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--beta", type=int, default=0, metavar="K", help="apply beta K times")
    b.set_defaults(func=cmd_build)

    f = sub.add_parser("fiber", help="components of a fibre product")
    f.add_argument("--left", required=True)
    f.add_argument("--right", required=True)
    f.add_argument("--project", action="store_true", help="project components to the right factor")
    f.set_defaults(func=cmd_fiber)

    q = sub.add_parser("qcheck", help="q-fillable and q-contractible verdicts")
    q.add_argument("file")
    q.add_argument("--limit", type=int, default=100_000)
    q.set_defaults(func=cmd_qcheck)

    c = sub.add_parser("closure", help="build S and its certificate")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--limit", type=int, default=100_000)
    c.add_argument("--max-rounds", type=int, default=10)
    c.add_argument("--out")
    c.set_defaults(func=cmd_closure)

    t = sub.add_parser("table", help="n = 4 component table against the reference")
    t.add_argument("--cert", required=True)
    t.add_argument("--limit", type=int, default=100_000)
    t.set_defaults(func=cmd_table)

    v = sub.add_parser("verify", help="recheck a certificate without search")
    v.add_argument("--cert", required=True)
    v.add_argument("--limit", type=int, default=100_000)
    v.set_defaults(func=cmd_verify)
    return p


def _error(kind: str, message: str, code: int, detail=None) -> int:
    obj = {"error": kind, "message": message, "exit_code": code}
    if detail is not None:
        obj["detail"] = detail
    print(json.dumps(obj, sort_keys=True), file=sys.stderr)
    return code


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        result = args.func(args)
    except (ParseError, InvariantViolation, GraphError, artin.BadParameter) as exc:
        return _error(type(exc).__name__, str(exc), EXIT_PARSE)
    except cl.UnknownVerdict as exc:
        return _error("UnknownVerdict", str(exc), EXIT_UNKNOWN)
    except (cl.NonTermination, AssertionError) as exc:
        return _error(type(exc).__name__, str(exc), EXIT_FAIL)
    except ValueError as exc:
        return _error("ValueError", str(exc), EXIT_PARSE)
    if len(result) == 3:
        _, code, text = result
        sys.stdout.write(text + "\n")
        return code
    obj, code = result
    sys.stdout.write(_dump(obj) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
