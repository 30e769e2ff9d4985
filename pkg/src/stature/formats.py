"""JSON documents for graphs and certificates, and Graphviz export."""

from __future__ import annotations

import json
from typing import Any

from .artin import build_W
from .closure import (
    ClosureCertificate,
    ComponentClass,
    ComponentRecord,
    SElement,
)
from .graph import ColoredGraph, EdgeColor, GraphError, WTag, validate_immersion

FORMAT_VERSION = 1


class ParseError(ValueError):
    pass


class InvariantViolation(ValueError):
    pass


def _id_out(v):
    return [_id_out(x) for x in v] if isinstance(v, tuple) else v


def _id_in(v):
    if isinstance(v, list):
        return tuple(_id_in(x) for x in v)
    if isinstance(v, (int, str)) and not isinstance(v, bool):
        return v
    raise ParseError(f"bad vertex id {v!r}")


def graph_to_dict(g: ColoredGraph, n: int) -> dict[str, Any]:
    vertices = []
    for v in g.vertices:
        item: dict[str, Any] = {"id": _id_out(v)}
        if g.wlabel is not None:
            t = g.wlabel[v]
            item["wlabel"] = {"base": t.base, "barred": t.barred}
        vertices.append(item)
    return {
        "format_version": FORMAT_VERSION,
        "n": n,
        "vertices": vertices,
        "edges": [{"src": _id_out(u), "dst": _id_out(v), "color": c.letter} for u, v, c in g.edges],
        "basepoint": None if g.basepoint is None else _id_out(g.basepoint),
    }


def graph_from_dict(doc: dict[str, Any]) -> tuple[ColoredGraph, int]:
    """Build and validate a graph; returns (graph, n)."""
    try:
        if doc["format_version"] != FORMAT_VERSION:
            raise ParseError(f"unsupported format_version {doc['format_version']!r}")
        n = doc["n"]
        if not isinstance(n, int) or isinstance(n, bool):
            raise ParseError("n must be an integer")
        ids = [_id_in(item["id"]) for item in doc["vertices"]]
        labelled = [("wlabel" in item) for item in doc["vertices"]]
        edges = []
        for e in doc["edges"]:
            try:
                color = EdgeColor.from_letter(e["color"])
            except (ValueError, AttributeError):
                raise ParseError(f"bad colour {e.get('color')!r}") from None
            if e["color"] not in ("x", "y", "d"):
                raise ParseError(f"bad colour {e['color']!r}")
            edges.append((_id_in(e["src"]), _id_in(e["dst"]), color))
        bp = doc.get("basepoint")
        bp = None if bp is None else _id_in(bp)
        wl = None
        if any(labelled):
            if not all(labelled):
                raise InvariantViolation("wlabel must be given on every vertex or none")
            wl = {}
            for v, item in zip(ids, doc["vertices"]):
                lab = item["wlabel"]
                base, barred = lab["base"], lab.get("barred", False)
                if not isinstance(base, int) or not isinstance(barred, bool):
                    raise ParseError(f"bad wlabel {lab!r}")
                wl[v] = WTag(base, barred)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed graph document: {exc}") from None
    try:
        g = ColoredGraph(tuple(ids), tuple(edges), bp, wl)
    except GraphError as exc:
        raise InvariantViolation(str(exc)) from None
    _check_invariants(g, n)
    return g, n


def _check_invariants(g: ColoredGraph, n: int) -> None:
    if not validate_immersion(g):
        raise InvariantViolation("graph is not immersed: repeated colour at a vertex")
    if g.wlabel is None:
        return
    if n < 4:
        raise InvariantViolation(f"W-labelled graph needs n >= 4, got {n}")
    wedges = set(build_W(n).edges)
    for v, t in g.wlabel.items():
        if not 1 <= t.base <= n:
            raise InvariantViolation(f"wlabel base {t.base} outside 1..{n}")
        if t.barred and t.base not in (1, n - 1):
            raise InvariantViolation(f"barred label on base {t.base}; only 1 and {n - 1} have twins")
    for u, v, c in g.edges:
        if (g.wlabel[u].base, g.wlabel[v].base, c) not in wedges:
            raise InvariantViolation(f"edge {_id_out(u)}->{_id_out(v)} ({c.letter}) has no image in W({n})")


def encode_graph(g: ColoredGraph, n: int) -> str:
    return json.dumps(graph_to_dict(g, n), indent=1, sort_keys=True)


def decode_graph(text: str) -> tuple[ColoredGraph, int]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("graph document must be an object")
    return graph_from_dict(doc)


# -- dot -----------------------------------------------------------------------

_DOT_COLORS = {EdgeColor.X: "red", EdgeColor.Y: "green", EdgeColor.D: "gold"}
_DOT_NAMES = {EdgeColor.X: "x", EdgeColor.Y: "y", EdgeColor.D: "δ"}


def to_dot(g: ColoredGraph, name: str = "G") -> str:
    num = {v: i for i, v in enumerate(g.vertices)}
    lines = [f"digraph {name} {{"]
    for v in g.vertices:
        if g.wlabel is not None:
            t = g.wlabel[v]
            # U+0305 combining overline marks the barred twin
            caption = f"{t.base}̅" if t.barred else str(t.base)
        else:
            caption = str(_id_out(v)).replace('"', "'")
        shape = ", shape=doublecircle" if v == g.basepoint else ""
        lines.append(f'  v{num[v]} [label="{caption}"{shape}];')
    for u, v, c in g.edges:
        lines.append(f'  v{num[u]} -> v{num[v]} [color={_DOT_COLORS[c]}, label="{_DOT_NAMES[c]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- certificates ------------------------------------------------------------------


def _cls_to_dict(cls: ComponentClass) -> dict:
    out: dict[str, Any] = {"verdict": cls.verdict}
    if cls.target is not None:
        out["target"] = cls.target
    if cls.witness is not None:
        out["embedding"] = [[_id_out(a), _id_out(b)] for a, b in cls.witness.items()]
    return out


def _cls_from_dict(d: dict) -> ComponentClass:
    witness = None
    if "embedding" in d:
        witness = {_id_in(a): _id_in(b) for a, b in d["embedding"]}
    return ComponentClass(d["verdict"], d.get("target"), witness)


def certificate_to_dict(cert: ClosureCertificate) -> dict[str, Any]:
    n = cert.n
    return {
        "format_version": FORMAT_VERSION,
        "kind": "closure-certificate",
        "n": n,
        "rounds": cert.rounds,
        "elements": [
            {"name": e.name, "origin": e.origin, "graph": graph_to_dict(e.graph, n)} for e in cert.elements
        ],
        "maximal": list(cert.maximal),
        "pair_ledger": [
            {
                "left": a,
                "right": b,
                "components": [
                    {"graph": graph_to_dict(r.graph, n), "tree": r.tree, **_cls_to_dict(r.cls)} for r in recs
                ],
            }
            for (a, b), recs in cert.pair_ledger.items()
        ],
        "beta_ledger": [
            {"name": name, "image": graph_to_dict(img, n), **_cls_to_dict(cls)}
            for name, (img, cls) in cert.beta_ledger.items()
        ],
        "q_bucket": [
            {"graph": graph_to_dict(k, n), "beta": graph_to_dict(bk, n)} for k, bk in cert.q_bucket
        ],
    }


def certificate_from_dict(doc: dict[str, Any]) -> ClosureCertificate:
    try:
        if doc.get("kind") != "closure-certificate":
            raise ParseError("not a closure certificate")
        n = doc["n"]

        def g(d):
            graph, gn = graph_from_dict(d)
            if gn != n:
                raise InvariantViolation("graph n differs from certificate n")
            return graph

        elements = [SElement(e["name"], g(e["graph"]), e["origin"]) for e in doc["elements"]]
        ledger = {}
        for item in doc["pair_ledger"]:
            ledger[(item["left"], item["right"])] = [
                ComponentRecord(g(c["graph"]), _cls_from_dict(c), c.get("tree", False)) for c in item["components"]
            ]
        beta_ledger = {b["name"]: (g(b["image"]), _cls_from_dict(b)) for b in doc["beta_ledger"]}
        q_bucket = [(g(q["graph"]), g(q["beta"])) for q in doc["q_bucket"]]
        return ClosureCertificate(n, elements, list(doc["maximal"]), ledger, beta_ledger, q_bucket, doc.get("rounds", 0))
    except (KeyError, TypeError) as exc:
        raise ParseError(f"malformed certificate: {exc}") from None


def encode_certificate(cert: ClosureCertificate) -> str:
    return json.dumps(certificate_to_dict(cert), sort_keys=True, separators=(",", ":"))


def decode_certificate(text: str) -> ClosureCertificate:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("certificate must be an object")
    return certificate_from_dict(doc)
