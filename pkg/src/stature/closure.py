"""Iterative construction of the finite set S and its certificate.

Starting from S = {W}, every ordered fibre product of maximal elements is
split into components, each projected to its second factor and classified:
it either embeds into an element of S, has a simply connected filled
complex (q-contractible), or is adopted as a new element.  Beta images are
adopted the same way.  The loop stops when a round adopts nothing.
"""

from __future__ import annotations

import logging
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import networkx as nx

from .artin import beta, build_W, build_X1, build_X2, q_contractible, q_fillable
from .graph import (
    ColoredGraph,
    canonical_form,
    check_embedding,
    connected_components,
    disjoint_union,
    embeds_into,
    fiber_product,
    project_second,
    prune_to_core,
)

log = logging.getLogger(__name__)

EMBEDS = "embeds-into"
NEW = "new"
QCONTRACTIBLE = "q-contractible"
UNKNOWN = "unknown"


class UnknownVerdict(RuntimeError):
    pass


class NonTermination(RuntimeError):
    pass


@dataclass(frozen=True)
class SElement:
    name: str
    graph: ColoredGraph
    origin: str


@dataclass(frozen=True)
class ComponentClass:
    verdict: str
    target: str | None = None
    witness: dict | None = None


@dataclass
class ComponentRecord:
    graph: ColoredGraph  # projected core, or the raw tree when ``tree``
    cls: ComponentClass
    tree: bool = False


@dataclass
class ClosureCertificate:
    n: int
    elements: list[SElement]
    maximal: list[str]
    pair_ledger: dict[tuple[str, str], list[ComponentRecord]]
    beta_ledger: dict[str, tuple[ColoredGraph, ComponentClass]]
    q_bucket: list[tuple[ColoredGraph, ColoredGraph]]
    rounds: int = 0

    def element(self, name: str) -> SElement:
        return next(e for e in self.elements if e.name == name)

    @property
    def maximal_elements(self) -> list[SElement]:
        return [self.element(m) for m in self.maximal]


@dataclass
class ClosureState:
    n: int
    elements: list[SElement] = field(default_factory=list)

    def names(self) -> list[str]:
        return [e.name for e in self.elements]

    def maximal(self) -> list[SElement]:
        """Elements not embedded in another one (the earlier of two isomorphic ones wins)."""
        out = []
        for i, e in enumerate(self.elements):
            dominated = False
            for j, f in enumerate(self.elements):
                if i == j or embeds_into(e.graph, f.graph, True) is None:
                    continue
                if j < i or embeds_into(f.graph, e.graph, True) is None:
                    dominated = True
                    break
            if not dominated:
                out.append(e)
        return out


def product_components(h: ColoredGraph, k: ColoredGraph) -> list[tuple[ColoredGraph, bool]]:
    """Components of h*k with at least one edge, projected to k's labels.

    Returns (graph, is_tree) pairs; cores for non-trees, the raw tree otherwise.
    Isolated vertices are dropped.
    """
    out = []
    for comp in connected_components(fiber_product(h, k)):
        if not comp.edges:
            continue
        core = prune_to_core(comp)
        if core.vertices:
            out.append((project_second(core).renumbered(), False))
        else:
            out.append((project_second(comp).renumbered(), True))
    return out


def classify_component(
    c: ColoredGraph, elements: Sequence[SElement], n: int, limit: int = 100_000, tree: bool = False
) -> ComponentClass:
    if tree:
        return ComponentClass(QCONTRACTIBLE)
    for e in elements:
        phi = embeds_into(c, e.graph, respect_wlabels=True)
        if phi is not None:
            return ComponentClass(EMBEDS, e.name, phi)
    verdict = q_contractible(c, n, limit)
    if verdict is None:
        return ComponentClass(UNKNOWN)
    return ComponentClass(QCONTRACTIBLE if verdict else NEW)


def _name_new(state: ClosureState, g: ColoredGraph, counter: list[int]) -> str:
    n = state.n
    if n >= 5:
        for name, builder in (("X1", build_X1), ("X2", build_X2)):
            if name not in state.names() and canonical_form(g, True) == canonical_form(builder(n), True):
                return name
        prefix = "Q"
    else:
        prefix = "Y"
    counter[0] += 1
    return f"{prefix}{counter[0]}"


def closure(
    n: int,
    limit: int = 100_000,
    max_rounds: int = 10,
    shuffle_seed: int | None = None,
) -> ClosureCertificate:
    """Run the adoption loop for A(2,3,2n) and return a certificate.

    ``shuffle_seed`` permutes the evaluation order of pairs within a round;
    adoption is merged in a canonical order, so the result does not depend on it.
    """
    w = build_W(n).with_basepoint(None)
    state = ClosureState(n, [SElement("W", w, "builder")])
    counter = [0]
    done_pairs: set[tuple[str, str]] = set()
    rounds = 0
    for rounds in range(1, max_rounds + 1):
        adopted = False
        maximal = state.maximal()
        pairs = [(a.name, b.name) for a in maximal for b in maximal if (a.name, b.name) not in done_pairs]
        order = list(pairs)
        if shuffle_seed is not None:
            random.Random(shuffle_seed + rounds).shuffle(order)
        results = {}
        for a, b in order:
            ga = next(e.graph for e in state.elements if e.name == a)
            gb = next(e.graph for e in state.elements if e.name == b)
            results[(a, b)] = product_components(ga, gb)
        for a, b in pairs:
            done_pairs.add((a, b))
            for idx, (c, tree) in enumerate(results[(a, b)]):
                cls = classify_component(c, state.elements, n, limit, tree)
                if cls.verdict == UNKNOWN:
                    raise UnknownVerdict(f"q-verdict undecided for a component of {a}*{b}")
                if cls.verdict == NEW:
                    name = _name_new(state, c, counter)
                    state.elements.append(SElement(name, c, f"component-of({a},{b},{idx})"))
                    log.info("adopted %s from %s*%s (%d vertices)", name, a, b, len(c))
                    adopted = True
        for e in list(state.elements):
            img = beta(e.graph, n)
            if any(embeds_into(img, f.graph, True) is not None for f in state.elements):
                continue
            name = "b" + e.name
            state.elements.append(SElement(name, img, f"beta-of({e.name})"))
            log.info("adopted %s", name)
            adopted = True
        if not adopted:
            break
    else:
        raise NonTermination(f"no fixpoint after {max_rounds} rounds")
    return _certify(state, limit, rounds)


def _certify(state: ClosureState, limit: int, rounds: int) -> ClosureCertificate:
    n = state.n
    maximal = state.maximal()
    ledger: dict[tuple[str, str], list[ComponentRecord]] = {}
    qkeys: dict[tuple, ColoredGraph] = {}
    for a in maximal:
        for b in maximal:
            recs = []
            for c, tree in product_components(a.graph, b.graph):
                cls = classify_component(c, maximal, n, limit, tree)
                if cls.verdict == UNKNOWN:
                    raise UnknownVerdict(f"q-verdict undecided for a component of {a.name}*{b.name}")
                if cls.verdict == NEW:
                    raise AssertionError(f"closure is not closed: new component in {a.name}*{b.name}")
                if cls.verdict == QCONTRACTIBLE and not tree:
                    qkeys.setdefault(canonical_form(c, True), c)
                recs.append(ComponentRecord(c, cls, tree))
            ledger[(a.name, b.name)] = recs
    beta_ledger = {}
    for e in maximal:
        img = beta(e.graph, n)
        cls = classify_component(img, maximal, n, limit)
        if cls.verdict != EMBEDS:
            raise AssertionError(f"beta({e.name}) is not covered by S")
        beta_ledger[e.name] = (img, cls)
    q_bucket = []
    for key in sorted(qkeys):
        k = qkeys[key]
        bk = beta(k, n)
        if q_contractible(bk, n, limit) is not True:
            raise AssertionError("beta of a q-contractible component is not q-contractible")
        q_bucket.append((k, bk))
    return ClosureCertificate(
        n, list(state.elements), [e.name for e in maximal], ledger, beta_ledger, q_bucket, rounds
    )


# -- the W*W decomposition --------------------------------------------------------


@dataclass
class WSquareReport:
    n: int
    w_copies: int
    red_cycles: int
    big: list[ColoredGraph]
    other: list[ColoredGraph]

    @property
    def ok(self) -> bool:
        return (
            self.w_copies == 1
            and self.red_cycles == self.n - 5
            and len(self.big) == 2
            and not self.other
            and canonical_form(self.big[0]) == canonical_form(self.big[1])
        )

    def census(self) -> dict:
        return {
            "W": self.w_copies,
            "red_ngons": self.red_cycles,
            "2n_components": [len(g) for g in self.big],
            "other": [len(g) for g in self.other],
        }


def verify_w_square(n: int) -> WSquareReport:
    if n < 5:
        raise ValueError("the W*W decomposition holds for n >= 5")
    w = build_W(n)
    wkey = canonical_form(w, True)
    report = WSquareReport(n, 0, 0, [], [])
    for comp in connected_components(fiber_product(w, w)):
        c = project_second(comp).renumbered()
        counts = c.color_counts()
        if canonical_form(c, True) == wkey:
            report.w_copies += 1
        elif len(c) == n and counts == (n, 0, 0):
            report.red_cycles += 1
        elif len(c) == 2 * n:
            report.big.append(c)
        else:
            report.other.append(c)
    if not report.ok:
        raise AssertionError(f"unexpected W*W decomposition for n={n}: {report.census()}")
    return report


# -- the n = 4 table -----------------------------------------------------------

TABLE_COLUMNS = ("W", "Y1", "bY1", "Y2", "Y3", "bY3", "q")
TABLE_ROWS = ("W", "Y1", "bY1", "Y4")

# component counts per ordered pair for A(2,3,8) (reference values)
REFERENCE_TABLE: dict[tuple[str, str], tuple[int, ...]] = {
    ("W", "W"): (1, 1, 0, 0, 0, 0, 0),
    ("W", "Y1"): (0, 2, 0, 0, 0, 0, 2),
    ("W", "bY1"): (0, 2, 1, 1, 0, 0, 0),
    ("W", "Y4"): (0, 0, 0, 2, 2, 2, 12),
    ("Y1", "W"): (0, 2, 0, 0, 0, 0, 2),
    ("Y1", "Y1"): (0, 2, 0, 0, 0, 0, 14),
    ("Y1", "bY1"): (0, 4, 0, 2, 0, 0, 6),
    ("Y1", "Y4"): (0, 0, 0, 2, 2, 2, 72),
    ("bY1", "W"): (0, 2, 1, 0, 1, 0, 0),
    ("bY1", "Y1"): (0, 4, 0, 1, 1, 0, 6),
    ("bY1", "bY1"): (0, 2, 1, 1, 0, 0, 8),
    ("bY1", "Y4"): (0, 0, 0, 3, 1, 1, 68),
    ("Y4", "W"): (0, 0, 0, 2, 3, 1, 12),
    ("Y4", "Y1"): (0, 0, 0, 2, 3, 1, 72),
    ("Y4", "bY1"): (0, 0, 0, 4, 0, 1, 68),
    ("Y4", "Y4"): (0, 0, 0, 6, 3, 4, 512),
}


@dataclass
class TableRow:
    pair: tuple[str, str]
    # admissible column sets -> number of components with that set
    raw: Counter
    counts: tuple[int, ...] | None = None  # a column assignment, when one was requested

    @property
    def total(self) -> int:
        return sum(self.raw.values())

    @property
    def q_count(self) -> int:
        return sum(v for cols, v in self.raw.items() if "q" in cols)

    def feasible(self, target: Sequence[int]) -> dict | None:
        """A column assignment realising ``target``, or None."""
        return assign_columns(self.raw, target)


def assign_columns(raw: Counter, target: Sequence[int]) -> dict | None:
    """Transportation check: components (grouped by admissible columns) -> column counts."""
    if sum(raw.values()) != sum(target):
        return None
    g = nx.DiGraph()
    for i, (cols, k) in enumerate(sorted(raw.items(), key=lambda t: sorted(t[0]))):
        g.add_edge("src", ("set", i), capacity=k)
        for col in cols:
            g.add_edge(("set", i), ("col", col), capacity=k)
    for col, t in zip(TABLE_COLUMNS, target):
        g.add_edge(("col", col), "sink", capacity=t)
    if "src" not in g or "sink" not in g:
        return {} if sum(target) == 0 else None
    value, flow = nx.maximum_flow(g, "src", "sink")
    if value != sum(target):
        return None
    sets = sorted(raw.items(), key=lambda t: sorted(t[0]))
    out = {}
    for i, (cols, _) in enumerate(sets):
        out[tuple(sorted(cols))] = {c[1]: f for c, f in flow[("set", i)].items() if f}
    return out


def table_parts(cert: ClosureCertificate) -> dict[str, list[ColoredGraph]]:
    if cert.n != 4:
        raise ValueError("the component table is defined for n = 4")
    g = {e.name: e.graph for e in cert.elements}
    missing = [c for c in TABLE_COLUMNS[:-1] if c not in g]
    if missing:
        raise ValueError(f"certificate lacks elements {missing}")
    return {"W": [g["W"]], "Y1": [g["Y1"]], "bY1": [g["bY1"]], "Y4": [g["Y2"], g["Y3"], g["bY3"]]}


def table_row(left: Sequence[ColoredGraph], right: Sequence[ColoredGraph], columns: dict[str, ColoredGraph], n: int, limit: int = 100_000) -> Counter:
    raw: Counter = Counter()
    for h in left:
        for k in right:
            for c, tree in product_components(h, k):
                if tree:
                    raw[frozenset({"q"})] += 1
                    continue
                cols = {name for name, g in columns.items() if embeds_into(c, g, True) is not None}
                verdict = q_contractible(c, n, limit)
                if verdict is None:
                    raise UnknownVerdict("q-verdict undecided while building the table")
                if verdict:
                    cols.add("q")
                raw[frozenset(cols)] += 1
    return raw


def build_table(cert: ClosureCertificate, limit: int = 100_000) -> list[TableRow]:
    parts = table_parts(cert)
    g = {e.name: e.graph for e in cert.elements}
    columns = {c: g[c] for c in TABLE_COLUMNS[:-1]}
    rows = []
    for a in TABLE_ROWS:
        for b in TABLE_ROWS:
            raw = table_row(parts[a], parts[b], columns, cert.n, limit)
            row = TableRow((a, b), raw)
            ref = REFERENCE_TABLE[(a, b)]
            if row.feasible(ref) is not None:
                row.counts = ref
            else:
                row.counts = _some_assignment(raw)
            rows.append(row)
    return rows


def _some_assignment(raw: Counter) -> tuple[int, ...]:
    """Greedy attribution: q first, then the earliest admissible column."""
    counts = dict.fromkeys(TABLE_COLUMNS, 0)
    for cols, k in raw.items():
        pick = "q" if "q" in cols else min(cols, key=TABLE_COLUMNS.index) if cols else None
        if pick is not None:
            counts[pick] += k
    return tuple(counts[c] for c in TABLE_COLUMNS)


def compare_table(rows: Sequence[TableRow]) -> list[dict]:
    """Per row: does some attribution reproduce the reference counts?"""
    out = []
    for row in rows:
        ref = REFERENCE_TABLE[row.pair]
        out.append(
            {
                "pair": list(row.pair),
                "reference": list(ref),
                "counts": list(row.counts or ()),
                "total": row.total,
                "q_admissible": row.q_count,
                "match": row.feasible(ref) is not None,
            }
        )
    return out


# -- independent re-verification --------------------------------------------------


def verify_certificate(cert: ClosureCertificate, limit: int = 100_000) -> list[str]:
    """Recheck a certificate from its stored graphs; returns a list of problems.

    Embeddings are checked edge by edge and q-verdicts are recomputed; no
    adoption search is run.
    """
    problems = []
    n = cert.n
    elements = {e.name: e for e in cert.elements}
    for name in cert.maximal:
        g = elements[name].graph
        if not q_fillable(g, n):
            problems.append(f"{name} is not q-fillable")
    for a in cert.maximal:
        for b in cert.maximal:
            recs = cert.pair_ledger.get((a, b))
            if recs is None:
                problems.append(f"pair {a}*{b} missing from ledger")
                continue
            expected = Counter(
                (canonical_form(c, True), t) for c, t in product_components(elements[a].graph, elements[b].graph)
            )
            recorded = Counter((canonical_form(r.graph, True), r.tree) for r in recs)
            if expected != recorded:
                problems.append(f"pair {a}*{b}: recorded components differ from the fibre product")
            for r in recs:
                problems.extend(f"pair {a}*{b}: {p}" for p in _check_record(r.graph, r.cls, elements, n, limit, r.tree))
    for name, (img, cls) in cert.beta_ledger.items():
        fresh = beta(elements[name].graph, n)
        if canonical_form(fresh, True) != canonical_form(img, True):
            problems.append(f"beta({name}) does not match its recomputation")
        if cls.verdict != EMBEDS:
            problems.append(f"beta({name}) is not embedded in S")
        problems.extend(f"beta({name}): {p}" for p in _check_record(img, cls, elements, n, limit))
        back = beta(img, n)
        if canonical_form(back, True) != canonical_form(elements[name].graph, True):
            problems.append(f"beta(beta({name})) is not {name}")
    for k, bk in cert.q_bucket:
        if canonical_form(beta(k, n), True) != canonical_form(bk, True):
            problems.append("q-bucket beta partner does not match")
        if q_contractible(bk, n, limit) is not True:
            problems.append("q-bucket beta partner is not q-contractible")
    return problems


def _check_record(g, cls: ComponentClass, elements, n, limit, tree=False) -> list[str]:
    if cls.verdict == EMBEDS:
        target = elements.get(cls.target)
        if target is None:
            return [f"unknown target {cls.target}"]
        if cls.witness is None or not check_embedding(g, target.graph, cls.witness, True):
            return [f"embedding into {cls.target} does not check"]
        return []
    if cls.verdict == QCONTRACTIBLE:
        if tree:
            return [] if len(g.edges) == len(g.vertices) - 1 else ["tree record has a cycle"]
        return [] if q_contractible(g, n, limit) is True else ["q-contractible verdict does not check"]
    return [f"verdict {cls.verdict} is not admissible in a closed certificate"]


def y4(cert: ClosureCertificate) -> ColoredGraph:
    parts = table_parts(cert)["Y4"]
    return disjoint_union(parts)
