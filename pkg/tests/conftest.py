from __future__ import annotations

import random
from functools import lru_cache

import pytest
from hypothesis import strategies as st

from stature.artin import build_red_ngon, build_W, build_X1, build_X2
from stature.closure import closure
from stature.graph import COLORS, ColoredGraph, EdgeColor, WTag, canonical_form


@lru_cache(maxsize=None)
def cert(n: int):
    return closure(n)


@lru_cache(maxsize=None)
def corpus(n: int) -> tuple[ColoredGraph, ...]:
    """Every graph met while closing S for this n: builders, S, products, beta images, q-bucket."""
    c = cert(n)
    out = [build_W(n).with_basepoint(None), build_red_ngon(n)]
    if n >= 5:
        out += [build_X1(n), build_X2(n)]
    out += [e.graph for e in c.elements]
    for recs in c.pair_ledger.values():
        out += [r.graph for r in recs if not r.tree]
    out += [img for img, _ in c.beta_ledger.values()]
    for k, bk in c.q_bucket:
        out += [k, bk]
    unique = {}
    for g in out:
        unique.setdefault(canonical_form(g, True), g)
    return tuple(unique.values())


@lru_cache(maxsize=None)
def small_corpus(n: int) -> tuple[ColoredGraph, ...]:
    """Corpus graphs with at most 12 vertices, for quadratic-size checks."""
    return tuple(g for g in corpus(n) if len(g) <= 12)


def edge_subgraph(g: ColoredGraph, rng: random.Random, keep: float = 0.7) -> ColoredGraph:
    edges = [e for e in g.edges if rng.random() < keep] or list(g.edges[:1])
    vs = {u for u, _, _ in edges} | {v for _, v, _ in edges}
    verts = tuple(v for v in g.vertices if v in vs)
    wl = None if g.wlabel is None else {v: g.wlabel[v] for v in verts}
    return ColoredGraph(verts, tuple(edges), None, wl)


@st.composite
def immersed_graphs(draw, max_vertices: int = 7, labelled_n: int | None = None):
    """Random immersed graph: each colour is a random partial injection on the vertices.

    With ``labelled_n`` the graph instead maps into W(n): vertices are drawn with
    W-labels and only edges present in W(n) between those labels are allowed.
    """
    k = draw(st.integers(1, max_vertices))
    verts = tuple(range(k))
    if labelled_n is not None:
        w = build_W(labelled_n)
        tags = [draw(st.integers(1, labelled_n)) for _ in verts]
        wedges = set(w.edges)
        edges = []
        used_out, used_in = set(), set()
        for u in verts:
            for v in verts:
                for c in COLORS:
                    if (tags[u], tags[v], c) not in wedges:
                        continue
                    if (u, c) in used_out or (v, c) in used_in:
                        continue
                    if draw(st.booleans()):
                        edges.append((u, v, c))
                        used_out.add((u, c))
                        used_in.add((v, c))
        return ColoredGraph(verts, tuple(edges), None, {v: WTag(tags[v]) for v in verts})
    edges = []
    for c in COLORS:
        perm = draw(st.permutations(verts))
        mask = draw(st.lists(st.booleans(), min_size=k, max_size=k))
        edges += [(u, perm[u], c) for u in verts if mask[u]]
    return ColoredGraph(verts, tuple(edges))


letters = st.tuples(st.sampled_from(list(EdgeColor)), st.sampled_from([1, -1]))
words = st.lists(letters, min_size=0, max_size=8).map(tuple)


@pytest.fixture(scope="session")
def cert4():
    return cert(4)


@pytest.fixture(scope="session")
def cert8():
    return cert(8)

