"""Edge-coloured graphs immersed in the three-petal bouquet.

Every graph here is a finite directed multigraph whose edges carry one of
three colours (``x`` red, ``y`` green, ``d`` yellow).  A graph is *immersed*
when each vertex has at most one outgoing and at most one incoming edge of
each colour; such graphs are the cores of covers of the bouquet and are
what every other module manipulates.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Any, Hashable, Iterable, Mapping, Sequence

Vertex = Hashable


class GraphError(Exception):
    pass


class NotImmersed(GraphError):
    pass


class Disconnected(GraphError):
    pass


class MissingLabel(GraphError):
    pass


class EdgeColor(enum.IntEnum):
    X = 0
    Y = 1
    D = 2

    @property
    def letter(self) -> str:
        return "xyd"[self]

    @classmethod
    def from_letter(cls, letter: str) -> "EdgeColor":
        try:
            return cls("xyd".index(letter.lower()))
        except ValueError:
            raise ValueError(f"unknown colour letter {letter!r}") from None


COLORS = tuple(EdgeColor)


@dataclass(frozen=True, order=True)
class WTag:
    """Label of a vertex by the vertex of W it maps to."""

    base: int
    barred: bool = False

    def __str__(self) -> str:
        return f"{self.base}" + ("'" if self.barred else "")


Letter = tuple[EdgeColor, int]
Word = tuple[Letter, ...]


def word(text: str) -> Word:
    """Parse a word: lowercase letters are generators, uppercase inverses.

    ``word("yyDY")`` is y y d^-1 y^-1.  Whitespace is ignored.
    """
    letters = []
    for ch in text:
        if ch.isspace():
            continue
        sign = -1 if ch.isupper() else 1
        letters.append((EdgeColor.from_letter(ch), sign))
    return tuple(letters)


def word_str(w: Sequence[Letter]) -> str:
    return "".join(c.letter if s > 0 else c.letter.upper() for c, s in w)


def inverse_word(w: Sequence[Letter]) -> Word:
    return tuple((c, -s) for c, s in reversed(w))


Edge = tuple[Vertex, Vertex, EdgeColor]


@dataclass(frozen=True)
class ColoredGraph:
    vertices: tuple[Vertex, ...]
    edges: tuple[Edge, ...]
    basepoint: Vertex | None = None
    wlabel: Mapping[Vertex, WTag] | None = None
    # (left tag, right tag) per vertex of a fibre product; consumed by project_second
    pair_tags: Mapping[Vertex, tuple[WTag | None, WTag | None]] | None = field(
        default=None, compare=False, repr=False
    )

    def __post_init__(self) -> None:
        vs = set(self.vertices)
        if len(vs) != len(self.vertices):
            raise GraphError("duplicate vertex ids")
        for u, v, c in self.edges:
            if u not in vs or v not in vs:
                raise GraphError(f"edge {(u, v, c)} has an undeclared endpoint")
            if not isinstance(c, EdgeColor):
                raise GraphError(f"bad colour {c!r}")
        if self.basepoint is not None and self.basepoint not in vs:
            raise GraphError("basepoint is not a vertex")
        if self.wlabel is not None:
            if set(self.wlabel) != vs:
                raise GraphError("wlabel must be total on vertices")

    # -- adjacency ---------------------------------------------------------

    @cached_property
    def out_map(self) -> tuple[dict[Vertex, Vertex], ...]:
        """Per colour, vertex -> target.  Only meaningful when immersed."""
        maps: tuple[dict, ...] = ({}, {}, {})
        for u, v, c in self.edges:
            maps[c][u] = v
        return maps

    @cached_property
    def in_map(self) -> tuple[dict[Vertex, Vertex], ...]:
        maps: tuple[dict, ...] = ({}, {}, {})
        for u, v, c in self.edges:
            maps[c][v] = u
        return maps

    @cached_property
    def index(self) -> dict[Vertex, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def degree(self, v: Vertex) -> int:
        return sum(1 for e in self.edges if e[0] == v) + sum(1 for e in self.edges if e[1] == v)

    def color_counts(self) -> tuple[int, int, int]:
        counts = [0, 0, 0]
        for _, _, c in self.edges:
            counts[c] += 1
        return tuple(counts)  # type: ignore[return-value]

    def step(self, v: Vertex, letter: Letter) -> Vertex | None:
        c, s = letter
        return (self.out_map if s > 0 else self.in_map)[c].get(v)

    def trace(self, v: Vertex, w: Sequence[Letter]) -> list[Vertex] | None:
        """Vertices visited reading ``w`` from ``v``; None if the path dies."""
        path = [v]
        for letter in w:
            v = self.step(v, letter)
            if v is None:
                return None
            path.append(v)
        return path

    def tag(self, v: Vertex) -> WTag | None:
        return None if self.wlabel is None else self.wlabel[v]

    # -- small constructors ------------------------------------------------

    def with_basepoint(self, bp: Vertex | None) -> "ColoredGraph":
        return ColoredGraph(self.vertices, self.edges, bp, self.wlabel, self.pair_tags)

    def with_wlabel(self, wlabel: Mapping[Vertex, WTag] | None) -> "ColoredGraph":
        return ColoredGraph(self.vertices, self.edges, self.basepoint, wlabel, self.pair_tags)

    def relabel(self, mapping: Mapping[Vertex, Vertex]) -> "ColoredGraph":
        """Rename vertices through an injective ``mapping``."""
        return ColoredGraph(
            tuple(mapping[v] for v in self.vertices),
            tuple((mapping[u], mapping[v], c) for u, v, c in self.edges),
            None if self.basepoint is None else mapping[self.basepoint],
            None if self.wlabel is None else {mapping[v]: t for v, t in self.wlabel.items()},
            None if self.pair_tags is None else {mapping[v]: t for v, t in self.pair_tags.items()},
        )

    def renumbered(self, start: int = 0) -> "ColoredGraph":
        """Replace vertex ids by consecutive integers in a canonical order."""
        order = canonical_order(self) if self.vertices else []
        return self.relabel({v: start + i for i, v in enumerate(order)})

    def induced(self, keep: Iterable[Vertex]) -> "ColoredGraph":
        keep = set(keep)
        vertices = tuple(v for v in self.vertices if v in keep)
        edges = tuple(e for e in self.edges if e[0] in keep and e[1] in keep)
        bp = self.basepoint if self.basepoint in keep else None
        wl = None if self.wlabel is None else {v: self.wlabel[v] for v in vertices}
        pt = None if self.pair_tags is None else {v: self.pair_tags[v] for v in vertices}
        return ColoredGraph(vertices, edges, bp, wl, pt)

    def __len__(self) -> int:
        return len(self.vertices)


def disjoint_union(graphs: Sequence[ColoredGraph]) -> ColoredGraph:
    """Union with vertex ids tagged ``(i, v)`` by part index."""
    vertices: list = []
    edges: list = []
    labelled = all(g.wlabel is not None for g in graphs)
    wl: dict = {}
    for i, g in enumerate(graphs):
        vertices.extend((i, v) for v in g.vertices)
        edges.extend(((i, u), (i, v), c) for u, v, c in g.edges)
        if labelled:
            wl.update({(i, v): t for v, t in g.wlabel.items()})  # type: ignore[union-attr]
    return ColoredGraph(tuple(vertices), tuple(edges), None, wl if labelled else None)


# -- immersion -------------------------------------------------------------


def validate_immersion(g: ColoredGraph) -> bool:
    seen_out: set = set()
    seen_in: set = set()
    for u, v, c in g.edges:
        if (u, c) in seen_out or (v, c) in seen_in:
            return False
        seen_out.add((u, c))
        seen_in.add((v, c))
    return True


def require_immersed(*graphs: ColoredGraph) -> None:
    for g in graphs:
        if not validate_immersion(g):
            raise NotImmersed("graph is not immersed in the bouquet")


# -- folding ---------------------------------------------------------------


class _Folder:
    """Union-find Stallings folding.

    Vertices are integers.  ``schedule`` picks which pending merge to do
    next; the folded result does not depend on it.
    """

    def __init__(self, nvertices: int, lifo: bool = True):
        self.parent = list(range(nvertices))
        self.out: list[dict[EdgeColor, int]] = [{} for _ in range(nvertices)]
        self.inn: list[dict[EdgeColor, int]] = [{} for _ in range(nvertices)]
        self.pending: deque[tuple[int, int]] = deque()
        self.lifo = lifo

    def find(self, v: int) -> int:
        root = v
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[v] != root:
            self.parent[v], v = root, self.parent[v]
        return root

    def add_edge(self, u: int, v: int, c: EdgeColor) -> None:
        u, v = self.find(u), self.find(v)
        t = self.out[u].get(c)
        if t is None:
            self.out[u][c] = v
        elif self.find(t) != v:
            self.pending.append((t, v))
        s = self.inn[v].get(c)
        if s is None:
            self.inn[v][c] = u
        elif self.find(s) != u:
            self.pending.append((s, u))

    def run(self) -> None:
        while self.pending:
            a, b = self.pending.pop() if self.lifo else self.pending.popleft()
            a, b = self.find(a), self.find(b)
            if a == b:
                continue
            if b < a:
                a, b = b, a
            self.parent[b] = a
            out_b, in_b = self.out[b], self.inn[b]
            self.out[b], self.inn[b] = {}, {}
            for c, t in out_b.items():
                self.add_edge(a, t, c)
            for c, s in in_b.items():
                self.add_edge(s, a, c)


def fold_graph(g: ColoredGraph, lifo: bool = True) -> ColoredGraph:
    """Identify edges until ``g`` is immersed.

    W-labels must agree on identified vertices (they always do when the
    input maps to W); the basepoint and labels follow the merged vertex.
    """
    idx = g.index
    folder = _Folder(len(g.vertices), lifo=lifo)
    for u, v, c in g.edges:
        folder.add_edge(idx[u], idx[v], c)
        folder.run()
    rep = [folder.find(i) for i in range(len(g.vertices))]
    keep = sorted(set(rep))
    vertices = tuple(g.vertices[i] for i in keep)
    edges = sorted({(rep[idx[u]], rep[idx[v]], c) for u, v, c in g.edges}, key=lambda e: (e[0], e[1], e[2]))
    edges_t = tuple((g.vertices[u], g.vertices[v], c) for u, v, c in edges)
    wl = None
    if g.wlabel is not None:
        wl = {}
        for i, v in enumerate(g.vertices):
            r = g.vertices[rep[i]]
            t = g.wlabel[v]
            if r in wl and wl[r].base != t.base:
                raise GraphError("folding identified vertices with different W-labels")
            wl.setdefault(r, t)
    bp = None if g.basepoint is None else g.vertices[rep[idx[g.basepoint]]]
    return ColoredGraph(vertices, edges_t, bp, wl)


def path_graph(words: Sequence[Sequence[Letter]]) -> ColoredGraph:
    """Bouquet of loops at vertex 0, one subdivided loop per word."""
    edges = []
    nxt = 1
    for w in words:
        cur = 0
        for i, (c, s) in enumerate(w):
            dst = 0 if i == len(w) - 1 else nxt
            if dst:
                nxt += 1
            edges.append((cur, dst, c) if s > 0 else (dst, cur, c))
            cur = dst
    return ColoredGraph(tuple(range(nxt)), tuple(edges), 0)


def fold(words: Sequence[Sequence[Letter]], lifo: bool = True) -> ColoredGraph:
    """Stallings core graph of the subgroup generated by ``words``, based at 0."""
    g = fold_graph(path_graph(words), lifo=lifo)
    return prune_to_core(g, keep_basepoint=True).renumbered()


# -- cores and components -------------------------------------------------


def prune_to_core(g: ColoredGraph, keep_basepoint: bool = False) -> ColoredGraph:
    deg = {v: 0 for v in g.vertices}
    adj: dict[Vertex, list[Vertex]] = {v: [] for v in g.vertices}
    for u, v, _ in g.edges:
        deg[u] += 1
        deg[v] += 1
        adj[u].append(v)
        adj[v].append(u)
    protected = g.basepoint if keep_basepoint else None
    removed: set = set()
    stack = [v for v in g.vertices if deg[v] <= 1 and v != protected]
    while stack:
        v = stack.pop()
        if v in removed:
            continue
        removed.add(v)
        for w in adj[v]:
            if w in removed:
                continue
            deg[w] -= 1
            if deg[w] <= 1 and w != protected:
                stack.append(w)
    if not removed:
        return g
    return g.induced(v for v in g.vertices if v not in removed)


def component_vertex_sets(g: ColoredGraph) -> list[list[Vertex]]:
    parent = {v: v for v in g.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for u, v, _ in g.edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[rv] = ru
    groups: dict = {}
    for v in g.vertices:
        groups.setdefault(find(v), []).append(v)
    return list(groups.values())


def is_connected(g: ColoredGraph) -> bool:
    return len(component_vertex_sets(g)) <= 1


def connected_components(g: ColoredGraph) -> list[ColoredGraph]:
    """Weakly connected components, ordered by size then canonical key."""
    comps = [g.induced(vs) for vs in component_vertex_sets(g)]
    immersed = validate_immersion(g)

    def key(c: ColoredGraph):
        ck = canonical_form(c, use_wlabels=c.wlabel is not None) if immersed else ()
        return (len(c.vertices), len(c.edges), ck, sorted(map(repr, c.vertices)))

    return sorted(comps, key=key)


def rank(g: ColoredGraph, per_component: bool = False) -> int | list[int]:
    """First Betti number |E| - |V| + 1 of a connected graph."""
    if per_component:
        return [len(c.edges) - len(c.vertices) + 1 for c in connected_components(g)]
    if not g.vertices:
        return 0
    if not is_connected(g):
        raise Disconnected("rank of a disconnected graph; pass per_component=True")
    return len(g.edges) - len(g.vertices) + 1


# -- fibre products --------------------------------------------------------


def fiber_product(g: ColoredGraph, h: ColoredGraph) -> ColoredGraph:
    """Pullback of two immersions into the bouquet; vertices are pairs."""
    require_immersed(g, h)
    vertices = tuple(product(g.vertices, h.vertices))
    by_color: list[list[tuple]] = [[], [], []]
    for u, v, c in h.edges:
        by_color[c].append((u, v))
    edges = tuple(
        ((u1, u2), (v1, v2), c)
        for u1, v1, c in g.edges
        for u2, v2 in by_color[c]
    )
    bp = None
    if g.basepoint is not None and h.basepoint is not None:
        bp = (g.basepoint, h.basepoint)
    pair_tags = {(a, b): (g.tag(a), h.tag(b)) for a, b in vertices}
    return ColoredGraph(vertices, edges, bp, None, pair_tags)


def swap_pairs(g: ColoredGraph) -> ColoredGraph:
    """Exchange the entries of every pair vertex (the isomorphism H*K -> K*H)."""
    mapping = {v: (v[1], v[0]) for v in g.vertices}
    out = g.relabel(mapping)
    if g.pair_tags is not None:
        out = ColoredGraph(
            out.vertices,
            out.edges,
            out.basepoint,
            out.wlabel,
            {mapping[v]: (b, a) for v, (a, b) in g.pair_tags.items()},
        )
    return out


def project_second(g: ColoredGraph) -> ColoredGraph:
    """Label each pair vertex by the W-tag of its second entry."""
    if g.pair_tags is None:
        raise MissingLabel("graph does not come from a fibre product")
    wl = {}
    for v in g.vertices:
        t = g.pair_tags[v][1]
        if t is None:
            raise MissingLabel(f"second entry of {v!r} has no W-label")
        wl[v] = t
    return ColoredGraph(g.vertices, g.edges, g.basepoint, wl, g.pair_tags)


# -- canonical forms -------------------------------------------------------

_DIRS = tuple((c, s) for s in (1, -1) for c in COLORS)


def _bfs_order(g: ColoredGraph, start: Vertex) -> list[Vertex]:
    order = [start]
    seen = {start}
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        for letter in _DIRS:
            w = g.step(v, letter)
            if w is not None and w not in seen:
                seen.add(w)
                order.append(w)
    return order


def _encode(g: ColoredGraph, order: list[Vertex], use_wlabels: bool) -> tuple:
    num = {v: i for i, v in enumerate(order)}
    rows = []
    for v in order:
        row = tuple(num.get(g.out_map[c].get(v), -1) for c in COLORS)
        if use_wlabels:
            t = g.wlabel[v]  # type: ignore[index]
            row = row + (t.base, int(t.barred))
        rows.append(row)
    return (len(order),) + tuple(rows)


def _candidates(g: ColoredGraph, use_wlabels: bool) -> list[Vertex]:
    # restrict starts to the rarest vertex signature; any isomorphism preserves it
    def sig(v):
        s = tuple(v in g.out_map[c] for c in COLORS) + tuple(v in g.in_map[c] for c in COLORS)
        if use_wlabels:
            t = g.wlabel[v]  # type: ignore[index]
            s = s + (t.base, t.barred)
        return s

    groups: dict = {}
    for v in g.vertices:
        groups.setdefault(sig(v), []).append(v)
    return min(groups.values(), key=lambda vs: (len(vs), sig(vs[0])))


def canonical_order(g: ColoredGraph, use_wlabels: bool = False) -> list[Vertex]:
    """Vertex order realising the canonical key (component by component)."""
    if not validate_immersion(g):
        return sorted(g.vertices, key=repr)
    out: list[Vertex] = []
    keyed = []
    for vs in component_vertex_sets(g):
        c = g.induced(vs)
        keyed.append((_canonical(c, use_wlabels and c.wlabel is not None)))
    for key, order in sorted(keyed, key=lambda t: t[0]):
        out.extend(order)
    return out


def _canonical(g: ColoredGraph, use_wlabels: bool, basepoint: bool = False) -> tuple[tuple, list]:
    starts = [g.basepoint] if basepoint else _candidates(g, use_wlabels)
    best = None
    best_order: list = []
    for s in starts:
        order = _bfs_order(g, s)
        enc = _encode(g, order, use_wlabels)
        if best is None or enc < best:
            best, best_order = enc, order
    return best, best_order  # type: ignore[return-value]


def canonical_form(g: ColoredGraph, use_wlabels: bool = False, use_basepoint: bool = False) -> tuple:
    """Isomorphism-invariant key of a connected immersed graph.

    Immersed graphs are deterministic in every colour and direction, so a
    breadth-first numbering is fixed once the start vertex is chosen; the
    key is the least encoding over admissible starts.
    """
    require_immersed(g)
    if not g.vertices:
        return (0,)
    if not is_connected(g):
        raise Disconnected("canonical_form needs a connected graph; use multiset_key")
    if use_wlabels and g.wlabel is None:
        raise MissingLabel("graph has no W-labels")
    if use_basepoint and g.basepoint is None:
        raise GraphError("graph has no basepoint")
    return _canonical(g, use_wlabels, use_basepoint)[0]


def multiset_key(g: ColoredGraph, use_wlabels: bool = False) -> tuple:
    """Canonical key of a possibly disconnected graph."""
    require_immersed(g)
    return tuple(sorted(canonical_form(g.induced(vs), use_wlabels) for vs in component_vertex_sets(g)))


def isomorphic(g: ColoredGraph, h: ColoredGraph, use_wlabels: bool = False) -> bool:
    return multiset_key(g, use_wlabels) == multiset_key(h, use_wlabels)


# -- embeddings ------------------------------------------------------------


def _extend(h: ColoredGraph, g: ColoredGraph, root: Vertex, image: Vertex, labels: bool) -> dict | None:
    """The unique colour-preserving map of h's component at ``root`` sending it to ``image``."""
    phi = {root: image}
    stack = [root]
    while stack:
        v = stack.pop()
        gv = phi[v]
        if labels and h.wlabel[v] != g.wlabel[gv]:  # type: ignore[index]
            return None
        for letter in _DIRS:
            w = h.step(v, letter)
            if w is None:
                continue
            gw = g.step(gv, letter)
            if gw is None:
                return None
            if w in phi:
                if phi[w] != gw:
                    return None
            else:
                phi[w] = gw
                stack.append(w)
    if len(set(phi.values())) != len(phi):
        return None
    return phi


def embeds_into(h: ColoredGraph, g: ColoredGraph, respect_wlabels: bool = False) -> dict | None:
    """An injective colour-preserving homomorphism h -> g, or None."""
    require_immersed(h, g)
    if len(h.vertices) > len(g.vertices) or len(h.edges) > len(g.edges):
        return None
    hc, gc = h.color_counts(), g.color_counts()
    if any(a > b for a, b in zip(hc, gc)):
        return None
    if respect_wlabels and (h.wlabel is None or g.wlabel is None):
        raise MissingLabel("respect_wlabels needs labels on both graphs")
    comps = component_vertex_sets(h)
    options = []
    for vs in comps:
        root = vs[0]
        maps = [
            phi
            for target in g.vertices
            if (phi := _extend(h, g, root, target, respect_wlabels)) is not None
        ]
        if not maps:
            return None
        options.append(maps)

    used: set = set()
    chosen: list[dict] = []

    def search(i: int) -> bool:
        if i == len(options):
            return True
        for phi in options[i]:
            img = set(phi.values())
            if img & used:
                continue
            used.update(img)
            chosen.append(phi)
            if search(i + 1):
                return True
            chosen.pop()
            used.difference_update(img)
        return False

    if not search(0):
        return None
    result: dict = {}
    for phi in chosen:
        result.update(phi)
    return result


def check_embedding(h: ColoredGraph, g: ColoredGraph, phi: Mapping, respect_wlabels: bool = False) -> bool:
    """Re-verify a stored embedding without searching."""
    if set(phi) != set(h.vertices) or len(set(phi.values())) != len(phi):
        return False
    gv = set(g.vertices)
    if any(t not in gv for t in phi.values()):
        return False
    gedges = set(g.edges)
    if any((phi[u], phi[v], c) not in gedges for u, v, c in h.edges):
        return False
    if respect_wlabels:
        return all(h.wlabel[v] == g.wlabel[phi[v]] for v in h.vertices)  # type: ignore[index]
    return True


def describe(g: ColoredGraph) -> dict[str, Any]:
    x, y, d = g.color_counts()
    return {"vertices": len(g.vertices), "x": x, "y": y, "d": d}
