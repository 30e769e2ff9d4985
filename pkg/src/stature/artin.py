"""The edge-group core W(n) of A(2,3,2n) and the graphs built from it.

W(n) is the folded core of the seven loop words generating pi_1(W, 1).
With the labelling used throughout, the red cycle is 1 -> 2 -> ... -> n -> 1
and both the green and the yellow triangle run 1 -> n -> n-1 -> 1.

The translation ``beta`` (conjugation by the nontrivial coset
representative of the index-2 edge group on the F4 side) is computed by
lifting a W-labelled core to the double cover W' of the V-side graph,
swapping the two sheets, and pushing back down to W.  The six vertices of
W' sit at the two ends of the V-side letters b, c, d of each relator:

    d+, c+  over W-vertex 1
    b-, d-  over W-vertex n-1
    c-, b+  over W-vertex n

and the homotopy equivalence W' -> W sends each side of a relator band to
the word of U-side letters running alongside it.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cosets import Presentation, is_trivial
from .graph import (
    ColoredGraph,
    EdgeColor,
    GraphError,
    Disconnected,
    WTag,
    Word,
    connected_components,
    fiber_product,
    fold,
    fold_graph,
    is_connected,
    project_second,
    prune_to_core,
    require_immersed,
    word,
)

X, Y, D = EdgeColor.X, EdgeColor.Y, EdgeColor.D


class BadParameter(ValueError):
    pass


class NotWLabeled(GraphError):
    pass


class NotCoverCore(GraphError):
    pass


class NotFillable(GraphError):
    pass


def _check_n(n: int, least: int = 4) -> None:
    if not isinstance(n, int) or n < least:
        raise BadParameter(f"n must be an integer >= {least}, got {n!r}")


def pi1_generators(n: int) -> list[Word]:
    """Free basis of pi_1(W, 1): x^n, y^3, yd^-1, y(yd^-1)y^-1, d^-1y, yx, y(yx)y^-1."""
    _check_n(n)
    return [word("x" * n), word("yyy"), word("yD"), word("yyDY"), word("Dy"), word("yx"), word("yyxY")]


def filling_words(n: int) -> list[Word]:
    """Generators of the filling subgroup N."""
    _check_n(n)
    return [word("x" * n), word("yyy"), word("yD"), word("yyDY"), word("Dy")]


def build_W(n: int) -> ColoredGraph:
    _check_n(n)
    core = fold(pi1_generators(n))
    # walk the red cycle from the basepoint to fix labels 1..n
    names = {}
    v = core.basepoint
    for i in range(1, n + 1):
        names[v] = i
        v = core.out_map[X][v]
    if len(names) != len(core.vertices) or v != core.basepoint:
        raise AssertionError("folded core has no red Hamiltonian cycle")
    g = core.relabel(names)
    g = ColoredGraph(
        tuple(range(1, n + 1)),
        tuple(sorted(g.edges, key=lambda e: (e[2], e[0], e[1]))),
        1,
        {i: WTag(i) for i in range(1, n + 1)},
    )
    for c in (Y, D):
        if g.out_map[c] != {1: n, n: n - 1, n - 1: 1}:
            raise AssertionError(f"unexpected {c.name} triangle in W({n})")
    return g


def build_red_ngon(n: int, start: int = 1) -> ColoredGraph:
    """The red n-cycle, labelled by W's red cycle starting at ``start``."""
    _check_n(n, 1)
    vs = tuple(range(n))
    return ColoredGraph(
        vs,
        tuple((i, (i + 1) % n, X) for i in vs),
        None,
        {i: WTag((start - 1 + i) % n + 1) for i in vs},
    )


def w_square_components(n: int) -> list[ColoredGraph]:
    w = build_W(n)
    return [project_second(c) for c in connected_components(fiber_product(w, w))]


def build_X1(n: int) -> ColoredGraph:
    """2n-vertex component of W*W whose green triangle is (1,n-1) -> (n,1) -> (n-1,n)."""
    return _build_X(n, (1, n - 1))


def build_X2(n: int) -> ColoredGraph:
    """2n-vertex component of W*W whose green triangle is (1,n) -> (n,n-1) -> (n-1,1)."""
    return _build_X(n, (1, n))


def _build_X(n: int, marker: tuple[int, int]) -> ColoredGraph:
    _check_n(n, 5)
    for c in w_square_components(n):
        if marker in c.vertices:
            if len(c.vertices) != 2 * n:
                raise AssertionError(f"component through {marker} has {len(c.vertices)} vertices")
            return c.renumbered().with_basepoint(None)
    raise AssertionError(f"no component of W*W contains {marker}")


# -- beta ---------------------------------------------------------------------


def check_cover_core(g: ColoredGraph, n: int) -> None:
    """Raise unless every edge of ``g`` lies over an edge of W(n)."""
    if g.wlabel is None:
        raise NotWLabeled("beta needs a W-labelled graph")
    w = build_W(n)
    wedges = set(w.edges)
    for v, t in g.wlabel.items():
        if not 1 <= t.base <= n:
            raise NotCoverCore(f"vertex {v!r} has label {t} outside 1..{n}")
    for u, v, c in g.edges:
        if (g.wlabel[u].base, g.wlabel[v].base, c) not in wedges:
            raise NotCoverCore(f"edge {(u, v, c.letter)} has no image in W({n})")


def beta(g: ColoredGraph, n: int) -> ColoredGraph:
    """Image of a W-labelled core under the coset-representative translation.

    Output vertices are renumbered 0..k-1 in canonical order.
    """
    require_immersed(g)
    check_cover_core(g, n)
    g = prune_to_core(g)
    P, Q, R = 1, n - 1, n
    lab = {v: g.wlabel[v].base for v in g.vertices}  # type: ignore[index]
    # sheet vertex -> its W-label after the swap
    sheet_label = {"d+": Q, "c+": R, "b-": R, "d-": P, "c-": P, "b+": Q}
    sheets = {P: ("d+", "c+"), Q: ("b-", "d-"), R: ("c-", "b+")}

    vertices: list = []
    wl: dict = {}
    edges: list = []
    parent: dict = {}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def add_vertex(v, base):
        vertices.append(v)
        parent[v] = v
        wl[v] = WTag(base)

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    for v in g.vertices:
        for s in sheets.get(lab[v], ()):
            add_vertex((v, s), sheet_label[s])

    for v in g.vertices:
        if lab[v] == P:
            edges.append(((v, "d+"), (v, "c+"), X))
        elif lab[v] == Q:
            edges.append(((v, "b-"), (v, "d-"), X))
        elif lab[v] == R:
            edges.append(((v, "b+"), (v, "c-"), Y))

    def new_red_path(src, dst, tag):
        cur = src
        for k in range(2, n - 1):
            mid = (tag, k)
            add_vertex(mid, k)
            edges.append((cur, mid, X))
            cur = mid
        edges.append((cur, dst, X))

    for i, (u, v, c) in enumerate(g.edges):
        lu, lv = lab[u], lab[v]
        if c == X:
            if (lu, lv) == (Q, R):
                union((v, "c-"), (u, "d-"))
            elif (lu, lv) == (R, P):
                union((v, "d+"), (u, "b+"))
            elif lu == P:
                # start of a red chain 1 -> 2 -> ... -> n-1
                end = g.trace(u, [(X, 1)] * (n - 2))
                if end is None or lab[end[-1]] != Q:
                    raise NotCoverCore("red chain over 1..n-1 is incomplete")
                edges.append(((u, "d+"), (end[-1], "d-"), D))
        elif c == Y:
            if (lu, lv) == (Q, P):
                union((u, "b-"), (v, "c+"))
            elif (lu, lv) == (P, R):
                edges.append(((u, "c+"), (v, "b+"), Y))
            elif (lu, lv) == (R, Q):
                edges.append(((u, "c-"), (v, "b-"), Y))
        else:
            if (lu, lv) == (P, R):
                edges.append(((u, "c+"), (v, "b+"), D))
            elif (lu, lv) == (R, Q):
                edges.append(((u, "c-"), (v, "b-"), D))
            elif (lu, lv) == (Q, P):
                new_red_path((u, "d-"), (v, "d+"), ("chain", i))

    for a in vertices:
        if wl[a].base != wl[find(a)].base:
            raise AssertionError("beta identified sheets over different W-vertices")
    reps = [a for a in vertices if find(a) == a]
    quotient = ColoredGraph(
        tuple(reps),
        tuple((find(a), find(b), c) for a, b, c in edges),
        None,
        {a: wl[a] for a in reps},
    )
    out = prune_to_core(fold_graph(quotient))
    return out.renumbered()


# -- q-machinery ----------------------------------------------------------------


def _split_conjugate(w: Word) -> tuple[int, int]:
    """(prefix length, core length) with w = u c u^-1 and c cyclically reduced."""
    i, j = 0, len(w)
    while j - i >= 2 and w[i][0] == w[j - 1][0] and w[i][1] == -w[j - 1][1]:
        i += 1
        j -= 1
    return i, j - i


def fillability_violations(g: ColoredGraph, n: int) -> list[tuple]:
    """(vertex, word) pairs whose complete trace is not a simple loop.

    A generator u c u^-1 of N must trace a closed path whose cyclically
    reduced part c is a simple cycle; traces that die early are harmless.
    """
    require_immersed(g)
    bad = []
    for w in filling_words(n):
        k, m = _split_conjugate(w)
        for v in g.vertices:
            path = g.trace(v, w)
            if path is None:
                continue
            core = path[k : k + m + 1]
            simple = core[0] == core[-1] and len(set(core[:-1])) == m
            if path[0] != path[-1] or not simple:
                bad.append((v, w))
    return bad


def q_fillable(g: ColoredGraph, n: int) -> bool:
    return not fillability_violations(g, n)


def cell_words(n: int) -> list[Word]:
    """Boundary words of the 2-cells: red n-cycles, green and yellow triangles, green/yellow bigons."""
    return [word("x" * n), word("yyy"), word("ddd"), word("yD")]


@dataclass(frozen=True)
class QComplex:
    skeleton: ColoredGraph
    # each cell: closed edge path as ((u, v, colour), sign) steps
    cells: tuple[tuple[tuple[tuple, int], ...], ...]

    def census(self) -> dict[str, int]:
        names = {"x": "red", "yyy": "green", "ddd": "yellow", "yD": "bigon"}
        out = {v: 0 for v in names.values()}
        for cell in self.cells:
            letters = "".join(e[2].letter if s > 0 else e[2].letter.upper() for e, s in cell)
            key = "x" if set(letters) == {"x"} else letters
            out[names.get(key, key)] = out.get(names.get(key, key), 0) + 1
        return out


def q_complex(g: ColoredGraph, n: int) -> QComplex:
    if not q_fillable(g, n):
        raise NotFillable("graph is not q-fillable")
    seen = set()
    cells = []
    for w in cell_words(n):
        for v in g.vertices:
            path = g.trace(v, w)
            if path is None or path[0] != path[-1] or len(set(path[:-1])) != len(w):
                continue
            steps = []
            for (c, s), a, b in zip(w, path, path[1:]):
                steps.append(((a, b, c), 1) if s > 0 else ((b, a, c), -1))
            key = frozenset(e for e, _ in steps)
            if key in seen:
                continue
            seen.add(key)
            cells.append(tuple(steps))
    return QComplex(g, tuple(cells))


def presentation(qc: QComplex) -> Presentation:
    """Spanning-tree presentation of pi_1 of the 2-complex."""
    g = qc.skeleton
    if not g.vertices:
        return Presentation(0, [])
    root = g.vertices[0]
    seen = {root}
    tree: set = set()
    stack = [root]
    adj: dict = {v: [] for v in g.vertices}
    for e in g.edges:
        adj[e[0]].append((e, e[1]))
        adj[e[1]].append((e, e[0]))
    while stack:
        v = stack.pop()
        for e, w in adj[v]:
            if w not in seen:
                seen.add(w)
                tree.add(e)
                stack.append(w)
    gens = {e: i + 1 for i, e in enumerate(e for e in g.edges if e not in tree)}
    rels = []
    for cell in qc.cells:
        r = tuple(gens[e] * s for e, s in cell if e in gens)
        rels.append(r)
    return Presentation(len(gens), rels)


def q_contractible(g: ColoredGraph, n: int, limit: int = 100_000) -> bool | None:
    """Whether the filled complex is simply connected; None when undecided within ``limit``."""
    require_immersed(g)
    if not is_connected(g):
        raise Disconnected("q_contractible needs a connected graph")
    return is_trivial(presentation(q_complex(g, n)), limit=limit)
