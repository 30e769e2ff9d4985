import itertools

import pytest
from hypothesis import given, settings

from conftest import cert, corpus, immersed_graphs, small_corpus
from stature.artin import (
    BadParameter,
    NotCoverCore,
    NotFillable,
    NotWLabeled,
    beta,
    build_red_ngon,
    build_W,
    build_X1,
    build_X2,
    filling_words,
    pi1_generators,
    presentation,
    q_complex,
    q_contractible,
    q_fillable,
)
from stature.cosets import abelian_invariants, simplify
from stature.graph import (
    ColoredGraph,
    Disconnected,
    EdgeColor,
    WTag,
    canonical_form,
    connected_components,
    disjoint_union,
    embeds_into,
    fiber_product,
    fold,
    prune_to_core,
    rank,
    validate_immersion,
    word,
    word_str,
)

X, Y, D = EdgeColor.X, EdgeColor.Y, EdgeColor.D


def s_and_bucket(n):
    c = cert(n)
    out = [e.graph for e in c.maximal_elements]
    for k, bk in c.q_bucket:
        out += [k, bk]
    return out


def pi1_invariants(g, n):
    """Tietze-simplified generator count and abelian invariants of the filled complex."""
    p = simplify(presentation(q_complex(g, n)))
    return p.ngens, abelian_invariants(p)


class TestWords:
    @pytest.mark.parametrize("n", [4, 8])
    def test_generators(self, n):
        gens = pi1_generators(n)
        assert len(gens) == 7
        assert len(gens[0]) == n and word_str(gens[0]) == "x" * n

    def test_filling_words(self):
        assert [word_str(w) for w in filling_words(5)] == ["xxxxx", "yyy", "yD", "yyDY", "Dy"]

    def test_bad_n(self):
        with pytest.raises(BadParameter):
            pi1_generators(3)
        with pytest.raises(BadParameter):
            build_X1(4)


class TestBuilders:
    @pytest.mark.parametrize("n", range(4, 13))
    def test_W_shape(self, n):
        w = build_W(n)
        assert (len(w), len(w.edges), rank(w)) == (n, n + 6, 7)
        assert w.color_counts() == (n, 3, 3)
        assert validate_immersion(w)
        assert w.basepoint == 1
        assert canonical_form(w) == canonical_form(fold(pi1_generators(n)))

    @pytest.mark.parametrize("n", [4, 7])
    def test_W_triangles(self, n):
        w = build_W(n)
        assert w.trace(1, word("yyy")) == [1, n, n - 1, 1]
        assert w.trace(1, word("ddd")) == [1, n, n - 1, 1]
        assert w.trace(1, word("x" * n)) == list(range(1, n + 1)) + [1]

    def test_X1_8(self):
        x1 = build_X1(8)
        assert len(x1) == 16 and x1.color_counts() == (16, 3, 3) and rank(x1) == 7

    @pytest.mark.parametrize("n", [5, 6, 9])
    def test_X1_X2_twins(self, n):
        x1, x2 = build_X1(n), build_X2(n)
        assert canonical_form(x1) == canonical_form(x2)
        assert canonical_form(x1, True) != canonical_form(x2, True)

    @pytest.mark.parametrize("n", [4, 6])
    def test_ngon(self, n):
        g = build_red_ngon(n)
        assert len(g) == n and g.color_counts() == (n, 0, 0)
        assert embeds_into(g, build_W(n), True) is not None


class TestBeta:
    @pytest.mark.parametrize("n", range(4, 11))
    def test_W_fixed(self, n):
        w = build_W(n).with_basepoint(None)
        assert canonical_form(beta(w, n), True) == canonical_form(w, True)

    def test_Y2_fixed(self, cert4):
        y2 = cert4.element("Y2").graph
        assert canonical_form(beta(y2, 4), True) == canonical_form(y2, True)

    @pytest.mark.parametrize("n", [5, 6, 8])
    def test_X_involution(self, n):
        for g in (build_X1(n), build_X2(n)):
            img = beta(g, n)
            assert canonical_form(beta(img, n), True) == canonical_form(g, True)
            assert canonical_form(img, True) != canonical_form(g, True)
            assert rank(img) == rank(g)

    def test_needs_labels(self):
        with pytest.raises(NotWLabeled):
            beta(ColoredGraph((0,), ((0, 0, X),)), 4)

    def test_rejects_foreign_edges(self):
        g = ColoredGraph((0, 1), ((0, 1, Y),), wlabel={0: WTag(1), 1: WTag(2)})
        with pytest.raises(NotCoverCore):
            beta(g, 4)

    @pytest.mark.parametrize("n", [4, 8])
    def test_involution_and_rank_on_corpus(self, n):
        for g in corpus(n):
            img = beta(g, n)
            assert canonical_form(beta(img, n), True) == canonical_form(g, True)
            assert rank(img) == rank(g)

    @pytest.mark.parametrize("n", [4, 5, 8])
    def test_filled_pi1_invariant(self, n):
        for g in s_and_bucket(n):
            assert pi1_invariants(beta(g, n), n) == pi1_invariants(g, n)

    @pytest.mark.parametrize("n", [5, 8])
    def test_census_changes_but_cell_count_of_W_does_not(self, n):
        # per-colour cell tallies are not beta-invariant (red chains become yellow edges)
        x1 = build_X1(n)
        assert q_complex(beta(x1, n), n).census() != q_complex(x1, n).census()
        assert q_complex(beta(build_W(n), n), n).census() == q_complex(build_W(n), n).census()

    @given(immersed_graphs(max_vertices=9, labelled_n=5))
    @settings(max_examples=300, deadline=None)
    def test_involution_random(self, g):
        core = prune_to_core(g)
        img = beta(g, 5)
        twice = beta(img, 5)
        assert sorted(canonical_form(c, True) for c in connected_components(twice)) == sorted(
            canonical_form(c, True) for c in connected_components(core)
        )
        assert sorted(rank(img, True)) == sorted(rank(core, True))


class TestFillable:
    @pytest.mark.parametrize("n", [4, 5, 9])
    def test_W(self, n):
        assert q_fillable(build_W(n), n)

    @pytest.mark.parametrize("n", [4, 5, 9])
    def test_ngon(self, n):
        assert q_fillable(build_red_ngon(n), n)

    @pytest.mark.parametrize("n", [4, 5, 9])
    def test_double_ngon(self, n):
        assert not q_fillable(build_red_ngon(2 * n), n)

    def test_open_green_path(self):
        # y^3 from vertex 0 ends at vertex 3, not back at 0
        g = ColoredGraph((0, 1, 2, 3), ((0, 1, Y), (1, 2, Y), (2, 3, Y)))
        assert not q_fillable(g, 4)

    @pytest.mark.parametrize("n", [4, 8])
    def test_corpus(self, n):
        assert all(q_fillable(g, n) for g in corpus(n))

    @pytest.mark.parametrize("n", [4, 5])
    def test_products_of_corpus(self, n):
        graphs = small_corpus(n)
        for g, h in itertools.product(graphs, repeat=2):
            for c in connected_components(fiber_product(g, h)):
                assert q_fillable(c, n)

    @pytest.mark.parametrize("n", [4, 5, 8])
    def test_beta_of_S_and_bucket(self, n):
        assert all(q_fillable(beta(g, n), n) for g in s_and_bucket(n))

    @pytest.mark.parametrize("n", [5, 8])
    def test_beta_of_corpus(self, n):
        assert all(q_fillable(beta(g, n), n) for g in corpus(n))

    def test_beta_can_complete_a_green_path(self):
        # two chained bigons over 1 -> 4 -> 3 (n = 4): fillable, since y^3 dies;
        # beta adds the green edge inside the fibre over 4 and y^3 completes open
        n = 4
        g = ColoredGraph(
            (0, 1, 2),
            ((0, 1, Y), (0, 1, D), (1, 2, Y), (1, 2, D)),
            wlabel={0: WTag(1), 1: WTag(n), 2: WTag(n - 1)},
        )
        assert q_fillable(g, n) and q_contractible(g, n) is True
        img = beta(g, n)
        assert rank(img) == rank(g)
        assert not q_fillable(img, n)

    @given(immersed_graphs(max_vertices=6, labelled_n=4), immersed_graphs(max_vertices=6, labelled_n=4))
    @settings(max_examples=300, deadline=None)
    def test_products_random(self, g, h):
        if q_fillable(g, 4) and q_fillable(h, 4):
            assert q_fillable(fiber_product(g, h), 4)


class TestComplex:
    @pytest.mark.parametrize("n", [4, 7])
    def test_ngon_one_cell(self, n):
        assert len(q_complex(build_red_ngon(n), n).cells) == 1

    @pytest.mark.parametrize("n", [4, 5, 10])
    def test_W_census(self, n):
        assert q_complex(build_W(n), n).census() == {"red": 1, "green": 1, "yellow": 1, "bigon": 3}

    def test_disjoint_union(self):
        parts = [build_W(5), build_red_ngon(5), build_X1(5)]
        u = q_complex(disjoint_union(parts), 5)
        assert len(u.cells) == sum(len(q_complex(p, 5).cells) for p in parts)

    def test_boundaries_are_simple(self):
        for g in small_corpus(4):
            for cell in q_complex(g, 4).cells:
                sources = [e[0] if s > 0 else e[1] for e, s in cell]
                assert len(set(sources)) == len(cell)

    def test_non_fillable_refused(self):
        with pytest.raises(NotFillable):
            q_complex(build_red_ngon(8), 4)


def _parallel_triangles(n):
    verts = (0, 1, 2)
    edges = tuple((a, b, c) for a, b in ((0, 1), (1, 2), (2, 0)) for c in (Y, D))
    return ColoredGraph(verts, edges, wlabel={0: WTag(1), 1: WTag(n), 2: WTag(n - 1)})


class TestContractible:
    @pytest.mark.parametrize("n", [4, 6, 11])
    def test_ngon(self, n):
        assert q_contractible(build_red_ngon(n), n) is True

    @pytest.mark.parametrize("n", [4, 6, 11])
    def test_W(self, n):
        assert q_contractible(build_W(n), n) is False

    @pytest.mark.parametrize("n", [4, 7])
    def test_parallel_triangles(self, n):
        assert q_contractible(_parallel_triangles(n), n) is True

    def test_single_bigon(self):
        g = ColoredGraph((0, 1), ((0, 1, Y), (0, 1, D)), wlabel={0: WTag(1), 1: WTag(4)})
        assert q_contractible(g, 4) is True

    def test_green_triangle_alone(self):
        g = ColoredGraph((0, 1, 2), ((0, 1, Y), (1, 2, Y), (2, 0, Y)))
        assert q_contractible(g, 4) is True

    def test_disconnected(self):
        with pytest.raises(Disconnected):
            q_contractible(disjoint_union([build_red_ngon(4), build_red_ngon(4)]), 4)

    @pytest.mark.parametrize("n", [4, 5, 8])
    def test_W_homology_obstruction(self, n):
        """Counting x-edges mod n is well defined on the filled complex and onto Z/n."""
        w = build_W(n)
        for cell in q_complex(w, n).cells:
            assert sum(s for e, s in cell if e[2] is X) % n == 0
        assert w.trace(1, word("yx"))[-1] == 1  # a loop with one x-edge
        ngens, inv = pi1_invariants(w, n)
        assert inv and all(k == 0 or k % n == 0 for k in inv)

    @pytest.mark.parametrize("n", [4, 8])
    def test_stage_consistency(self, n):
        for g in corpus(n):
            ngens, inv = pi1_invariants(g, n)
            if inv:
                assert q_contractible(g, n) is False

    @pytest.mark.parametrize("n", [4, 8])
    def test_beta_preserves_contractible(self, n):
        c = cert(n)
        assert c.q_bucket
        for k, _ in c.q_bucket:
            assert q_contractible(k, n) is True
            assert q_contractible(beta(k, n), n) is True

    @pytest.mark.parametrize("n", [4, 8])
    def test_components_embed_in_contractible_factor(self, n):
        c = cert(n)
        for k, _ in c.q_bucket:
            for e in c.maximal_elements:
                for comp in connected_components(fiber_product(k, e.graph)):
                    first = _project(comp, 0, k)
                    assert embeds_into(first, k) is not None
                    assert embeds_into(first, k, True) is not None
                for comp in connected_components(fiber_product(e.graph, k)):
                    second = _project(comp, 1, k)
                    assert embeds_into(second, k) is not None
                    assert embeds_into(second, k, True) is not None


def _project(comp, slot, k):
    ids = {v: i for i, v in enumerate(comp.vertices)}
    return ColoredGraph(
        tuple(ids.values()),
        tuple((ids[u], ids[v], c) for u, v, c in comp.edges),
        None,
        {ids[v]: k.wlabel[v[slot]] for v in comp.vertices},
    )
