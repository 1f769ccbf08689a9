import itertools

import pytest
from hypothesis import given, strategies as st

from extrig.graphs import (FIXED_POINTWISE, FIXED_SWAPPED, NOT_FIXED, PHGraph, Vertex,
                           complete_decorated, extrusion_product, group_elements,
                           remove_edge, subgroup_elements, word_add)
from extrig.fixtures import (constrained_cube, point_line_base, point_line_twofold,
                             prism, triangle)


def k3_graph():
    return triangle().graph


def path_graph():
    return point_line_base().graph


def test_word_add_examples():
    assert word_add("0", (1,)) == "1"
    assert word_add("*0", (1, 0)) == "*0"
    assert word_add("*0", (0, 1)) == "*1"
    assert word_add("01", (0, 0)) == "01"


@given(st.integers(1, 3), st.data())
def test_word_add_is_group_action(t, data):
    bits = st.sampled_from("01*")
    word = "".join(data.draw(bits) for _ in range(t))
    g1 = tuple(data.draw(st.integers(0, 1)) for _ in range(t))
    g2 = tuple(data.draw(st.integers(0, 1)) for _ in range(t))
    combined = tuple((a + b) % 2 for a, b in zip(g1, g2))
    assert word_add(word_add(word, g1), g2) == word_add(word, combined)
    assert word_add(word, (0,) * t) == word


def test_group_elements_order():
    assert group_elements(1) == [(0,), (1,)]
    assert group_elements(2) == [(0, 0), (0, 1), (1, 0), (1, 1)]
    assert subgroup_elements(2, (0,)) == [(0, 0), (1, 0)]


def test_extrusion_product_prism_counts():
    g = extrusion_product(k3_graph(), [()])
    assert len(g.vertices) == 6
    assert len(g.edges) == 9
    assert len(g.edges_pp) == 9


def test_extrusion_product_contracted_path():
    g = extrusion_product(path_graph(), [("w1",)])
    assert len(g.vertices) == 5
    assert len(g.edges) == 6
    assert Vertex("w1", "*") in g.hyperplanes
    assert len(g.edges_hh_par) == 1


def test_extrusion_product_empty_is_identity():
    g = k3_graph()
    assert extrusion_product(g, []) is g


@pytest.mark.parametrize("t", [1, 2, 3])
def test_free_product_counts(t):
    g = extrusion_product(k3_graph(), [()] * t)
    assert len(g.vertices) == 3 * 2 ** t
    assert len(g.edges) == 3 * 2 ** t + 3 * t * 2 ** (t - 1)


def test_product_rejects_point_in_fixed_set():
    with pytest.raises(ValueError):
        extrusion_product(k3_graph(), [("p1",)])


def test_action_is_homomorphism_exhaustive():
    for g in (prism().graph, point_line_twofold().graph, constrained_cube().graph):
        t = g.extrusion_order
        for g1, g2 in itertools.product(group_elements(t), repeat=2):
            combined = tuple((a + b) % 2 for a, b in zip(g1, g2))
            for v in g.vertices:
                assert g.act(g2, g.act(g1, v)) == g.act(combined, v)


def test_action_examples():
    g = prism().graph
    assert g.act((1,), Vertex("p1", "0")) == Vertex("p1", "1")
    assert g.act((0,), Vertex("p1", "0")) == Vertex("p1", "0")
    g2 = point_line_twofold().graph
    assert g2.act((1, 0), Vertex("w1", "*0")) == Vertex("w1", "*0")
    with pytest.raises(ValueError):
        g.act((1,), Vertex("nope", "0"))


def test_edge_classification_prism():
    g = prism().graph
    extrusion_edge = (Vertex("p1", "0"), Vertex("p1", "1"))
    triangle_edge = (Vertex("p1", "0"), Vertex("p2", "0"))
    assert g.classify_edge((1,), extrusion_edge) == FIXED_SWAPPED
    assert g.classify_edge((1,), triangle_edge) == NOT_FIXED
    assert g.classify_edge((0,), triangle_edge) == FIXED_POINTWISE
    assert g.edge_sign((1,), extrusion_edge) == -1
    assert g.edge_sign((1,), triangle_edge) == 1


def test_edge_classification_twofold_point_line():
    g = point_line_twofold().graph
    par_w1 = (Vertex("w1", "*0"), Vertex("w1", "*1"))
    par_w2 = (Vertex("w2", "0*"), Vertex("w2", "1*"))
    assert par_w1 in g.edges_hh_par and par_w2 in g.edges_hh_par
    # enumerate the action of (0,1) over every edge
    by_class = {NOT_FIXED: [], FIXED_SWAPPED: [], FIXED_POINTWISE: []}
    for e in g.edges:
        by_class[g.classify_edge((0, 1), e)].append(e)
    assert par_w1 in by_class[FIXED_SWAPPED]
    assert by_class[FIXED_POINTWISE] == [par_w2]
    assert len(by_class[FIXED_SWAPPED]) == 3  # two pp copy edges plus the w1 pair
    assert g.edge_sign((0, 1), par_w1) == -1
    assert g.edge_sign((0, 1), par_w2) == 1


def test_multi_star_contraction():
    g = constrained_cube().graph
    assert Vertex("w1", "**0") in g.hyperplanes
    assert Vertex("w2", "0**") in g.hyperplanes
    assert len(g.points) == 8 and len(g.hyperplanes) == 4
    assert len(g.edges_pp) == 12 and len(g.edges_ph) == 16 and len(g.edges_hh_par) == 2


def test_parallel_classes():
    g = point_line_twofold().graph
    classes = g.parallel_classes
    assert sorted(tuple(v.label for v in c) for c in classes) == [
        ("w1|*0", "w1|*1"), ("w2|0*", "w2|1*")]
    for u, v in g.edges_hh_par:
        assert g.class_index[u] == g.class_index[v]


def test_edge_sets_invariant_under_action():
    for g in (prism().graph, point_line_twofold().graph, constrained_cube().graph):
        for gamma in group_elements(g.extrusion_order):
            for edges in (g.edges_pp, g.edges_ph, g.edges_hh_angle, g.edges_hh_par):
                for e in edges:
                    iu, iv = g.act(gamma, e[0]), g.act(gamma, e[1])
                    assert any(frozenset((iu, iv)) == frozenset(f) for f in edges)


def test_angle_edges_must_join_distinct_classes():
    w1, w2 = Vertex("w1"), Vertex("w2")
    with pytest.raises(ValueError):
        PHGraph(points=(), hyperplanes=(w1, w2),
                edges_hh_angle=((w1, w2),), edges_hh_par=((w1, w2),))


def test_remove_edge():
    g = prism().graph
    g2 = remove_edge(g, Vertex("p1", "0"), Vertex("p1", "1"))
    assert len(g2.edges) == 8
    with pytest.raises(ValueError):
        remove_edge(g2, Vertex("p1", "0"), Vertex("p1", "1"))


def test_complete_decorated():
    g = point_line_twofold().graph
    k = complete_decorated(g)
    assert len(k.edges_pp) == 6
    assert len(k.edges_ph) == 16
    assert len(k.edges_hh_par) == 2
    assert len(k.edges_hh_angle) == 4
    assert k.parallel_classes == g.parallel_classes
