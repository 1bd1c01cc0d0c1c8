"""
Reply graph construction tests
"""

# library
import pytest

# module
from forum_innovators.exceptions import UnknownNodeError
from forum_innovators.graph import build_graph, edge_rows, graph_summary, node_rows

from tests.helpers import corpus, post, replies


def _arcs(graph) -> dict:
    return {(s, t): w for s, t, w in edge_rows(graph)}


def _counts(summary) -> tuple:
    return summary.nodes, summary.arcs, summary.total_weight, summary.isolates


def test_single_post():
    """One post gives one isolated node"""
    graph = build_graph(corpus(post("p1", "a")))
    assert (graph.n, graph.m) == (1, 0)
    summary = graph_summary(graph)
    assert _counts(summary) == (1, 0, 0, 1)


def test_back_and_forth():
    """B opens, A answers, B answers back: one arc each way"""
    graph = build_graph(
        corpus(
            post("p1", "b"),
            post("p2", "a", parent="p1", minute=1),
            post("p3", "b", parent="p2", minute=2),
        )
    )
    assert _arcs(graph) == {("a", "b"): 1, ("b", "a"): 1}
    summary = graph_summary(graph)
    assert _counts(summary) == (2, 2, 2, 0)
    assert summary.answered_share == 1.0


def test_repeated_answers_add_weight():
    """Two answers from A to B give weight 2"""
    graph = build_graph(replies(("a", "b"), ("a", "b")))
    assert _arcs(graph) == {("a", "b"): 2}
    assert graph_summary(graph).total_weight == 2


def test_star():
    """Five authors answering a hub"""
    graph = build_graph(replies(*((leaf, "hub") for leaf in "abcde")))
    summary = graph_summary(graph)
    assert _counts(summary) == (6, 5, 5, 0)
    assert summary.answered_share == pytest.approx(1 / 6)


def test_self_replies_dropped():
    """Answering one's own post adds no arc"""
    graph = build_graph(corpus(post("p1", "a"), post("p2", "a", parent="p1", minute=1)))
    assert graph.m == 0


def test_thread_opener_edges():
    """Posts without a parent optionally answer the thread opener"""
    posts = corpus(
        post("p1", "a"), post("p2", "b", minute=1), post("p3", "c", minute=2)
    )
    assert build_graph(posts).m == 0
    graph = build_graph(posts, thread_opener_edges=True)
    assert _arcs(graph) == {("b", "a"): 1, ("c", "a"): 1}


def test_post_order_invariance():
    """Reordering posts leaves the graph unchanged"""
    posts = replies(("a", "b"), ("c", "b"), ("b", "a"), ("a", "b"))
    shuffled = corpus(*reversed(posts.posts))
    assert list(edge_rows(build_graph(posts))) == list(edge_rows(build_graph(shuffled)))


def test_degree_sums():
    """Summed degrees equal the arc count and total weight"""
    graph = build_graph(
        replies(("a", "b"), ("c", "b"), ("b", "a"), ("a", "b"), ("d", "c"))
    )
    digraph = graph.digraph
    assert sum(d for _, d in digraph.in_degree()) == graph.m
    assert sum(d for _, d in digraph.out_degree()) == graph.m
    weight = sum(d for _, d in digraph.in_degree(weight="weight"))
    assert weight == graph_summary(graph).total_weight


def test_nodes():
    """Nodes index sorted authors and unknown ids fail"""
    graph = build_graph(replies(("zeno", "anna")))
    assert list(node_rows(graph)) == [("anna", 0), ("zeno", 1)]
    assert graph.node("zeno") == 1
    with pytest.raises(UnknownNodeError) as error:
        graph.node("mario")
    assert isinstance(error.value, KeyError)
    assert "mario" in str(error.value)


def test_empty_corpus():
    """An empty corpus gives an empty graph"""
    summary = graph_summary(build_graph(corpus()))
    assert (summary.nodes, summary.arcs, summary.answered_share) == (0, 0, 0.0)
