"""
Directed weighted reply network between authors
"""

# stdlib
import logging
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

# library
import networkx as nx

# module
from forum_innovators.corpus import Corpus
from forum_innovators.exceptions import UnknownNodeError

LOG = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReplyGraph:
    """Author-to-author answer network

    Nodes are stable integer indices into the sorted author list. Arc A->B
    carries the number of posts A wrote in answer to posts by B
    """

    authors: tuple[str, ...]
    digraph: nx.DiGraph

    @cached_property
    def index(self) -> dict[str, int]:
        """Author id to node index"""
        return {a: i for i, a in enumerate(self.authors)}

    def node(self, author_id: str) -> int:
        """Node index for an author id"""
        try:
            return self.index[author_id]
        except KeyError:
            raise UnknownNodeError(f"unknown node '{author_id}'") from None

    @property
    def n(self) -> int:
        """Node count"""
        return len(self.authors)

    @property
    def m(self) -> int:
        """Arc count"""
        return self.digraph.number_of_edges()

    def arcs(self) -> Iterator[tuple[int, int, int]]:
        """(source, target, weight) in node order"""
        for source in range(self.n):
            for target in sorted(self.digraph.successors(source)):
                yield source, target, self.digraph[source][target]["weight"]


@dataclass(frozen=True)
class GraphSummary:
    """Size counts of a reply graph"""

    nodes: int
    arcs: int
    total_weight: int
    isolates: int
    answered_share: float


def _answer_pairs(
    corpus: Corpus, thread_opener_edges: bool
) -> Iterator[tuple[str, str]]:
    """(answering author, answered author) for every reply post"""
    openers = {tid: posts[0] for tid, posts in corpus.threads.items()}
    for post in corpus.posts:
        target = corpus.parent_author(post)
        if target is None and thread_opener_edges and post.parent_post_id is None:
            opener = openers[post.thread_id]
            if opener.post_id != post.post_id:
                target = opener.author_id
        if target is not None and target != post.author_id:
            yield post.author_id, target


def build_graph(corpus: Corpus, thread_opener_edges: bool = False) -> ReplyGraph:
    """Build the reply network over all posting authors

    Self-replies are dropped and isolated authors are kept as nodes. With
    thread_opener_edges, a post without a parent answers the thread opener
    """
    authors = corpus.authors
    index = {a: i for i, a in enumerate(authors)}
    counts = Counter(_answer_pairs(corpus, thread_opener_edges))
    digraph = nx.DiGraph()
    digraph.add_nodes_from(range(len(authors)))
    digraph.add_weighted_edges_from(
        (index[s], index[t], w) for (s, t), w in sorted(counts.items())
    )
    graph = ReplyGraph(authors, digraph)
    LOG.info("reply graph has %d nodes and %d arcs", graph.n, graph.m)
    return graph


def graph_summary(graph: ReplyGraph) -> GraphSummary:
    """Node, arc, weight and isolate counts"""
    digraph = graph.digraph
    answered = sum(1 for v in digraph if digraph.in_degree(v) > 0)
    return GraphSummary(
        nodes=graph.n,
        arcs=graph.m,
        total_weight=int(digraph.size(weight="weight")),
        isolates=nx.number_of_isolates(digraph),
        answered_share=answered / graph.n if graph.n else 0.0,
    )


def edge_rows(graph: ReplyGraph) -> Iterator[tuple[str, str, int]]:
    """Edge list rows (source, target, weight) with author ids"""
    for source, target, weight in graph.arcs():
        yield graph.authors[source], graph.authors[target], weight


def node_rows(graph: ReplyGraph) -> Iterator[tuple[str, int]]:
    """Node list rows (author_id, index)"""
    yield from ((a, i) for i, a in enumerate(graph.authors))
