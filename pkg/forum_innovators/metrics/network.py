"""
Per-author centrality and brokerage metrics of the reply network
"""

# pylint: disable=too-many-instance-attributes

# stdlib
import logging
import math
from dataclasses import dataclass
from typing import Optional

# library
import networkx as nx

# module
from forum_innovators.exceptions import DegenerateGraphError
from forum_innovators.graph import ReplyGraph
from forum_innovators.util.pool import WorkerPool, chunked

LOG = logging.getLogger(__name__)

NETWORK_COLUMNS = (
    "in_degree",
    "out_degree",
    "w_in_degree",
    "w_out_degree",
    "in_distinctiveness",
    "out_distinctiveness",
    "closeness",
    "betweenness",
    "constraint",
)


@dataclass(frozen=True)
class NodeCentralities:
    """The nine network metrics of one author. constraint is None for isolates"""

    in_degree: int
    out_degree: int
    w_in_degree: int
    w_out_degree: int
    in_distinctiveness: float
    out_distinctiveness: float
    closeness: float
    betweenness: float
    constraint: Optional[float]

    def as_row(self) -> tuple:
        """Values in NETWORK_COLUMNS order"""
        return tuple(getattr(self, c) for c in NETWORK_COLUMNS)


def degree_suite(graph: ReplyGraph, author_id: str) -> tuple[int, int, int, int]:
    """(in, out, weighted in, weighted out) degree of an author"""
    node = graph.node(author_id)
    digraph = graph.digraph
    return (
        digraph.in_degree(node),
        digraph.out_degree(node),
        int(digraph.in_degree(node, weight="weight")),
        int(digraph.out_degree(node, weight="weight")),
    )


def _distinctiveness(
    digraph: nx.DiGraph, node: int, direction: str, variant: str
) -> float:
    size = digraph.number_of_nodes()
    if direction == "in":
        neighbors = digraph.predecessors(node)
        weight = lambda u: digraph[u][node]["weight"]  # noqa: E731
        degree = digraph.out_degree
    else:
        neighbors = digraph.successors(node)
        weight = lambda u: digraph[node][u]["weight"]  # noqa: E731
        degree = digraph.in_degree
    total = 0.0
    for neighbor in neighbors:
        term = math.log10((size - 1) / degree(neighbor))
        total += term * weight(neighbor) if variant == "d2" else term
    return total


def distinctiveness(
    graph: ReplyGraph, author_id: str, direction: str = "in", variant: str = "d1"
) -> float:
    """In- or out-distinctiveness centrality

    in: sum over in-neighbors u of log10((N-1)/outdeg(u))
    out: sum over out-neighbors u of log10((N-1)/indeg(u))
    The d2 variant weights every neighbor term by the arc weight
    """
    if direction not in ("in", "out"):
        raise ValueError(f"direction must be 'in' or 'out', not '{direction}'")
    node = graph.node(author_id)
    if graph.n < 2:
        raise DegenerateGraphError("degenerate graph: distinctiveness needs N >= 2")
    return _distinctiveness(graph.digraph, node, direction, variant)


def _harmonic(undirected: nx.Graph, nodes: list[int]) -> dict[int, float]:
    """Harmonic closeness numerators for a chunk of source nodes"""
    out = {}
    for node in nodes:
        lengths = nx.single_source_shortest_path_length(undirected, node)
        out[node] = sum(1 / d for d in lengths.values() if d > 0)
    return out


def _freeman(graph: ReplyGraph) -> dict[int, float]:
    """Classic closeness inside the largest weakly connected component"""
    scores = dict.fromkeys(range(graph.n), 0.0)
    if graph.n < 2:
        return scores
    components = nx.weakly_connected_components(graph.digraph)
    largest = max(components, key=lambda c: (len(c), -min(c)))
    undirected = graph.digraph.subgraph(largest).to_undirected(as_view=True)
    for node in largest:
        lengths = nx.single_source_shortest_path_length(undirected, node)
        total = sum(lengths.values())
        scores[node] = (len(largest) - 1) / total if total else 0.0
    return scores


def closeness(graph: ReplyGraph, author_id: str, variant: str = "harmonic") -> float:
    """Closeness in [0, 1] on the undirected projection

    harmonic: mean inverse distance to the other N-1 nodes, unreachable
    nodes contributing 0. freeman: (|C|-1)/sum of distances inside the
    largest weakly connected component C, 0 outside it
    """
    node = graph.node(author_id)
    if variant == "freeman":
        return _freeman(graph)[node]
    if graph.n < 2:
        return 0.0
    undirected = graph.digraph.to_undirected(as_view=True)
    return _harmonic(undirected, [node])[node] / (graph.n - 1)


def all_closeness(
    graph: ReplyGraph, variant: str = "harmonic", threads: int = 1
) -> dict[int, float]:
    """Closeness for every node index"""
    if variant == "freeman":
        return _freeman(graph)
    if graph.n < 2:
        return dict.fromkeys(range(graph.n), 0.0)
    undirected = nx.Graph(graph.digraph.to_undirected(as_view=True))
    scores = {}
    with WorkerPool(threads) as pool:
        for part in pool.map(
            _harmonic, ((undirected, c) for c in chunked(list(range(graph.n)), threads))
        ):
            scores.update(part)
    return {v: scores[v] / (graph.n - 1) for v in range(graph.n)}


def _betweenness_chunk(digraph: nx.DiGraph, sources: list[int]) -> dict[int, float]:
    return nx.betweenness_centrality_subset(
        digraph, sources=sources, targets=list(digraph), normalized=False
    )


def betweenness(graph: ReplyGraph, threads: int = 1) -> dict[str, float]:
    """Unnormalized directed betweenness by Brandes' accumulation

    Shortest paths ignore arc weights. Source chunks are accumulated in
    node order so the result does not depend on scheduling
    """
    digraph = graph.digraph
    if threads <= 1 or graph.n < 2:
        scores = nx.betweenness_centrality(digraph, normalized=False, weight=None)
    else:
        scores = dict.fromkeys(digraph, 0.0)
        with WorkerPool(threads) as pool:
            parts = pool.map(
                _betweenness_chunk,
                ((digraph, c) for c in chunked(list(range(graph.n)), threads)),
            )
        for part in parts:
            for node, value in part.items():
                scores[node] += value
    return {graph.authors[v]: float(scores[v]) for v in range(graph.n)}


def _mutual_weight(digraph: nx.DiGraph, u: int, v: int) -> float:
    """Arc weights between u and v summed over both directions"""
    total = 0
    if digraph.has_edge(u, v):
        total += digraph[u][v]["weight"]
    if digraph.has_edge(v, u):
        total += digraph[v][u]["weight"]
    return total


class _Proportions:
    """Cached p_ij = mutual weight share of j among i's ties"""

    def __init__(self, digraph: nx.DiGraph):
        self.digraph = digraph
        self._totals = {}

    def neighbors(self, node: int) -> set[int]:
        """Contacts of node in either direction"""
        return set(nx.all_neighbors(self.digraph, node)) - {node}

    def __call__(self, i: int, j: int) -> float:
        if i not in self._totals:
            self._totals[i] = sum(
                _mutual_weight(self.digraph, i, k) for k in self.neighbors(i)
            )
        total = self._totals[i]
        return _mutual_weight(self.digraph, i, j) / total if total else 0.0


def _constraint(proportions: _Proportions, node: int) -> Optional[float]:
    contacts = proportions.neighbors(node)
    if not contacts:
        return None
    total = 0.0
    for j in contacts:
        indirect = sum(
            proportions(node, q) * proportions(q, j) for q in contacts if q != j
        )
        total += (proportions(node, j) + indirect) ** 2
    return total


def constraint(graph: ReplyGraph, author_id: str) -> Optional[float]:
    """Burt's constraint on the symmetrized weighted graph

    C_i = sum_j (p_ij + sum_q p_iq p_qj)^2 over contacts j and q of i.
    Isolates have no ego network and return None
    """
    node = graph.node(author_id)
    return _constraint(_Proportions(graph.digraph), node)


def all_centralities(
    graph: ReplyGraph,
    closeness_variant: str = "harmonic",
    distinctiveness_variant: str = "d1",
    threads: int = 1,
) -> dict[str, NodeCentralities]:
    """Every network metric for every author, one pass per metric family"""
    digraph = graph.digraph
    between = betweenness(graph, threads)
    close = all_closeness(graph, closeness_variant, threads)
    proportions = _Proportions(digraph)
    out = {}
    for node, author in enumerate(graph.authors):
        if graph.n >= 2:
            in_dist = _distinctiveness(digraph, node, "in", distinctiveness_variant)
            out_dist = _distinctiveness(digraph, node, "out", distinctiveness_variant)
        else:
            in_dist = out_dist = 0.0
        out[author] = NodeCentralities(
            in_degree=digraph.in_degree(node),
            out_degree=digraph.out_degree(node),
            w_in_degree=int(digraph.in_degree(node, weight="weight")),
            w_out_degree=int(digraph.out_degree(node, weight="weight")),
            in_distinctiveness=in_dist,
            out_distinctiveness=out_dist,
            closeness=close[node],
            betweenness=between[author],
            constraint=_constraint(proportions, node),
        )
    LOG.info("computed network metrics for %d authors", len(out))
    return out
