"""
Small corpus and graph builders for tests
"""

# stdlib
import json
from datetime import datetime, timedelta, timezone
from typing import Optional

# library
import networkx as nx

# module
from forum_innovators.corpus import Corpus, Post
from forum_innovators.graph import ReplyGraph

START = datetime(2021, 3, 1, 9, 0, tzinfo=timezone.utc)


def record(
    post_id: str,
    author_id: str,
    thread_id: str = "t1",
    parent: Optional[str] = None,
    minute: int = 0,
    text: str = "Ciao a tutti.",
) -> str:
    """One JSON line of the posts input"""
    return json.dumps(
        {
            "post_id": post_id,
            "author_id": author_id,
            "thread_id": thread_id,
            "parent_post_id": parent,
            "timestamp": (START + timedelta(minutes=minute)).isoformat(),
            "text": text,
        }
    )


def post(
    post_id: str,
    author_id: str,
    text: str = "Ciao a tutti.",
    parent: Optional[str] = None,
    thread_id: str = "t1",
    minute: int = 0,
) -> Post:
    """A Post without going through validation"""
    timestamp = START + timedelta(minutes=minute)
    return Post(post_id, author_id, thread_id, parent, timestamp, text)


def corpus(*posts: Post) -> Corpus:
    """Corpus over the given posts"""
    return Corpus(tuple(posts))


def replies(*pairs: tuple[str, str]) -> Corpus:
    """Corpus where every (answering, answered) author pair is one reply post"""
    posts = []
    for i, (source, target) in enumerate(pairs):
        thread = f"t{i}"
        opener = post(f"p{i}a", target, thread_id=thread, minute=2 * i)
        answer = post(
            f"p{i}b", source, parent=opener.post_id, thread_id=thread, minute=2 * i + 1
        )
        posts.extend((opener, answer))
    return Corpus(tuple(posts))


def graph_from_arcs(
    n: int, arcs: list[tuple[int, int]], weights: Optional[dict] = None
) -> ReplyGraph:
    """Reply graph on authors n0..n<n-1> with the given arcs, weight 1 unless listed"""
    weights = weights or {}
    digraph = nx.DiGraph()
    digraph.add_nodes_from(range(n))
    digraph.add_weighted_edges_from((u, v, weights.get((u, v), 1)) for u, v in arcs)
    authors = tuple(f"n{i:02d}" for i in range(n))
    return ReplyGraph(authors, digraph)
