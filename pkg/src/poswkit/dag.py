"""Skeleton graph for the sequential-work protocol.

Nodes are the bitstrings of length at most ``n`` (the empty string is the
root).  Tree edges run from children toward the root; in addition, every
leaf has an incoming edge from each left sibling of a node on its path to
the root.  ``parents(n, v)`` lists the tails of edges into ``v``.

Canonical parent order (fixed here because hash inputs need one):
internal nodes list ``[v||0, v||1]``; a leaf lists its left siblings
shallowest-first.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bits import check_bits

MAX_DEPTH = 61  # keeps node_count() inside u64 range


@dataclass(frozen=True)
class GraphParams:
    n: int

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_DEPTH:
            raise ValueError(f"depth must be in [1, {MAX_DEPTH}]")

    @property
    def node_count(self) -> int:
        return node_count(self.n)


def node_count(n: int) -> int:
    """Number of nodes, 2^(n+1) - 1."""
    if n < 1:
        raise ValueError("depth must be >= 1")
    if n > MAX_DEPTH:
        raise ValueError(f"depth {n} exceeds supported maximum {MAX_DEPTH}")
    return (1 << (n + 1)) - 1


def check_node(n: int, v: str) -> str:
    check_bits(v)
    if len(v) > n:
        raise ValueError(f"node {v!r} deeper than n={n}")
    return v


def parents(n: int, v: str) -> list[str]:
    """Tails of the edges into ``v``, in canonical order."""
    check_node(n, v)
    if len(v) < n:
        return [v + "0", v + "1"]
    # Leaf: left siblings of the path nodes, shallowest first.
    return [v[:j] + "0" for j in range(n) if v[j] == "1"]


def labeling_order(n: int) -> list[str]:
    """Post-order traversal; every node appears after all its parents."""
    node_count(n)  # validates n
    order: list[str] = []
    stack: list[tuple[str, bool]] = [("", False)]
    while stack:
        v, expanded = stack.pop()
        if expanded or len(v) == n:
            order.append(v)
        else:
            stack.append((v, True))
            stack.append((v + "1", False))
            stack.append((v + "0", False))
    return order


def edges(n: int) -> list[tuple[str, str]]:
    """The full edge list as (tail, head) pairs, heads in BFS order."""
    out: list[tuple[str, str]] = []
    queue = [""]
    while queue:
        v = queue.pop(0)
        for p in parents(n, v):
            out.append((p, v))
        if len(v) < n:
            queue.extend([v + "0", v + "1"])
    return out
