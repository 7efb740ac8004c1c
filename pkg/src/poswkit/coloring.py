"""Merkle-tree audits over a hash database: coloring and lucky challenges.

Starting from a candidate root label, the audit walks the tree implied by
the database, parsing each claimed preimage into fixed ``lam``-bit fields
(statement, node identifier, child or parent labels).  A node is green
when its entry parses and is consistent with labels recorded higher up the
tree; any structural failure colors the node red and stops the descent.
Unvisited nodes are filled in red with an undefined label, and the full
skeleton-graph edge set is attached.

On top of the coloring sit the challenge predicates: a leaf is useful to a
cheating prover only when its whole path to the root is green, and a
database is "lucky" for chain length s when it holds a challenge-row entry
whose output selects only such leaves while the database has neither an
output collision nor an order-respecting walk of length s.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from . import dag, hgraph
from .bits import all_bitstrings, check_bits
from .oracle import encode_marker, encode_node

GREEN = "green"
RED = "red"


@dataclass(frozen=True)
class ColoredTree:
    n: int
    labels: dict[str, str | None]  # node -> label bits, None for undefined
    colors: dict[str, str]  # total over {0,1}^{<=n}
    edges: tuple[tuple[str, str], ...]

    def leaves(self) -> list[str]:
        return ["".join(bits) for bits in (format(v, f"0{self.n}b") for v in range(1 << self.n))]


def _all_nodes(n: int) -> list[str]:
    out = [""]
    for depth in range(1, n + 1):
        out.extend(all_bitstrings(depth))
    return out


def _parse_fields(x: str, lam: int, count: int) -> list[str] | None:
    if len(x) != lam * count:
        return None
    return [x[i * lam : (i + 1) * lam] for i in range(count)]


def color_subtree(
    db: hgraph.Database,
    chi: str,
    v: str,
    x_v: str,
    y_v: str,
    n: int,
    _labels: dict[str, str] | None = None,
) -> tuple[set[str], dict[str, str], dict[str, str]]:
    """Recursive audit of the subtree rooted at ``v``.

    ``x_v`` is the claimed preimage of ``v``'s label ``y_v``.  Labels
    recorded while parsing ancestors are shared down the recursion so leaf
    entries can be checked against them.  Returns (visited nodes, labels,
    colors); colors cover every visited node.
    """
    lam = db.lam
    check_bits(chi, lam)
    labels = _labels if _labels is not None else {}
    visited: set[str] = {v}
    colors: dict[str, str] = {}
    labels[v] = y_v

    if len(v) < n:
        fields = _parse_fields(x_v, lam, 4)
        if fields is None or fields[0] != chi or fields[1] != encode_node(v, lam):
            colors[v] = RED  # parse fail
            return visited, labels, colors
        colors[v] = GREEN
        _, _, y0, y1 = fields
        labels[v + "0"] = y0
        labels[v + "1"] = y1
        for child, y_child in ((v + "0", y0), (v + "1", y1)):
            visited.add(child)
            candidates = db.preimages(y_child)
            if candidates:
                x_child = min(candidates)  # lexicographically smallest preimage
                sub_visited, _, sub_colors = color_subtree(
                    db, chi, child, x_child, y_child, n, _labels=labels
                )
                visited |= sub_visited
                colors.update(sub_colors)
            else:
                colors[child] = RED  # no entry for the recorded child label
        return visited, labels, colors

    # Leaf: the entry must carry the already-recorded parent labels.
    parent_nodes = dag.parents(n, v)
    fields = _parse_fields(x_v, lam, 2 + len(parent_nodes))
    if fields is None or fields[0] != chi or fields[1] != encode_node(v, lam):
        colors[v] = RED
        return visited, labels, colors
    for p, claimed in zip(parent_nodes, fields[2:]):
        if labels.get(p) != claimed:
            colors[v] = RED  # mismatch (or parent label never recorded)
            return visited, labels, colors
    colors[v] = GREEN
    return visited, labels, colors


def colored_mt(db: hgraph.Database, chi: str, y: str, n: int) -> ColoredTree | None:
    """Audit the whole tree for root label ``y``; None when y has no preimage."""
    check_bits(y, db.lam)
    candidates = db.preimages(y)
    if not candidates:
        return None
    x_root = min(candidates)
    _, labels, colors = color_subtree(db, chi, "", x_root, y, n)
    full_labels: dict[str, str | None] = {}
    full_colors: dict[str, str] = {}
    for node in _all_nodes(n):
        if node in colors:
            full_labels[node] = labels[node]
            full_colors[node] = colors[node]
        else:
            full_labels[node] = None
            full_colors[node] = RED
    return ColoredTree(n=n, labels=full_labels, colors=full_colors, edges=tuple(dag.edges(n)))


def gptr(tree: ColoredTree, v: str) -> bool:
    """True when every node on the leaf's path to the root is green."""
    if len(v) != tree.n:
        raise ValueError(f"gptr is defined on leaves; got {v!r} for n={tree.n}")
    return all(tree.colors[v[:i]] == GREEN for i in range(tree.n + 1))


def green_path_leaves(tree: ColoredTree) -> list[str]:
    return [leaf for leaf in tree.leaves() if gptr(tree, leaf)]


def count_unlucky_leaves(tree: ColoredTree) -> int:
    return sum(1 for leaf in tree.leaves() if not gptr(tree, leaf))


def lucky_strings(
    db: hgraph.Database, chi: str, y: str, n: int, lam: int
) -> Callable[[str], bool]:
    """Predicate on lam-bit strings whose n-bit slices all select green paths.

    A string w = w_1 || ... || w_k || z (k = lam // n, trailing bits free)
    satisfies the predicate iff every slice w_i is a leaf with a green path
    to the root.  When the root label has no preimage the predicate is
    uniformly false.
    """
    if lam != db.lam:
        raise ValueError("lam must match the database's output length")
    k = lam // n
    tree = colored_mt(db, chi, y, n)
    if tree is None:
        return lambda w: False
    good = {leaf for leaf in tree.leaves() if gptr(tree, leaf)}

    def predicate(w: str) -> bool:
        check_bits(w, lam)
        return all(w[i * n : (i + 1) * n] in good for i in range(k))

    return predicate


def count_lucky_strings(db: hgraph.Database, chi: str, y: str, n: int, lam: int) -> int:
    """Exact count of lam-bit strings satisfying :func:`lucky_strings`.

    Closed form g^k * 2^(lam - n*k) with g green-path leaves; kept as a
    product so tests can cross-check the enumeration.
    """
    tree = colored_mt(db, chi, y, n)
    if tree is None:
        return 0
    g = len(green_path_leaves(tree))
    k = lam // n
    return (g**k) * (1 << (lam - n * k))


def is_lucky_db(db: hgraph.Database, s: int, n: int, lam: int) -> bool:
    """Lucky-database membership for chain length s.

    Requires a challenge-row entry (input = chi || marker || root) whose
    output selects only green-path leaves, and excludes databases with an
    output collision or an order-respecting walk of length s.
    """
    if lam != db.lam:
        raise ValueError("lam must match the database's output length")
    if hgraph.has_collision(db) or hgraph.has_walk_of_length(db, s):
        return False
    marker = encode_marker(lam)
    for x, y in db.entries:
        if len(x) != 3 * lam or x[lam : 2 * lam] != marker:
            continue
        chi, root = x[:lam], x[2 * lam :]
        if lucky_strings(db, chi, root, n, lam)(y):
            return True
    return False


def pre_set(db: hgraph.Database) -> set[str]:
    """All lam-bit windows occurring inside some database input."""
    out: set[str] = set()
    for x, _ in db.entries:
        for i in range(len(x) - db.lam + 1):
            out.add(x[i : i + db.lam])
    return out


def check_rednodes(
    db: hgraph.Database, chi: str, y: str, n: int, alpha: float, T: int
) -> bool:
    """Failed-challenge lower bound, vacuously true off its hypotheses.

    When the database is collision-free and has no walk of length T, at
    least alpha * 2^n leaves must lack a green path to the root.  A missing
    root preimage counts as all leaves failing.
    """
    if hgraph.has_collision(db) or hgraph.has_walk_of_length(db, T):
        return True
    tree = colored_mt(db, chi, y, n)
    failing = (1 << n) if tree is None else count_unlucky_leaves(tree)
    return failing >= alpha * (1 << n)
