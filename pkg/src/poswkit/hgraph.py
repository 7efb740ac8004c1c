"""Hash-database graphs and the walk predicates used by the audits.

A database is an ordered list of (input, output) pairs with distinct
inputs.  Entry i points at entry j when output ``y_i`` occurs as a
contiguous substring of input ``x_j``; a chain of such links is exactly a
hash chain witness (each step's input embeds the previous step's output).

``build_graph`` reports the full pointing relation, self-loops included.
The walk predicates (``has_walk_of_length`` and friends) deliberately
restrict steps to *later* entries (i < j in database order): a chain
assembled through oracle interaction reveals its links in recording order,
and order-respecting edges keep the graph acyclic so that walks and simple
paths coincide.  Adversarial value choices can make the unrestricted
relation cyclic (e.g. an output that is a substring of its own input),
which would make "longest walk" meaningless; for databases with random
outputs the two readings agree with overwhelming probability.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .bits import check_bits
from .oracle import Oracle


def substring(needle: str, hay: str) -> bool:
    """Contiguous bit-level match; the empty needle matches everything."""
    check_bits(needle)
    check_bits(hay)
    return needle in hay


@dataclass(frozen=True)
class Database:
    """Ordered (x, y) pairs, a partial function: x values are distinct."""

    lam: int
    entries: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        if not isinstance(self.entries, tuple):
            object.__setattr__(self, "entries", tuple(tuple(e) for e in self.entries))
        seen = set()
        for x, y in self.entries:
            check_bits(x)
            check_bits(y, self.lam)
            if x in seen:
                raise ValueError(f"duplicate database input {x!r}")
            seen.add(x)

    def __len__(self) -> int:
        return len(self.entries)

    def lookup(self, x: str) -> str | None:
        for ex, ey in self.entries:
            if ex == x:
                return ey
        return None

    def index_of(self, x: str) -> int | None:
        for i, (ex, _) in enumerate(self.entries):
            if ex == x:
                return i
        return None

    def insert(self, x: str, y: str) -> "Database":
        """Appended copy; the new entry becomes the last one."""
        return Database(self.lam, self.entries + ((x, y),))

    def preimages(self, y: str) -> list[str]:
        return [ex for ex, ey in self.entries if ey == y]

    def to_json(self) -> str:
        return json.dumps(
            {
                "lambda": self.lam,
                "entries": [{"x": x, "y": y} for x, y in self.entries],
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "Database":
        doc = json.loads(text)
        return cls(
            lam=doc["lambda"],
            entries=tuple((e["x"], e["y"]) for e in doc["entries"]),
        )


def build_graph(db: Database) -> list[tuple[int, int]]:
    """Full pointing relation over entry indices; self-loops permitted."""
    out = []
    for i, (_, yi) in enumerate(db.entries):
        for j, (xj, _) in enumerate(db.entries):
            if substring(yi, xj):
                out.append((i, j))
    return out


def _forward_in_neighbors(db: Database) -> list[list[int]]:
    """Order-respecting in-neighbor lists: edges run from i to j > i only."""
    nbrs: list[list[int]] = [[] for _ in db.entries]
    for i, (_, yi) in enumerate(db.entries):
        for j in range(i + 1, len(db.entries)):
            if substring(yi, db.entries[j][0]):
                nbrs[j].append(i)
    return nbrs


def _walk_end_table(db: Database, s: int) -> list[bool]:
    """DP over order-respecting walks: reachable[v] after exactly s edges."""
    reachable = [True] * len(db.entries)
    if s == 0:
        return reachable
    nbrs = _forward_in_neighbors(db)
    for _ in range(s):
        reachable = [any(reachable[u] for u in nbrs[v]) for v in range(len(db.entries))]
        if not any(reachable):
            break
    return reachable


def has_walk_of_length(db: Database, s: int) -> bool:
    """True when some walk of exactly s edges exists (s=0 needs a vertex)."""
    if s < 0:
        raise ValueError("walk length must be >= 0")
    if len(db.entries) == 0:
        return False
    if s > len(db.entries) - 1:
        return False
    return any(_walk_end_table(db, s))


def longest_walk(db: Database) -> int:
    """Length of the longest order-respecting walk; -1 for an empty db."""
    if len(db.entries) == 0:
        return -1
    nbrs = _forward_in_neighbors(db)
    best = [0] * len(db.entries)
    for v in range(len(db.entries)):
        for u in nbrs[v]:
            best[v] = max(best[v], best[u] + 1)
    return max(best)


def extract_hseq(db: Database, s: int) -> tuple[str, ...] | None:
    """One witness chain of length s, ties broken by smallest entry index."""
    if s < 0:
        raise ValueError("walk length must be >= 0")
    if len(db.entries) == 0 or s > len(db.entries) - 1:
        return None
    nbrs = _forward_in_neighbors(db)
    n_entries = len(db.entries)
    tables = [[True] * n_entries]
    for _ in range(s):
        prev = tables[-1]
        tables.append([any(prev[u] for u in nbrs[v]) for v in range(n_entries)])
    ends = [v for v in range(n_entries) if tables[s][v]]
    if not ends:
        return None
    cur = min(ends)
    walk = [cur]
    for t in range(s, 0, -1):
        cur = min(u for u in nbrs[cur] if tables[t - 1][u])
        walk.append(cur)
    walk.reverse()
    return tuple(db.entries[v][0] for v in walk)


def has_collision(db: Database) -> bool:
    ys = [y for _, y in db.entries]
    return len(set(ys)) < len(ys)


def path_s_i(db: Database, queries: list[str], s: int, i: int) -> bool:
    """Some length-s walk ends at a vertex not among the first i queries."""
    if not 0 <= i <= len(queries):
        raise ValueError("need 0 <= i <= len(queries)")
    if len(db.entries) == 0 or s > len(db.entries) - 1:
        return False
    excluded = set(queries[:i])
    ends = _walk_end_table(db, s)
    return any(
        ends[v] and db.entries[v][0] not in excluded for v in range(len(db.entries))
    )


def contain_s_i(db: Database, queries: list[str], s: int, i: int) -> bool:
    """A length-s walk ends at query i's entry, whose output re-occurs in
    some query string."""
    if not 1 <= i <= len(queries):
        raise ValueError("need 1 <= i <= len(queries)")
    xi = queries[i - 1]
    yi = db.lookup(xi)
    if yi is None:
        return False
    if not any(substring(yi, xj) for xj in queries):
        return False
    if s > len(db.entries) - 1:
        return False
    ends = _walk_end_table(db, s)
    return ends[db.index_of(xi)]


def bad_s_i(db: Database, queries: list[str], s: int, i: int) -> bool:
    """Round-indexed bad event; i=0 degenerates to the plain walk predicate."""
    if i == 0:
        return has_walk_of_length(db, s)
    if path_s_i(db, queries, s, i):
        return True
    return any(contain_s_i(db, queries, s, j) for j in range(1, i + 1))


def verify_hseq(oracle_or_db: Database | Oracle, seq: tuple[str, ...] | list[str]) -> bool:
    """Check every link of a candidate chain under a database or oracle."""
    if len(seq) == 0:
        return False
    for prev, cur in zip(seq, seq[1:]):
        if isinstance(oracle_or_db, Database):
            y = oracle_or_db.lookup(prev)
            if y is None:
                return False
        else:
            y = oracle_or_db.hash(prev)
        if not substring(y, cur):
            return False
    return True
