"""Exact sparse simulator of the compressed phase oracle, desk scale.

State space: k query slots (x: m bits, y: lam bits), a side register z,
and a database register holding a partial function as (x, y) pairs.  A
state is a sparse map from basis keys to complex amplitudes.  Database
keys are canonicalized sorted by x so equal partial functions are equal
keys; the capacity bound t lives on the state, not inside the keys, and
growing it ("increase") costs nothing and preserves norm exactly.

The local decompression step acts on the cell for the queried x as the
reflection that exchanges the undefined cell with the uniform value
superposition and fixes the orthogonal complement.  On basis states:

* x undefined, room left:   |D>            ->  2^(-lam/2) sum_w |D + (x,w)>
* x undefined, no room:     |D>            ->  |D>
* x defined with value y:   |D' + (x,y)>   ->  |D' + (x,y)>
                                              - 2^(-lam) sum_w |D' + (x,w)>
                                              + 2^(-lam/2) |D'>

which is an involution and leaves any superposition orthogonal to the
uniform one untouched.  A phase-oracle query composes: grow capacity,
decompress at x, apply the phase (-1)^(y . D(x)) (undefined cells
contribute +1), decompress again.  Parallel batches are handled either by
conjugating with slot swaps (the "batched" variant) or by decompressing
every slot, applying one joint phase, and recompressing (the "product"
variant).

Everything here returns new states; QState values are never mutated.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

import numpy as np

from .bits import bits_from_int
from .hgraph import Database

PRUNE_EPS = 1e-14
DEFAULT_STATE_BUDGET = 1 << 22
DEFAULT_REFERENCE_BUDGET_BITS = 20  # cap on lam * 2^m for oracle enumeration

BasisKey = tuple[tuple[tuple[int, int], ...], int, tuple[tuple[int, int], ...]]


class BudgetExceededError(RuntimeError):
    """Raised when a simulation would exceed its configured size budget."""


@dataclass(frozen=True)
class SimParams:
    m: int  # query input bits
    lam: int  # oracle output bits
    slots: int = 1  # parallel query slots
    z_dim: int = 1  # side-register dimension

    def __post_init__(self) -> None:
        if self.m < 1 or self.lam < 1 or self.slots < 1 or self.z_dim < 1:
            raise ValueError("all simulator dimensions must be >= 1")


@dataclass(frozen=True)
class QState:
    """Sparse state; treat as an immutable value."""

    params: SimParams
    t: int  # database capacity bound
    amps: dict[BasisKey, complex]

    def norm(self) -> float:
        return float(np.sqrt(sum(abs(a) ** 2 for a in self.amps.values())))

    def nonzero_terms(self) -> int:
        return len(self.amps)


def initial_state(params: SimParams) -> QState:
    slots = tuple((0, 0) for _ in range(params.slots))
    return QState(params, 0, {(slots, 0, ()): 1.0 + 0.0j})


# -- database key helpers ----------------------------------------------------


def _db_lookup(db: tuple[tuple[int, int], ...], x: int) -> int | None:
    for ex, ey in db:
        if ex == x:
            return ey
    return None


def _db_insert(db: tuple[tuple[int, int], ...], x: int, y: int) -> tuple[tuple[int, int], ...]:
    out = [p for p in db if p[0] < x]
    out.append((x, y))
    out.extend(p for p in db if p[0] > x)
    return tuple(out)


def _db_remove(db: tuple[tuple[int, int], ...], x: int) -> tuple[tuple[int, int], ...]:
    return tuple(p for p in db if p[0] != x)


def db_as_database(db: tuple[tuple[int, int], ...], params: SimParams) -> Database:
    """View a database key as a bitstring database for the graph predicates."""
    return Database(
        lam=params.lam,
        entries=tuple(
            (bits_from_int(x, params.m), bits_from_int(y, params.lam)) for x, y in db
        ),
    )


def _prune(amps: dict[BasisKey, complex]) -> dict[BasisKey, complex]:
    return {k: a for k, a in amps.items() if abs(a) >= PRUNE_EPS}


def _acc(amps: dict[BasisKey, complex], key: BasisKey, a: complex) -> None:
    amps[key] = amps.get(key, 0.0) + a


# -- oracle building blocks --------------------------------------------------


def increase(state: QState, count: int = 1) -> QState:
    """Grow the database capacity; amplitudes are untouched."""
    if count < 0:
        raise ValueError("count must be >= 0")
    return QState(state.params, state.t + count, dict(state.amps))


def std_decomp(state: QState, slot_index: int = 0) -> QState:
    lam = state.params.lam
    size = 1 << lam
    root = 2.0 ** (-lam / 2)
    new: dict[BasisKey, complex] = {}
    for (slots, z, db), a in state.amps.items():
        x = slots[slot_index][0]
        y_cur = _db_lookup(db, x)
        if y_cur is None:
            if len(db) < state.t:
                a_dec = a * root
                for w in range(size):
                    _acc(new, (slots, z, _db_insert(db, x, w)), a_dec)
            else:
                _acc(new, (slots, z, db), a)  # no room: identity
        else:
            stripped = _db_remove(db, x)
            _acc(new, (slots, z, db), a)
            a_mix = -a / size
            for w in range(size):
                _acc(new, (slots, z, _db_insert(stripped, x, w)), a_mix)
            _acc(new, (slots, z, stripped), a * root)
    return QState(state.params, state.t, _prune(new))


def cphso_prime(state: QState, slot_index: int = 0) -> QState:
    new: dict[BasisKey, complex] = {}
    for (slots, z, db), a in state.amps.items():
        x, y = slots[slot_index]
        d = _db_lookup(db, x)
        if d is not None and bin(y & d).count("1") % 2 == 1:
            a = -a
        new[(slots, z, db)] = a
    return QState(state.params, state.t, new)


def cphso(state: QState, slot_index: int = 0) -> QState:
    state = increase(state, 1)
    state = std_decomp(state, slot_index)
    state = cphso_prime(state, slot_index)
    return std_decomp(state, slot_index)


def swap_slots(state: QState, i: int, j: int) -> QState:
    if i == j:
        return state
    new: dict[BasisKey, complex] = {}
    for (slots, z, db), a in state.amps.items():
        s = list(slots)
        s[i], s[j] = s[j], s[i]
        new[(tuple(s), z, db)] = a
    return QState(state.params, state.t, new)


def scphso(state: QState, i: int) -> QState:
    """Query through slot i by conjugating the slot-0 oracle with a swap."""
    return swap_slots(cphso(swap_slots(state, 0, i), 0), 0, i)


def cphso_k(state: QState, k: int) -> QState:
    """Batch of k parallel queries, processed slot 0 then 1 ... then k-1."""
    if not 1 <= k <= state.params.slots:
        raise ValueError(f"batch width {k} out of range for {state.params.slots} slots")
    for i in range(k):
        state = scphso(state, i)
    return state


def alt_parallel_cphso(state: QState, k: int) -> QState:
    """Product-form parallel query: decompress all slots (ascending), one
    joint phase, recompress all slots (ascending)."""
    if not 1 <= k <= state.params.slots:
        raise ValueError(f"batch width {k} out of range for {state.params.slots} slots")
    state = increase(state, k)
    for j in range(k):
        state = std_decomp(state, j)
    new: dict[BasisKey, complex] = {}
    for (slots, z, db), a in state.amps.items():
        parity = 0
        for j in range(k):
            x, y = slots[j]
            d = _db_lookup(db, x)
            if d is not None:
                parity ^= bin(y & d).count("1") & 1
        new[(slots, z, db)] = -a if parity else a
    state = QState(state.params, state.t, new)
    for j in range(k):
        state = std_decomp(state, j)
    return state


# -- adversary programs ------------------------------------------------------

# A unitary spec is either a builtin tuple or a dense matrix over the
# (slots, z) space.  Builtins:
#   ("hadamard_x", slot)        Hadamard on all m bits of the slot's x
#   ("hadamard_y", slot)        Hadamard on all lam bits of the slot's y
#   ("xor_x", slot, mask)       x ^= mask
#   ("xor_y", slot, mask)       y ^= mask
UnitarySpec = tuple | np.ndarray


@dataclass(frozen=True, eq=False)
class Round:
    unitary: UnitarySpec | None = None
    width: int = 0  # number of parallel queries after the unitary


@dataclass(frozen=True, eq=False)
class AdversaryProgram:
    params: SimParams
    rounds: tuple[Round, ...]

    @property
    def query_budget(self) -> int:
        return sum(r.width for r in self.rounds)

    @property
    def sequential_rounds(self) -> int:
        return sum(1 for r in self.rounds if r.width > 0)


def _apply_hadamard(state: QState, slot: int, on_x: bool) -> QState:
    width = state.params.m if on_x else state.params.lam
    scale = 2.0 ** (-width / 2)
    new: dict[BasisKey, complex] = {}
    for (slots, z, db), a in state.amps.items():
        x, y = slots[slot]
        val = x if on_x else y
        base = a * scale
        for v in range(1 << width):
            sign = -1.0 if bin(val & v).count("1") % 2 else 1.0
            s = list(slots)
            s[slot] = (v, y) if on_x else (x, v)
            _acc(new, (tuple(s), z, db), base * sign)
    return QState(state.params, state.t, _prune(new))


def _apply_xor(state: QState, slot: int, mask: int, on_x: bool) -> QState:
    new: dict[BasisKey, complex] = {}
    for (slots, z, db), a in state.amps.items():
        x, y = slots[slot]
        s = list(slots)
        s[slot] = (x ^ mask, y) if on_x else (x, y ^ mask)
        new[(tuple(s), z, db)] = a
    return QState(state.params, state.t, new)


def _register_dim(params: SimParams) -> int:
    return (1 << ((params.m + params.lam) * params.slots)) * params.z_dim


def _register_index(params: SimParams, slots: tuple[tuple[int, int], ...], z: int) -> int:
    idx = 0
    for x, y in slots:
        idx = (idx << (params.m + params.lam)) | (x << params.lam) | y
    return idx * params.z_dim + z


def _register_unindex(params: SimParams, idx: int) -> tuple[tuple[tuple[int, int], ...], int]:
    z = idx % params.z_dim
    idx //= params.z_dim
    pairs = []
    for _ in range(params.slots):
        y = idx & ((1 << params.lam) - 1)
        idx >>= params.lam
        x = idx & ((1 << params.m) - 1)
        idx >>= params.m
        pairs.append((x, y))
    return tuple(reversed(pairs)), z


def check_unitary(matrix: np.ndarray, dim: int, tol: float = 1e-10) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.shape != (dim, dim):
        raise ValueError(f"unitary must be {dim}x{dim}, got {matrix.shape}")
    if not np.allclose(matrix.conj().T @ matrix, np.eye(dim), atol=tol):
        raise ValueError("matrix is not unitary within tolerance 1e-10")
    return matrix


def apply_matrix(state: QState, matrix: np.ndarray) -> QState:
    """Dense unitary on the full (slots, z) space, database untouched."""
    dim = _register_dim(state.params)
    matrix = check_unitary(matrix, dim)
    groups: dict[tuple[tuple[int, int], ...], np.ndarray] = {}
    for (slots, z, db), a in state.amps.items():
        vec = groups.setdefault(db, np.zeros(dim, dtype=complex))
        vec[_register_index(state.params, slots, z)] += a
    new: dict[BasisKey, complex] = {}
    for db, vec in groups.items():
        out = matrix @ vec
        for idx in np.nonzero(np.abs(out) >= PRUNE_EPS)[0]:
            slots, z = _register_unindex(state.params, int(idx))
            new[(slots, z, db)] = out[idx]
    return QState(state.params, state.t, new)


def apply_unitary(state: QState, spec: UnitarySpec) -> QState:
    if isinstance(spec, np.ndarray):
        return apply_matrix(state, spec)
    name = spec[0]
    if name == "hadamard_x":
        return _apply_hadamard(state, spec[1], on_x=True)
    if name == "hadamard_y":
        return _apply_hadamard(state, spec[1], on_x=False)
    if name == "xor_x":
        return _apply_xor(state, spec[1], spec[2], on_x=True)
    if name == "xor_y":
        return _apply_xor(state, spec[1], spec[2], on_x=False)
    raise ValueError(f"unknown builtin unitary {name!r}")


def run_adversary(
    program: AdversaryProgram,
    oracle_variant: str = "batched",
    budget: int = DEFAULT_STATE_BUDGET,
) -> QState:
    """Run rounds of (unitary, then parallel query batch) from all zeros."""
    if oracle_variant not in ("batched", "product"):
        raise ValueError(f"unknown oracle variant {oracle_variant!r}")
    state = initial_state(program.params)
    for rnd in program.rounds:
        if rnd.unitary is not None:
            state = apply_unitary(state, rnd.unitary)
        if rnd.width:
            if oracle_variant == "batched":
                state = cphso_k(state, rnd.width)
            else:
                state = alt_parallel_cphso(state, rnd.width)
        if state.nonzero_terms() > budget:
            raise BudgetExceededError(
                f"state grew past {budget} nonzero amplitudes"
            )
    return state


# -- measurement -------------------------------------------------------------


def measure_probability(state: QState, db_predicate: Callable[[Database], bool]) -> float:
    """Probability that a database measurement satisfies the predicate."""
    verdict: dict[tuple, bool] = {}
    total = 0.0
    for (slots, z, db), a in state.amps.items():
        if db not in verdict:
            verdict[db] = bool(db_predicate(db_as_database(db, state.params)))
        if verdict[db]:
            total += abs(a) ** 2
    return total


def l2_projection(
    state: QState,
    basis_predicate: Callable[[tuple[tuple[int, int], ...], int, Database], bool],
) -> float:
    """L2 mass of the projection onto basis states satisfying the predicate."""
    total = 0.0
    db_cache: dict[tuple, Database] = {}
    for (slots, z, db), a in state.amps.items():
        if db not in db_cache:
            db_cache[db] = db_as_database(db, state.params)
        if basis_predicate(slots, z, db_cache[db]):
            total += abs(a) ** 2
    return float(np.sqrt(total))


def adversary_register_distribution(state: QState) -> dict[tuple, float]:
    """Marginal measurement distribution over (slots, z), database traced out."""
    dist: dict[tuple, float] = {}
    for (slots, z, _), a in state.amps.items():
        key = (slots, z)
        dist[key] = dist.get(key, 0.0) + abs(a) ** 2
    return dist


def total_variation(p: dict, q: dict) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


# -- ground-truth reference --------------------------------------------------


def standard_oracle_reference(
    m: int,
    lam: int,
    program: AdversaryProgram,
    budget_bits: int = DEFAULT_REFERENCE_BUDGET_BITS,
) -> dict[tuple, float]:
    """Average the program over every explicit oracle (phase semantics).

    Returns the averaged measurement distribution over (slots, z).  This
    enumerates all 2^(lam * 2^m) truth tables, so it is only usable at very
    small m and lam; it is the ground truth the compressed simulation is
    checked against.
    """
    if program.params.m != m or program.params.lam != lam:
        raise ValueError("program params disagree with (m, lam)")
    table_bits = lam * (1 << m)
    if table_bits > budget_bits:
        raise BudgetExceededError(
            f"oracle enumeration needs 2^{table_bits} tables, budget is 2^{budget_bits}"
        )
    params = program.params
    dist: dict[tuple, float] = {}
    n_tables = 1 << table_bits
    mask = (1 << lam) - 1
    for table_code in range(n_tables):
        table = [(table_code >> (lam * x)) & mask for x in range(1 << m)]
        amps: dict[tuple, complex] = {(tuple((0, 0) for _ in range(params.slots)), 0): 1.0 + 0.0j}
        for rnd in program.rounds:
            if rnd.unitary is not None:
                amps = _reference_unitary(params, amps, rnd.unitary)
            if rnd.width:
                phased: dict[tuple, complex] = {}
                for (slots, z), a in amps.items():
                    parity = 0
                    for j in range(rnd.width):
                        x, y = slots[j]
                        parity ^= bin(y & table[x]).count("1") & 1
                    phased[(slots, z)] = -a if parity else a
                amps = phased
        for key, a in amps.items():
            dist[key] = dist.get(key, 0.0) + (abs(a) ** 2) / n_tables
    return dist


def _reference_unitary(
    params: SimParams, amps: dict[tuple, complex], spec: UnitarySpec
) -> dict[tuple, complex]:
    """Apply a unitary spec to a database-free (slots, z) state."""
    shim = QState(params, 0, {(slots, z, ()): a for (slots, z), a in amps.items()})
    out = apply_unitary(shim, spec)
    return {(slots, z): a for (slots, z, _), a in out.amps.items()}


def standard_oracle_event_probability(
    m: int,
    lam: int,
    program: AdversaryProgram,
    event: Callable[[tuple[tuple[int, int], ...], int, list[int]], bool],
    budget_bits: int = DEFAULT_REFERENCE_BUDGET_BITS,
) -> float:
    """Probability of a joint (registers, oracle table) event, averaged over
    every explicit oracle.

    ``event(slots, z, table)`` sees the measured adversary registers and the
    oracle's full truth table, so correlations like "the output register
    equals the oracle's value" are expressible, unlike with the averaged
    distribution of :func:`standard_oracle_reference`.
    """
    if program.params.m != m or program.params.lam != lam:
        raise ValueError("program params disagree with (m, lam)")
    table_bits = lam * (1 << m)
    if table_bits > budget_bits:
        raise BudgetExceededError(
            f"oracle enumeration needs 2^{table_bits} tables, budget is 2^{budget_bits}"
        )
    params = program.params
    n_tables = 1 << table_bits
    mask = (1 << lam) - 1
    total = 0.0
    for table_code in range(n_tables):
        table = [(table_code >> (lam * x)) & mask for x in range(1 << m)]
        amps: dict[tuple, complex] = {(tuple((0, 0) for _ in range(params.slots)), 0): 1.0 + 0.0j}
        for rnd in program.rounds:
            if rnd.unitary is not None:
                amps = _reference_unitary(params, amps, rnd.unitary)
            if rnd.width:
                phased: dict[tuple, complex] = {}
                for (slots, z), a in amps.items():
                    parity = 0
                    for j in range(rnd.width):
                        x, y = slots[j]
                        parity ^= bin(y & table[x]).count("1") & 1
                    phased[(slots, z)] = -a if parity else a
                amps = phased
        for (slots, z), a in amps.items():
            if event(slots, z, table):
                total += (abs(a) ** 2) / n_tables
    return total


# -- experiment spec parsing --------------------------------------------------


def unitary_from_spec(doc: dict) -> UnitarySpec:
    """Parse a JSON unitary: {"builtin": name, "slot": i[, "mask": m]} or
    {"matrix": [[[re, im], ...], ...]}."""
    if "builtin" in doc:
        name = doc["builtin"]
        slot = doc.get("slot", 0)
        if name in ("xor_x", "xor_y"):
            return (name, slot, doc["mask"])
        if name in ("hadamard_x", "hadamard_y"):
            return (name, slot)
        raise ValueError(f"unknown builtin unitary {name!r}")
    if "matrix" in doc:
        rows = doc["matrix"]
        return np.array([[complex(re, im) for re, im in row] for row in rows])
    raise ValueError("unitary spec needs 'builtin' or 'matrix'")


def program_from_spec(doc: dict) -> AdversaryProgram:
    """Parse a JSON program: dimensions plus rounds of (unitary, queries)."""
    params = SimParams(
        m=doc["m"],
        lam=doc["lambda"],
        slots=doc.get("slots", 1),
        z_dim=doc.get("z_dim", 1),
    )
    rounds = []
    for rnd in doc.get("rounds", []):
        unitary = unitary_from_spec(rnd["unitary"]) if rnd.get("unitary") else None
        rounds.append(Round(unitary=unitary, width=rnd.get("queries", 0)))
    return AdversaryProgram(params=params, rounds=tuple(rounds))


# -- helpers for experiments and tests ---------------------------------------


def random_state(
    params: SimParams, t: int, rng: np.random.Generator, terms: int = 8
) -> QState:
    """Random normalized state with valid database keys; for testing."""
    amps: dict[BasisKey, complex] = {}
    for _ in range(terms):
        slots = tuple(
            (int(rng.integers(1 << params.m)), int(rng.integers(1 << params.lam)))
            for _ in range(params.slots)
        )
        z = int(rng.integers(params.z_dim))
        size = int(rng.integers(0, t + 1))
        xs = rng.choice(1 << params.m, size=min(size, 1 << params.m), replace=False)
        db = tuple(sorted((int(x), int(rng.integers(1 << params.lam))) for x in xs))
        amps[(slots, z, db)] = complex(rng.normal(), rng.normal())
    norm = np.sqrt(sum(abs(a) ** 2 for a in amps.values()))
    return QState(params, t, {k: a / norm for k, a in amps.items()})


def uniform_query_program(
    m: int, lam: int, queries: int, widths: Iterable[int] | None = None
) -> AdversaryProgram:
    """Hadamard the query inputs each round and query with y = 1.

    ``widths`` optionally groups the queries into parallel batches; by
    default each query is its own round.
    """
    widths = list(widths) if widths is not None else [1] * queries
    if sum(widths) != queries:
        raise ValueError("widths must sum to the query count")
    slots = max(widths) if widths else 1
    params = SimParams(m=m, lam=lam, slots=slots)
    rounds = [Round(unitary=("xor_y", j, 1), width=0) for j in range(slots)]
    for w in widths:
        for j in range(w):
            rounds.append(Round(unitary=("hadamard_x", j), width=0))
        rounds.append(Round(unitary=None, width=w))
    return AdversaryProgram(params=params, rounds=tuple(rounds))
