from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from poswkit import bounds

REL_TOL = Fraction(1, 10**30)


def rel_close(primary, reference) -> bool:
    with mpmath.workprec(bounds.PRECISION_BITS):
        ref = mpmath.mpf(reference.numerator) / mpmath.mpf(reference.denominator)
        if ref == 0:
            return abs(primary) <= mpmath.mpf(1e-60)
        return abs(primary - ref) / abs(ref) <= mpmath.mpf(
            REL_TOL.numerator
        ) / mpmath.mpf(REL_TOL.denominator)


CHAIN_GRID = [
    (0, 1, 8, 4),
    (7, 2, 16, 100),
    (2**30, 4, 128, 2**20),
    (12345, 3, 64, 999),
    (2**40, 22, 256, 2**21 - 1),
]


def test_hseq_bound_cross_check():
    for q, delta, lam, N in CHAIN_GRID:
        assert rel_close(bounds.hseq_bound(q, delta, lam, N), bounds.hseq_bound_reference(q, delta, lam, N))


def test_hseq_bound_edges():
    assert bounds.hseq_bound_reference(0, 3, 16, 10) == Fraction(20, 2**16)
    # monotone in q, delta, N
    base = bounds.hseq_bound_reference(5, 2, 16, 10)
    assert bounds.hseq_bound_reference(6, 2, 16, 10) >= base
    assert bounds.hseq_bound_reference(5, 3, 16, 10) >= base
    assert bounds.hseq_bound_reference(5, 2, 16, 11) >= base


POSW_GRID = [
    (0, Fraction(1, 10), 256, 20),
    (2**40, Fraction(1, 10), 256, 20),
    (1000, Fraction(1, 2), 64, 8),
    (3, Fraction(3, 4), 16, 4),
    (2**20, Fraction(1, 4), 128, 10),
]


def test_posw_bound_cross_check():
    for q, alpha, lam, n in POSW_GRID:
        assert rel_close(bounds.posw_bound(q, alpha, lam, n), bounds.posw_bound_reference(q, alpha, lam, n))


def test_posw_bound_edges():
    # q = 0 leaves only the guess floor 2 k (n+2) / 2^lam
    assert bounds.posw_bound_reference(0, Fraction(1, 2), 64, 8) == Fraction(2 * 8 * 10, 2**64)
    # as alpha -> 1 the first term vanishes and only the q^3 terms remain
    q, lam, n = 10, 64, 8
    near_one = bounds.posw_bound_reference(q, Fraction(999999, 1000000), lam, n)
    rest = (
        Fraction(2 * q**3, 2**lam)
        + Fraction(64 * q**3 * (n + 2) * lam, 2**lam)
        + Fraction(2 * (lam // n) * (n + 2), 2**lam)
    )
    assert 0 <= near_one - rest < Fraction(1, 10**40)


STEP_GRID = [(0, 0, 1, 8), (1, 1, 2, 8), (100, 4, 3, 32), (2**20, 16, 22, 128), (7, 7, 5, 16)]


def test_step_bounds_cross_check():
    for q, k, delta, lam in STEP_GRID:
        pq, pr = bounds.step_bounds(q, k, delta, lam)
        rq, rr = bounds.step_bounds_reference(q, k, delta, lam)
        assert rel_close(pq, rq) and rel_close(pr, rr)


def test_step_bounds_identities():
    pq, pr = bounds.step_bounds(9, 1, 2, 16)
    assert pq == pr  # k = 1 collapses per-round to per-query
    assert bounds.step_bounds(0, 0, 2, 16) == (0, 0)


PATH_GRID = [(0, 1, 8), (5, 2, 16), (2**30, 4, 128), (999, 3, 64), (2**40, 22, 256)]


def test_path_measure_cross_check():
    for q, delta, lam in PATH_GRID:
        assert rel_close(
            bounds.path_measure_bound(q, delta, lam),
            bounds.path_measure_bound_reference(q, delta, lam),
        )


def test_path_measure_is_half_of_hseq_gap():
    # chain bound = 2 * path bound + 2N/2^lam, exactly
    for q, delta, lam, N in CHAIN_GRID:
        assert bounds.hseq_bound_reference(q, delta, lam, N) == 2 * bounds.path_measure_bound_reference(
            q, delta, lam
        ) + Fraction(2 * N, 2**lam)


LUCKY_GRID = [
    (0, Fraction(1, 10), 256, 20),
    (5, Fraction(1, 2), 64, 8),
    (2**20, Fraction(1, 4), 128, 10),
    (3, Fraction(3, 4), 16, 4),
    (2**40, Fraction(9, 10), 256, 16),
]


def test_lucky_bounds_cross_check():
    for q, alpha, lam, n in LUCKY_GRID:
        pq, pt = bounds.lucky_bounds(q, alpha, lam, n)
        rq, rt = bounds.lucky_bounds_reference(q, alpha, lam, n)
        assert rel_close(pq, rq) and rel_close(pt, rt)


def test_lucky_total_is_squared_per_query():
    with mpmath.workprec(bounds.PRECISION_BITS):
        for q, alpha, lam, n in LUCKY_GRID:
            pq, pt = bounds.lucky_bounds(q, alpha, lam, n)
            if q == 0:
                assert pt == 0
            else:
                assert abs((q * pq) ** 2 - pt) <= abs(pt) * mpmath.mpf(2) ** -200


COLLISION_GRID = [(0, 8), (1, 8), (7, 16), (2**20, 64), (2**40, 256)]


def test_collision_bound_cross_check():
    for q, lam in COLLISION_GRID:
        assert rel_close(bounds.collision_bound(q, lam), bounds.collision_bound_reference(q, lam))
    assert bounds.collision_bound_reference(1, 8) == Fraction(1, 256)


ZHANDRY_GRID = [
    (Fraction(0), 1, 8),
    (Fraction(1, 4), 1, 2),
    (Fraction(1, 100), 5, 16),
    (Fraction(9, 10), 3, 32),
    (Fraction(1), 7, 64),
]


def test_zhandry_relation_cross_check():
    for p_prime, k, lam in ZHANDRY_GRID:
        primary = bounds.zhandry_relation(p_prime, k, lam)
        reference = bounds.zhandry_relation_reference(p_prime, k, lam)
        assert rel_close(primary, reference)
    # p' = 0 collapses to k / 2^lam
    assert rel_close(bounds.zhandry_relation(0, 4, 16), Fraction(4, 2**16))


ITERHASH_GRID = [
    (1, 0, 1, 16),
    (10, 5, 100, 32),
    (2**10, 2**20, 2**12, 128),
    (3, 7, 9, 24),
    (2**16, 2**30, 2**20, 256),
]


def test_iterhash_cross_check():
    for N, q, T, lam in ITERHASH_GRID:
        assert rel_close(
            bounds.iterhash_bound(N, q, T, lam), bounds.iterhash_bound_reference(N, q, T, lam)
        )


def test_iterhash_pole_guard():
    with pytest.raises(ValueError):
        bounds.iterhash_bound(2**8, 1, 1, 8)
    with pytest.raises(ValueError):
        bounds.iterhash_bound_reference(2**8 + 5, 1, 1, 8)
    # N=1, q=0: degenerate small value 1/2^lam + 1/(2^lam - 1)
    v = bounds.iterhash_bound_reference(1, 0, 1, 16)
    assert v == Fraction(1, 2**16) + Fraction(1, 2**16 - 1)


def test_grover_bound_constant_slot():
    assert bounds.grover_bound_reference(4, 8) == Fraction(16, 256)
    assert bounds.grover_bound_reference(4, 8, constant=2.5) == Fraction(5, 2) * Fraction(16, 256)


@settings(max_examples=60, deadline=None)
@given(
    st.integers(min_value=0, max_value=2**20),
    st.integers(min_value=1, max_value=2**20),
    st.integers(min_value=1, max_value=64),
    st.integers(min_value=8, max_value=256),
)
def test_bounds_nonnegative_and_monotone_in_q(q, N, delta, lam):
    a = bounds.hseq_bound_reference(q, delta, lam, N)
    b = bounds.hseq_bound_reference(q + 1, delta, lam, N)
    assert 0 <= a <= b
    c = bounds.collision_bound_reference(q, lam)
    d = bounds.collision_bound_reference(q + 1, lam)
    assert 0 <= c <= d


def test_clamp():
    assert bounds.clamp(Fraction(5, 2)) == 1.0
    assert bounds.clamp(Fraction(1, 4)) == 0.25
    assert bounds.clamp(-1) == 0.0


MAX_Q_CASES = [
    ("collision", {"lam": 128}, 40),
    ("hseq", {"delta": 22, "lam": 256, "N": 2**21 - 1}, 80),
    ("posw", {"alpha": Fraction(1, 10), "lam": 256, "n": 20}, 30),
    ("path", {"delta": 12, "lam": 192}, 64),
    ("grover", {"lam": 128}, 0),
]


def test_max_secure_q_round_trip():
    for name, params, target in MAX_Q_CASES:
        r = bounds.max_secure_q(name, params, target)
        assert r is not None
        with mpmath.workprec(bounds.PRECISION_BITS):
            threshold = mpmath.power(2, -target)
            assert bounds.evaluate_bound(name, r, params) <= threshold
            assert bounds.evaluate_bound(name, r + 1, params) > threshold
    # targets reachable with a real query budget on the chain bounds
    assert bounds.max_secure_q("collision", {"lam": 128}, 40) >= 2**29
    assert bounds.max_secure_q("grover", {"lam": 128}, 0) == 2**64


def test_max_secure_q_infeasible_floor():
    # the q-independent floor 2N/2^lam already exceeds the target
    assert bounds.max_secure_q("hseq", {"delta": 2, "lam": 16, "N": 2**12}, 8) is None


def test_max_secure_q_larger_lambda_never_hurts():
    for lam_small, lam_big in ((64, 128), (128, 256)):
        small = bounds.max_secure_q("collision", {"lam": lam_small}, 20)
        big = bounds.max_secure_q("collision", {"lam": lam_big}, 20)
        assert big >= small


def test_unknown_bound_rejected():
    with pytest.raises(ValueError):
        bounds.evaluate_bound("nope", 1, {})
