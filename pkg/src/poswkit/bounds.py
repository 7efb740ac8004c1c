"""Closed-form security bounds, evaluated at high precision.

Every bound has two arithmetic paths: the primary one on mpmath big
floats (250-bit mantissa), and a reference one built from exact rationals,
using fixed-point integer square roots where a term is irrational.  The
two paths share no code beyond the parameter dictionary, so agreement to
1e-30 relative error is a meaningful cross-check, which the test suite
enforces.

Raw values may exceed 1: the formulas are vacuous at toy parameters, and
callers that report probabilities are expected to show both the raw value
and the clamped one (see :func:`clamp`).
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath

PRECISION_BITS = 250
_REF_SQRT_BITS = 320


def _mp(value) -> mpmath.mpf:
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / mpmath.mpf(value.denominator)
    return mpmath.mpf(value)


def _workprec():
    return mpmath.workprec(PRECISION_BITS)


def _frac(value) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


def _sqrt_fixed(x: Fraction) -> Fraction:
    """Fixed-point square root of a nonnegative rational (reference path)."""
    if x < 0:
        raise ValueError("square root of a negative value")
    scaled = (x.numerator << (2 * _REF_SQRT_BITS)) // x.denominator
    return Fraction(math.isqrt(scaled), 1 << _REF_SQRT_BITS)


def clamp(value) -> float:
    return float(min(max(value, 0), 1))


def _require(name: str, value, minimum) -> None:
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")


def _check_alpha(alpha) -> None:
    if not 0 < _frac(alpha) < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")


# -- chain-finding and protocol bounds ---------------------------------------


def hseq_bound(q: int, delta: int, lam: int, N: int) -> mpmath.mpf:
    """Probability bound for producing a hash chain of length N:
    64 q^3 delta lam / 2^lam + 2 N / 2^lam."""
    _require("q", q, 0)
    _require("delta", delta, 1)
    _require("lam", lam, 1)
    _require("N", N, 0)
    with _workprec():
        pow2 = mpmath.power(2, lam)
        return (64 * _mp(q) ** 3 * delta * lam) / pow2 + (2 * _mp(N)) / pow2


def hseq_bound_reference(q: int, delta: int, lam: int, N: int) -> Fraction:
    return Fraction(64 * q**3 * delta * lam + 2 * N, 2**lam)


def posw_bound(q: int, alpha, lam: int, n: int) -> mpmath.mpf:
    """Forgery bound for the non-interactive protocol:
    32 q^2 (1-a)^(lam//n) + 2 q^3/2^lam + 64 q^3 (n+2) lam/2^lam
    + 2 (lam//n)(n+2)/2^lam."""
    _require("q", q, 0)
    _require("lam", lam, 1)
    _require("n", n, 1)
    _check_alpha(alpha)
    k = lam // n
    with _workprec():
        a = _mp(_frac(alpha))
        pow2 = mpmath.power(2, lam)
        return (
            32 * _mp(q) ** 2 * (1 - a) ** k
            + 2 * _mp(q) ** 3 / pow2
            + 64 * _mp(q) ** 3 * (n + 2) * lam / pow2
            + 2 * k * (n + 2) / pow2
        )


def posw_bound_reference(q: int, alpha, lam: int, n: int) -> Fraction:
    a = _frac(alpha)
    k = lam // n
    pow2 = Fraction(1, 2**lam)
    return (
        32 * q**2 * (1 - a) ** k
        + 2 * q**3 * pow2
        + 64 * q**3 * (n + 2) * lam * pow2
        + 2 * k * (n + 2) * pow2
    )


def step_bounds(q: int, k: int, delta: int, lam: int) -> tuple[mpmath.mpf, mpmath.mpf]:
    """(per-query, per-round) growth bounds:
    4 sqrt(q delta lam + k delta lam) / 2^(lam/2), and k times that."""
    _require("q", q, 0)
    _require("k", k, 0)
    _require("delta", delta, 1)
    _require("lam", lam, 1)
    with _workprec():
        per_query = 4 * mpmath.sqrt(_mp((q + k) * delta * lam)) / mpmath.power(2, _mp(lam) / 2)
        return per_query, k * per_query


def step_bounds_reference(q: int, k: int, delta: int, lam: int) -> tuple[Fraction, Fraction]:
    per_query = 4 * _sqrt_fixed(Fraction((q + k) * delta * lam, 2**lam))
    return per_query, k * per_query


def path_measure_bound(q: int, delta: int, lam: int) -> mpmath.mpf:
    """Probability bound for measuring a long-chain database:
    32 q^3 delta lam / 2^lam."""
    _require("q", q, 0)
    _require("delta", delta, 1)
    _require("lam", lam, 1)
    with _workprec():
        return 32 * _mp(q) ** 3 * delta * lam / mpmath.power(2, lam)


def path_measure_bound_reference(q: int, delta: int, lam: int) -> Fraction:
    return Fraction(32 * q**3 * delta * lam, 2**lam)


def lucky_bounds(q: int, alpha, lam: int, n: int) -> tuple[mpmath.mpf, mpmath.mpf]:
    """(per-query, total) lucky-database bounds:
    4 (1-a)^((lam//n)/2) per query, and 16 q^2 (1-a)^(lam//n) in total."""
    _require("q", q, 0)
    _require("lam", lam, 1)
    _require("n", n, 1)
    _check_alpha(alpha)
    k = lam // n
    with _workprec():
        a = _mp(_frac(alpha))
        per_query = 4 * mpmath.sqrt((1 - a) ** k)
        total = 16 * _mp(q) ** 2 * (1 - a) ** k
        return per_query, total


def lucky_bounds_reference(q: int, alpha, lam: int, n: int) -> tuple[Fraction, Fraction]:
    a = _frac(alpha)
    k = lam // n
    per_query = 4 * _sqrt_fixed((1 - a) ** k)
    total = 16 * q**2 * (1 - a) ** k
    return per_query, total


def collision_bound(q: int, lam: int) -> mpmath.mpf:
    """Database-collision bound q^3 / 2^lam."""
    _require("q", q, 0)
    _require("lam", lam, 1)
    with _workprec():
        return _mp(q) ** 3 / mpmath.power(2, lam)


def collision_bound_reference(q: int, lam: int) -> Fraction:
    return Fraction(q**3, 2**lam)


def zhandry_relation(p_prime, k: int, lam: int) -> mpmath.mpf:
    """Upper bound on the real-oracle success probability p given the
    recorded-database probability p': (sqrt(p') + sqrt(k/2^lam))^2."""
    _require("k", k, 0)
    _require("lam", lam, 1)
    if _frac(p_prime) < 0:
        raise ValueError("p_prime must be nonnegative")
    with _workprec():
        return (mpmath.sqrt(_mp(_frac(p_prime))) + mpmath.sqrt(_mp(k) / mpmath.power(2, lam))) ** 2


def zhandry_relation_reference(p_prime, k: int, lam: int) -> Fraction:
    root = _sqrt_fixed(_frac(p_prime)) + _sqrt_fixed(Fraction(k, 2**lam))
    return root * root


def iterhash_bound(N: int, q: int, T: int, lam: int) -> mpmath.mpf:
    """Iterated-hashing shortcut bound:
    N^2/2^lam + 1/(2^lam - N) + sqrt(48 lam N^4 q^2 T / 2^(lam/2))."""
    _require("N", N, 1)
    _require("q", q, 0)
    _require("T", T, 0)
    _require("lam", lam, 1)
    if N >= 2**lam:
        raise ValueError("need N < 2^lam (pole in the second term)")
    with _workprec():
        pow2 = mpmath.power(2, lam)
        return (
            _mp(N) ** 2 / pow2
            + 1 / (pow2 - N)
            + mpmath.sqrt(48 * lam * _mp(N) ** 4 * _mp(q) ** 2 * T / mpmath.power(2, _mp(lam) / 2))
        )


def iterhash_bound_reference(N: int, q: int, T: int, lam: int) -> Fraction:
    if N >= 2**lam:
        raise ValueError("need N < 2^lam (pole in the second term)")
    # 2^(lam/2) = sqrt(2^lam) exactly under the fixed-point root.
    radicand = Fraction(48 * lam * N**4 * q**2 * T) / _sqrt_fixed(Fraction(2**lam))
    return Fraction(N**2, 2**lam) + Fraction(1, 2**lam - N) + _sqrt_fixed(radicand)


def grover_bound(q: int, lam: int, constant: float = 1.0) -> mpmath.mpf:
    """Zero-preimage recording bound, asymptotic shape constant * q^2 / 2^lam.

    The underlying statement is O(q^2 / 2^lam); the constant is a
    configurable placeholder defaulting to 1, not a derived value, so
    treat results as shape-only.
    """
    _require("q", q, 0)
    _require("lam", lam, 1)
    with _workprec():
        return _mp(_frac(constant)) * _mp(q) ** 2 / mpmath.power(2, lam)


def grover_bound_reference(q: int, lam: int, constant: float = 1.0) -> Fraction:
    return _frac(constant) * Fraction(q**2, 2**lam)


# -- registry and parameter search -------------------------------------------

# name -> (evaluate(q, params) primary, reference) for the q-monotone bounds
BOUNDS: dict[str, tuple] = {
    "hseq": (
        lambda q, p: hseq_bound(q, p["delta"], p["lam"], p["N"]),
        lambda q, p: hseq_bound_reference(q, p["delta"], p["lam"], p["N"]),
    ),
    "posw": (
        lambda q, p: posw_bound(q, p["alpha"], p["lam"], p["n"]),
        lambda q, p: posw_bound_reference(q, p["alpha"], p["lam"], p["n"]),
    ),
    "path": (
        lambda q, p: path_measure_bound(q, p["delta"], p["lam"]),
        lambda q, p: path_measure_bound_reference(q, p["delta"], p["lam"]),
    ),
    "collision": (
        lambda q, p: collision_bound(q, p["lam"]),
        lambda q, p: collision_bound_reference(q, p["lam"]),
    ),
    "lucky-total": (
        lambda q, p: lucky_bounds(q, p["alpha"], p["lam"], p["n"])[1],
        lambda q, p: lucky_bounds_reference(q, p["alpha"], p["lam"], p["n"])[1],
    ),
    "grover": (
        lambda q, p: grover_bound(q, p["lam"], p.get("constant", 1.0)),
        lambda q, p: grover_bound_reference(q, p["lam"], p.get("constant", 1.0)),
    ),
    "iterhash": (
        lambda q, p: iterhash_bound(p["N"], q, p["T"], p["lam"]),
        lambda q, p: iterhash_bound_reference(p["N"], q, p["T"], p["lam"]),
    ),
}


def evaluate_bound(name: str, q: int, params: dict) -> mpmath.mpf:
    if name not in BOUNDS:
        raise ValueError(f"unknown bound {name!r}; choose from {sorted(BOUNDS)}")
    return BOUNDS[name][0](q, params)


def evaluate_bound_reference(name: str, q: int, params: dict):
    if name not in BOUNDS:
        raise ValueError(f"unknown bound {name!r}; choose from {sorted(BOUNDS)}")
    return BOUNDS[name][1](q, params)


def max_secure_q(bound_name: str, params: dict, target_security_bits: int) -> int | None:
    """Largest q with bound(q) <= 2^-target, or None when even q=0 fails.

    Binary search over the q-monotone bound; the round trip
    bound(r) <= 2^-target < bound(r+1) is what the tests pin down.
    """
    if target_security_bits < 0:
        raise ValueError("target_security_bits must be >= 0")
    with _workprec():
        threshold = mpmath.power(2, -target_security_bits)

        def ok(q: int) -> bool:
            return evaluate_bound(bound_name, q, params) <= threshold

        if not ok(0):
            return None
        lo, hi = 0, 1
        while ok(hi):
            lo, hi = hi, hi * 2
            if hi > 1 << 512:  # formula floor reached; effectively unbounded
                return hi
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if ok(mid):
                lo = mid
            else:
                hi = mid
        return lo
