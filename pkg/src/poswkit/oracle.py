"""Random-oracle abstraction and the bit-exact input encodings.

Two modes:

* ``real`` — SHA-256 truncated to ``lam`` output bits.  The bitstring input
  is framed before hashing as a 16-bit big-endian bit count followed by the
  MSB-first packed payload, so inputs of different bit lengths can never
  collide with each other after byte padding.
* ``toy`` — an explicit truth table over ``{0,1}^{<=m}``, derived from a
  64-bit seed by a counter-mode generator: the output for an input with
  canonical index ``i`` (empty string = 0, then by length and numeric value:
  ``i = 2^len - 1 + int(value)``) is the first ``lam`` bits of
  ``SHA256(seed_be8 || i_be8)``.  The table is a total function on the
  domain, reproducible from the seed alone.

Node identifiers inside hash inputs use a fixed ``lam``-bit field holding
the node's heap index (root = 1, ``index(v||b) = 2*index(v) + b``); the
reserved challenge-row marker is the unused index 0, i.e. the all-zero
field.  Fixed-width fields keep every hash input parseable at ``lam``-bit
boundaries.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from .bits import bits_from_int, check_bits, pack_bits, unpack_bits

REAL_INPUT_BIT_LIMIT = 0xFFFF  # the 16-bit framing header caps real-mode inputs


class ToyDomainError(ValueError):
    """Raised when a toy-mode oracle is queried outside its domain."""


class EncodingError(ValueError):
    """Raised when a node identifier does not fit its fixed-width field."""


@dataclass(frozen=True)
class OracleConfig:
    """Oracle parameters. ``lam`` is the output length in bits."""

    mode: str = "real"
    lam: int = 256
    toy_input_bits: int | None = None
    toy_seed: int | None = None

    def __post_init__(self) -> None:
        if self.mode == "real":
            if not 1 <= self.lam <= 256:
                raise ValueError("real mode requires 1 <= lam <= 256")
        elif self.mode == "toy":
            if not 1 <= self.lam <= 8:
                raise ValueError("toy mode requires 1 <= lam <= 8")
            if self.toy_input_bits is None or not 1 <= self.toy_input_bits <= 12:
                raise ValueError("toy mode requires 1 <= toy_input_bits <= 12")
            if self.toy_seed is None or not 0 <= self.toy_seed < (1 << 64):
                raise ValueError("toy mode requires a 64-bit toy_seed")
        else:
            raise ValueError(f"unknown oracle mode: {self.mode!r}")

    def to_json(self) -> str:
        doc = {"version": 1, "mode": self.mode, "lambda": self.lam}
        if self.mode == "toy":
            doc["toy_input_bits"] = self.toy_input_bits
            doc["toy_seed"] = self.toy_seed
        return json.dumps(doc, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "OracleConfig":
        doc = json.loads(text)
        if not isinstance(doc, dict) or "mode" not in doc or "lambda" not in doc:
            raise ValueError("oracle config must carry 'mode' and 'lambda'")
        return cls(
            mode=doc["mode"],
            lam=doc["lambda"],
            toy_input_bits=doc.get("toy_input_bits"),
            toy_seed=doc.get("toy_seed"),
        )


@dataclass(frozen=True)
class Statement:
    """A statement chi to be timestamped; exactly ``lam`` bits."""

    chi: str

    def __post_init__(self) -> None:
        check_bits(self.chi)


def check_statement(cfg: OracleConfig, chi: str) -> str:
    check_bits(chi)
    if len(chi) != cfg.lam:
        raise ValueError(f"statement must be exactly {cfg.lam} bits, got {len(chi)}")
    return chi


def _toy_output(seed: int, index: int, lam: int) -> str:
    block = hashlib.sha256(seed.to_bytes(8, "big") + index.to_bytes(8, "big")).digest()
    return unpack_bits(block, lam)


def _toy_index(bits: str) -> int:
    # Canonical enumeration of {0,1}^{<=m}: empty, 0, 1, 00, 01, 10, 11, ...
    return ((1 << len(bits)) - 1) + (int(bits, 2) if bits else 0)


def oracle_hash(cfg: OracleConfig, bits: str) -> str:
    """Evaluate the oracle on a bitstring; returns a ``lam``-bit label."""
    check_bits(bits)
    if cfg.mode == "toy":
        if len(bits) > cfg.toy_input_bits:
            raise ToyDomainError(
                f"toy oracle domain is {{0,1}}^<= {cfg.toy_input_bits}, got {len(bits)} bits"
            )
        return _toy_output(cfg.toy_seed, _toy_index(bits), cfg.lam)
    if len(bits) > REAL_INPUT_BIT_LIMIT:
        raise ValueError(f"input exceeds {REAL_INPUT_BIT_LIMIT} bits")
    framed = len(bits).to_bytes(2, "big") + pack_bits(bits)
    return unpack_bits(hashlib.sha256(framed).digest(), cfg.lam)


class Oracle:
    """Callable oracle bound to a config.  Stateless; safe to share."""

    def __init__(self, cfg: OracleConfig) -> None:
        self.cfg = cfg

    @property
    def lam(self) -> int:
        return self.cfg.lam

    def hash(self, bits: str) -> str:
        return oracle_hash(self.cfg, bits)


class RecordingOracle(Oracle):
    """Oracle wrapper that records (input, output) pairs in call order.

    Duplicate inputs are recorded once (first call wins), matching the
    partial-function view of a query transcript.
    """

    def __init__(self, cfg: OracleConfig) -> None:
        super().__init__(cfg)
        self.transcript: list[tuple[str, str]] = []
        self._seen: dict[str, str] = {}

    def hash(self, bits: str) -> str:
        out = super().hash(bits)
        if bits not in self._seen:
            self._seen[bits] = out
            self.transcript.append((bits, out))
        return out


def heap_index(v: str) -> int:
    """Heap index of a tree node given as its bit path from the root."""
    check_bits(v)
    idx = 1
    for b in v:
        idx = 2 * idx + int(b)
    return idx


def encode_node(v: str, lam: int) -> str:
    """Fixed ``lam``-bit field holding the node's heap index."""
    idx = heap_index(v)
    if idx >= (1 << lam):
        raise EncodingError(f"heap index {idx} does not fit in {lam} bits")
    return bits_from_int(idx, lam)


def encode_marker(lam: int) -> str:
    """The challenge-row marker field (reserved all-zero index)."""
    return "0" * lam


def encode_label_input(chi: str, node: str | None, labels: list[str] | tuple[str, ...]) -> str:
    """chi || node field || labels, all fields ``lam`` = len(chi) bits wide.

    ``node=None`` selects the challenge-row marker.
    """
    lam = len(check_bits(chi))
    field = encode_marker(lam) if node is None else encode_node(node, lam)
    for lbl in labels:
        check_bits(lbl, lam)
    return chi + field + "".join(labels)
