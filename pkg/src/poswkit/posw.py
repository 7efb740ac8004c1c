"""Non-interactive proofs of sequential work over the skeleton graph.

The prover labels every node (each label hashes the statement, the node's
fixed-width identifier, and its parents' labels), derives challenge leaves
from a hash of the root label, and opens the sibling path of every
challenged leaf.  The verifier re-derives the challenges, recomputes each
challenged leaf's label from the opened left siblings, and folds the path
back up to the root.

Binary proof format (normative, big-endian / MSB-first bit packing)::

    magic "PSW1" | u8 n | u16 lam | chi (lam bits) | root label (lam bits)
    | u8 k | k records of [challenge (n bits) | n sibling labels (lam bits each)]

followed by zero padding to a byte boundary.  ``k`` always equals
``lam // n``; the field is stored for self-description and checked on
decode.  A JSON mirror is provided for debugging only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from . import dag
from .bits import BitReader, BitWriter, check_bits
from .oracle import Oracle, OracleConfig, check_statement, encode_label_input

PROOF_MAGIC = b"PSW1"

REASON_MALFORMED = "malformed-proof"
REASON_CHALLENGE_MISMATCH = "challenge-mismatch"
REASON_LEAF_INCONSISTENT = "leaf-inconsistent"  # reserved; the fused fold
# recomputes the leaf label from the opening, so tampering surfaces as a
# root mismatch instead
REASON_ROOT_MISMATCH = "root-mismatch"


class ProofCodecError(ValueError):
    """Raised when proof bytes cannot be parsed."""


@dataclass(frozen=True)
class Proof:
    """Root label, challenge leaves, and one sibling path per challenge."""

    root_label: str
    challenges: tuple[str, ...]
    openings: tuple[tuple[str, ...], ...]


@dataclass(frozen=True)
class VerifyResult:
    accepted: bool
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.accepted


def challenge_count(lam: int, n: int) -> int:
    if lam < n:
        raise ValueError(f"need lam >= n to derive challenges (lam={lam}, n={n})")
    return lam // n


def _check_params(cfg: OracleConfig, n: int) -> None:
    dag.node_count(n)
    if n + 1 > cfg.lam:
        raise ValueError(f"need n+1 <= lam for node encoding (n={n}, lam={cfg.lam})")
    challenge_count(cfg.lam, n)


def compute_labels(cfg: OracleConfig, n: int, chi: str, oracle: Oracle | None = None) -> dict[str, str]:
    """Label every node, visiting parents before children of the traversal.

    An injected ``oracle`` (e.g. a RecordingOracle) sees exactly one call
    per node, in labeling order.
    """
    _check_params(cfg, n)
    check_statement(cfg, chi)
    h = oracle if oracle is not None else Oracle(cfg)
    labels: dict[str, str] = {}
    for v in dag.labeling_order(n):
        parent_labels = [labels[p] for p in dag.parents(n, v)]
        labels[v] = h.hash(encode_label_input(chi, v, parent_labels))
    return labels


def split_challenges(rand: str, n: int) -> list[str]:
    """Slice a label into consecutive n-bit challenges, dropping leftovers."""
    check_bits(rand)
    k = challenge_count(len(rand), n)
    return [rand[i * n : (i + 1) * n] for i in range(k)]


def derive_challenges(
    cfg: OracleConfig, chi: str, root_label: str, n: int, oracle: Oracle | None = None
) -> list[str]:
    """Fiat-Shamir challenges: hash the statement-bound root label."""
    check_statement(cfg, chi)
    check_bits(root_label, cfg.lam)
    h = oracle if oracle is not None else Oracle(cfg)
    rand = h.hash(encode_label_input(chi, None, [root_label]))
    return split_challenges(rand, n)


def mt_reveal(labels: dict[str, str], leaf: str) -> list[str]:
    """Sibling labels on the leaf's path to the root, shallowest first."""
    check_bits(leaf)
    return [labels[leaf[:j] + ("1" if leaf[j] == "0" else "0")] for j in range(len(leaf))]


def solve(cfg: OracleConfig, n: int, chi: str, oracle: Oracle | None = None) -> Proof:
    labels = compute_labels(cfg, n, chi, oracle=oracle)
    root = labels[""]
    challenges = derive_challenges(cfg, chi, root, n, oracle=oracle)
    openings = tuple(tuple(mt_reveal(labels, c)) for c in challenges)
    return Proof(root_label=root, challenges=tuple(challenges), openings=openings)


def _structure_ok(cfg: OracleConfig, n: int, proof: Proof) -> bool:
    lam = cfg.lam
    try:
        k = challenge_count(lam, n)
    except ValueError:
        return False
    if len(proof.root_label) != lam or any(c not in "01" for c in proof.root_label):
        return False
    if len(proof.challenges) != k or len(proof.openings) != k:
        return False
    for c, opening in zip(proof.challenges, proof.openings):
        if len(c) != n or any(b not in "01" for b in c):
            return False
        if len(opening) != n:
            return False
        if any(len(lbl) != lam or any(b not in "01" for b in lbl) for lbl in opening):
            return False
    return True


def verify(
    cfg: OracleConfig, n: int, chi: str, proof: Proof, oracle: Oracle | None = None
) -> VerifyResult:
    """Check a proof: challenge re-derivation, then per-challenge path folds.

    The challenged leaf's label is not transmitted; it is recomputed from
    the opened left siblings and folded upward, so a single pass covers
    both leaf-local consistency and the path opening.
    """
    _check_params(cfg, n)
    check_statement(cfg, chi)
    if not _structure_ok(cfg, n, proof):
        return VerifyResult(False, REASON_MALFORMED)
    h = oracle if oracle is not None else Oracle(cfg)

    rand = h.hash(encode_label_input(chi, None, [proof.root_label]))
    if split_challenges(rand, n) != list(proof.challenges):
        return VerifyResult(False, REASON_CHALLENGE_MISMATCH)

    for c, opening in zip(proof.challenges, proof.openings):
        # Left siblings on the path are exactly the leaf's parents.
        parent_labels = [opening[j] for j in range(n) if c[j] == "1"]
        cur = h.hash(encode_label_input(chi, c, parent_labels))
        for depth in range(n - 1, -1, -1):
            sibling = opening[depth]
            if c[depth] == "0":
                left, right = cur, sibling
            else:
                left, right = sibling, cur
            cur = h.hash(encode_label_input(chi, c[:depth], [left, right]))
        if cur != proof.root_label:
            return VerifyResult(False, REASON_ROOT_MISMATCH)
    return VerifyResult(True)


# ---------------------------------------------------------------------------
# Proof codec


def encode_proof(cfg: OracleConfig, n: int, chi: str, proof: Proof) -> bytes:
    check_statement(cfg, chi)
    if not _structure_ok(cfg, n, proof):
        raise ProofCodecError("proof structure inconsistent with (n, lam)")
    k = challenge_count(cfg.lam, n)
    if k > 0xFF:
        raise ProofCodecError(f"challenge count {k} does not fit the u8 field")
    w = BitWriter()
    for byte in PROOF_MAGIC:
        w.write_int(byte, 8)
    w.write_int(n, 8)
    w.write_int(cfg.lam, 16)
    w.write(chi)
    w.write(proof.root_label)
    w.write_int(k, 8)
    for c, opening in zip(proof.challenges, proof.openings):
        w.write(c)
        for lbl in opening:
            w.write(lbl)
    return w.getvalue()


def decode_proof(data: bytes) -> tuple[int, int, str, Proof]:
    """Parse proof bytes; returns (n, lam, chi, proof)."""
    r = BitReader(data)
    try:
        magic = bytes(r.read_int(8) for _ in range(4))
        if magic != PROOF_MAGIC:
            raise ProofCodecError(f"bad magic {magic!r}")
        n = r.read_int(8)
        lam = r.read_int(16)
        if n < 1 or lam < 1:
            raise ProofCodecError("bad header fields")
        k = challenge_count(lam, n) if lam >= n else 0
        chi = r.read(lam)
        root = r.read(lam)
        stored_k = r.read_int(8)
        if lam < n or stored_k != k:
            raise ProofCodecError(f"challenge count field {stored_k} != lam//n")
        challenges = []
        openings = []
        for _ in range(k):
            challenges.append(r.read(n))
            openings.append(tuple(r.read(lam) for _ in range(n)))
    except ValueError as exc:  # BitReader underflow
        raise ProofCodecError(str(exc)) from exc
    if r.remaining() >= 8 or not r.padding_is_zero():
        raise ProofCodecError("trailing bytes or nonzero padding")
    return n, lam, chi, Proof(root, tuple(challenges), tuple(openings))


def proof_to_json(cfg: OracleConfig, n: int, chi: str, proof: Proof) -> str:
    doc = {
        "format": "posw-proof",
        "n": n,
        "lambda": cfg.lam,
        "chi": chi,
        "root_label": proof.root_label,
        "challenges": list(proof.challenges),
        "openings": [list(op) for op in proof.openings],
    }
    return json.dumps(doc, indent=2)
