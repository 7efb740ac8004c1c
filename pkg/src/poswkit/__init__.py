"""Sequential-work proofs, hash-database audits, bounds, and an exact
compressed-oracle simulator."""

from .oracle import Oracle, OracleConfig, RecordingOracle, Statement
from .posw import Proof, VerifyResult, solve, verify
from .hgraph import Database

__all__ = [
    "Oracle",
    "OracleConfig",
    "RecordingOracle",
    "Statement",
    "Proof",
    "VerifyResult",
    "solve",
    "verify",
    "Database",
]
