#!/usr/bin/env python3
"""Regenerate the committed fixture and golden files.

The outputs are frozen test inputs: rerunning this script must be a no-op
unless the normative formats themselves change.  Golden values are
cross-checked elsewhere (tests recompute them along independent paths);
this script only serializes.
"""

from __future__ import annotations

import hashlib
import json
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))

from poswkit import coloring, hgraph, posw  # noqa: E402
from poswkit.oracle import OracleConfig, encode_node  # noqa: E402

FIXTURES = ROOT / "fixtures"
TESTDATA = ROOT / "tests" / "data"

# The running example database: eight 5-bit inputs mapping onto all eight
# 3-bit outputs, whose order-respecting walk structure peaks at length 5.
EXAMPLE_DB_ENTRIES = [
    ("00000", "000"),
    ("00010", "001"),
    ("00101", "010"),
    ("00110", "011"),
    ("01001", "100"),
    ("01100", "101"),
    ("10010", "110"),
    ("11001", "111"),
]

# Toy oracle able to drive the full protocol at n=2: inputs reach
# (n+2)*lam = 12 bits, the domain maximum.
TOY_CFG = OracleConfig(mode="toy", lam=3, toy_input_bits=12, toy_seed=7)
TOY_CHI = "101"
TOY_DEPTH = 2

COLOR_CHI = "10100101"  # 8-bit statement for the coloring scenarios
COLOR_LAM = 8


def color_labels() -> dict[str, str]:
    return {
        "root": "00000001",
        "0": "00000010",
        "1": "00000011",
        "00": "00000100",
        "01": "00000101",
        "010": "00000110",
        "011": "00000111",
        "10": "00001000",
        "11": "00001001",
    }


def make_colsubtree_db() -> hgraph.Database:
    """Three red mechanisms: bad node field (1), missing entry (00),
    parent-label mismatch (010)."""
    lab = color_labels()
    chi = COLOR_CHI
    entries = [
        (chi + encode_node("", 8) + lab["0"] + lab["1"], lab["root"]),
        (chi + encode_node("11", 8) + lab["10"] + lab["11"], lab["1"]),  # wrong field
        (chi + encode_node("0", 8) + lab["00"] + lab["01"], lab["0"]),
        (chi + encode_node("01", 8) + lab["010"] + lab["011"], lab["01"]),
        (chi + encode_node("010", 8) + "11111111", lab["010"]),  # mismatched parent
        (chi + encode_node("011", 8) + lab["00"] + lab["010"], lab["011"]),
    ]
    return hgraph.Database(lam=COLOR_LAM, entries=tuple(entries))


def make_colmt_db() -> hgraph.Database:
    """Green path to leaf 011; node 00 red, so the 000 path fails."""
    lab = color_labels()
    chi = COLOR_CHI
    entries = [
        (chi + encode_node("", 8) + lab["0"] + lab["1"], lab["root"]),
        (chi + encode_node("0", 8) + lab["00"] + lab["01"], lab["0"]),
        (chi + encode_node("01", 8) + lab["010"] + lab["011"], lab["01"]),
        (chi + encode_node("010", 8) + lab["00"], lab["010"]),
        (chi + encode_node("011", 8) + lab["00"] + lab["010"], lab["011"]),
    ]
    return hgraph.Database(lam=COLOR_LAM, entries=tuple(entries))


def main() -> None:
    FIXTURES.mkdir(exist_ok=True)
    TESTDATA.mkdir(parents=True, exist_ok=True)

    db = hgraph.Database(lam=3, entries=tuple(EXAMPLE_DB_ENTRIES))
    (FIXTURES / "example_hseq_db.json").write_text(db.to_json() + "\n")

    (FIXTURES / "toy_oracle.json").write_text(TOY_CFG.to_json() + "\n")

    (FIXTURES / "colsubtree_db.json").write_text(make_colsubtree_db().to_json() + "\n")
    (FIXTURES / "colmt_db.json").write_text(make_colmt_db().to_json() + "\n")

    labels = posw.compute_labels(TOY_CFG, TOY_DEPTH, TOY_CHI)
    (TESTDATA / "golden_labels_n2.json").write_text(
        json.dumps(
            {
                "lambda": TOY_CFG.lam,
                "toy_input_bits": TOY_CFG.toy_input_bits,
                "toy_seed": TOY_CFG.toy_seed,
                "n": TOY_DEPTH,
                "chi": TOY_CHI,
                "labels": {node if node else "": lbl for node, lbl in sorted(labels.items())},
            },
            indent=2,
        )
        + "\n"
    )

    proof = posw.solve(TOY_CFG, TOY_DEPTH, TOY_CHI)
    blob = posw.encode_proof(TOY_CFG, TOY_DEPTH, TOY_CHI, proof)
    (TESTDATA / "golden_proof_n2.bin").write_bytes(blob)
    (TESTDATA / "golden_proof_n2.json").write_text(
        posw.proof_to_json(TOY_CFG, TOY_DEPTH, TOY_CHI, proof) + "\n"
    )
    print("proof bytes:", blob.hex(), "sha256:", hashlib.sha256(blob).hexdigest())

    grid = {
        "bound": "posw",
        "points": [
            {"q": 0, "alpha": 0.25, "lam": 128, "n": 10},
            {"q": 1024, "alpha": 0.25, "lam": 128, "n": 10},
            {"q": 2**30, "alpha": 0.25, "lam": 128, "n": 10},
        ],
    }
    (TESTDATA / "bounds_grid.json").write_text(json.dumps(grid, indent=2) + "\n")
    import subprocess

    out = subprocess.run(
        [sys.executable, "-m", "poswkit.cli", "bounds", "--grid", str(TESTDATA / "bounds_grid.json")],
        capture_output=True,
        text=True,
        check=True,
        env={"PYTHONPATH": str(ROOT / "src"), "PATH": "/usr/bin:/bin"},
    )
    (TESTDATA / "bounds_grid_golden.json").write_text(out.stdout)

    # Spot-check the coloring scenarios before freezing them.
    sub = make_colsubtree_db()
    tree = coloring.colored_mt(sub, COLOR_CHI, color_labels()["root"], 3)
    assert tree.colors["1"] == coloring.RED
    assert tree.colors["00"] == coloring.RED
    assert tree.colors["010"] == coloring.RED
    assert tree.colors[""] == tree.colors["0"] == tree.colors["01"] == coloring.GREEN

    mt = make_colmt_db()
    tree2 = coloring.colored_mt(mt, COLOR_CHI, color_labels()["root"], 3)
    assert coloring.gptr(tree2, "011") is True
    assert coloring.gptr(tree2, "000") is False
    print("fixtures regenerated")


if __name__ == "__main__":
    main()
