"""Operator command line: prove, verify, audit, simulate, bounds.

Exit codes: 0 success, 1 I/O failure, 2 usage or malformed input,
3 verification failure, 4 resource cap exceeded.

The oracle configuration comes from ``--oracle-config`` (a JSON document,
see OracleConfig), from the POSWKIT_ORACLE_CONFIG environment variable, or
from the inline flags ``--mode/--lambda/--toy-input-bits/--toy-seed``.
Statements and labels cross the CLI boundary hex-encoded (packed bits,
zero padding at the end); proofs are the binary format on disk.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys

from . import bounds as bounds_mod
from . import coloring, hgraph, posw, qsim
from .bits import bits_from_hex, hex_from_bits
from .oracle import Oracle, OracleConfig

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2
EXIT_VERIFY = 3
EXIT_BUDGET = 4

ENV_CONFIG = "POSWKIT_ORACLE_CONFIG"


class UsageError(ValueError):
    pass


def _load_config(args: argparse.Namespace) -> OracleConfig:
    path = args.oracle_config or os.environ.get(ENV_CONFIG)
    if path:
        with open(path, "r", encoding="utf-8") as fh:
            return OracleConfig.from_json(fh.read())
    try:
        return OracleConfig(
            mode=args.mode,
            lam=args.lam,
            toy_input_bits=args.toy_input_bits,
            toy_seed=args.toy_seed,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _parse_hex(value: str, width: int, what: str) -> str:
    try:
        return bits_from_hex(value, width)
    except ValueError as exc:
        raise UsageError(f"bad {what}: {exc}") from exc


def _emit(doc: dict, out_path: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True)
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_prove(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    chi = _parse_hex(args.chi, cfg.lam, "statement")
    proof = posw.solve(cfg, args.depth, chi)
    blob = posw.encode_proof(cfg, args.depth, chi, proof)
    with open(args.out, "wb") as fh:
        fh.write(blob)
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            fh.write(posw.proof_to_json(cfg, args.depth, chi, proof) + "\n")
    _emit(
        {
            "proof_path": args.out,
            "proof_bytes": len(blob),
            "proof_digest": hashlib.sha256(blob).hexdigest(),
            "root_label": hex_from_bits(proof.root_label),
            "challenges": list(proof.challenges),
        },
        None,
    )
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    chi = _parse_hex(args.chi, cfg.lam, "statement")
    with open(args.proof, "rb") as fh:
        blob = fh.read()
    try:
        n_file, lam_file, chi_file, proof = posw.decode_proof(blob)
    except posw.ProofCodecError as exc:
        _emit({"accepted": False, "reason": posw.REASON_MALFORMED, "detail": str(exc)}, None)
        return EXIT_USAGE
    if n_file != args.depth or lam_file != cfg.lam or chi_file != chi:
        raise UsageError(
            "proof file was produced for different (n, lambda, statement) parameters"
        )
    result = posw.verify(cfg, args.depth, chi, proof)
    _emit({"accepted": result.accepted, "reason": result.reason}, None)
    return EXIT_OK if result.accepted else EXIT_VERIFY


def cmd_audit(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    with open(args.db, "r", encoding="utf-8") as fh:
        db = hgraph.Database.from_json(fh.read())
    if db.lam != cfg.lam:
        raise UsageError(f"database lambda {db.lam} != oracle lambda {cfg.lam}")
    chi = _parse_hex(args.chi, cfg.lam, "statement")
    root = _parse_hex(args.root, cfg.lam, "root label")
    n, s = args.depth, args.walk_len

    longest = hgraph.longest_walk(db)
    witness = hgraph.extract_hseq(db, longest) if longest >= 0 else None
    tree = coloring.colored_mt(db, chi, root, n)
    report = {
        "entries": len(db),
        "collision": hgraph.has_collision(db),
        "longest_walk": longest,
        "walk_witness": list(witness) if witness else None,
        "walk_of_length": {"s": s, "present": hgraph.has_walk_of_length(db, s)},
        "lucky_db": coloring.is_lucky_db(db, s, n, cfg.lam),
        "tree": None,
    }
    if tree is not None:
        report["tree"] = {
            "colors": {node: tree.colors[node] for node in sorted(tree.colors)},
            "green_path_leaves": len(coloring.green_path_leaves(tree)),
            "unlucky_leaves": coloring.count_unlucky_leaves(tree),
        }
    _emit(report, args.out)
    return EXIT_OK


def _simulate_preset(spec: dict) -> dict:
    preset = spec["preset"]
    m = spec.get("m", 2)
    lam = spec.get("lambda", 2)
    queries = spec.get("queries", 2)
    budget = spec.get("budget", qsim.DEFAULT_STATE_BUDGET)
    if preset == "collision":
        rows = []
        for q in range(queries + 1):
            program = qsim.uniform_query_program(m, lam, q)
            state = qsim.run_adversary(program, budget=budget)
            prob = qsim.measure_probability(state, hgraph.has_collision)
            rows.append(
                {
                    "q": q,
                    "collision_probability": prob,
                    "bound": float(bounds_mod.collision_bound(q, lam)),
                }
            )
        return {"preset": preset, "m": m, "lambda": lam, "rows": rows}
    if preset == "grover":
        zero = "0" * lam
        rows = []
        for q in range(queries + 1):
            program = qsim.uniform_query_program(m, lam, q)
            state = qsim.run_adversary(program, budget=budget)
            prob = qsim.measure_probability(
                state, lambda d: any(y == zero for _, y in d.entries)
            )
            rows.append(
                {
                    "q": q,
                    "zero_preimage_probability": prob,
                    "shape_bound": float(bounds_mod.grover_bound(q, lam)),
                }
            )
        return {"preset": preset, "m": m, "lambda": lam, "rows": rows}
    if preset == "path-growth":
        rounds = spec.get("rounds", 2)
        width = spec.get("width", 1)
        delta = max(1, m // lam)
        program = qsim.uniform_query_program(m, lam, rounds * width, widths=[width] * rounds)
        state = qsim.initial_state(program.params)
        rows = []
        r = 0
        for rnd in program.rounds:
            if rnd.unitary is not None:
                state = qsim.apply_unitary(state, rnd.unitary)
            if rnd.width:
                state = qsim.cphso_k(state, rnd.width)
                r += 1
                q = r * width
                l2 = qsim.l2_projection(
                    state, lambda _s, _z, d, r=r: hgraph.has_walk_of_length(d, r)
                )
                per_query, per_round = bounds_mod.step_bounds(q, width, delta, lam)
                rows.append(
                    {
                        "round": r,
                        "l2_walk_r": l2,
                        "per_round_bound": float(per_round),
                    }
                )
            if state.nonzero_terms() > budget:
                raise qsim.BudgetExceededError("state budget exceeded")
        return {"preset": preset, "m": m, "lambda": lam, "width": width, "rows": rows}
    if preset == "oracle-equivalence":
        program = qsim.uniform_query_program(m, lam, queries)
        state = qsim.run_adversary(program, budget=budget)
        compressed = qsim.adversary_register_distribution(state)
        reference = qsim.standard_oracle_reference(m, lam, program)
        tv = qsim.total_variation(compressed, reference)
        return {
            "preset": preset,
            "m": m,
            "lambda": lam,
            "queries": queries,
            "total_variation": tv,
        }
    raise UsageError(f"unknown preset {preset!r}")


def _predicate_from_name(name: str, lam: int, depth: int | None):
    if name == "collide":
        return hgraph.has_collision
    if name == "zero-preimage":
        zero = "0" * lam
        return lambda d: any(y == zero for _, y in d.entries)
    if name.startswith("walk:"):
        s = int(name.split(":", 1)[1])
        return lambda d: hgraph.has_walk_of_length(d, s)
    if name.startswith("lucky:"):
        s = int(name.split(":")[1])
        n = int(name.split(":")[2]) if name.count(":") >= 2 else depth
        if n is None:
            raise UsageError("lucky predicate needs a depth: 'lucky:<s>:<n>'")
        return lambda d: coloring.is_lucky_db(d, s, n, lam)
    raise UsageError(f"unknown predicate {name!r}")


def _simulate_program(spec: dict) -> dict:
    program = qsim.program_from_spec(spec["program"])
    variant = spec.get("oracle", "batched")
    budget = spec.get("budget", qsim.DEFAULT_STATE_BUDGET)
    lam = program.params.lam
    preds = {
        name: _predicate_from_name(name, lam, spec.get("depth"))
        for name in spec.get("predicates", ["collide"])
    }
    state = qsim.initial_state(program.params)
    rows = []
    queries = 0
    for rnd in program.rounds:
        if rnd.unitary is not None:
            state = qsim.apply_unitary(state, rnd.unitary)
        if rnd.width:
            if variant == "batched":
                state = qsim.cphso_k(state, rnd.width)
            elif variant == "product":
                state = qsim.alt_parallel_cphso(state, rnd.width)
            else:
                raise UsageError(f"unknown oracle variant {variant!r}")
            queries += rnd.width
            row = {"queries_so_far": queries}
            for name, pred in preds.items():
                row[name] = qsim.measure_probability(state, pred)
            rows.append(row)
        if state.nonzero_terms() > budget:
            raise qsim.BudgetExceededError(f"state grew past {budget} nonzero amplitudes")
    final = {name: qsim.measure_probability(state, pred) for name, pred in preds.items()}
    return {
        "m": program.params.m,
        "lambda": lam,
        "oracle": variant,
        "rows": rows,
        "final": final,
        "norm": state.norm(),
    }


def cmd_simulate(args: argparse.Namespace) -> int:
    with open(args.spec, "r", encoding="utf-8") as fh:
        spec = json.load(fh)
    if "preset" in spec:
        report = _simulate_preset(spec)
    elif "program" in spec:
        report = _simulate_program(spec)
    else:
        raise UsageError("experiment spec must carry a 'preset' or 'program' field")
    _emit(report, args.report)
    return EXIT_OK


def cmd_bounds(args: argparse.Namespace) -> int:
    with open(args.grid, "r", encoding="utf-8") as fh:
        grid = json.load(fh)
    name = grid.get("bound")
    points = grid.get("points", [])
    if name not in bounds_mod.BOUNDS:
        raise UsageError(f"unknown bound {name!r}; choose from {sorted(bounds_mod.BOUNDS)}")
    rows = []
    for point in points:
        params = dict(point)
        q = params.pop("q")
        raw = bounds_mod.evaluate_bound(name, q, params)
        rows.append(
            {
                "q": q,
                "params": params,
                "raw": mpf_repr(raw),
                "clamped": bounds_mod.clamp(raw),
            }
        )
    _emit({"bound": name, "rows": rows}, args.out)
    return EXIT_OK


def mpf_repr(value) -> str:
    import mpmath

    with mpmath.workprec(bounds_mod.PRECISION_BITS):
        return mpmath.nstr(value, 40)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="poswkit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_oracle_opts(p: argparse.ArgumentParser) -> None:
        p.add_argument("--oracle-config", help="path to an oracle config JSON")
        p.add_argument("--mode", choices=["real", "toy"], default="real")
        p.add_argument("--lambda", dest="lam", type=int, default=16)
        p.add_argument("--toy-input-bits", type=int, default=None)
        p.add_argument("--toy-seed", type=int, default=None)

    p = sub.add_parser("prove", help="compute labels and write a proof")
    add_oracle_opts(p)
    p.add_argument("--depth", type=int, required=True, help="tree depth n")
    p.add_argument("--chi", required=True, help="statement, hex")
    p.add_argument("--out", required=True, help="output proof path")
    p.add_argument("--json-out", help="also write the debug JSON mirror here")
    p.set_defaults(func=cmd_prove)

    p = sub.add_parser("verify", help="verify a proof file")
    add_oracle_opts(p)
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--chi", required=True)
    p.add_argument("--proof", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("audit", help="audit a database against a root label")
    add_oracle_opts(p)
    p.add_argument("--db", required=True, help="database JSON path")
    p.add_argument("--chi", required=True)
    p.add_argument("--root", required=True, help="candidate root label, hex")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--walk-len", type=int, required=True, help="walk length s to test")
    p.add_argument("--out", help="write the report JSON here instead of stdout")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("simulate", help="run a simulator experiment spec")
    p.add_argument("--spec", required=True, help="experiment spec JSON path")
    p.add_argument("--report", help="write the report JSON here instead of stdout")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bounds", help="evaluate a bound over a parameter grid")
    p.add_argument("--grid", required=True, help="grid spec JSON path")
    p.add_argument("--out", help="write the table JSON here instead of stdout")
    p.set_defaults(func=cmd_bounds)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except qsim.BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
