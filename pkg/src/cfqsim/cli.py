"""Command-line front end.

Every subcommand emits byte-deterministic JSON (single results) or CSV
(sweeps) with numbers at 12 significant digits.  Exit codes: 0 on
success, 1 on a precondition violation (one-line diagnostic on stderr),
2 on a usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from .costs import (
    cost_profile,
    minimize_classical_cost,
    minimize_quantum_cost,
    monte_carlo,
    sweep_profiles,
    sweep_to_csv,
    total_qst_cost,
)
from .michelson import BeamSplitter, RoundConfig, round_record, run_round
from .star import StarConfig, alice_register, cat_fidelity, run_star
from .states import Qubit, entanglement_entropy, fidelity_up_to_phase, parse_complex
from .transfer import transcript_record, transfer_alice_to_bob
from .zeno import ChainConfig, asymptotic_limit, convergence_scan, run_chain, scan_to_csv

# Amplitude pairs within this of unit norm pass through untouched.
NORM_ACCEPT = 1e-12
# Beyond this deviation the pair is rejected as a probable typo.
NORM_REJECT = 1e-6


def parse_qubit(basis: tuple[str, str], pair: list[str], label: str) -> Qubit:
    a0, a1 = (parse_complex(t) for t in pair)
    n2 = abs(a0) ** 2 + abs(a1) ** 2
    deviation = abs(n2 - 1.0)
    if deviation > NORM_REJECT:
        raise ValueError(
            f"{label} amplitudes deviate from unit norm by {deviation:.3g}; refusing to guess"
        )
    if deviation > NORM_ACCEPT:
        print(
            f"warning: renormalizing {label} amplitudes (norm^2 off by {deviation:.3g})",
            file=sys.stderr,
        )
    n = math.sqrt(n2)
    return Qubit(tuple(basis), a0 / n, a1 / n)


def parse_sweep(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError("sweep must be 'start:stop:step'")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise ValueError("sweep must be 'start:stop:step' with numeric fields") from None
    if step <= 0 or stop < start:
        raise ValueError("sweep needs start <= stop and step > 0")
    count = int(round((stop - start) / step)) + 1
    values = [start + i * step for i in range(count)]
    if values and values[-1] > stop + 1e-12:
        values.pop()
    return values


def _round12(value):
    if isinstance(value, bool):
        return value
    if isinstance(value, float):
        return float(f"{value:.12g}")
    if isinstance(value, dict):
        return {k: _round12(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round12(v) for v in value]
    return value


def emit(records, fmt: str) -> str:
    """Records as sorted-key JSON or as CSV with a header line."""
    if fmt == "json":
        payload = records[0] if len(records) == 1 else records
        return json.dumps(_round12(payload), sort_keys=True) + "\n"
    keys = list(records[0].keys())
    lines = [",".join(keys)]
    for record in records:
        cells = []
        for key in keys:
            v = record[key]
            cells.append(f"{v:.12g}" if isinstance(v, float) else str(v))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _balanced(basis: tuple[str, str]) -> Qubit:
    return Qubit.balanced(basis)


def cmd_table(args) -> str:
    bs = BeamSplitter(args.R)
    probs = {}
    for a_sym, b_sym in (("V", "P"), ("H", "B"), ("V", "B"), ("H", "P")):
        alice = Qubit(("V", "H"), 1.0 if a_sym == "V" else 0.0, 1.0 if a_sym == "H" else 0.0)
        bob = Qubit(("P", "B"), 1.0 if b_sym == "P" else 0.0, 1.0 if b_sym == "B" else 0.0)
        outcomes = run_round(RoundConfig(bs, alice, bob))
        probs[(a_sym, b_sym)] = tuple(o.probability for o in outcomes)
    for pair in ((("V", "P"), ("H", "B")), (("V", "B"), ("H", "P"))):
        for x, y in zip(probs[pair[0]], probs[pair[1]]):
            if abs(x - y) > 1e-12:
                raise ValueError("paired basis configurations disagree; simulation bug")
    records = [
        {"inputs": "VP|HB", "P_D1": probs[("V", "P")][0], "P_D2": probs[("V", "P")][1], "P_DB": probs[("V", "P")][2]},
        {"inputs": "VB|HP", "P_D1": probs[("V", "B")][0], "P_D2": probs[("V", "B")][1], "P_DB": probs[("V", "B")][2]},
    ]
    if args.format == "json":
        return emit([{"R": args.R, "rows": records}], "json")
    return emit(records, "csv")


def cmd_round(args) -> str:
    alice = parse_qubit(("V", "H"), args.alice, "--alice")
    bob = parse_qubit(("P", "B"), args.bob, "--bob")
    record = round_record(RoundConfig(BeamSplitter(args.R), alice, bob))
    return emit([record], args.format)


def cmd_scqkd(args) -> str:
    alice = parse_qubit(("V", "H"), args.alice, "--alice")
    bob = parse_qubit(("P", "B"), args.bob, "--bob")
    record = round_record(RoundConfig(BeamSplitter(args.R), alice, bob, variant="ScQKD"))
    return emit([record], args.format)


def cmd_star(args) -> str:
    if args.alice:
        alices = tuple(parse_qubit(("V", "H"), pair, "--alice") for pair in args.alice)
        if args.N is not None and args.N != len(alices):
            raise ValueError("--N disagrees with the number of --alice pairs")
    else:
        n = args.N if args.N is not None else 2
        alices = tuple(_balanced(("V", "H")) for _ in range(n))
    bob = parse_qubit(("P", "B"), args.bob, "--bob") if args.bob else _balanced(("P", "B"))
    result = run_star(StarConfig(BeamSplitter(args.R), alices, bob))
    if result.yield_probability > 0.0:
        entropy = entanglement_entropy(result.state, [alice_register(0)])
    else:
        entropy = 0.0
    record = {
        "N": len(alices),
        "R": args.R,
        "yield": result.yield_probability,
        "cat_fidelity": cat_fidelity(result),
        "entropy_any_bipartition": entropy,
    }
    return emit([record], args.format)


def cmd_czqe(args) -> str:
    obstacle = parse_qubit(("pass", "block"), args.bob, "--bob") if args.bob else _balanced(("pass", "block"))
    layers = args.N if args.N is not None else 1
    if args.sweep:
        l_values = []
        for v in parse_sweep(args.sweep):
            if abs(v - round(v)) > 1e-9 or round(v) < 1:
                raise ValueError("czqe sweep values must be positive integers")
            l_values.append(int(round(v)))
        rows = convergence_scan(obstacle, layers, l_values, args.readout)
        return scan_to_csv(rows)
    if args.L is None:
        raise ValueError("czqe needs --L (or --sweep)")
    config = ChainConfig(L=args.L, theta=args.theta, obstacle=obstacle, layers=layers)
    result = run_chain(config, args.readout)
    record = {
        "L": args.L,
        "theta": config.resolved_theta,
        "layers": layers,
        "readout": args.readout,
        "survival": result.survival,
        "fidelity_asymptote": fidelity_up_to_phase(
            result.final, asymptotic_limit(obstacle, layers)
        ),
    }
    return emit([record], args.format)


def cmd_qst(args) -> str:
    payload = parse_qubit(("V", "H"), args.payload, "--payload")
    bs = BeamSplitter(args.R)
    records = [
        transcript_record(transfer_alice_to_bob(payload, bs, branch), payload)
        for branch in ("V", "H")
    ]
    if args.format == "json":
        return json.dumps(_round12(records), sort_keys=True) + "\n"
    return emit(records, "csv")


def cmd_cost(args) -> str:
    if args.sweep:
        return sweep_to_csv(sweep_profiles(parse_sweep(args.sweep)))
    if args.R is None:
        raise ValueError("cost needs --R (or --sweep)")
    p = cost_profile(args.R)
    record = {
        "R": p.R,
        "P_D1": p.P_D1,
        "P_D2": p.P_D2,
        "P_DB": p.P_DB,
        "p1_prime": p.p1_prime,
        "p2_prime": p.p2_prime,
        "C_q": p.C_q,
        "C": p.C,
        "total_qst_cost": total_qst_cost(args.R),
    }
    return emit([record], args.format)


def cmd_cost_min(args) -> str:
    rq, cq = minimize_quantum_cost()
    rc, cc = minimize_classical_cost()
    record = {
        "R_quantum": rq,
        "C_q_min": cq,
        "R_classical": rc,
        "C_min": cc,
        "total_qst_cost_min": cc + 1.0,
    }
    return emit([record], args.format)


def cmd_mc(args) -> str:
    report = monte_carlo(args.R, args.runs, args.seed)
    record = {
        "R": args.R,
        "runs": report.runs,
        "seed": report.seed,
        "counts": {"D1": report.counts[0], "D2": report.counts[1], "DB": report.counts[2]},
        "empirical_C": report.empirical_C,
        "std_error": report.std_error,
    }
    return emit([record], args.format)


def _add_format(parser, default="json"):
    parser.add_argument("--format", choices=("json", "csv"), default=default)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cfqsim",
        description="Counterfactual quantum communication: round simulation, "
        "cat-state networks, state transfer, and resource costs.",
        epilog="Amplitudes are given as 're' or 're,im'; pairs slightly off unit "
        "norm are renormalized with a warning, badly off ones are rejected.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("table", help="conditional detector probabilities for classical basis inputs")
    p.add_argument("--R", type=float, required=True)
    _add_format(p, default="csv")
    p.set_defaults(handler=cmd_table)

    p = sub.add_parser("round", help="one fully quantized round")
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--alice", nargs=2, metavar=("MU", "NU"), default=["0.7071067811865476", "0.7071067811865476"])
    p.add_argument("--bob", nargs=2, metavar=("ALPHA", "BETA"), default=["0.7071067811865476", "0.7071067811865476"])
    _add_format(p)
    p.set_defaults(handler=cmd_round)

    p = sub.add_parser("scqkd", help="one round of the pass/block variant")
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--alice", nargs=2, metavar=("PASS", "BLOCK"), default=["0.7071067811865476", "0.7071067811865476"])
    p.add_argument("--bob", nargs=2, metavar=("PASS", "BLOCK"), default=["0.7071067811865476", "0.7071067811865476"])
    _add_format(p)
    p.set_defaults(handler=cmd_scqkd)

    p = sub.add_parser("star", help="cat-state distribution over a star of links")
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--N", type=int, default=None, help="number of spoke parties")
    p.add_argument("--alice", nargs=2, metavar=("MU", "NU"), action="append", default=None)
    p.add_argument("--bob", nargs=2, metavar=("ALPHA", "BETA"), default=None)
    _add_format(p)
    p.set_defaults(handler=cmd_star)

    p = sub.add_parser("czqe", help="chained-interferometer run or convergence scan")
    p.add_argument("--L", type=int, default=None, help="cycle count")
    p.add_argument("--theta", type=float, default=None, help="per-splitter angle (default pi/2L)")
    p.add_argument("--N", type=int, default=None, help="stacked mode layers")
    p.add_argument("--bob", nargs=2, metavar=("PASS", "BLOCK"), default=None, help="obstacle amplitudes")
    p.add_argument("--readout", choices=("after_final_bs", "after_final_obstacle"), default="after_final_bs")
    p.add_argument("--sweep", default=None, help="L grid as start:stop:step (emits CSV)")
    _add_format(p)
    p.set_defaults(handler=cmd_czqe)

    p = sub.add_parser("qst", help="state transfer over the shared pair, both branches")
    p.add_argument("--R", type=float, default=0.5)
    p.add_argument("--payload", nargs=2, metavar=("MU", "NU"), required=True)
    _add_format(p)
    p.set_defaults(handler=cmd_qst)

    p = sub.add_parser("cost", help="resource-cost profile at one R or over a sweep")
    p.add_argument("--R", type=float, default=None)
    p.add_argument("--sweep", default=None, help="R grid as start:stop:step (emits CSV)")
    _add_format(p)
    p.set_defaults(handler=cmd_cost)

    p = sub.add_parser("cost-min", help="minimize both resource costs")
    _add_format(p)
    p.set_defaults(handler=cmd_cost_min)

    p = sub.add_parser("mc", help="seeded Monte Carlo of round outcomes")
    p.add_argument("--R", type=float, required=True)
    p.add_argument("--runs", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    _add_format(p)
    p.set_defaults(handler=cmd_mc)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = args.handler(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
