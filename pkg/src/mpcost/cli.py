"""Command-line front end.

Subcommands: ``optimize``, ``compare``, ``gen``, ``eval``,
``derive-profile`` and ``profiles list``. Wherever a profile is
expected, either a JSON file path or the name of a bundled profile
(``mpcost profiles list``) is accepted.

Exit codes are stable: 0 success, 1 parse/validation problems (including
usage errors), 2 infeasible or unsupported scheme requests, 3 exhaustive
search-space cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import profiles as builtin_profiles
from .casegen import (
    BiometricSpec,
    MatMulSpec,
    gen_biometric,
    gen_chain,
    gen_matmul,
    gen_random,
    node_count_summary,
)
from .circuit import (
    Circuit,
    circuit_to_json,
    evaluate_plaintext,
    inputs_by_name,
    load_circuit,
    op_from_name,
)
from .cost_model import (
    CostProfile,
    CostReport,
    assignment_to_json,
    derive_profile,
    load_measurements,
    load_prices,
    load_profile,
    profile_to_json,
)
from .errors import (
    InfeasibleAssignment,
    MpcostError,
    ParseError,
    SearchSpaceTooLarge,
    UnsupportedScheme,
)
from .optimizer import (
    SolverLimits,
    best_of,
    bottom_up,
    exhaustive_optimal,
    fixed_sharing,
    hill_climbing,
    top_down,
)

HEURISTICS = ("pure", "bottom-up", "top-down", "hill", "exhaustive", "best")
UNIT_FACTOR = {"cent": 1.0, "milli-cent": 1e3, "micro-cent": 1e6}


class _Parser(argparse.ArgumentParser):
    """argparse parser whose usage errors exit with code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


@dataclass
class CompareRow:
    heuristic: str
    compute: float
    network: float
    total: float
    reduction: float  # vs pure-yao, in [0, 1]
    winner: bool = False


def _resolve_profile(value: str) -> CostProfile:
    if os.path.exists(value):
        return load_profile(value)
    if value in builtin_profiles.BUILTIN_PROFILES:
        return builtin_profiles.load_builtin(value)
    raise ParseError(
        f"{value!r} is neither a profile file nor a bundled profile "
        f"(available: {', '.join(builtin_profiles.BUILTIN_PROFILES)})"
    )


def _emit(text: str, out_path: str | None) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _default_hill_init(circuit: Circuit, profile: CostProfile) -> str:
    universal = profile.universal_schemes(circuit.ops_present())
    return "yao" if "yao" in universal else universal[0]


def _report_dict(report: CostReport, factor: float, per_node: bool) -> dict:
    doc = {
        "total_compute": report.total_compute * factor,
        "total_network": report.total_network * factor,
        "total": report.total * factor,
    }
    if per_node:
        doc["per_node"] = {
            str(i): {
                "op_compute": rec.op_compute * factor,
                "op_network": rec.op_network * factor,
                "conv_compute": rec.conv_compute * factor,
                "conv_network": rec.conv_network * factor,
            }
            for i, rec in report.per_node.items()
        }
    return doc


def _run_heuristic(args, circuit: Circuit, profile: CostProfile):
    limits = SolverLimits(
        max_space=args.max_space,
        max_passes=args.max_passes,
    )
    name = args.heuristic
    if name == "pure":
        return fixed_sharing(circuit, profile, args.scheme or "yao")
    if name == "bottom-up":
        return bottom_up(circuit, profile)
    if name == "top-down":
        return top_down(circuit, profile)
    if name == "hill":
        init = args.scheme or _default_hill_init(circuit, profile)
        return hill_climbing(circuit, profile, init, limits)
    if name == "exhaustive":
        return exhaustive_optimal(circuit, profile, limits)
    return best_of(circuit, profile, limits, hill_init=args.scheme)


def cmd_optimize(args) -> int:
    circuit = load_circuit(args.circuit)
    profile = _resolve_profile(args.profile)
    result = _run_heuristic(args, circuit, profile)
    factor = UNIT_FACTOR[args.unit]
    report = result.report
    if args.json:
        doc = {
            "heuristic": result.heuristic,
            "iterations": result.iterations,
            "limit_exceeded": result.limit_exceeded,
            "unit": args.unit,
            "assignment": {str(k): result.assignment[k] for k in sorted(result.assignment)},
            "report": _report_dict(report, factor, per_node=True),
        }
        _emit(json.dumps(doc, indent=2) + "\n", args.out)
        return 0
    lines = [
        f"heuristic: {result.heuristic}    iterations: {result.iterations}"
        + ("    (pass limit hit)" if result.limit_exceeded else ""),
        f"{'':14}{'compute':>16}{'network':>16}{'total':>16}",
        f"{'cost (' + args.unit + ')':14}"
        f"{report.total_compute * factor:>16.6e}"
        f"{report.total_network * factor:>16.6e}"
        f"{report.total * factor:>16.6e}",
        "assignment: " + assignment_to_json(result.assignment).rstrip("\n"),
        "report: " + json.dumps(_report_dict(report, factor, per_node=False)),
    ]
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_compare(args) -> int:
    circuit = load_circuit(args.circuit)
    profile = _resolve_profile(args.profile)
    limits = SolverLimits(max_space=args.max_space, max_passes=args.max_passes)
    init = _default_hill_init(circuit, profile)
    runs = [
        ("pure-yao", fixed_sharing(circuit, profile, "yao")),
        ("hill-climbing", hill_climbing(circuit, profile, init, limits)),
        ("top-down", top_down(circuit, profile)),
        ("bottom-up", bottom_up(circuit, profile)),
    ]
    notices = []
    try:
        runs.append(("exhaustive", exhaustive_optimal(circuit, profile, limits)))
    except SearchSpaceTooLarge as e:
        notices.append(f"exhaustive skipped: {e}")

    pure_total = runs[0][1].report.total
    best_total = min(r.report.total for _, r in runs)
    factor = UNIT_FACTOR[args.unit]
    rows = []
    for label, result in runs:
        rep = result.report
        reduction = 0.0 if pure_total == 0 else 1.0 - rep.total / pure_total
        rows.append(
            CompareRow(
                label,
                rep.total_compute * factor,
                rep.total_network * factor,
                rep.total * factor,
                reduction,
                winner=rep.total == best_total,
            )
        )

    if args.json:
        doc = {
            "unit": args.unit,
            "rows": [vars(r) for r in rows],
            "notices": notices,
        }
        _emit(json.dumps(doc, indent=2) + "\n", args.out)
        return 0
    header = (
        f"{'technique':<16}{'compute':>16}{'network':>16}{'total':>16}"
        f"{'vs pure-yao':>14}"
    )
    lines = [f"unit: {args.unit}", header]
    for r in rows:
        mark = "*" if r.winner else " "
        lines.append(
            f"{mark}{r.heuristic:<15}{r.compute:>16.6e}{r.network:>16.6e}"
            f"{r.total:>16.6e}{100 * r.reduction:>13.2f}%"
        )
    lines.extend(notices)
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_gen(args) -> int:
    if args.kind == "biometric":
        circuit = gen_biometric(
            BiometricSpec(rows=args.rows, attrs=args.attrs, bitwidth=args.bitwidth)
        )
    elif args.kind == "matmul":
        circuit = gen_matmul(MatMulSpec(n=args.n, bitwidth=args.bitwidth))
    elif args.kind == "chain":
        circuit = gen_chain(op_from_name(args.op), args.len, bitwidth=args.bitwidth)
    else:
        weights = None
        if args.op_weights:
            weights = {}
            for item in args.op_weights.split(","):
                name, _, value = item.partition("=")
                weights[op_from_name(name.strip())] = float(value)
        circuit = gen_random(args.seed, args.n_ops, weights, bitwidth=args.bitwidth)
    _emit(circuit_to_json(circuit), args.out)
    counts = node_count_summary(circuit)
    summary = ", ".join(f"{v} {k}" for k, v in sorted(counts.items()))
    print(f"{len(circuit.nodes)} nodes ({summary})", file=sys.stderr)
    return 0


def cmd_eval(args) -> int:
    circuit = load_circuit(args.circuit)
    with open(args.inputs, "r", encoding="utf-8") as f:
        try:
            doc = json.load(f)
        except json.JSONDecodeError as e:
            raise ParseError(f"invalid inputs JSON: {e}") from None
    if not isinstance(doc, dict):
        raise ParseError("inputs JSON must map in-node ids or names to integers")
    by_name = inputs_by_name(circuit)
    inputs: dict[int, int] = {}
    for key, value in doc.items():
        if isinstance(value, bool) or not isinstance(value, int):
            raise ParseError(f"input {key!r} must be an integer")
        if key in by_name:
            inputs[by_name[key]] = value
        else:
            try:
                inputs[int(key)] = value
            except ValueError:
                raise ParseError(
                    f"{key!r} is neither an in-node name nor an id"
                ) from None
    outputs = evaluate_plaintext(circuit, inputs)
    doc_out = {}
    for i in circuit.out_ids:
        label = circuit.nodes[i].name or str(i)
        doc_out[label] = outputs[i]
    _emit(json.dumps(doc_out, indent=2) + "\n", args.out)
    return 0


def cmd_derive_profile(args) -> int:
    measurements, schemes = load_measurements(args.measurements)
    prices = load_prices(args.prices)
    profile = derive_profile(
        measurements, prices, args.name, scale=args.scale, schemes=schemes
    )
    _emit(profile_to_json(profile), args.out)
    return 0


def cmd_profiles_list(args) -> int:
    for name in builtin_profiles.builtin_names():
        print(name)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="mpcost",
        description="Assign secret-sharing schemes to circuit nodes so the "
        "modeled cloud cost (compute + network) is minimal.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_limits(p):
        p.add_argument("--max-space", type=int, default=10**7,
                       help="cap on the exhaustive search-space size")
        p.add_argument("--max-passes", type=int, default=None,
                       help="cap on hill-climbing sweeps")

    def add_output(p):
        p.add_argument("--json", action="store_true",
                       help="emit a single JSON document")
        p.add_argument("--out", help="write output to this path instead of stdout")
        p.add_argument("--unit", choices=sorted(UNIT_FACTOR), default="cent",
                       help="unit for reported costs (default: cent)")

    p = sub.add_parser("optimize", help="assign schemes with one strategy")
    p.add_argument("circuit", help="circuit JSON file")
    p.add_argument("profile", help="profile JSON file or bundled profile name")
    p.add_argument("--heuristic", choices=HEURISTICS, default="best")
    p.add_argument("--scheme",
                   help="scheme for 'pure' and the starting point for 'hill'")
    add_limits(p)
    add_output(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("compare", help="run all strategies and tabulate them")
    p.add_argument("circuit")
    p.add_argument("profile")
    add_limits(p)
    add_output(p)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("gen", help="generate a circuit")
    gen_sub = p.add_subparsers(dest="kind", required=True)
    g = gen_sub.add_parser("biometric", help="nearest-record matching circuit")
    g.add_argument("--rows", type=int, default=30)
    g.add_argument("--attrs", type=int, default=5)
    g = gen_sub.add_parser("matmul", help="n-by-n matrix product circuit")
    g.add_argument("--n", type=int, default=5)
    g = gen_sub.add_parser("chain", help="sequential benchmark chain")
    g.add_argument("--op", required=True)
    g.add_argument("--len", type=int, required=True)
    g = gen_sub.add_parser("random", help="seeded random DAG")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--n-ops", type=int, default=10)
    g.add_argument("--op-weights",
                   help="comma list like 'add=3,mul=1' (default: uniform)")
    for g in gen_sub.choices.values():
        g.add_argument("--bitwidth", type=int, default=32)
        g.add_argument("--out", help="write the circuit here instead of stdout")
        g.set_defaults(func=cmd_gen)

    p = sub.add_parser("eval", help="run the plaintext evaluator")
    p.add_argument("circuit")
    p.add_argument("inputs", help="JSON mapping in-node ids or names to values")
    p.add_argument("--out")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("derive-profile",
                       help="price raw measurements into a profile")
    p.add_argument("measurements")
    p.add_argument("prices")
    p.add_argument("--name", default="derived")
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_derive_profile)

    p = sub.add_parser("profiles", help="bundled profile utilities")
    prof_sub = p.add_subparsers(dest="profiles_command", required=True)
    g = prof_sub.add_parser("list", help="list bundled profile names")
    g.set_defaults(func=cmd_profiles_list)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 1
    try:
        return args.func(args)
    except SearchSpaceTooLarge as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except (InfeasibleAssignment, UnsupportedScheme) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (MpcostError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
