"""Command-line entry point.

Subcommands cover the full workflow: ``gen`` writes a synthetic
instance, ``build`` compiles it to a coefficient file, ``solve`` runs a
sampler over a coefficient file, ``sweep`` executes a whole plan,
``report`` summarizes a sweep directory, and ``stats`` prints logical
circuit-shape numbers.

Exit codes: 0 success, 2 usage or invalid input, 3 size guard
exceeded, 4 infeasible or undefined result, 5 I/O failure.  All
randomness is seeded, so repeating a command reproduces its output.
The ``PRESSQUBO_OUT`` environment variable supplies the default sweep
output directory.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import bench, lrqaoa, model, qubo, solvers
from .errors import GenerationFailed, Infeasible, TooLarge

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_TOO_LARGE = 3
EXIT_INFEASIBLE = 4
EXIT_IO = 5

_DEFAULT_SHOTS = 1000
_DEFAULT_STEPS = 1280
_DEFAULT_RESTARTS = 500
_DEFAULT_DG = 0.9
_DEFAULT_DB = 0.6


def _emit(args, human: str, payload: dict) -> None:
    if getattr(args, "json", False):
        print(json.dumps(payload, sort_keys=True))
    else:
        print(human)


def cmd_gen(args) -> int:
    inst = model.sanitize_instance(
        model.generate_instance(args.toolkits, args.machines, args.capacity_bits, args.seed)
    )
    model.save_instance(inst, args.output)
    n_vars = qubo.VariableMap.for_instance(inst).n
    _emit(
        args,
        f"wrote {args.output}: {inst.n_toolkits} toolkits x {inst.n_machines} machines, "
        f"{n_vars} binary variables",
        {"path": str(args.output), "id": inst.id, "variables": n_vars},
    )
    return EXIT_OK


def _variant_from_args(args) -> qubo.VariantSpec:
    if args.variant == "raw":
        return qubo.RawVariant(Fraction(args.lm), Fraction(args.lt))
    if args.variant == "scaled":
        ls = Fraction(args.ls)
        if ls not in qubo.SCALED_ASSIGNMENT_SCALES:
            print(
                f"warning: assignment scale {args.ls} is off the default grid "
                f"{[str(s) for s in qubo.SCALED_ASSIGNMENT_SCALES]}",
                file=sys.stderr,
            )
        return qubo.ScaledVariant(ls)
    return qubo.RoundedVariant()


def cmd_build(args) -> int:
    inst = model.sanitize_instance(model.load_instance(args.instance))
    variant = _variant_from_args(args)
    q = qubo.build_qubo(inst, variant)
    qubo.save_qubo(q, args.output)
    _emit(
        args,
        f"wrote {args.output} ({qubo.variant_label(variant)}): {q.n} variables, "
        f"{len(q.coeffs)} coefficients",
        {
            "path": str(args.output),
            "variant": qubo.variant_label(variant),
            "variables": q.n,
            "coefficients": len(q.coeffs),
        },
    )
    return EXIT_OK


def cmd_solve(args) -> int:
    q = qubo.load_qubo(args.qubo)
    if args.solver == "sa":
        cfg = solvers.SaConfig(
            steps=args.steps,
            restarts=args.restarts,
            t_start=args.t_start,
            t_end=args.t_end,
            seed=args.seed,
        )
        samples = solvers.simulated_anneal(q, cfg)
    elif args.solver == "random":
        samples = solvers.random_sample(q, args.shots, args.seed)
    elif args.solver == "lrqaoa":
        sched = lrqaoa.lr_schedule(args.p, args.delta_gamma, args.delta_beta)
        samples = lrqaoa.run_lrqaoa(q, sched, args.shots, args.seed)
    else:
        bits, energy = solvers.brute_force_qubo(q)
        samples = solvers.SampleSet(
            entries=(solvers.SampleEntry(bits, float(energy), 1),),
            meta={"solver": "brute", "params": {}, "seed": args.seed},
        )
    if args.postprocess:
        samples = solvers.postprocess_sampleset(q, samples)
    solvers.save_sampleset(samples, args.output)
    best = samples.best
    _emit(
        args,
        f"wrote {args.output}: {samples.total} samples, best energy {best.energy!r}",
        {
            "path": str(args.output),
            "samples": samples.total,
            "best_energy": best.energy,
            "best_bits": best.bits,
        },
    )
    return EXIT_OK


def cmd_sweep(args) -> int:
    plan = bench.load_plan(args.plan)
    records = bench.sweep(plan, workers=args.workers, base_dir=Path(args.plan).parent)
    paths = bench.export_report(records, args.output, plan=plan)
    failed = sum(1 for r in records if r.error is not None)
    _emit(
        args,
        f"{len(records)} runs ({failed} failed) -> {paths['report']}",
        {
            "runs": len(records),
            "failed": failed,
            "report": str(paths["report"]),
        },
    )
    return EXIT_OK


def cmd_report(args) -> int:
    report_path = Path(args.directory) / "report.json"
    report = json.loads(report_path.read_text())
    if args.select_best:
        rows = report.get("best_penalties", [])
        if args.json:
            print(json.dumps(rows, sort_keys=True))
        else:
            if not rows:
                print("no scored runs to select from")
            for row in rows:
                group = ", ".join(str(g) for g in row["group"])
                print(f"{group} [{row['variant_kind']}] -> {row['variant']}")
        return EXIT_OK
    metrics = report.get("metrics", [])
    if args.json:
        print(json.dumps(metrics, sort_keys=True))
    else:
        for row in metrics:
            pv = row["percent_valid"]
            pv_text = "undefined" if pv is None else f"{pv:.4f}"
            print(
                f"{row['instance_id']} {row['variant']} {row['solver']}"
                f"[{row['solver_params']}] valid={pv_text}"
            )
    return EXIT_OK


def cmd_stats(args) -> int:
    q = qubo.load_qubo(args.qubo)
    header = "qubits,edges,colors,p,two_qubit_interactions,cost_layer_depth"
    rows = []
    for p in args.p:
        s = lrqaoa.circuit_stats(q, p)
        rows.append(
            f"{s.qubits},{s.edges},{s.colors},{s.p},{s.two_qubit_interactions},"
            f"{s.cost_layer_depth}"
        )
    text = "\n".join([header] + rows) + "\n"
    if args.output:
        Path(args.output).write_text(text)
        _emit(args, f"wrote {args.output}", {"path": str(args.output)})
    else:
        print(text, end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pressqubo",
        description="Assignment-planning QUBO toolkit: generate, compile, solve, benchmark.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a synthetic instance file")
    p.add_argument("--toolkits", type=int, required=True)
    p.add_argument("--machines", type=int, required=True)
    p.add_argument("--capacity-bits", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("build", help="compile an instance into a coefficient file")
    p.add_argument("instance")
    p.add_argument("--variant", choices=("raw", "scaled", "rounded"), required=True)
    p.add_argument("--lm", default="1e5", help="machine-capacity penalty weight (raw)")
    p.add_argument("--lt", default="1e9", help="assignment penalty weight (raw)")
    p.add_argument("--ls", default="1", help="assignment scale (scaled)")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("solve", help="sample a coefficient file with one solver")
    p.add_argument("qubo")
    p.add_argument("--solver", choices=("sa", "random", "lrqaoa", "brute"), required=True)
    p.add_argument("--steps", type=int, default=_DEFAULT_STEPS)
    p.add_argument("--restarts", type=int, default=_DEFAULT_RESTARTS)
    p.add_argument("--t-start", type=float, default=None)
    p.add_argument("--t-end", type=float, default=None)
    p.add_argument("--shots", type=int, default=_DEFAULT_SHOTS)
    p.add_argument("--p", type=int, default=1)
    p.add_argument("--delta-gamma", type=float, default=_DEFAULT_DG)
    p.add_argument("--delta-beta", type=float, default=_DEFAULT_DB)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--postprocess", action="store_true",
                   help="apply the single-bit-flip improvement pass")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep", help="run a plan file and export reports")
    p.add_argument("plan")
    p.add_argument("-o", "--output", default=os.environ.get("PRESSQUBO_OUT", "pressqubo-out"))
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("report", help="summarize a sweep output directory")
    p.add_argument("directory")
    p.add_argument("--select-best", action="store_true",
                   help="print the best variant per group")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("stats", help="logical circuit-shape metrics of a coefficient file")
    p.add_argument("qubo")
    p.add_argument("--p", type=int, nargs="+", default=[1])
    p.add_argument("-o", "--output", default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_stats)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except TooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE
    except (Infeasible, GenerationFailed) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
