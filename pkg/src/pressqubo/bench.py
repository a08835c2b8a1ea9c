"""Experiment grid execution and scoring.

A sweep plan names instances, construction variants, solvers, and
seeds; every combination runs as an independent cell.  Each cell's
samples are scored against the exhaustive reference optimum with three
metrics:

* share of samples decoding to a constraint-satisfying assignment,
* among the valid ones, the share within 1% of the optimal cost,
* optimal cost divided by the best valid cost found (1.0 is best).

The last two are undefined (None / empty CSV cell) when a cell has no
valid sample at all; folding them to 0 would conflate "found nothing
valid" with "found only poor solutions".

Reports are deterministic: records are ordered by their grid key and
wall-clock timings are kept off the exported files, so re-running an
identical plan reproduces the report byte for byte.
"""

from __future__ import annotations

import csv
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from . import lrqaoa, model, qubo, solvers
from .model import Instance, Solution
from .qubo import Qubo, VariantSpec, variant_label, variant_sort_key
from .solvers import SampleSet


# ---------------------------------------------------------------------------
# Metrics
# ---------------------------------------------------------------------------

def _decoded_costs(samples: SampleSet, inst: Instance, q: Qubo):
    """(multiplicity, cost-or-None) per entry; cost None means invalid."""
    out = []
    for bits, mult in samples.iter_bits():
        decoded = qubo.decode(q, bits)
        assignment = decoded.as_assignment()
        if assignment is None:
            out.append((mult, None))
            continue
        report = model.validate_assignment(inst, assignment)
        if not report.feasible:
            out.append((mult, None))
            continue
        out.append((mult, model.solution_cost(inst, assignment)))
    return out


def percent_valid(samples: SampleSet, inst: Instance, q: Qubo) -> float:
    """Multiplicity-weighted share of samples decoding to feasible
    assignments."""
    if not samples.entries:
        raise ValueError("empty sample set")
    scored = _decoded_costs(samples, inst, q)
    total = sum(m for m, _ in scored)
    valid = sum(m for m, c in scored if c is not None)
    return valid / total


def percent_near_opt(
    samples: SampleSet,
    inst: Instance,
    q: Qubo,
    opt_cost: Fraction,
    tol: Fraction = Fraction(1, 100),
) -> float | None:
    """Share of *valid* samples within ``tol`` of the optimal cost.

    None when there is no valid sample (the ratio conditions on
    validity).
    """
    scored = [(m, c) for m, c in _decoded_costs(samples, inst, q) if c is not None]
    if not scored:
        return None
    bound = (1 + Fraction(tol)) * Fraction(opt_cost)
    near = sum(m for m, c in scored if c <= bound)
    return near / sum(m for m, _ in scored)


def best_cost_ratio(
    samples: SampleSet, inst: Instance, q: Qubo, opt_cost: Fraction
) -> Fraction | None:
    """Optimal cost over the lowest valid sampled cost, in (0, 1].

    None when there is no valid sample.
    """
    costs = [c for _, c in _decoded_costs(samples, inst, q) if c is not None]
    if not costs:
        return None
    return Fraction(opt_cost) / min(costs)


def pearson_r(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Product-moment correlation coefficient."""
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1 or len(x) < 2:
        raise ValueError("need two equal-length series of length >= 2")
    dx = x - x.mean()
    dy = y - y.mean()
    vx = float(dx @ dx)
    vy = float(dy @ dy)
    if vx == 0.0 or vy == 0.0:
        raise ValueError("correlation undefined for a zero-variance series")
    return float(dx @ dy) / (vx * vy) ** 0.5


# ---------------------------------------------------------------------------
# Run records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RunRecord:
    """One grid cell: solver output summary plus its metric scores.

    ``wall_time`` is informational only and never exported, keeping
    report files reproducible.
    """

    instance_id: str
    variant: VariantSpec
    solver: str
    solver_params: Mapping[str, object]
    seed: int
    n_samples: int = 0
    n_valid: int = 0
    best_energy: float | None = None
    best_valid_cost: Fraction | None = None
    percent_valid: float | None = None
    percent_near_opt: float | None = None
    best_cost_ratio: float | None = None
    error: str | None = None
    wall_time: float = 0.0

    def params_label(self) -> str:
        return ";".join(f"{k}={self.solver_params[k]}" for k in sorted(self.solver_params))

    def grid_key(self):
        return (
            self.instance_id,
            variant_sort_key(self.variant),
            self.solver,
            self.params_label(),
            self.seed,
        )


# ---------------------------------------------------------------------------
# Plan expansion
# ---------------------------------------------------------------------------

DEFAULT_SOLVER_PARAMS: dict[str, dict[str, object]] = {
    "sa": {"steps": 1280, "restarts": 500},
    "random": {"shots": 1000},
    "lrqaoa": {"p": 1, "delta_gamma": 0.9, "delta_beta": 0.6, "shots": 1000},
    "brute": {},
}


def expand_variants(entry: Mapping) -> list[VariantSpec]:
    """One plan entry to concrete variant specs (defaults: full grids)."""
    kind = entry.get("kind")
    if kind == "raw":
        lms = [Fraction(str(v)) for v in entry.get("lm", qubo.RAW_MACHINE_PENALTIES)]
        lts = [Fraction(str(v)) for v in entry.get("lt", qubo.RAW_TOOLKIT_PENALTIES)]
        return [qubo.RawVariant(lm, lt) for lm in lms for lt in lts]
    if kind == "scaled":
        lss = [Fraction(str(v)) for v in entry.get("ls", qubo.SCALED_ASSIGNMENT_SCALES)]
        return [qubo.ScaledVariant(ls) for ls in lss]
    if kind == "rounded":
        return [qubo.RoundedVariant()]
    raise ValueError(f"unknown variant kind {kind!r}")


def expand_solver_params(entry: Mapping) -> list[tuple[str, dict]]:
    """Expand list-valued solver parameters into the full grid."""
    name = entry.get("name")
    if name not in DEFAULT_SOLVER_PARAMS:
        raise ValueError(f"unknown solver {name!r}")
    params = dict(DEFAULT_SOLVER_PARAMS[name])
    params.update(entry.get("params", {}))
    grids = [(k, v if isinstance(v, list) else [v]) for k, v in sorted(params.items())]
    combos: list[dict] = [{}]
    for key, values in grids:
        combos = [dict(c, **{key: v}) for c in combos for v in values]
    return [(name, c) for c in combos]


@dataclass(frozen=True)
class SweepCell:
    instance_path: str
    variant: VariantSpec
    solver: str
    solver_params: Mapping[str, object]
    seed: int
    postprocess: bool


def expand_plan(plan: Mapping) -> list[SweepCell]:
    for key in ("instances", "variants", "solvers", "seeds"):
        if key not in plan:
            raise ValueError(f"plan is missing the {key!r} list")
    postprocess = bool(plan.get("postprocess", True))
    cells = []
    for path in plan["instances"]:
        for variant_entry in plan["variants"]:
            for variant in expand_variants(variant_entry):
                for solver_entry in plan["solvers"]:
                    for solver, params in expand_solver_params(solver_entry):
                        for seed in plan["seeds"]:
                            cells.append(
                                SweepCell(str(path), variant, solver, params,
                                          int(seed), postprocess)
                            )
    return cells


def load_plan(path) -> dict:
    with open(path) as fh:
        plan = json.load(fh)
    if not isinstance(plan, dict):
        raise ValueError("plan must be a JSON object")
    return plan


# ---------------------------------------------------------------------------
# Sweep execution
# ---------------------------------------------------------------------------

def _run_solver(q: Qubo, solver: str, params: Mapping, seed: int) -> SampleSet:
    if solver == "sa":
        cfg = solvers.SaConfig(
            steps=int(params["steps"]),
            restarts=int(params["restarts"]),
            t_start=params.get("t_start"),
            t_end=params.get("t_end"),
            seed=seed,
        )
        return solvers.simulated_anneal(q, cfg)
    if solver == "random":
        return solvers.random_sample(q, int(params["shots"]), seed)
    if solver == "lrqaoa":
        sched = lrqaoa.lr_schedule(
            int(params["p"]), float(params["delta_gamma"]), float(params["delta_beta"])
        )
        return lrqaoa.run_lrqaoa(q, sched, int(params["shots"]), seed)
    if solver == "brute":
        bits, energy = solvers.brute_force_qubo(q)
        return SampleSet(
            entries=(solvers.SampleEntry(bits, float(energy), 1),),
            meta={"solver": "brute", "params": {}, "seed": seed},
        )
    raise ValueError(f"unknown solver {solver!r}")


def run_cell(cell: SweepCell, inst: Instance, reference: Solution) -> RunRecord:
    """Execute one grid cell; failures land in the record, never raise."""
    start = time.perf_counter()
    base = dict(
        instance_id=inst.id,
        variant=cell.variant,
        solver=cell.solver,
        solver_params=dict(cell.solver_params),
        seed=cell.seed,
    )
    try:
        q = qubo.build_qubo(inst, cell.variant)
        samples = _run_solver(q, cell.solver, cell.solver_params, cell.seed)
        if cell.postprocess:
            samples = solvers.postprocess_sampleset(q, samples)
        scored = _decoded_costs(samples, inst, q)
        total = sum(m for m, _ in scored)
        valid_costs = [(m, c) for m, c in scored if c is not None]
        n_valid = sum(m for m, _ in valid_costs)
        pv = n_valid / total
        pno = None
        ratio = None
        best_valid = None
        if valid_costs:
            bound = Fraction(101, 100) * reference.cost
            pno = sum(m for m, c in valid_costs if c <= bound) / n_valid
            best_valid = min(c for _, c in valid_costs)
            ratio = float(reference.cost / best_valid)
        return RunRecord(
            **base,
            n_samples=total,
            n_valid=n_valid,
            best_energy=samples.best.energy,
            best_valid_cost=best_valid,
            percent_valid=pv,
            percent_near_opt=pno,
            best_cost_ratio=ratio,
            wall_time=time.perf_counter() - start,
        )
    except Exception as exc:  # cell failures must not abort the sweep
        return RunRecord(**base, error=f"{type(exc).__name__}: {exc}",
                         wall_time=time.perf_counter() - start)


def _cell_worker(args):
    cell, inst, reference = args
    return run_cell(cell, inst, reference)


def sweep(plan: Mapping, workers: int = 1, base_dir=None) -> list[RunRecord]:
    """Run every cell of the plan; records come back sorted by grid key.

    Relative instance paths resolve against ``base_dir`` (callers
    typically pass the plan file's directory).  Instances are loaded
    (and sanitized) once; the exhaustive reference solution per
    instance is shared across cells.  Cells fail individually without
    aborting the sweep.
    """
    cells = expand_plan(plan)
    root = Path(base_dir) if base_dir is not None else Path(".")
    instances: dict[str, Instance] = {}
    references: dict[str, Solution] = {}
    for cell in cells:
        if cell.instance_path not in instances:
            inst = model.sanitize_instance(model.load_instance(root / cell.instance_path))
            instances[cell.instance_path] = inst
            references[cell.instance_path] = model.exact_solve(inst)
    jobs = [(c, instances[c.instance_path], references[c.instance_path]) for c in cells]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_cell_worker, jobs))
    else:
        records = [run_cell(*job) for job in jobs]
    return sorted(records, key=lambda r: r.grid_key())


# ---------------------------------------------------------------------------
# Aggregation, penalty selection, correlation
# ---------------------------------------------------------------------------

def _config_key(record: RunRecord):
    return (
        record.instance_id,
        variant_sort_key(record.variant),
        record.solver,
        record.params_label(),
    )


def aggregate_metrics(records: Sequence[RunRecord]) -> list[dict]:
    """Mean metrics per (instance, variant, solver-config) across seeds.

    Undefined per-seed values are skipped; a group with no defined
    values stays undefined.
    """
    groups: dict[tuple, list[RunRecord]] = {}
    for r in records:
        groups.setdefault(_config_key(r), []).append(r)

    def mean_defined(values):
        defined = [v for v in values if v is not None]
        return sum(defined) / len(defined) if defined else None

    rows = []
    for key in sorted(groups):
        rs = groups[key]
        rows.append(
            {
                "instance_id": rs[0].instance_id,
                "variant": variant_label(rs[0].variant),
                "solver": rs[0].solver,
                "solver_params": rs[0].params_label(),
                "n_records": len(rs),
                "percent_valid": mean_defined([r.percent_valid for r in rs]),
                "percent_near_opt": mean_defined([r.percent_near_opt for r in rs]),
                "best_cost_ratio": mean_defined([r.best_cost_ratio for r in rs]),
            }
        )
    return rows


def select_best_penalty(
    records: Sequence[RunRecord],
    group_keys: Sequence[str] = ("instance_id", "solver", "solver_params"),
) -> dict[tuple, VariantSpec]:
    """Best variant per group and variant kind.

    Ranking: highest valid share, then highest best-cost ratio, then
    the lexicographically smallest penalty parameters.  Groups without
    scored records are skipped.
    """
    def group_of(r: RunRecord):
        fields = {
            "instance_id": r.instance_id,
            "solver": r.solver,
            "solver_params": r.params_label(),
            "variant_kind": r.variant.kind,
            "seed": r.seed,
        }
        return tuple(fields[k] for k in group_keys) + (r.variant.kind,)

    pools: dict[tuple, dict] = {}
    for r in records:
        if r.error is not None or r.percent_valid is None:
            continue
        pools.setdefault(group_of(r), {}).setdefault(variant_sort_key(r.variant), []).append(r)

    best: dict[tuple, VariantSpec] = {}
    for group, by_variant in pools.items():
        scored = []
        for vkey, rs in by_variant.items():
            pv = sum(r.percent_valid for r in rs) / len(rs)
            ratios = [r.best_cost_ratio for r in rs if r.best_cost_ratio is not None]
            ratio = sum(ratios) / len(ratios) if ratios else 0.0
            scored.append(((-pv, -ratio, vkey), rs[0].variant))
        scored.sort(key=lambda item: item[0])
        best[group] = scored[0][1]
    return best


def series_correlations(records: Sequence[RunRecord]) -> list[dict]:
    """Correlate two solvers' metric series across instances.

    For every variant kind and metric, one solver's per-instance mean
    (averaged over seeds and penalty settings) is correlated with
    another's.  Rows are emitted per solver pair (alphabetical order)
    with at least two instances of paired data and nonzero variance.
    """
    metrics = ("percent_valid", "percent_near_opt", "best_cost_ratio")
    solvers_seen = sorted({r.solver for r in records if r.error is None})
    kinds = sorted({r.variant.kind for r in records if r.error is None})
    rows = []
    for kind in kinds:
        for metric in metrics:
            per_solver: dict[str, dict[str, list[float]]] = {}
            for r in records:
                if r.error is not None or r.variant.kind != kind:
                    continue
                value = getattr(r, metric)
                if value is None:
                    continue
                per_solver.setdefault(r.solver, {}).setdefault(r.instance_id, []).append(
                    float(value)
                )
            for a in solvers_seen:
                for b in solvers_seen:
                    if a >= b or a not in per_solver or b not in per_solver:
                        continue
                    shared = sorted(set(per_solver[a]) & set(per_solver[b]))
                    if len(shared) < 2:
                        continue
                    xs = [np.mean(per_solver[a][i]) for i in shared]
                    ys = [np.mean(per_solver[b][i]) for i in shared]
                    try:
                        r_value = pearson_r(xs, ys)
                    except ValueError:
                        continue
                    rows.append(
                        {
                            "variant_kind": kind,
                            "metric": metric,
                            "solver_a": a,
                            "solver_b": b,
                            "instances": shared,
                            "r": r_value,
                        }
                    )
    return rows


# ---------------------------------------------------------------------------
# Export
# ---------------------------------------------------------------------------

RUNS_COLUMNS = (
    "instance_id",
    "variant",
    "solver",
    "solver_params",
    "seed",
    "n_samples",
    "n_valid",
    "best_energy",
    "best_valid_cost",
    "percent_valid",
    "percent_near_opt",
    "best_cost_ratio",
    "error",
)

METRICS_COLUMNS = (
    "instance_id",
    "variant",
    "solver",
    "solver_params",
    "n_records",
    "percent_valid",
    "percent_near_opt",
    "best_cost_ratio",
)


def _cell_text(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, Fraction):
        return str(value)
    return str(value)


def _record_row(r: RunRecord) -> dict:
    return {
        "instance_id": r.instance_id,
        "variant": variant_label(r.variant),
        "solver": r.solver,
        "solver_params": r.params_label(),
        "seed": r.seed,
        "n_samples": r.n_samples,
        "n_valid": r.n_valid,
        "best_energy": r.best_energy,
        "best_valid_cost": r.best_valid_cost,
        "percent_valid": r.percent_valid,
        "percent_near_opt": r.percent_near_opt,
        "best_cost_ratio": r.best_cost_ratio,
        "error": r.error,
    }


def _write_csv(path: Path, columns: Sequence[str], rows: Sequence[Mapping]) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_cell_text(row.get(c)) for c in columns])


def export_report(records: Sequence[RunRecord], out_dir, plan: Mapping | None = None) -> dict:
    """Write ``runs.csv``, ``metrics.csv`` and ``report.json``.

    Identical records produce byte-identical files.  Returns the paths
    written.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    ordered = sorted(records, key=lambda r: r.grid_key())
    run_rows = [_record_row(r) for r in ordered]
    metric_rows = aggregate_metrics(ordered)
    best = select_best_penalty(ordered)
    best_rows = [
        {"group": list(group[:-1]), "variant_kind": group[-1],
         "variant": variant_label(variant)}
        for group, variant in sorted(best.items())
    ]
    correlations = series_correlations(ordered)

    _write_csv(out / "runs.csv", RUNS_COLUMNS, run_rows)
    _write_csv(out / "metrics.csv", METRICS_COLUMNS, metric_rows)
    report = {
        "plan": plan,
        "runs": [
            {k: (str(v) if isinstance(v, Fraction) else v) for k, v in row.items()}
            for row in run_rows
        ],
        "metrics": metric_rows,
        "best_penalties": best_rows,
        "correlations": correlations,
    }
    (out / "report.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return {
        "runs": out / "runs.csv",
        "metrics": out / "metrics.csv",
        "report": out / "report.json",
    }
