"""Compilation of assignment instances into binary-quadratic form.

Three construction strategies are supported, differing in how constraint
penalties are weighted:

* ``raw``: the instance data is used as-is and the two constraint
  families get hand-picked penalty weights (a machine-capacity weight
  and a toolkit-assignment weight) from a broad default grid.
* ``scaled``: every term of the program (objective, each exactly-once
  constraint multiplied by an assignment-scale factor, each capacity
  equality including its slack bits) is rescaled so all terms share the
  largest value range found, after which unit penalty weights are used.
* ``rounded``: costs are first integer-divided by the smallest positive
  cost so the minimum cost becomes 1, then the scaled pipeline runs with
  an assignment scale of 1.  This flattens the coefficient spread.

Capacity inequalities are turned into equalities with slack variables,
each split into binary digits ``[2^0, ..., 2^(r-1), h - 2^r + 1]`` so
the slack can take every value in ``{0..h}`` and nothing more.

Variable layout is fixed: decision bits first in toolkit-major order,
then slack bits machine by machine with digits ascending.  A bitstring
is written with position ``i`` holding variable ``i`` (so its integer
value reads variable 0 as the least-significant bit).

All coefficients are exact rationals; a float64 mirror for the hot
numeric kernels lives alongside, with a rigorous error bound so exact
comparisons can be recovered where they matter.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence, Union

import numpy as np

from .errors import TooLarge
from .model import Instance

# Hard cap on 2**n for full-spectrum computations.
SPECTRUM_GUARD = 26


# ---------------------------------------------------------------------------
# Variants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RawVariant:
    """Hand-picked penalty weights on otherwise untouched data."""

    machine_penalty: Fraction
    toolkit_penalty: Fraction

    kind = "raw"

    def __post_init__(self):
        object.__setattr__(self, "machine_penalty", Fraction(self.machine_penalty))
        object.__setattr__(self, "toolkit_penalty", Fraction(self.toolkit_penalty))
        if self.machine_penalty <= 0 or self.toolkit_penalty <= 0:
            raise ValueError("penalty weights must be positive")

    def params(self) -> tuple[tuple[str, Fraction], ...]:
        return (("lm", self.machine_penalty), ("lt", self.toolkit_penalty))


@dataclass(frozen=True)
class ScaledVariant:
    """Value-range rescaling with unit penalties."""

    assignment_scale: Fraction = Fraction(1)

    kind = "scaled"

    def __post_init__(self):
        object.__setattr__(self, "assignment_scale", Fraction(self.assignment_scale))
        if self.assignment_scale <= 0:
            raise ValueError("assignment scale must be positive")

    def params(self) -> tuple[tuple[str, Fraction], ...]:
        return (("ls", self.assignment_scale),)


@dataclass(frozen=True)
class RoundedVariant:
    """Cost flattening by integer division, then the scaled pipeline."""

    kind = "rounded"

    def params(self) -> tuple[tuple[str, Fraction], ...]:
        return ()


VariantSpec = Union[RawVariant, ScaledVariant, RoundedVariant]

# Default penalty grids (9 raw combinations, 2 scaled, 1 rounded).
RAW_MACHINE_PENALTIES = (Fraction(10**3), Fraction(10**4), Fraction(10**5))
RAW_TOOLKIT_PENALTIES = (Fraction(10**7), Fraction(10**8), Fraction(10**9))
SCALED_ASSIGNMENT_SCALES = (Fraction(1, 10), Fraction(1))

RAW_GRID: tuple[RawVariant, ...] = tuple(
    RawVariant(lm, lt) for lm in RAW_MACHINE_PENALTIES for lt in RAW_TOOLKIT_PENALTIES
)
SCALED_GRID: tuple[ScaledVariant, ...] = tuple(
    ScaledVariant(ls) for ls in SCALED_ASSIGNMENT_SCALES
)
ROUNDED_GRID: tuple[RoundedVariant, ...] = (RoundedVariant(),)
DEFAULT_VARIANT_GRID: tuple[VariantSpec, ...] = RAW_GRID + SCALED_GRID + ROUNDED_GRID


def variant_label(variant: VariantSpec) -> str:
    """Stable short label, e.g. ``raw(lm=1000;lt=10000000)``."""
    params = ";".join(f"{k}={v}" for k, v in variant.params())
    return f"{variant.kind}({params})"


def variant_sort_key(variant: VariantSpec):
    return (variant.kind, tuple(v for _, v in variant.params()))


# ---------------------------------------------------------------------------
# Slack encoding
# ---------------------------------------------------------------------------

def slack_bit_count(h: int) -> int:
    """Number of binary digits used for a slack bounded by ``h``."""
    h = _as_int(h, "capacity")
    if h < 0:
        raise ValueError("capacity must be non-negative")
    if h == 0:
        return 0
    return h.bit_length()  # floor(log2 h) + 1


def slack_coefficients(h: int) -> tuple[int, ...]:
    """Digit weights ``[1, 2, ..., 2^(r-1), h - 2^r + 1]``.

    Subset sums of the result cover exactly ``{0, ..., h}``.
    """
    h = _as_int(h, "capacity")
    if h < 0:
        raise ValueError("capacity must be non-negative")
    if h == 0:
        return ()
    r = h.bit_length() - 1
    return tuple(1 << j for j in range(r)) + (h - (1 << r) + 1,)


def _as_int(value, label: str) -> int:
    if isinstance(value, Fraction):
        if value.denominator != 1:
            raise ValueError(f"{label} must be integral, got {value}")
        return value.numerator
    if isinstance(value, (int, np.integer)):
        return int(value)
    raise ValueError(f"{label} must be integral, got {value!r}")


def value_range(coefficients: Sequence[Fraction]) -> Fraction:
    """Width of an affine term's value interval over binary assignments.

    Equal to the sum of positive coefficients minus the sum of negative
    ones; additive constants do not contribute.
    """
    hi = sum((c for c in coefficients if c > 0), Fraction(0))
    lo = sum((c for c in coefficients if c < 0), Fraction(0))
    return hi - lo


# ---------------------------------------------------------------------------
# Variable layout
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VariableMap:
    """Fixed index layout: decision bits, then slack bits.

    ``slack_weights`` carries the digit weight of every slack bit so a
    bitstring can be decoded without the originating instance.
    """

    n: int
    toolkits: tuple[str, ...]
    machines: tuple[str, ...]
    decision_index: Mapping[tuple[str, str], int]
    slack_index: Mapping[tuple[str, int], int]
    slack_weights: Mapping[str, tuple[int, ...]]

    @classmethod
    def for_instance(cls, inst: Instance) -> "VariableMap":
        decision = {}
        for i, t in enumerate(inst.toolkits):
            for j, m in enumerate(inst.machines):
                decision[t, m] = i * inst.n_machines + j
        slack = {}
        weights = {}
        idx = inst.n_toolkits * inst.n_machines
        for m in inst.machines:
            coeffs = slack_coefficients(_as_int(inst.capacity[m], "capacity"))
            weights[m] = coeffs
            for j in range(len(coeffs)):
                slack[m, j] = idx
                idx += 1
        return cls(
            n=idx,
            toolkits=inst.toolkits,
            machines=inst.machines,
            decision_index=decision,
            slack_index=slack,
            slack_weights=weights,
        )


@dataclass(frozen=True)
class Qubo:
    """Upper-triangular coefficient map plus constant offset.

    Diagonal entries hold linear terms (binary variables square to
    themselves); only nonzero coefficients are stored.  Instances are
    immutable and safe for shared read access.
    """

    n: int
    coeffs: Mapping[tuple[int, int], Fraction]
    offset: Fraction
    varmap: VariableMap | None = None
    variant: VariantSpec | None = None

    def __post_init__(self):
        object.__setattr__(self, "offset", Fraction(self.offset))
        clean = {}
        for (i, j), c in dict(self.coeffs).items():
            if not (0 <= i <= j < self.n):
                raise ValueError(f"coefficient key ({i}, {j}) out of range for n={self.n}")
            c = Fraction(c)
            if c != 0:
                clean[(i, j)] = c
        object.__setattr__(self, "coeffs", clean)

    def max_abs_coefficient(self) -> Fraction:
        return max((abs(c) for c in self.coeffs.values()), default=Fraction(0))

    def sorted_items(self) -> list[tuple[tuple[int, int], Fraction]]:
        return sorted(self.coeffs.items())


@dataclass(frozen=True)
class DecodedSample:
    """Bitstring read back as an assignment candidate plus slack values."""

    candidate: Mapping[str, frozenset[str]]
    slack: Mapping[str, int]
    raw_bits: str

    def as_assignment(self):
        """The candidate as an Assignment, or None if any toolkit does not
        have exactly one machine selected."""
        from .model import Assignment

        if any(len(ms) != 1 for ms in self.candidate.values()):
            return None
        return Assignment({t: next(iter(ms)) for t, ms in self.candidate.items()})


# ---------------------------------------------------------------------------
# Building
# ---------------------------------------------------------------------------

class _Accumulator:
    def __init__(self, n: int):
        self.n = n
        self.coeffs: dict[tuple[int, int], Fraction] = {}
        self.offset = Fraction(0)

    def add(self, i: int, j: int, c: Fraction):
        if c == 0:
            return
        key = (i, j) if i <= j else (j, i)
        self.coeffs[key] = self.coeffs.get(key, Fraction(0)) + c

    def add_squared_affine(self, terms: Mapping[int, Fraction], const: Fraction,
                           weight: Fraction):
        """Add ``weight * (sum_i a_i x_i + const)^2`` using x^2 = x."""
        items = sorted(terms.items())
        for pos, (i, a) in enumerate(items):
            self.add(i, i, weight * (a * a + 2 * const * a))
            for j, b in items[pos + 1:]:
                self.add(i, j, weight * 2 * a * b)
        self.offset += weight * const * const


def build_qubo(inst: Instance, variant: VariantSpec) -> Qubo:
    """Compile a sanitized instance into binary-quadratic form.

    Both constraint families are added as squared penalty terms; the
    variant decides the data preprocessing and the penalty weights (see
    the module docstring).  Identical inputs produce coefficient-
    identical results.
    """
    if not inst.is_sanitized():
        raise ValueError("instance must be sanitized (integral workloads and capacities)")
    varmap = VariableMap.for_instance(inst)
    acc = _Accumulator(varmap.n)

    cost = dict(inst.cost)
    if isinstance(variant, RoundedVariant):
        positive = [c for c in cost.values() if c > 0]
        if not positive:
            raise ValueError("rounded variant needs at least one positive cost")
        c_min = min(positive)
        cost = {k: Fraction(int(c // c_min)) if c > 0 else Fraction(0) for k, c in cost.items()}

    if isinstance(variant, RawVariant):
        _add_objective(acc, inst, varmap, cost, Fraction(1))
        for t in inst.toolkits:
            terms = {varmap.decision_index[t, m]: Fraction(1) for m in inst.machines}
            acc.add_squared_affine(terms, Fraction(-1), variant.toolkit_penalty)
        for m in inst.machines:
            terms = _capacity_terms(inst, varmap, m, Fraction(1))
            acc.add_squared_affine(terms, -inst.capacity[m], variant.machine_penalty)
    else:
        scale = variant.assignment_scale if isinstance(variant, ScaledVariant) else Fraction(1)
        v_obj = value_range(list(cost.values()))
        v_assign = scale * inst.n_machines
        v_cap = {
            m: value_range(
                [inst.workload[t, m] for t in inst.toolkits]
                + [Fraction(w) for w in varmap.slack_weights[m]]
            )
            for m in inst.machines
        }
        v_max = max([v_obj, v_assign, *v_cap.values()])
        if v_obj > 0:
            _add_objective(acc, inst, varmap, cost, v_max / v_obj)
        f_assign = scale * (v_max / v_assign)
        for t in inst.toolkits:
            terms = {varmap.decision_index[t, m]: f_assign for m in inst.machines}
            acc.add_squared_affine(terms, -f_assign, Fraction(1))
        for m in inst.machines:
            if v_cap[m] == 0:
                continue  # no workload and no capacity: constraint is vacuous
            f = v_max / v_cap[m]
            terms = _capacity_terms(inst, varmap, m, f)
            acc.add_squared_affine(terms, -inst.capacity[m] * f, Fraction(1))

    return Qubo(n=varmap.n, coeffs=acc.coeffs, offset=acc.offset, varmap=varmap,
                variant=variant)


def _add_objective(acc: _Accumulator, inst: Instance, varmap: VariableMap,
                   cost: Mapping[tuple[str, str], Fraction], factor: Fraction):
    for t in inst.toolkits:
        for m in inst.machines:
            acc.add(varmap.decision_index[t, m], varmap.decision_index[t, m],
                    cost[t, m] * factor)


def _capacity_terms(inst: Instance, varmap: VariableMap, m: str,
                    factor: Fraction) -> dict[int, Fraction]:
    terms = {
        varmap.decision_index[t, m]: inst.workload[t, m] * factor for t in inst.toolkits
    }
    for j, w in enumerate(varmap.slack_weights[m]):
        terms[varmap.slack_index[m, j]] = Fraction(w) * factor
    return terms


# ---------------------------------------------------------------------------
# Evaluation and transforms
# ---------------------------------------------------------------------------

def _check_bits(q: Qubo, bits: str) -> str:
    if len(bits) != q.n or set(bits) - {"0", "1"}:
        raise ValueError(f"need a 0/1 string of length {q.n}, got {bits!r}")
    return bits


def qubo_energy(q: Qubo, bits: str) -> Fraction:
    """Exact energy of one bitstring (coefficient sum plus offset)."""
    _check_bits(q, bits)
    total = q.offset
    for (i, j), c in q.coeffs.items():
        if bits[i] == "1" and bits[j] == "1":
            total += c
    return total


def normalize_qubo(q: Qubo) -> Qubo:
    """Divide all coefficients and the offset by the largest magnitude.

    The result's largest coefficient magnitude is exactly 1; minimizer
    sets are unchanged (positive rescaling).
    """
    scale = q.max_abs_coefficient()
    if scale == 0:
        raise ValueError("cannot normalize an all-zero coefficient map")
    coeffs = {k: c / scale for k, c in q.coeffs.items()}
    return Qubo(n=q.n, coeffs=coeffs, offset=q.offset / scale, varmap=q.varmap,
                variant=q.variant)


def decode(q: Qubo, bits: str) -> DecodedSample:
    """Read a bitstring back into machine choices and slack values."""
    _check_bits(q, bits)
    if q.varmap is None:
        raise ValueError("QUBO carries no variable map; cannot decode")
    vm = q.varmap
    candidate = {
        t: frozenset(m for m in vm.machines if bits[vm.decision_index[t, m]] == "1")
        for t in vm.toolkits
    }
    slack = {
        m: sum(
            w for j, w in enumerate(vm.slack_weights[m]) if bits[vm.slack_index[m, j]] == "1"
        )
        for m in vm.machines
    }
    return DecodedSample(candidate=candidate, slack=slack, raw_bits=bits)


def encode_assignment(q: Qubo, choice: Mapping[str, str],
                      slack: Mapping[str, int] | None = None) -> str:
    """Bitstring for an assignment with the given slack values.

    Machines omitted from ``slack`` (or all of them, when it is None)
    get zero slack.  Use :func:`residual_slack` to obtain the values
    that zero the capacity penalty of a feasible assignment.
    """
    if q.varmap is None:
        raise ValueError("QUBO carries no variable map; cannot encode")
    vm = q.varmap
    bits = ["0"] * q.n
    for t, m in choice.items():
        bits[vm.decision_index[t, m]] = "1"
    for m in vm.machines:
        target = slack.get(m, 0) if slack is not None else 0
        if target == 0:
            continue
        digits = _slack_digits(vm.slack_weights[m], target)
        for j, d in enumerate(digits):
            bits[vm.slack_index[m, j]] = "1" if d else "0"
    return "".join(bits)


def residual_slack(inst: Instance, choice: Mapping[str, str]) -> dict[str, int]:
    """Unused capacity per machine under a feasible assignment."""
    load = {m: Fraction(0) for m in inst.machines}
    for t, m in choice.items():
        load[m] += inst.workload[t, m]
    residual = {}
    for m in inst.machines:
        r = inst.capacity[m] - load[m]
        if r < 0 or r.denominator != 1:
            raise ValueError(f"assignment overloads machine {m!r} or data is not integral")
        residual[m] = int(r)
    return residual


def _slack_digits(weights: Sequence[int], target: int) -> list[int]:
    # Greedy from the largest weight; digit weights guarantee every value
    # in {0..sum} is reachable this way.
    remaining = target
    digits = [0] * len(weights)
    for j in sorted(range(len(weights)), key=lambda j: -weights[j]):
        if weights[j] <= remaining:
            digits[j] = 1
            remaining -= weights[j]
    if remaining != 0:
        raise ValueError(f"slack value {target} not representable by weights {list(weights)}")
    return digits


# ---------------------------------------------------------------------------
# Float64 mirror for hot kernels
# ---------------------------------------------------------------------------

_EPS = 2.0**-53


@dataclass(frozen=True)
class DenseQubo:
    """Float64 mirror of a Qubo for vectorized evaluation.

    ``int_exact`` marks coefficient maps whose float arithmetic is
    provably exact (all-integer data with bounded magnitude); otherwise
    ``energy_guard``/``flip_guard`` bound the absolute float error of a
    full energy and of a single-bit energy difference, so callers can
    fall back to exact arithmetic only in the ambiguous band.
    """

    n: int
    linear: np.ndarray        # (n,) diagonal terms
    couplings: np.ndarray     # (n, n) symmetric, zero diagonal
    offset: float
    int_exact: bool
    energy_guard: float
    flip_guard: np.ndarray    # (n,)


def as_dense(q: Qubo) -> DenseQubo:
    n = q.n
    linear = np.zeros(n)
    couplings = np.zeros((n, n))
    for (i, j), c in q.coeffs.items():
        fc = float(c)
        if i == j:
            linear[i] += fc
        else:
            couplings[i, j] += fc
            couplings[j, i] += fc
    abs_total = float(sum(abs(c) for c in q.coeffs.values()) + abs(q.offset))
    int_exact = (
        q.offset.denominator == 1
        and all(c.denominator == 1 for c in q.coeffs.values())
        and abs_total < 2.0**52
    )
    terms = len(q.coeffs) + 2
    energy_guard = 0.0 if int_exact else 4.0 * terms * _EPS * abs_total
    row_abs = np.abs(couplings).sum(axis=1) + np.abs(linear)
    flip_guard = np.zeros(n) if int_exact else 4.0 * (n + 2) * _EPS * row_abs
    return DenseQubo(
        n=n,
        linear=linear,
        couplings=couplings,
        offset=float(q.offset),
        int_exact=int_exact,
        energy_guard=energy_guard,
        flip_guard=flip_guard,
    )


def bits_to_vector(bits: str) -> np.ndarray:
    return np.frombuffer(bits.encode(), dtype=np.uint8) - ord("0")


def index_to_bits(k: int, n: int) -> str:
    """Bitstring of index ``k`` (variable 0 is the least-significant bit)."""
    return format(k, f"0{n}b")[::-1]


def dense_energies(dense: DenseQubo, states: np.ndarray) -> np.ndarray:
    """Energies of a (rows, n) 0/1 matrix of states."""
    x = states.astype(np.float64, copy=False)
    quad = np.einsum("ri,ij,rj->r", x, dense.couplings, x) * 0.5
    return dense.offset + x @ dense.linear + quad


def full_spectrum(q: Qubo) -> np.ndarray:
    """Energies of all 2**n bitstrings, indexed by bitstring value.

    Exact integer arithmetic when possible, float64 otherwise.  Guarded
    at 2**26 states.

    Splits the variables into two halves and combines the half-spectra
    with one cross-coupling matrix product, so the cost is a few dense
    passes over the output instead of one pass per coefficient.
    """
    if q.n > SPECTRUM_GUARD:
        raise TooLarge(f"full spectrum of {q.n} variables exceeds the 2^{SPECTRUM_GUARD} guard")
    dense = as_dense(q)
    n = q.n
    n_lo = n // 2
    n_hi = n - n_lo
    dtype = np.int64 if dense.int_exact else np.float64
    cast = int if dense.int_exact else float

    linear = np.zeros(n, dtype=dtype)
    upper_lo = np.zeros((n_lo, n_lo), dtype=dtype)   # strict upper, low half
    upper_hi = np.zeros((n_hi, n_hi), dtype=dtype)   # strict upper, high half
    cross = np.zeros((n_hi, n_lo), dtype=dtype)      # couples high to low
    for (i, j), c in q.coeffs.items():
        value = cast(c)
        if i == j:
            linear[i] += value
        elif j < n_lo:
            upper_lo[i, j] += value
        elif i >= n_lo:
            upper_hi[i - n_lo, j - n_lo] += value
        else:
            cross[j - n_lo, i] += value

    lo_states = (np.arange(1 << n_lo, dtype=np.int64)[:, None] >> np.arange(n_lo)) & 1
    hi_states = (np.arange(1 << n_hi, dtype=np.int64)[:, None] >> np.arange(n_hi)) & 1
    lo_states = lo_states.astype(dtype)
    hi_states = hi_states.astype(dtype)

    e_lo = lo_states @ linear[:n_lo]
    e_lo += np.einsum("ri,ij,rj->r", lo_states, upper_lo, lo_states)
    e_hi = hi_states @ linear[n_lo:]
    e_hi += np.einsum("ri,ij,rj->r", hi_states, upper_hi, hi_states)

    # state index = hi * 2**n_lo + lo (variable 0 is the LSB)
    energies = (hi_states @ cross) @ lo_states.T
    energies += e_hi[:, None]
    energies += e_lo[None, :]
    energies += cast(q.offset)
    return energies.reshape(-1)


def minimum_states(q: Qubo) -> tuple[list[int], Fraction]:
    """Exact argmin set (as bitstring values) and minimum energy.

    Float candidates within the rigorous error band are re-evaluated
    with exact rationals, so the result is bit-exact for any input.
    """
    energies = full_spectrum(q)
    dense = as_dense(q)
    if dense.int_exact:
        emin = int(energies.min())
        ks = np.flatnonzero(energies == emin)
        return [int(k) for k in ks], Fraction(emin)
    emin = float(energies.min())
    ks = np.flatnonzero(energies <= emin + 2 * dense.energy_guard)
    exact = {int(k): qubo_energy(q, index_to_bits(int(k), q.n)) for k in ks}
    best = min(exact.values())
    return sorted(k for k, e in exact.items() if e == best), best


# ---------------------------------------------------------------------------
# Text export (one coefficient per line) plus JSON variable-map sidecar
# ---------------------------------------------------------------------------

def sidecar_path(path) -> Path:
    return Path(str(path) + ".varmap.json")


def save_qubo(q: Qubo, path) -> None:
    """Write ``n offset`` then ``i j coeff`` lines; rationals as ``p/q``.

    A ``<path>.varmap.json`` sidecar stores the variable layout (and the
    variant) so bitstrings can be decoded later.  Round-trips exactly.
    """
    lines = [f"{q.n} {q.offset}"]
    for (i, j), c in q.sorted_items():
        lines.append(f"{i} {j} {c}")
    Path(path).write_text("\n".join(lines) + "\n")
    if q.varmap is not None:
        sidecar_path(path).write_text(json.dumps(_varmap_doc(q), indent=2) + "\n")


def load_qubo(path) -> Qubo:
    text = Path(path).read_text().strip().splitlines()
    if not text:
        raise ValueError(f"empty coefficient file {path}")
    head = text[0].split()
    if len(head) != 2:
        raise ValueError("header must be 'n offset'")
    n, offset = int(head[0]), Fraction(head[1])
    coeffs = {}
    for line in text[1:]:
        parts = line.split()
        if len(parts) != 3:
            raise ValueError(f"bad coefficient line: {line!r}")
        i, j, c = int(parts[0]), int(parts[1]), Fraction(parts[2])
        coeffs[(i, j)] = c
    varmap = None
    variant = None
    sc = sidecar_path(path)
    if sc.exists():
        varmap, variant = _varmap_from_doc(json.loads(sc.read_text()))
    return Qubo(n=n, coeffs=coeffs, offset=offset, varmap=varmap, variant=variant)


def _varmap_doc(q: Qubo) -> dict:
    vm = q.varmap
    doc = {
        "n": vm.n,
        "toolkits": list(vm.toolkits),
        "machines": list(vm.machines),
        "decision": [
            {"toolkit": t, "machine": m, "index": idx}
            for (t, m), idx in sorted(vm.decision_index.items(), key=lambda kv: kv[1])
        ],
        "slack": [
            {"machine": m, "bit": j, "index": idx, "weight": vm.slack_weights[m][j]}
            for (m, j), idx in sorted(vm.slack_index.items(), key=lambda kv: kv[1])
        ],
    }
    if q.variant is not None:
        doc["variant"] = {"kind": q.variant.kind,
                          **{k: str(v) for k, v in q.variant.params()}}
    return doc


def _varmap_from_doc(doc: dict) -> tuple[VariableMap, VariantSpec | None]:
    toolkits = tuple(doc["toolkits"])
    machines = tuple(doc["machines"])
    decision = {(e["toolkit"], e["machine"]): e["index"] for e in doc["decision"]}
    slack = {(e["machine"], e["bit"]): e["index"] for e in doc["slack"]}
    weights: dict[str, list[int]] = {m: [] for m in machines}
    for e in sorted(doc["slack"], key=lambda e: (e["machine"], e["bit"])):
        weights[e["machine"]].append(e["weight"])
    varmap = VariableMap(
        n=doc["n"],
        toolkits=toolkits,
        machines=machines,
        decision_index=decision,
        slack_index=slack,
        slack_weights={m: tuple(w) for m, w in weights.items()},
    )
    variant = None
    if "variant" in doc:
        v = doc["variant"]
        if v["kind"] == "raw":
            variant = RawVariant(Fraction(v["lm"]), Fraction(v["lt"]))
        elif v["kind"] == "scaled":
            variant = ScaledVariant(Fraction(v["ls"]))
        elif v["kind"] == "rounded":
            variant = RoundedVariant()
        else:
            raise ValueError(f"unknown variant kind {v['kind']!r}")
    return varmap, variant
