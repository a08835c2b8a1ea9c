"""Classical samplers over a binary-quadratic objective.

Three samplers share one result container: single-bit-flip simulated
annealing with a geometric temperature schedule, a uniform-random
baseline, and an exhaustive minimizer for small problems.  A one-pass
single-bit-flip improvement step is available as post-processing for
any sampler's output.

Determinism: every sampler derives all randomness from its seed (each
annealing restart from ``(seed, restart_index)``), so identical calls
return identical results regardless of scheduling.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import TooLarge
from .qubo import (
    Qubo,
    as_dense,
    bits_to_vector,
    dense_energies,
    index_to_bits,
    minimum_states,
    qubo_energy,
)

BRUTE_FORCE_GUARD = 26


@dataclass(frozen=True)
class SampleEntry:
    bits: str
    energy: float
    multiplicity: int


@dataclass(frozen=True)
class SampleSet:
    """Multiset of sampled bitstrings with float64 energies.

    Entries are merged per bitstring and sorted by (energy, bits); the
    multiplicities sum to the requested number of shots or restarts.
    Energies are evaluated in float64, which is exact for all-integer
    coefficient maps.
    """

    entries: tuple[SampleEntry, ...]
    meta: dict = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(e.multiplicity for e in self.entries)

    @property
    def best(self) -> SampleEntry:
        return self.entries[0]

    def iter_bits(self) -> Iterable[tuple[str, int]]:
        for e in self.entries:
            yield e.bits, e.multiplicity


def _make_sampleset(states: np.ndarray, energies: np.ndarray, meta: dict) -> SampleSet:
    by_bits: dict[str, tuple[float, int]] = {}
    for row, energy in zip(states, energies):
        bits = "".join("1" if b else "0" for b in row)
        if bits in by_bits:
            e, mult = by_bits[bits]
            by_bits[bits] = (e, mult + 1)
        else:
            by_bits[bits] = (float(energy), 1)
    entries = tuple(
        SampleEntry(bits, e, mult)
        for bits, (e, mult) in sorted(by_bits.items(), key=lambda kv: (kv[1][0], kv[0]))
    )
    return SampleSet(entries=entries, meta=meta)


# ---------------------------------------------------------------------------
# Simulated annealing
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SaConfig:
    """Annealing run shape; temperatures default to the coefficient scale.

    When ``t_start``/``t_end`` are None they resolve to the largest
    coefficient magnitude and a thousandth of it.
    """

    steps: int = 1280
    t_start: float | None = None
    t_end: float | None = None
    seed: int = 0
    restarts: int = 500

    def __post_init__(self):
        if self.steps < 1 or self.restarts < 1:
            raise ValueError("steps and restarts must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.t_start is not None and self.t_end is not None:
            if not (self.t_start >= self.t_end > 0):
                raise ValueError("need t_start >= t_end > 0")

    def temperatures(self, q: Qubo) -> np.ndarray:
        t_start = self.t_start
        t_end = self.t_end
        if t_start is None:
            scale = float(q.max_abs_coefficient())
            t_start = scale if scale > 0 else 1.0
        if t_end is None:
            t_end = 1e-3 * t_start
        if not (t_start >= t_end > 0):
            raise ValueError("need t_start >= t_end > 0")
        if self.steps == 1:
            return np.array([t_start])
        ratio = t_end / t_start
        return t_start * ratio ** (np.arange(self.steps) / (self.steps - 1))


def simulated_anneal(q: Qubo, cfg: SaConfig) -> SampleSet:
    """Independent single-bit-flip annealing chains, one per restart.

    Each step flips one uniformly random bit; the flip is kept when it
    does not increase the energy, and otherwise with probability
    ``exp(-dE / T)`` on a geometric temperature ladder.  One uniform
    draw is consumed per step whether or not it is needed, so each
    restart's stream is reproducible in isolation.  The final state of
    every restart is recorded.
    """
    if q.n < 1:
        raise ValueError("QUBO must have at least one variable")
    dense = as_dense(q)
    temps = cfg.temperatures(q)
    R, n, steps = cfg.restarts, q.n, cfg.steps

    states = np.empty((R, n), dtype=np.float64)
    flips = np.empty((R, steps), dtype=np.int64)
    uniforms = np.empty((R, steps))
    for r in range(R):
        rng = np.random.default_rng([cfg.seed, r])
        states[r] = rng.integers(0, 2, size=n)
        flips[r] = rng.integers(0, n, size=steps)
        uniforms[r] = rng.random(steps)

    rows = np.arange(R)
    for s in range(steps):
        i = flips[:, s]
        field_i = dense.linear[i] + np.einsum("rn,rn->r", dense.couplings[i], states)
        cur = states[rows, i]
        d_e = (1.0 - 2.0 * cur) * field_i
        # dE <= 0 always passes: exp(0) = 1 > any uniform draw in [0, 1)
        accept = uniforms[:, s] < np.exp(-np.maximum(d_e, 0.0) / temps[s])
        states[rows[accept], i[accept]] = 1.0 - cur[accept]

    energies = dense_energies(dense, states)
    meta = {
        "solver": "sa",
        "params": {
            "steps": cfg.steps,
            "restarts": cfg.restarts,
            "t_start": float(temps[0]),
            "t_end": float(temps[-1]),
        },
        "seed": cfg.seed,
    }
    return _make_sampleset(states.astype(np.int8), energies, meta)


def random_sample(q: Qubo, shots: int, seed: int) -> SampleSet:
    """Uniform random bitstrings with evaluated energies."""
    if shots < 1:
        raise ValueError("shots must be >= 1")
    if seed < 0:
        raise ValueError("seed must be non-negative")
    rng = np.random.default_rng([seed])
    states = rng.integers(0, 2, size=(shots, q.n), dtype=np.int8)
    energies = dense_energies(as_dense(q), states)
    meta = {"solver": "random", "params": {"shots": shots}, "seed": seed}
    return _make_sampleset(states, energies, meta)


# ---------------------------------------------------------------------------
# Single-bit-flip post-processing
# ---------------------------------------------------------------------------

def bitflip_postprocess(q: Qubo, bits: str) -> str:
    """One left-to-right pass flipping bits that strictly lower energy.

    Each test is evaluated against the current, partially updated
    string.  Float differences inside the rigorous error band are
    re-checked exactly, so "strictly lower" is exact for any input.
    The result never has higher energy than the input.
    """
    if len(bits) != q.n or set(bits) - {"0", "1"}:
        raise ValueError(f"need a 0/1 string of length {q.n}, got {bits!r}")
    dense = as_dense(q)
    x = bits_to_vector(bits).astype(np.float64)
    current: list[str] | None = None  # lazily materialized for exact rechecks
    for i in range(q.n):
        field_i = dense.linear[i] + dense.couplings[i] @ x
        d_e = (1.0 - 2.0 * x[i]) * field_i
        guard = dense.flip_guard[i]
        if d_e < -guard:
            improves = True
        elif d_e > guard:
            improves = False
        else:
            if current is None:
                current = ["1" if v else "0" for v in x]
            flipped = current.copy()
            flipped[i] = "0" if current[i] == "1" else "1"
            improves = qubo_energy(q, "".join(flipped)) < qubo_energy(q, "".join(current))
        if improves:
            x[i] = 1.0 - x[i]
            if current is not None:
                current[i] = "1" if x[i] else "0"
    return "".join("1" if v else "0" for v in x)


def postprocess_sampleset(q: Qubo, samples: SampleSet) -> SampleSet:
    """Apply the bit-flip pass to every entry, re-merging duplicates."""
    dense = as_dense(q)
    by_bits: dict[str, int] = {}
    for bits, mult in samples.iter_bits():
        improved = bitflip_postprocess(q, bits)
        by_bits[improved] = by_bits.get(improved, 0) + mult
    keys = sorted(by_bits)
    states = np.stack([bits_to_vector(b) for b in keys])
    energies = dense_energies(dense, states)
    entries = tuple(
        SampleEntry(bits, float(e), by_bits[bits])
        for e, bits in sorted(zip(energies, keys), key=lambda kv: (kv[0], kv[1]))
    )
    meta = dict(samples.meta)
    meta["postprocessed"] = True
    return SampleSet(entries=entries, meta=meta)


# ---------------------------------------------------------------------------
# Exhaustive minimizer
# ---------------------------------------------------------------------------

def brute_force_qubo(q: Qubo) -> tuple[str, Fraction]:
    """Exact global minimum over all bitstrings, up to 2**26 states.

    Ties are broken by the lexicographically smallest bitstring.  The
    returned energy is exact.
    """
    if q.n > BRUTE_FORCE_GUARD:
        raise TooLarge(f"{q.n} variables exceed the brute-force guard of {BRUTE_FORCE_GUARD}")
    ks, energy = minimum_states(q)
    arr = np.asarray(ks, dtype=np.int64)
    # Lexicographic order of bitstrings (variable 0 first) equals numeric
    # order after bit reversal.
    rev = np.zeros_like(arr)
    for b in range(q.n):
        rev |= ((arr >> b) & 1) << (q.n - 1 - b)
    best = int(arr[np.argmin(rev)])
    return index_to_bits(best, q.n), energy


# ---------------------------------------------------------------------------
# CSV export shared by all samplers
# ---------------------------------------------------------------------------

def save_sampleset(samples: SampleSet, path) -> None:
    """Write ``# meta: {...}`` then ``bits,energy,multiplicity`` rows."""
    lines = ["# meta: " + json.dumps(samples.meta, sort_keys=True)]
    lines.append("bits,energy,multiplicity")
    for e in samples.entries:
        lines.append(f"{e.bits},{e.energy!r},{e.multiplicity}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_sampleset(path) -> SampleSet:
    lines = Path(path).read_text().strip().splitlines()
    meta: dict = {}
    start = 0
    if lines and lines[0].startswith("# meta: "):
        meta = json.loads(lines[0][len("# meta: "):])
        start = 1
    if not lines[start:] or lines[start] != "bits,energy,multiplicity":
        raise ValueError(f"{path} is not a sample CSV")
    entries = []
    for line in lines[start + 1:]:
        bits, energy, mult = line.split(",")
        entries.append(SampleEntry(bits, float(energy), int(mult)))
    return SampleSet(entries=tuple(entries), meta=meta)
