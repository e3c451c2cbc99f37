"""Seeded Monte Carlo experiments counting real eigenvalues of random Hermitian pencils.

Two experiments are provided.  ``regular`` draws full-rank random Hermitian
pencils, shifts both coefficients by w_j * I and counts the real
eigenvalues.  ``rank`` draws pencils of bounded rank from a generic
structure and counts the real eigenvalues recovered by rank completion.

Every trial j gets its own generator seeded with splitmix64(seed, j), so the
output does not depend on the number of workers.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
import scipy.linalg as sla

from .bundles import BundleDescriptor, codim_closed_form, realize
from .canonical import random_congruence_sample
from .errors import HermikronError
from .infer import REAL_TOL, eigs_singular, full_report, match_descriptor

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
CSV_HEADER = "j,real_count,max_abs_imag"
GENERATORS = ("g1", "g2")

SHIFTS: dict[str, Callable[[int], float]] = {
    "jlogj": lambda j: j * math.log(j) / 100,
    "linear": lambda j: j / 100,
    "none": lambda j: 0.0,
}


def splitmix64(seed: int, j: int) -> int:
    """Finalizer of the splitmix64 generator applied to seed + (j+1)*golden."""
    z = (int(seed) + (int(j) + 1) * GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def trial_rng(seed: int, j: int) -> np.random.Generator:
    return np.random.default_rng(splitmix64(seed, j))


def worker_count() -> int:
    env = os.environ.get("HERMIKRON_THREADS")
    cap = os.cpu_count() or 1
    if env:
        try:
            return max(1, min(int(env), 64))
        except ValueError:
            pass
    return cap


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    n: int
    trials: int
    seed: int = 0
    r: int | None = None
    shift: str = "jlogj"
    generator: str = "g1"
    verify: bool = False
    """rank kind: also run the full structure report and compare with the sampled (c, d)"""
    out: str | None = None

    def __post_init__(self):
        if self.kind not in ("regular", "rank"):
            raise ValueError(f"kind must be 'regular' or 'rank', got {self.kind!r}")
        if self.n < 1 or self.trials < 1:
            raise ValueError("need n >= 1 and trials >= 1")
        if self.kind == "rank" and (self.r is None or not 1 <= self.r <= self.n - 1):
            raise ValueError(f"rank experiment needs 1 <= r <= n-1, got r={self.r}")
        if self.shift not in SHIFTS:
            raise ValueError(f"unknown shift rule {self.shift!r}; known: {sorted(SHIFTS)}")
        if self.generator not in GENERATORS:
            raise ValueError(f"unknown generator {self.generator!r}; known: {GENERATORS}")


@dataclass(frozen=True)
class ExperimentRow:
    j: int
    real_count: int
    max_abs_imag: float
    eigenvalues: tuple = field(default=(), repr=False)
    c: int | None = None
    d: int | None = None
    matched: bool | None = None

    def csv_line(self) -> str:
        return f"{self.j},{self.real_count},{self.max_abs_imag:.17g}"


def random_hermitian(rng: np.random.Generator, n: int) -> np.ndarray:
    """Standard complex Gaussian off-diagonal entries, real Gaussian diagonal."""
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
    H = np.triu(Z, 1)
    H = H + H.conj().T
    H[np.diag_indices(n)] = rng.standard_normal(n)
    return H


def count_real(eigs, tol: float = REAL_TOL) -> tuple[int, float, float]:
    """(#real, max |im| over all, max relative |im| over the real ones)."""
    eigs = np.asarray(eigs, dtype=complex)
    if eigs.size == 0:
        return 0, 0.0, 0.0
    rel = np.abs(eigs.imag) / (1 + np.abs(eigs.real))
    is_real = rel <= tol
    return int(np.sum(is_real)), float(np.max(np.abs(eigs.imag))), float(np.max(rel[is_real], initial=0.0))


def _regular_trial(cfg: ExperimentConfig, j: int) -> ExperimentRow:
    rng = trial_rng(cfg.seed, j)
    A = random_hermitian(rng, cfg.n)
    B = random_hermitian(rng, cfg.n)
    w = SHIFTS[cfg.shift](j)
    shift = w * np.eye(cfg.n)
    eigs = sla.eigvals(A + shift, -(B + shift))
    real, max_imag, _ = count_real(eigs)
    return ExperimentRow(j, real, max_imag, tuple(complex(z) for z in eigs))


def _draw_descriptor(cfg: ExperimentConfig, rng: np.random.Generator) -> BundleDescriptor:
    n, r = cfg.n, cfg.r
    ds = np.arange(r // 2 + 1)
    if cfg.generator == "g1":
        d = int(rng.integers(0, r // 2 + 1))
    else:
        weights = np.array([math.exp(-codim_closed_form(BundleDescriptor(n, r, 0, int(x)))["bundle"] / 2)
                            for x in ds])
        d = int(rng.choice(ds, p=weights / weights.sum()))
    c = int(rng.integers(0, r - 2 * d + 1))
    return BundleDescriptor(n, r, c, d)


def _rank_trial(cfg: ExperimentConfig, j: int) -> ExperimentRow:
    rng = trial_rng(cfg.seed, j)
    desc = _draw_descriptor(cfg, rng)
    sub_seed = int(rng.integers(0, 2 ** 63))
    p = random_congruence_sample(realize(desc), "integers", sub_seed)
    try:
        eigs = eigs_singular(p, seed=sub_seed, nrank=cfg.r)
    except HermikronError:
        eigs = []
    real, max_imag, _ = count_real(eigs)
    matched = None
    if cfg.verify:
        try:
            matched = match_descriptor(full_report(p, seed=sub_seed), desc)
        except HermikronError:
            matched = False
    return ExperimentRow(j, real, max_imag, tuple(complex(z) for z in eigs),
                         desc.c, desc.d, matched)


def run(cfg: ExperimentConfig, workers: int | None = None) -> list[ExperimentRow]:
    trial = _regular_trial if cfg.kind == "regular" else _rank_trial
    workers = workers or worker_count()
    js = range(1, cfg.trials + 1)
    if workers == 1:
        rows = [trial(cfg, j) for j in js]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda j: trial(cfg, j), js))
    return sorted(rows, key=lambda row: row.j)


def experiment_regular(cfg: ExperimentConfig, workers: int | None = None) -> list[ExperimentRow]:
    if cfg.kind != "regular":
        raise ValueError("config kind must be 'regular'")
    return run(cfg, workers)


def experiment_rank(cfg: ExperimentConfig, workers: int | None = None) -> list[ExperimentRow]:
    if cfg.kind != "rank":
        raise ValueError("config kind must be 'rank'")
    return run(cfg, workers)


def csv_text(rows) -> str:
    lines = [CSV_HEADER] + [row.csv_line() for row in sorted(rows, key=lambda r: r.j)]
    return "\n".join(lines) + "\n"


def emit_csv(rows, path) -> None:
    with open(path, "w", newline="\n", encoding="ascii") as fh:
        fh.write(csv_text(rows))


PLOT_STUB = '''"""Scatter of real-eigenvalue counts against trial index."""
import csv
import sys

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "{csv_name}"
with open(path) as fh:
    rows = list(csv.DictReader(fh))
j = [int(r["j"]) for r in rows]
count = [int(r["real_count"]) for r in rows]
plt.scatter(j, count, s=6)
plt.xlabel("j")
plt.ylabel("Number of real eigenvalues")
plt.savefig(path.rsplit(".", 1)[0] + ".png", dpi=150)
'''


def emit_plotdata(rows, path) -> str:
    """Write the CSV and a matplotlib stub next to it; returns the stub path."""
    emit_csv(rows, path)
    stub = str(path).rsplit(".", 1)[0] + "_plot.py"
    with open(stub, "w", newline="\n", encoding="ascii") as fh:
        fh.write(PLOT_STUB.format(csv_name=os.path.basename(str(path))))
    return stub


@dataclass(frozen=True)
class RegularSummary:
    all_even: bool
    early_min: int
    late_max: int
    spearman: float

    def passed(self, n: int) -> bool:
        return self.all_even and self.early_min <= 2 and self.late_max == n and self.spearman > 0.5


def summarize_regular(rows, n: int, early: int = 50, late: int = 100) -> RegularSummary:
    from scipy.stats import spearmanr
    counts = np.array([row.real_count for row in rows])
    js = np.array([row.j for row in rows])
    rho = float(spearmanr(js, counts).statistic) if len(set(counts)) > 1 else 0.0
    return RegularSummary(bool(np.all(counts % 2 == n % 2)), int(counts[:early].min()),
                          int(counts[-late:].max()), rho)
