"""Experiment harness: grid-driven trials with deterministic seeding and a
stable CSV output schema.

Every trial's randomness comes from a seed derived from (master seed, kind,
cell index, trial index), so runs are reproducible cell-by-cell and
independent of execution order.  The CSV's `seconds` column is written as 0.0
unless timing is explicitly enabled, keeping default output byte-identical
across runs; measured wall time always goes to the returned rows.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .citest import (
    DEFAULT_C_SAMPLE,
    INDEPENDENT,
    TesterConfig,
    calibration_family,
    required_samples_cmi,
    test_conditional_independence,
)
from .estimation import DEFAULT_ADD_ONE_CONSTANT, add_one_risk_bound, SampleSet
from .hardinstances import nonrealizable_triple, realizable_triple
from .info import mutual_information
from .model import (
    Alphabet,
    DenseJoint,
    exact_mi_matrix,
    random_tree_model,
    sample,
    sample_dense,
)
from .seeding import derive_seed
from .structure import chow_liu_structure, max_weight_spanning_tree, tree_weight

__all__ = [
    "KINDS",
    "CSV_HEADER",
    "ExperimentCell",
    "ExperimentConfig",
    "ExperimentRow",
    "SeparationPoint",
    "SeparationResult",
    "run_experiment",
    "write_rows_csv",
    "separation_curve",
    "fitted_slope",
]

KINDS = (
    "RealizableRecovery",
    "NonRealizableRecovery",
    "SeparationCurve",
    "Add1Risk",
    "CITesterRates",
)

CSV_HEADER = "n,k,epsilon,N,trials,success_rate,mean_excess,p95_excess,seconds"


@dataclass(frozen=True)
class ExperimentCell:
    n: int
    k: int
    epsilon: float
    n_samples: int


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    grid: tuple
    trials: int
    seed: int
    out_path: str | None = None
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}; expected one of {KINDS}")
        if not self.grid:
            raise ValueError("grid must not be empty")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        object.__setattr__(self, "grid", tuple(self.grid))

    @staticmethod
    def from_json(text: str) -> "ExperimentConfig":
        doc = json.loads(text)
        grid = tuple(
            ExperimentCell(
                n=int(c["n"]),
                k=int(c["k"]),
                epsilon=float(c["epsilon"]),
                n_samples=int(c.get("N", 0)),
            )
            for c in doc["grid"]
        )
        return ExperimentConfig(
            kind=doc["kind"],
            grid=grid,
            trials=int(doc["trials"]),
            seed=int(doc["seed"]),
            out_path=doc.get("out"),
            options=dict(doc.get("options", {})),
        )

    def to_json(self, indent=2) -> str:
        doc = {
            "kind": self.kind,
            "grid": [
                {"n": c.n, "k": c.k, "epsilon": c.epsilon, "N": c.n_samples} for c in self.grid
            ],
            "trials": self.trials,
            "seed": self.seed,
            "options": self.options,
        }
        if self.out_path is not None:
            doc["out"] = self.out_path
        return json.dumps(doc, indent=indent)


@dataclass(frozen=True)
class ExperimentRow:
    """One grid cell's aggregate.  `excess` is the cell's loss measure: exact
    tree-weight shortfall for recovery kinds, KL minus its bound for Add1Risk,
    and statistic minus epsilon on the independent instance for CITesterRates."""

    n: int
    k: int
    epsilon: float
    n_samples: int
    trials: int
    success_rate: float
    mean_excess: float
    p95_excess: float
    seconds: float


def _fmt(x: float) -> str:
    return repr(float(x))


def write_rows_csv(rows, path, timing: bool = False) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(CSV_HEADER + "\n")
        for r in rows:
            seconds = r.seconds if timing else 0.0
            fh.write(
                f"{r.n},{r.k},{_fmt(r.epsilon)},{r.n_samples},{r.trials},"
                f"{_fmt(r.success_rate)},{_fmt(r.mean_excess)},{_fmt(r.p95_excess)},{_fmt(seconds)}\n"
            )


def _aggregate(cell: ExperimentCell, trials: int, successes: int, excesses, seconds: float) -> ExperimentRow:
    arr = np.asarray(excesses, dtype=np.float64)
    return ExperimentRow(
        n=cell.n,
        k=cell.k,
        epsilon=cell.epsilon,
        n_samples=cell.n_samples,
        trials=trials,
        success_rate=successes / trials,
        mean_excess=float(arr.mean()),
        p95_excess=float(np.percentile(arr, 95)),
        seconds=seconds,
    )


# -- recovery kinds -------------------------------------------------------------


def _realizable_cell(cell: ExperimentCell, trials: int, master: int, index: int, options: dict) -> ExperimentRow:
    floor = float(options.get("cpt_floor", 0.05))
    start = time.perf_counter()
    successes = 0
    excesses = []
    for t in range(trials):
        m = random_tree_model(cell.n, cell.k, derive_seed(master, "real", index, t, "model"), floor)
        weights = exact_mi_matrix(m)
        best = tree_weight(weights, max_weight_spanning_tree(weights))
        s = sample(m, cell.n_samples, derive_seed(master, "real", index, t, "data"))
        learned = chow_liu_structure(s)
        excess = best - tree_weight(weights, learned)
        successes += excess <= cell.epsilon
        excesses.append(excess)
    return _aggregate(cell, trials, successes, excesses, time.perf_counter() - start)


def _block_mi_matrix(blocks) -> np.ndarray:
    """Exact pairwise MI of an independent block product: block-diagonal, with
    cross-block entries exactly zero."""
    n = sum(b.n for b in blocks)
    w = np.zeros((n, n))
    offset = 0
    for b in blocks:
        for i in range(b.n):
            for j in range(i + 1, b.n):
                w[offset + i, offset + j] = w[offset + j, offset + i] = mutual_information(
                    b.marginal((i, j))
                )
        offset += b.n
    return w


def _sample_blocks(blocks, count: int, seed: int) -> SampleSet:
    columns = [sample_dense(b, count, derive_seed(seed, i)).rows for i, b in enumerate(blocks)]
    return SampleSet(Alphabet(blocks[0].k), np.hstack(columns))


def _nonrealizable_cell(cell: ExperimentCell, trials: int, master: int, index: int, options: dict) -> ExperimentRow:
    if cell.n % 3 != 0 or cell.n < 3:
        raise ValueError("NonRealizableRecovery cells need n to be a positive multiple of 3")
    if cell.k != 2:
        raise ValueError("the hard-instance families are binary")
    instance_eps = float(options.get("instance_epsilon", cell.epsilon))
    start = time.perf_counter()
    successes = 0
    excesses = []
    for t in range(trials):
        rng = np.random.default_rng(derive_seed(master, "nonreal", index, t, "pick"))
        blocks = [nonrealizable_triple(int(rng.integers(1, 4)), instance_eps) for _ in range(cell.n // 3)]
        weights = _block_mi_matrix(blocks)
        best = tree_weight(weights, max_weight_spanning_tree(weights))
        s = _sample_blocks(blocks, cell.n_samples, derive_seed(master, "nonreal", index, t, "data"))
        learned = chow_liu_structure(s)
        excess = best - tree_weight(weights, learned)
        successes += excess <= cell.epsilon
        excesses.append(excess)
    return _aggregate(cell, trials, successes, excesses, time.perf_counter() - start)


# -- separation curve -----------------------------------------------------------


@dataclass(frozen=True)
class SeparationPoint:
    epsilon: float
    n_star: int


@dataclass(frozen=True)
class SeparationResult:
    regime: str
    points: tuple
    slope: float  # of log N* against log(1 / epsilon)
    rows: tuple   # one ExperimentRow per probed (epsilon, N)


def fitted_slope(points) -> float:
    xs = np.array([math.log(1.0 / p.epsilon) for p in points])
    ys = np.array([math.log(p.n_star) for p in points])
    if len(xs) < 2:
        raise ValueError("need at least two points to fit a slope")
    return float(np.polyfit(xs, ys, 1)[0])


def _sample_size_grid(start: int, maximum: int) -> list:
    """Doubling grid: start, 2*start, 4*start, ... up to maximum."""
    out = []
    value = int(start)
    while value <= maximum:
        out.append(value)
        value *= 2
    return out


def separation_curve(
    regime: str,
    epsilons,
    trials: int,
    seed: int,
    target_rate: float = 0.8,
    start: int = 6,
    max_samples: int = 1 << 20,
) -> SeparationResult:
    """Smallest sample size (on a doubling grid) at which the structure
    learner is epsilon-approximate in at least `target_rate` of trials, per
    construction epsilon, plus the fitted log-log slope of N* against 1/eps.

    A trial succeeds when the learner is epsilon-approximate on every member
    of the three-member family, each member judged on its own independent
    sample set.  That mirrors the indistinguishability argument the families
    are built for: the learner must handle whichever member it is handed, so
    a sample size only counts once no member trips it up.  Success per member
    is the exact weight inequality on the known ground truth (learned tree's
    true weight within epsilon of the true optimum); the recorded excess is
    the worst member's.
    """
    if regime not in ("realizable", "nonrealizable"):
        raise ValueError(f"unknown regime {regime!r}")
    make = realizable_triple if regime == "realizable" else nonrealizable_triple
    points = []
    rows = []
    for eps in epsilons:
        instances = []
        for index in (1, 2, 3):
            joint = make(index, eps)
            weights = np.zeros((3, 3))
            for i in range(3):
                for j in range(i + 1, 3):
                    weights[i, j] = weights[j, i] = mutual_information(joint.marginal((i, j)))
            best = tree_weight(weights, max_weight_spanning_tree(weights))
            instances.append((joint, weights, best))
        n_star = None
        for count in _sample_size_grid(start, max_samples):
            begin = time.perf_counter()
            successes = 0
            excesses = []
            for t in range(trials):
                worst = 0.0
                for index, (joint, weights, best) in enumerate(instances):
                    s = sample_dense(joint, count, derive_seed(seed, regime, eps, count, t, index))
                    excess = best - tree_weight(weights, chow_liu_structure(s))
                    worst = max(worst, excess)
                successes += worst <= eps
                excesses.append(worst)
            cell = ExperimentCell(n=3, k=2, epsilon=eps, n_samples=count)
            rows.append(_aggregate(cell, trials, successes, excesses, time.perf_counter() - begin))
            if successes / trials >= target_rate:
                n_star = count
                break
        if n_star is None:
            raise RuntimeError(f"no sample size up to {max_samples} reached the target rate at epsilon={eps}")
        points.append(SeparationPoint(epsilon=float(eps), n_star=n_star))
    return SeparationResult(
        regime=regime, points=tuple(points), slope=fitted_slope(points), rows=tuple(rows)
    )


# -- bound-checking kinds ---------------------------------------------------------


def _add1_cell(cell: ExperimentCell, trials: int, master: int, index: int, options: dict) -> ExperimentRow:
    """`epsilon` carries delta for the KL bound; success means the achieved KL
    stays under the calibrated bound."""
    delta = cell.epsilon
    constant = float(options.get("constant", DEFAULT_ADD_ONE_CONSTANT))
    start = time.perf_counter()
    successes = 0
    excesses = []
    bound = add_one_risk_bound(cell.k, delta, cell.n_samples, constant)
    for t in range(trials):
        rng = np.random.default_rng(derive_seed(master, "add1", index, t))
        p = rng.dirichlet(np.ones(cell.k))
        cum = np.cumsum(p)
        draws = np.searchsorted(cum, rng.random(cell.n_samples), side="left")
        counts = np.bincount(np.minimum(draws, cell.k - 1), minlength=cell.k)
        q = (counts + 1.0) / (cell.n_samples + cell.k)
        d = float(np.sum(p * np.log(p / q)))
        successes += d <= bound
        excesses.append(d - bound)
    return _aggregate(cell, trials, successes, excesses, time.perf_counter() - start)


def _citester_cell(cell: ExperimentCell, trials: int, master: int, index: int, options: dict) -> ExperimentRow:
    """Each trial tests one conditionally independent and one dependent member
    of the calibration family; success means both verdicts are correct."""
    delta = float(options.get("delta", 0.1))
    cfg = TesterConfig(
        epsilon=cell.epsilon,
        delta=delta,
        k=cell.k,
        c_sample=float(options.get("c_sample", DEFAULT_C_SAMPLE)),
    )
    count = cell.n_samples if cell.n_samples > 0 else required_samples_cmi(cfg)
    family = {m.name: m for m in calibration_family(cell.k, cell.epsilon)}
    ci = family["ci-common-cause"]
    dep = family["dep-borderline"]
    start = time.perf_counter()
    successes = 0
    excesses = []
    for t in range(trials):
        s_ci = sample_dense(ci.joint, count, derive_seed(master, "citest", index, t, "ci"))
        s_dep = sample_dense(dep.joint, count, derive_seed(master, "citest", index, t, "dep"))
        v_ci = test_conditional_independence(s_ci, cfg)
        v_dep = test_conditional_independence(s_dep, cfg)
        successes += (v_ci.verdict == INDEPENDENT) and (v_dep.verdict != INDEPENDENT)
        excesses.append(v_ci.statistic - cell.epsilon)
    cell = ExperimentCell(cell.n, cell.k, cell.epsilon, count)
    return _aggregate(cell, trials, successes, excesses, time.perf_counter() - start)


def _separation_kind(cfg: ExperimentConfig) -> list:
    regime = cfg.options.get("regime", "realizable")
    result = separation_curve(
        regime,
        [cell.epsilon for cell in cfg.grid],
        cfg.trials,
        cfg.seed,
        target_rate=float(cfg.options.get("target_rate", 0.8)),
        start=int(cfg.options.get("start", 6)),
        max_samples=int(cfg.options.get("max_samples", 1 << 20)),
    )
    return list(result.rows)


def run_experiment(cfg: ExperimentConfig) -> list:
    """Run every grid cell and return one ExperimentRow per cell (the
    SeparationCurve kind emits one row per probed sample size).  Writes the
    CSV to cfg.out_path when set; pass options={"timing": true} to record
    wall time in the file, at the cost of byte-identical reruns."""
    runners = {
        "RealizableRecovery": _realizable_cell,
        "NonRealizableRecovery": _nonrealizable_cell,
        "Add1Risk": _add1_cell,
        "CITesterRates": _citester_cell,
    }
    if cfg.kind == "SeparationCurve":
        rows = _separation_kind(cfg)
    else:
        runner = runners[cfg.kind]
        rows = [
            runner(cell, cfg.trials, cfg.seed, index, cfg.options)
            for index, cell in enumerate(cfg.grid)
        ]
    if cfg.out_path is not None:
        write_rows_csv(rows, cfg.out_path, timing=bool(cfg.options.get("timing", False)))
    return rows
