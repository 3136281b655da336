"""Plug-in (conditional) independence testing with calibrated sample sizes.

The statistic is the plug-in (conditional) mutual information of the
empirical table; the verdict is "dependent" exactly when the statistic
reaches c_decision * epsilon.  The sample-size formulas are stated up to a
universal constant; `calibrate` pins that constant empirically on a fixed
family of distributions so that, at the returned size, independent inputs
stay below epsilon and dependent inputs stay above c_decision times their
true value, each with probability at least 1 - delta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .estimation import SampleSet, empirical_counts
from .hardinstances import realizable_triple
from .info import conditional_mi, mutual_information
from .model import Alphabet, DenseJoint, sample_dense
from .seeding import derive_seed

__all__ = [
    "INDEPENDENT",
    "DEPENDENT",
    "DEFAULT_C_SAMPLE",
    "TesterConfig",
    "TestVerdict",
    "CalibrationError",
    "required_samples_cmi",
    "required_samples_mi",
    "test_conditional_independence",
    "test_independence",
    "calibration_family",
    "calibrate",
]

INDEPENDENT = "independent"
DEPENDENT = "dependent"

# Produced by calibrate() at the reference configuration (epsilon=0.1,
# delta=0.1, k=2, 200 trials, seed 20260814); see README.
DEFAULT_C_SAMPLE = 0.1875


@dataclass(frozen=True)
class TesterConfig:
    epsilon: float
    delta: float
    k: int
    c_sample: float = DEFAULT_C_SAMPLE
    c_decision: float = 0.5

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if not 0 < self.delta < 1:
            raise ValueError("delta must lie in (0, 1)")
        if self.k < 2:
            raise ValueError("alphabet size must be >= 2")
        if self.c_sample <= 0:
            raise ValueError("c_sample must be positive")
        if not 0 < self.c_decision < 1:
            raise ValueError("c_decision must lie in (0, 1)")


@dataclass(frozen=True)
class TestVerdict:
    verdict: str
    statistic: float
    threshold: float
    n_samples: int


def _floored_log(x: float) -> float:
    return max(math.log(x), 1.0)


def required_samples_cmi(cfg: TesterConfig) -> int:
    """Samples for the conditional test:
    ceil(c_sample * (k^3 / eps) * log(k / delta) * log(k * log(1/delta) / eps)),
    every log natural and floored at 1, and at least 1 overall."""
    inner = _floored_log(1.0 / cfg.delta)
    value = (
        cfg.c_sample
        * (cfg.k**3 / cfg.epsilon)
        * _floored_log(cfg.k / cfg.delta)
        * _floored_log(cfg.k * inner / cfg.epsilon)
    )
    return max(1, math.ceil(value))


def required_samples_mi(cfg: TesterConfig) -> int:
    """Unconditional variant: one factor of k fewer (k^2 in place of k^3)."""
    inner = _floored_log(1.0 / cfg.delta)
    value = (
        cfg.c_sample
        * (cfg.k**2 / cfg.epsilon)
        * _floored_log(cfg.k / cfg.delta)
        * _floored_log(cfg.k * inner / cfg.epsilon)
    )
    return max(1, math.ceil(value))


def test_conditional_independence(s: SampleSet, cfg: TesterConfig) -> TestVerdict:
    """Plug-in conditional MI test on a 3-variable sample set (X, Y, Z)."""
    if s.n_variables != 3:
        raise ValueError("conditional test expects exactly 3 columns (X, Y, Z)")
    if s.n_samples < 1:
        raise ValueError("need at least one sample")
    joint = empirical_counts(s, (0, 1, 2)).counts / s.n_samples
    statistic = conditional_mi(joint)
    threshold = cfg.c_decision * cfg.epsilon
    verdict = DEPENDENT if statistic >= threshold else INDEPENDENT
    return TestVerdict(verdict, statistic, threshold, s.n_samples)


def test_independence(s: SampleSet, cfg: TesterConfig) -> TestVerdict:
    """Plug-in MI test on a 2-variable sample set (X, Y)."""
    if s.n_variables != 2:
        raise ValueError("independence test expects exactly 2 columns (X, Y)")
    if s.n_samples < 1:
        raise ValueError("need at least one sample")
    joint = empirical_counts(s, (0, 1)).counts / s.n_samples
    statistic = mutual_information(joint)
    threshold = cfg.c_decision * cfg.epsilon
    verdict = DEPENDENT if statistic >= threshold else INDEPENDENT
    return TestVerdict(verdict, statistic, threshold, s.n_samples)


# -- calibration ----------------------------------------------------------------


@dataclass(frozen=True)
class _FamilyMember:
    name: str
    joint: DenseJoint
    true_cmi: float  # exact I(X;Y|Z); 0 for the conditionally independent members


def _noisy_copy_triple(k: int, weight: float) -> DenseJoint:
    """X = Y = C for a uniform hidden value C, while Z copies C with
    probability 1 - weight and is uniform otherwise.  I(X;Y|Z) = H(C|Z),
    which rises from 0 (weight 0) to log k (weight 1)."""
    stay = 1.0 - weight + weight / k
    move = weight / k
    table = np.zeros((k, k, k))
    for c in range(k):
        for z in range(k):
            table[c, c, z] = (1.0 / k) * (stay if z == c else move)
    return DenseJoint(3, Alphabet(k), table.reshape(-1))


def _common_cause_triple(k: int, fidelity: float = 0.7) -> DenseJoint:
    """X and Y are independent noisy copies of a uniform Z; I(X;Y|Z) = 0."""
    stay = fidelity + (1.0 - fidelity) / k
    move = (1.0 - fidelity) / k
    cond = np.full((k, k), move)
    np.fill_diagonal(cond, stay)
    table = np.zeros((k, k, k))
    for z in range(k):
        table[:, :, z] = (1.0 / k) * np.outer(cond[z], cond[z])
    return DenseJoint(3, Alphabet(k), table.reshape(-1))


def _solve_noisy_copy_weight(k: int, target_cmi: float) -> float:
    lo, hi = 0.0, 1.0
    for _ in range(80):
        mid = (lo + hi) / 2.0
        value = conditional_mi(_noisy_copy_triple(k, mid).table())
        if value < target_cmi:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2.0


def calibration_family(k: int, epsilon: float) -> list:
    """Fixed family used by `calibrate` and the rate experiments: two exactly
    conditionally independent members, one far dependent member, and one
    borderline member tuned to true CMI = 1.5 * epsilon.  For binary
    alphabets the family also carries the perfectly-correlated-pair instance
    (two equal uniform bits plus a noisy observer of them), whose conditional
    dependence given the observer is exactly the binary entropy of
    epsilon / 2."""
    product = DenseJoint(3, Alphabet(k), np.full(k**3, 1.0 / k**3))
    copy_table = np.zeros((k, k, k))
    for x in range(k):
        copy_table[x, x, :] = 1.0 / k**2
    members = [
        _FamilyMember("ci-common-cause", _common_cause_triple(k), 0.0),
        _FamilyMember("ci-product", product, 0.0),
        _FamilyMember("dep-copy", DenseJoint(3, Alphabet(k), copy_table.reshape(-1)), math.log(k)),
    ]
    borderline = _noisy_copy_triple(k, _solve_noisy_copy_weight(k, 1.5 * epsilon))
    members.append(
        _FamilyMember("dep-borderline", borderline, conditional_mi(borderline.table()))
    )
    if k == 2 and epsilon < 2.0:
        pair = realizable_triple(1, epsilon)
        # Statistic convention is I(col0; col1 | col2), so the noisy observer
        # (axis 0 of the generator) moves to the last column.
        view = np.ascontiguousarray(np.transpose(pair.table(), (1, 2, 0)))
        half = epsilon / 2.0
        exact = -(half * math.log(half) + (1.0 - half) * math.log(1.0 - half))
        members.append(
            _FamilyMember("dep-realizable-pair", DenseJoint(3, Alphabet(2), view.reshape(-1)), exact)
        )
    return members


class CalibrationError(RuntimeError):
    """No candidate constant met the target rates; carries the per-candidate
    observed pass rates for diagnosis."""

    def __init__(self, message: str, diagnostics: dict):
        super().__init__(message)
        self.diagnostics = diagnostics


def _statistic(s: SampleSet) -> float:
    joint = empirical_counts(s, (0, 1, 2)).counts / s.n_samples
    return conditional_mi(joint)


def calibrate(cfg: TesterConfig, trials: int = 200, seed: int = 20260814, grid=None) -> TesterConfig:
    """Smallest c_sample on the grid (powers of two times {1, 1.5}, spanning
    1/16 to 1536) at which both guarantees hold on the calibration family:

    - independent members: statistic < epsilon in >= 1 - delta of trials;
    - dependent members: statistic > c_decision * true CMI in >= 1 - delta.

    Trials use seeds derived from (seed, member, candidate, trial), so the
    search is deterministic and order-independent.
    """
    if trials < 100:
        raise ValueError("need at least 100 calibration trials")
    if grid is None:
        grid = sorted(2.0**e * m for e in range(-4, 11) for m in (1.0, 1.5))
    family = calibration_family(cfg.k, cfg.epsilon)
    diagnostics = {}
    for candidate in grid:
        tuned = replace(cfg, c_sample=float(candidate))
        count = required_samples_cmi(tuned)
        rates = {}
        ok = True
        for member in family:
            failures = 0
            for t in range(trials):
                s = sample_dense(
                    member.joint, count, derive_seed(seed, "calibrate", member.name, candidate, t)
                )
                stat = _statistic(s)
                if member.true_cmi == 0.0:
                    bad = stat >= cfg.epsilon
                else:
                    bad = stat <= cfg.c_decision * member.true_cmi
                failures += bad
            rates[member.name] = 1.0 - failures / trials
            if failures / trials > cfg.delta:
                ok = False
        diagnostics[float(candidate)] = rates
        if ok:
            return tuned
    raise CalibrationError("no c_sample on the grid met the target rates", diagnostics)
