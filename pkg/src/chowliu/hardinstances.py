"""Three-bit instance families that separate easy from hard recovery.

Both families consist of three distributions over binary (X, Y, Z) that are
pairwise close yet prefer different trees, plus a block-product helper for
scaling them up to many variables.  Every quantity here is computed by exact
enumeration of the 8-entry tables; nothing is sampled.

Non-realizable family: each bit independently copies a hidden fair coin B
with probability 3/4 +- epsilon (one coordinate gets the minus sign) and is
otherwise replaced by a fresh fair coin, so each bit agrees with B with
probability 7/8 +- epsilon/2.  No tree fits any member exactly, the members
are O(epsilon^2) apart in KL, and the best and second-best trees are
separated by at least 0.4 * epsilon in weight.

Realizable family: one pair of bits is perfectly correlated and uniform, and
the remaining bit copies their common value with probability 1 - epsilon
(else a fresh fair coin).  Members are exactly tree-structured, epsilon/2
apart in squared Hellinger distance, and their tree weights separate by
roughly (epsilon / 2) * log(2 / epsilon).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .info import mutual_information
from .model import Alphabet, DenseJoint, kl_divergence, statistical_distances

__all__ = [
    "TripleFamily",
    "NonRealizableFacts",
    "RealizableFacts",
    "nonrealizable_triple",
    "realizable_triple",
    "block_product",
    "verify_nonrealizable_facts",
    "verify_realizable_facts",
]

_BINARY = Alphabet(2)

# Coordinate that carries the minus sign (non-realizable) or the noisy copier
# role (realizable), per member index.
_NONREALIZABLE_SIGNS = {1: (1, 1, -1), 2: (1, -1, 1), 3: (-1, 1, 1)}
_REALIZABLE_PAIRS = {1: (1, 2), 2: (0, 2), 3: (0, 1)}


@dataclass(frozen=True)
class TripleFamily:
    """One member of a hard-instance family over binary (X, Y, Z)."""

    regime: str
    index: int
    epsilon: float

    def __post_init__(self):
        if self.regime not in ("nonrealizable", "realizable"):
            raise ValueError(f"unknown regime {self.regime!r}")
        if self.index not in (1, 2, 3):
            raise ValueError(f"member index must be 1, 2, or 3, got {self.index}")
        limit = 0.25 if self.regime == "nonrealizable" else 1.0
        if not 0.0 < self.epsilon < limit:
            raise ValueError(f"epsilon must lie in (0, {limit}) for {self.regime}")

    def joint(self) -> DenseJoint:
        if self.regime == "nonrealizable":
            return nonrealizable_triple(self.index, self.epsilon)
        return realizable_triple(self.index, self.epsilon)


def nonrealizable_triple(index: int, epsilon: float) -> DenseJoint:
    """Member `index` of the non-realizable family at gap `epsilon`.

    Accepts epsilon = 0 (all three members coincide) up to but excluding 1/4,
    where a copy probability would reach 1.
    """
    if index not in _NONREALIZABLE_SIGNS:
        raise ValueError(f"member index must be 1, 2, or 3, got {index}")
    if not 0.0 <= epsilon < 0.25:
        raise ValueError(f"epsilon must lie in [0, 0.25), got {epsilon}")
    agree = [7.0 / 8.0 + s * epsilon / 2.0 for s in _NONREALIZABLE_SIGNS[index]]
    table = np.zeros((2, 2, 2))
    for hidden in (0, 1):
        for x in (0, 1):
            for y in (0, 1):
                for z in (0, 1):
                    mass = 0.5
                    for bit, a in zip((x, y, z), agree):
                        mass *= a if bit == hidden else 1.0 - a
                    table[x, y, z] += mass
    return DenseJoint(3, _BINARY, table.reshape(-1))


def realizable_triple(index: int, epsilon: float) -> DenseJoint:
    """Member `index` of the realizable (exactly tree-structured) family.

    Member i has coordinate pair `_REALIZABLE_PAIRS[i]` perfectly correlated
    and uniform; the remaining coordinate copies their common value with
    probability 1 - epsilon and is a fresh fair coin otherwise, so it agrees
    with the pair with probability 1 - epsilon / 2.
    """
    if index not in _REALIZABLE_PAIRS:
        raise ValueError(f"member index must be 1, 2, or 3, got {index}")
    if not 0.0 <= epsilon <= 1.0:
        raise ValueError(f"epsilon must lie in [0, 1], got {epsilon}")
    pair = _REALIZABLE_PAIRS[index]
    copier = ({0, 1, 2} - set(pair)).pop()
    agree = 1.0 - epsilon / 2.0
    table = np.zeros((2, 2, 2))
    for x in (0, 1):
        for y in (0, 1):
            for z in (0, 1):
                bits = (x, y, z)
                if bits[pair[0]] != bits[pair[1]]:
                    continue
                common = bits[pair[0]]
                table[x, y, z] = 0.5 * (agree if bits[copier] == common else 1.0 - agree)
    return DenseJoint(3, _BINARY, table.reshape(-1))


def block_product(blocks) -> DenseJoint:
    """Independent product of dense joints over a shared alphabet; variables
    concatenate in block order, preserving most-significant-first indexing."""
    blocks = list(blocks)
    if not blocks:
        raise ValueError("need at least one block")
    k = blocks[0].k
    for b in blocks:
        if b.k != k:
            raise ValueError("blocks must share one alphabet")
    probs = blocks[0].probs
    n = blocks[0].n
    for b in blocks[1:]:
        probs = np.kron(probs, b.probs)
        n += b.n
    return DenseJoint(n, Alphabet(k), probs)


@dataclass(frozen=True)
class NonRealizableFacts:
    """Exact closeness and separation quantities for the non-realizable pair
    (member 1 vs member 2) at one epsilon."""

    epsilon: float
    kl_r1_r2: float
    mi_gap: float  # I(X;Y) - I(X;Z) under member 1
    mi_gap_bound: float  # 0.4 * epsilon
    mi_gap_ok: bool
    kl_quadratic_ratio: float  # (KL / eps^2) relative to the same at eps / 2
    kl_quadratic_ok: bool


def verify_nonrealizable_facts(epsilon: float) -> NonRealizableFacts:
    """Exact dense-table checks: the two members are O(epsilon^2) apart in KL
    (ratio across epsilon halving stays within x1.5 of quadratic), while the
    best and second-best weight trees of member 1 differ by at least
    0.4 * epsilon in MI."""
    if not 0.0 < epsilon < 0.25:
        raise ValueError(f"epsilon must lie in (0, 0.25), got {epsilon}")
    r1 = nonrealizable_triple(1, epsilon)
    r2 = nonrealizable_triple(2, epsilon)
    kl = kl_divergence(r1, r2)
    mi_xy = mutual_information(r1.marginal((0, 1)))
    mi_xz = mutual_information(r1.marginal((0, 2)))
    gap = mi_xy - mi_xz
    half = epsilon / 2.0
    kl_half = kl_divergence(nonrealizable_triple(1, half), nonrealizable_triple(2, half))
    ratio = (kl / epsilon**2) / (kl_half / half**2)
    return NonRealizableFacts(
        epsilon=epsilon,
        kl_r1_r2=kl,
        mi_gap=gap,
        mi_gap_bound=0.4 * epsilon,
        mi_gap_ok=gap >= 0.4 * epsilon,
        kl_quadratic_ratio=ratio,
        kl_quadratic_ok=1.0 / 1.5 <= ratio <= 1.5,
    )


@dataclass(frozen=True)
class RealizableFacts:
    """Exact closeness and separation quantities for the realizable pair
    (member 1 vs member 2) at one epsilon."""

    epsilon: float
    hellinger_sq: float
    hellinger_expected: float  # exactly epsilon / 2
    hellinger_ok: bool
    mi_gap: float  # I(Y;Z) - I(X;Z) under member 1
    mi_gap_leading: float  # (epsilon / 2) * log(2 / epsilon)
    mi_gap_ok: bool


def verify_realizable_facts(epsilon: float) -> RealizableFacts:
    """Exact dense-table checks: members 1 and 2 sit exactly epsilon / 2 apart
    in squared Hellinger distance, while member 1's strong edge beats its weak
    edges by at least (epsilon / 2) * log(2 / epsilon) in MI."""
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    r1 = realizable_triple(1, epsilon)
    r2 = realizable_triple(2, epsilon)
    hell = statistical_distances(r1, r2).hellinger_sq
    mi_yz = mutual_information(r1.marginal((1, 2)))
    mi_xz = mutual_information(r1.marginal((0, 2)))
    gap = mi_yz - mi_xz
    leading = (epsilon / 2.0) * math.log(2.0 / epsilon)
    return RealizableFacts(
        epsilon=epsilon,
        hellinger_sq=hell,
        hellinger_expected=epsilon / 2.0,
        hellinger_ok=abs(hell - epsilon / 2.0) <= 1e-12,
        mi_gap=gap,
        mi_gap_leading=leading,
        mi_gap_ok=gap >= leading,
    )
