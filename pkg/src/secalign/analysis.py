"""Closed-form degrees-of-freedom bounds and exact numerical diagnostics.

All piecewise bounds are exact rationals.  Leakage entropies are computed by
exact integer enumeration of sum histograms, so test oracles can be frozen
to full float precision.  Monte Carlo error estimation reports a Wilson
interval and consumes counter-based per-trial randomness, making estimates
reproducible under any trial ordering.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from . import _kernels, seeds
from .errors import InsufficientSpan, PreconditionFailed


@dataclass(frozen=True)
class DofBounds:
    """Exact secrecy and joint degrees-of-freedom bounds for (M, J1, J2).

    single_*: one confidential stream for the legitimate group.
    joint_*:  sum over the two-group private-broadcast configuration.
    ``single_timeshare`` is the erasure-coded time-sharing baseline, always
    at or below ``single_lower``.
    """

    M: int
    J1: int
    J2: int
    single_lower: Fraction
    single_timeshare: Fraction
    single_upper: Fraction
    joint_lower: Fraction
    joint_upper: Fraction

    def as_floats(self) -> dict:
        return {
            "single_lower": float(self.single_lower),
            "single_timeshare": float(self.single_timeshare),
            "single_upper": float(self.single_upper),
            "joint_lower": float(self.joint_lower),
            "joint_upper": float(self.joint_upper),
        }


def dof_bounds(M: int, J1: int, J2: int) -> DofBounds:
    """Evaluate every closed-form bound at one antenna/group-size triple."""
    if M < 1 or J1 < 1 or J2 < 1:
        raise ValueError("need M, J1, J2 >= 1")
    lo, hi = min(J1, J2), max(J1, J2)

    if lo < M:
        single_lower = Fraction(1)
        single_timeshare = Fraction(1)
        single_upper = Fraction(1)
    else:
        single_lower = Fraction(M - 1, M)
        single_timeshare = Fraction(M - 1, lo)
        single_upper = 1 - Fraction(1, M * M - M + 1)

    if hi < M:
        joint_lower = Fraction(2)
        joint_upper = Fraction(2)
    elif lo < M:
        joint_lower = Fraction(2 * (M - 1), M)
        joint_upper = Fraction(2 * M - 1, M)
    else:
        joint_lower = Fraction(2 * (M - 1), M + 1)
        joint_upper = Fraction(2 * (M - 1), M)

    return DofBounds(
        M=M,
        J1=J1,
        J2=J2,
        single_lower=single_lower,
        single_timeshare=single_timeshare,
        single_upper=single_upper,
        joint_lower=joint_lower,
        joint_upper=joint_upper,
    )


BOUNDS_CSV_COLUMNS = (
    "M",
    "J1",
    "J2",
    "single_lower",
    "single_timeshare",
    "single_upper",
    "joint_lower",
    "joint_upper",
    "single_lower_f",
    "single_timeshare_f",
    "single_upper_f",
    "joint_lower_f",
    "joint_upper_f",
)


def bounds_csv(rows) -> str:
    """CSV dump of DofBounds rows: exact p/q columns plus float columns."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BOUNDS_CSV_COLUMNS)
    for b in rows:
        fracs = [
            b.single_lower,
            b.single_timeshare,
            b.single_upper,
            b.joint_lower,
            b.joint_upper,
        ]
        w.writerow(
            [b.M, b.J1, b.J2]
            + [f"{f.numerator}/{f.denominator}" for f in fracs]
            + [repr(float(f)) for f in fracs]
        )
    return buf.getvalue()


def pairwise_bound_rate(h, g, P: float, M: int) -> float:
    """Single-pair secrecy-capacity upper bound at finite power.

    Sum of the two eigen-subchannel rates of the stacked pair minus the
    eavesdropper's own rate, all under per-antenna power P/M.
    """
    h = np.asarray(h, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    if h.shape != g.shape or h.ndim != 1:
        raise ValueError("h and g must be 1-d of equal length")
    gram = np.array(
        [[h @ h, h @ g], [g @ h, g @ g]], dtype=np.float64
    )
    eig = np.linalg.eigvalsh(gram)
    eig = np.clip(eig, 0.0, None)
    q = P / M
    rate = sum(0.5 * math.log2(1.0 + lam * q) for lam in eig)
    rate -= 0.5 * math.log2(1.0 + q * float(g @ g))
    return max(0.0, rate)


# -- exact leakage entropies -------------------------------------------------


def row_sum_pmf_counts(weight: int, Q: int) -> np.ndarray:
    """Histogram of a sum of ``weight`` independent uniform {-Q..Q} symbols.

    Exact int64 counts, indexed by sum + weight*Q.  weight 0 gives the
    deterministic zero sum.
    """
    if weight < 0 or Q < 1:
        raise ValueError("need weight >= 0 and Q >= 1")
    counts = np.ones(1, dtype=np.int64)
    one = np.ones(2 * Q + 1, dtype=np.int64)
    for _ in range(weight):
        counts = np.convolve(counts, one)
    return counts


def entropy_bits_from_counts(counts) -> float:
    """Entropy in bits of a distribution given by non-negative counts."""
    counts = np.asarray(counts, dtype=np.float64)
    total = counts.sum()
    if total <= 0:
        raise ValueError("counts must have positive total")
    pos = counts[counts > 0]
    return float(math.log2(total) - (pos @ np.log2(pos)) / total)


def leakage_marginal_entropy(smap, Q: int) -> float:
    """Sum of per-row entropies of S b with b uniform on {-Q..Q}^cols.

    Upper-bounds the exact joint entropy (with equality only when the rows
    are independent), and depends on the map only through its row weights.
    """
    total = 0.0
    for w in smap.row_weights():
        if w > 0:
            total += entropy_bits_from_counts(row_sum_pmf_counts(int(w), Q))
    return total


def leakage_joint_entropy_exact(smap, Q: int, cap: int = _kernels.MAX_ENUM) -> float:
    """Exact joint entropy in bits of the row-sum vector S b.

    Keys each joint outcome by a mixed-radix integer: column c contributes
    weight[c] = sum of radix weights of the rows containing c, so a single
    integer-sum histogram over b recovers the joint distribution exactly.
    Works for overlapping (non-partition) maps too.
    """
    if Q < 1:
        raise ValueError("need Q >= 1")
    live = [row for row in smap.ones if row]
    if not live:
        return 0.0
    # Radix per row: row sum ranges over 2*Q*weight + 1 values.
    spans = [2 * Q * len(row) + 1 for row in live]
    radix = np.empty(len(live), dtype=object)
    acc = 1
    for r in range(len(live) - 1, -1, -1):
        radix[r] = acc
        acc *= spans[r]
    size = acc
    if size > cap:
        raise PreconditionFailed(
            f"joint key space {size} exceeds enumeration cap {cap}"
        )
    weights = np.zeros(smap.cols, dtype=np.int64)
    offset = 0
    for r, row in enumerate(live):
        offset += Q * len(row) * int(radix[r])
        for c in row:
            weights[c] += int(radix[r])
    weights = weights[weights != 0]
    if weights.size == 0:
        return 0.0
    counts = _kernels.sum_histogram(weights, Q, int(offset), int(size))
    return entropy_bits_from_counts(counts[counts > 0])


# -- slope fitting and Monte Carlo -------------------------------------------


def dof_slope(points) -> float:
    """Fitted rate slope against 0.5*log2(P) on the top half of the grid.

    ``points`` is a sequence of (P, rate_bits).  Requires at least 3 points
    spanning 2 decades of power (max/min >= 100), else InsufficientSpan.
    """
    pts = sorted((float(p), float(r)) for p, r in points)
    if len(pts) < 3:
        raise InsufficientSpan(f"need at least 3 points, got {len(pts)}")
    pmin, pmax = pts[0][0], pts[-1][0]
    if pmin <= 0 or pmax / pmin < 100.0:
        raise InsufficientSpan(
            f"power grid spans {pmax / pmin:.3g}x, need >= 100x"
        )
    top = pts[-math.ceil(len(pts) / 2) :]
    x = np.array([0.5 * math.log2(p) for p, _ in top])
    y = np.array([r for _, r in top])
    slope = np.polyfit(x, y, 1)[0]
    return float(slope)


class PeEstimate(NamedTuple):
    pe: float
    ci95: tuple
    errors: int
    trials: int


def wilson_interval(errors: int, trials: int, z: float = 1.959963984540054) -> tuple:
    """Wilson score 95% interval for a binomial proportion."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    phat = errors / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (phat + z2 / (2 * trials)) / denom
    half = (
        z
        * math.sqrt(phat * (1.0 - phat) / trials + z2 / (4.0 * trials * trials))
        / denom
    )
    return (max(0.0, center - half), min(1.0, center + half))


def monte_carlo_pe(encoder, channel, trials: int, seed: int) -> PeEstimate:
    """Estimate legitimate-group error probability for a scheme encoder.

    The encoder protocol:
      sample_message(rng) -> message
      encode(message, rng) -> (M,) channel input
      decode(y, receiver) -> message (any exception counts as an error)

    A trial errs when any legitimate receiver fails to recover the message.
    Trial t draws from a counter-based stream at counter t, so estimates
    are independent of execution order and extendable without replay.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    errors = 0
    sigma = math.sqrt(channel.noise_var)
    for t in range(trials):
        rng = seeds.trial_rng(seed, "mc", t)
        msg = encoder.sample_message(rng)
        x = np.asarray(encoder.encode(msg, rng), dtype=np.float64)
        single_use = x.ndim == 1
        if single_use:
            x = x[:, None]
        y = channel.legit_matrix @ x
        y = y + sigma * rng.standard_normal(y.shape)
        for j in range(channel.J1):
            obs = float(y[j, 0]) if single_use else y[j]
            try:
                got = encoder.decode(obs, j)
            except Exception:
                errors += 1
                break
            if got != msg:
                errors += 1
                break
    pe = errors / trials
    return PeEstimate(pe=pe, ci95=wilson_interval(errors, trials), errors=errors, trials=trials)
