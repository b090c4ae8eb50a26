"""Erasure-coded time-sharing baselines.

The message is spread over all size-(M-1) receiver subsets with a maximum
distance separable code, each subset is served by beamforming into its
members' common range space (with noise filling the null space), and any
receiver reconstructs from the subsets containing it.  The eavesdropper
variant nulls size-(M-1) eavesdropper subsets instead.  Both variants give
exact rational degrees of freedom, the benchmarks alignment must beat.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

import numpy as np

from ..channel import null_space_basis
from ..errors import CombinatorialOverflow, DegenerateInput, PreconditionFailed
from .base import SchemeReport, finite_dof

#: Largest subset count a plan will enumerate.
SUBSET_CAP = 10**4

#: Prime field order for the erasure code (Mersenne prime 2^31 - 1).
FIELD_PRIME = (1 << 31) - 1


@dataclass(frozen=True)
class MulticastPlan:
    """Time-sharing schedule: one beam slot per receiver subset.

    ``subsets`` lists the size-(M-1) receiver index tuples; ``data_dirs``
    and ``noise_dirs`` the unit beam / null-space vector per slot (the noise
    direction is empty for the eavesdropper-nulling variant).  Any
    ``per_receiver`` slots suffice to reconstruct the message.
    """

    M: int
    group_size: int
    subsets: tuple
    data_dirs: tuple
    noise_dirs: tuple
    rate_bits: float
    theta_bits: float
    dof: Fraction
    extras: dict = field(default_factory=dict)

    @property
    def slots(self) -> int:
        return len(self.subsets)

    @property
    def per_receiver(self) -> int:
        """Slots containing any fixed receiver, C(group_size-1, M-2)."""
        if self.M < 2:
            return 0
        return math.comb(self.group_size - 1, self.M - 2)

    def membership_counts(self) -> np.ndarray:
        counts = np.zeros(self.group_size, dtype=np.int64)
        for s in self.subsets:
            for i in s:
                counts[i] += 1
        return counts

    def report(self, channel, name: str) -> SchemeReport:
        return SchemeReport(
            scheme_name=name,
            M=channel.M,
            J1=channel.J1,
            J2=channel.J2,
            P=channel.power,
            rate_bits=self.rate_bits,
            leakage_bits=0.0,
            dof_contribution=finite_dof(self.rate_bits, channel.power),
            analytic_limit=float(self.dof),
            extras=dict(self.extras, slots=self.slots, theta_bits=self.theta_bits),
        )


def timeshare_dof(M: int, group_size: int) -> Fraction:
    """Exact schedule efficiency C(J-1, M-2) / C(J, M-1) = (M-1)/J."""
    if M < 1 or group_size < max(1, M - 1):
        raise PreconditionFailed(f"invalid sizes M={M}, J={group_size}")
    if M == 1:
        return Fraction(0)
    return Fraction(
        math.comb(group_size - 1, M - 2), math.comb(group_size, M - 1)
    )


def _subsets_or_overflow(n: int, k: int) -> list:
    count = math.comb(n, k)
    if count > SUBSET_CAP:
        raise CombinatorialOverflow(
            f"C({n},{k}) = {count} subsets exceed cap {SUBSET_CAP}"
        )
    return list(combinations(range(n), k))


def timeshare_multicast_plan(channel) -> MulticastPlan:
    """Serve every size-(M-1) legitimate subset in its common range space.

    Each slot beams along the first member's direction and fills the
    subset's one-dimensional null space with noise, so every eavesdropper
    rate stays bounded.  The net rate is the per-slot worst case discounted
    by the fraction of slots a receiver attends.
    """
    M, J1 = channel.M, channel.J1
    if J1 < max(1, M - 1):
        raise PreconditionFailed(f"need at least M-1 = {M - 1} receivers, got {J1}")
    if M == 1:
        # Size-0 subsets carry no data; the baseline degenerates to rate 0.
        return MulticastPlan(
            M=M, group_size=J1, subsets=((),), data_dirs=((),), noise_dirs=((),),
            rate_bits=0.0, theta_bits=0.0, dof=Fraction(0),
        )
    subsets = _subsets_or_overflow(J1, M - 1)
    H = channel.legit_matrix
    G = channel.eaves_matrix
    data_dirs, noise_dirs, thetas = [], [], []
    for s in subsets:
        u = H[s[0]] / np.linalg.norm(H[s[0]])
        a = null_space_basis(H[list(s)])[0]
        cross = np.abs(G @ a)
        if np.min(cross) == 0.0:
            raise DegenerateInput(
                "an eavesdropper lies in a subset's range space; "
                "noise cannot mask it"
            )
        direct = (H[list(s)] @ u) ** 2
        if np.min(direct) == 0.0:
            raise DegenerateInput("a subset member is orthogonal to its beam")
        theta = -min(0.5 * math.log2(d) for d in direct) + max(
            0.5 * math.log2(1.0 + (g @ u) ** 2 / c**2)
            for g, c in zip(G, cross)
        )
        data_dirs.append(tuple(float(v) for v in u))
        noise_dirs.append(tuple(float(v) for v in a))
        thetas.append(theta)
    theta = max(thetas)
    T0, T = math.comb(J1 - 1, M - 2), len(subsets)
    slot_rate = max(0.0, 0.5 * math.log2(channel.power) - theta)
    return MulticastPlan(
        M=M,
        group_size=J1,
        subsets=tuple(subsets),
        data_dirs=tuple(data_dirs),
        noise_dirs=tuple(noise_dirs),
        rate_bits=(T0 / T) * slot_rate,
        theta_bits=theta,
        dof=Fraction(T0, T),
        extras={"slot_rate_bits": slot_rate, "theta_per_slot": tuple(thetas)},
    )


def timeshare_eavesdropper_plan(channel) -> MulticastPlan:
    """Null every size-(M-1) eavesdropper subset in turn.

    Each slot beams into the chosen eavesdroppers' common null space; every
    legitimate receiver hears every slot, while each eavesdropper misses
    the slots that null it.
    """
    M, J1, J2 = channel.M, channel.J1, channel.J2
    if J2 < max(1, M - 1):
        raise PreconditionFailed(
            f"need at least M-1 = {M - 1} eavesdroppers, got {J2}"
        )
    if M == 1:
        return MulticastPlan(
            M=M, group_size=J2, subsets=((),), data_dirs=((),), noise_dirs=((),),
            rate_bits=0.0, theta_bits=0.0, dof=Fraction(0),
        )
    subsets = _subsets_or_overflow(J2, M - 1)
    H = channel.legit_matrix
    G = channel.eaves_matrix
    data_dirs = []
    worst_gain = math.inf
    for s in subsets:
        b = null_space_basis(G[list(s)])[0]
        gains = (H @ b) ** 2
        if np.min(gains) == 0.0:
            raise DegenerateInput("a legitimate vector lies in a nulled span")
        worst_gain = min(worst_gain, float(np.min(gains)))
        data_dirs.append(tuple(float(v) for v in b))
    T1, T = math.comb(J2 - 1, M - 2), len(subsets)
    slot_rate = 0.5 * math.log2(1.0 + worst_gain * channel.power)
    omega = -0.5 * math.log2(worst_gain)
    return MulticastPlan(
        M=M,
        group_size=J2,
        subsets=tuple(subsets),
        data_dirs=tuple(data_dirs),
        noise_dirs=tuple(() for _ in subsets),
        rate_bits=(T1 / T) * slot_rate,
        theta_bits=omega,
        dof=Fraction(T1, T),
        extras={"slot_rate_bits": slot_rate, "worst_gain": worst_gain},
    )


# -- erasure code --------------------------------------------------------------


def _lagrange_eval(xs, ys, x: int, p: int = FIELD_PRIME) -> int:
    """Evaluate the interpolating polynomial of (xs, ys) at x over GF(p)."""
    total = 0
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        num, den = 1, 1
        for j, xj in enumerate(xs):
            if j == i:
                continue
            num = num * ((x - xj) % p) % p
            den = den * ((xi - xj) % p) % p
        total = (total + yi * num * pow(den, p - 2, p)) % p
    return total


def mds_encode(message, slots: int, p: int = FIELD_PRIME) -> tuple:
    """Systematic maximum distance separable encoding over GF(p).

    The k message symbols sit at evaluation points 0..k-1 of a degree-(k-1)
    polynomial; the codeword is its value at points 0..slots-1, so any k
    symbols determine the message.
    """
    message = [int(m) % p for m in message]
    k = len(message)
    if not 1 <= k <= slots:
        raise ValueError(f"need 1 <= len(message) = {k} <= slots = {slots}")
    if slots > p:
        raise ValueError("more slots than field points")
    xs = list(range(k))
    out = list(message)
    for x in range(k, slots):
        out.append(_lagrange_eval(xs, message, x, p))
    return tuple(out)


def mds_decode(symbols, k: int, p: int = FIELD_PRIME) -> tuple:
    """Recover the k message symbols from any k (position, value) pairs."""
    items = list(symbols)
    if len(items) < k:
        raise ValueError(f"need at least {k} symbols, got {len(items)}")
    xs = [int(pos) for pos, _ in items[:k]]
    ys = [int(val) % p for _, val in items[:k]]
    if len(set(xs)) != k:
        raise ValueError("duplicate symbol positions")
    return tuple(_lagrange_eval(xs, ys, x, p) for x in range(k))
