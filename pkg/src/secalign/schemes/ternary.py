"""Ternary wiretap code and its multilevel lifting to the Gaussian channel.

The base code sends one bit through two field-of-three input symbols so
that a receiver seeing the sum (or difference) decodes it while a receiver
seeing either single input learns exactly nothing.  Stacking the code on
base-3 digit levels, with the lowest levels left empty as a noise guard,
turns it into a Gaussian-channel scheme whose rate slope is log3(2).

Powers here can exceed the float range, so level counts are derived with
exact integer arithmetic and only logarithms touch floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import seeds
from ..channel import CompoundChannel
from ..errors import DecodeFailure, InvalidEpsilon, PreconditionFailed

LOG3_2 = math.log(2.0, 3.0)


def f3_encode(bit: int, coin: int) -> tuple:
    """Map one bit and one coin to the two field-of-three inputs.

    Bit 0 goes to (0,0) or (1,1), bit 1 to (0,1) or (1,0); the coin picks
    the tuple.  Either single input is uniform regardless of the bit, which
    is the whole secrecy argument.
    """
    if bit not in (0, 1) or coin not in (0, 1):
        raise ValueError("bit and coin must be 0 or 1")
    return coin, coin ^ bit


def f3_decode_y1(y1: int) -> int:
    """Decode from the modular sum x1 + x2: {0, 2} mean bit 0, 1 means 1."""
    if y1 not in (0, 1, 2):
        raise ValueError("y1 must lie in the field {0, 1, 2}")
    return 1 if y1 == 1 else 0


def f3_decode_y2(y2: int) -> int:
    """Decode from the modular difference x1 - x2: 0 means bit 0."""
    if y2 not in (0, 1, 2):
        raise ValueError("y2 must lie in the field {0, 1, 2}")
    return 0 if y2 == 0 else 1


def gaussian_tail(x: float) -> float:
    """P(|V| >= x) for a standard normal V."""
    return math.erfc(x / math.sqrt(2.0))


def _half_log3(value) -> int:
    """floor(0.5 * log3(value)) by exact integer bracketing."""
    est = int(0.5 * math.log2(value) / math.log2(3.0))
    while 3 ** (2 * (est + 1)) <= value:
        est += 1
    while est > 0 and 3 ** (2 * est) > value:
        est -= 1
    return est


@dataclass(frozen=True)
class MultilevelCode:
    """Stacked ternary code over digit levels T .. Mlev-1.

    T is the noise guard (lowest used level), chosen so in-guard noise is
    rarer than the error budget; Mlev is the largest level count whose
    synthesized signal fits the power budget, 3^(2*Mlev) <= P/2.
    """

    T: int
    Mlev: int
    P: float
    noise_var: float
    eps_target: float
    seed: int = 0

    def __post_init__(self):
        if self.T < 1:
            raise ValueError("guard level T must be >= 1")
        if self.Mlev <= self.T:
            raise PreconditionFailed(
                f"no information levels: Mlev={self.Mlev} <= T={self.T}"
            )

    @property
    def num_bits(self) -> int:
        return self.Mlev - self.T

    @property
    def levels(self) -> range:
        return range(self.T, self.Mlev)

    def default_coins(self) -> tuple:
        rng = seeds.derive(self.seed, "coins")
        return tuple(int(c) for c in rng.integers(0, 2, size=self.num_bits))


def design_multilevel_code(
    P, eps_target: float, noise_var: float = 1.0, seed: int = 0
) -> MultilevelCode:
    """Pick the guard level and level count for a power and error budget.

    The guard is the smallest T whose two-receiver in-guard noise event
    2 * P(|V| >= 3^(T-1) / sqrt(noise_var)) stays within eps_target.
    Pass P as an exact integer when it exceeds 2^53.
    """
    if not (0 < eps_target < 1):
        raise InvalidEpsilon(f"eps_target must be in (0, 1), got {eps_target}")
    if noise_var <= 0:
        raise ValueError("noise_var must be positive")
    sigma = math.sqrt(noise_var)
    T = 1
    while 2.0 * gaussian_tail(3 ** (T - 1) / sigma) > eps_target:
        T += 1
    half = P // 2 if isinstance(P, int) else P / 2
    Mlev = _half_log3(half)
    return MultilevelCode(
        T=T, Mlev=Mlev, P=P, noise_var=noise_var, eps_target=eps_target, seed=seed
    )


def multilevel_encode(bits, code: MultilevelCode, coins=None) -> tuple:
    """Synthesize the two integer channel inputs from the per-level bits.

    Each level's bit goes through the base ternary code; level l contributes
    its two symbols times 3^l.  Inputs stay in {0, 1} per level, so sums and
    differences never carry across levels.
    """
    bits = [int(b) for b in bits]
    if len(bits) != code.num_bits:
        raise ValueError(f"need exactly {code.num_bits} bits, got {len(bits)}")
    if coins is None:
        coins = code.default_coins()
    coins = [int(c) for c in coins]
    if len(coins) != code.num_bits:
        raise ValueError(f"need exactly {code.num_bits} coins")
    x1 = x2 = 0
    for level, bit, coin in zip(code.levels, bits, coins):
        s1, s2 = f3_encode(bit, coin)
        x1 += s1 * 3**level
        x2 += s2 * 3**level
    return x1, x2


def _nearest_guard_multiple(y: float, T: int) -> int:
    """Closest multiple of 3^T; fails when the residual breaches the guard."""
    step = 3**T
    s = int(round(y / step)) * step
    if abs(y - s) >= 3 ** (T - 1):
        raise DecodeFailure(
            f"residual {abs(y - s):.3g} reaches the guard radius 3^{T - 1}"
        )
    return s


def multilevel_decode(y_i: float, code: MultilevelCode, receiver: int = 0) -> tuple:
    """Recover the bits from one receiver's noisy scalar observation.

    Receiver 0 sees the input sum (plain base-3 digits in {0,1,2});
    receiver 1 sees the difference (balanced digits in {-1,0,1}).  Raises
    DecodeFailure when the noise breaches the guard or the rounded signal
    is not expressible in the receiver's digit alphabet over the used
    levels.
    """
    if receiver not in (0, 1):
        raise ValueError("receiver must be 0 or 1")
    s = _nearest_guard_multiple(float(y_i), code.T)
    s //= 3**code.T
    bits = []
    for _ in code.levels:
        if receiver == 0:
            digit = s % 3
            bits.append(f3_decode_y1(digit))
        else:
            digit = (s + 1) % 3 - 1
            bits.append(f3_decode_y2(digit % 3))
        s = (s - digit) // 3
    if s != 0:
        raise DecodeFailure("signal inconsistent with the used digit levels")
    return tuple(bits)


def multilevel_dof(P, eps_target: float, noise_var: float = 1.0) -> float:
    """Rate over 0.5*log2(P) for the designed code at this power."""
    code = design_multilevel_code(P, eps_target, noise_var)
    return code.num_bits / (0.5 * math.log2(P))


def multilevel_equivocation_bits(code: MultilevelCode, observed: int) -> float:
    """H(bits | x_observed) in bits by exhaustive enumeration.

    Enumerates all bit and coin vectors, groups by the observed input's
    value, and averages the conditional entropies.  Equals num_bits exactly:
    the deterministic layer is perfectly secret.  Intended for small codes
    (2^(2*num_bits) states).
    """
    if observed not in (0, 1):
        raise ValueError("observed input index must be 0 or 1")
    n = code.num_bits
    if n > 12:
        raise PreconditionFailed(f"enumeration over 4^{n} states is too large")
    by_x: dict[int, dict[tuple, int]] = {}
    for b in range(2**n):
        bits = tuple((b >> i) & 1 for i in range(n))
        for c in range(2**n):
            coins = tuple((c >> i) & 1 for i in range(n))
            x = multilevel_encode(bits, code, coins)[observed]
            by_x.setdefault(x, {}).setdefault(bits, 0)
            by_x[x][bits] += 1
    total = 4.0**n
    h = 0.0
    for groups in by_x.values():
        gsum = sum(groups.values())
        for cnt in groups.values():
            p = cnt / total
            h -= p * math.log2(cnt / gsum)
    return h


def multilevel_example_channel(P: float, noise_var: float = 1.0) -> CompoundChannel:
    """Two-antenna channel whose receivers see the sum and difference.

    This is the rationally dependent instance where multilevel coding beats
    alignment: both eavesdroppers observe a single antenna each.
    """
    return CompoundChannel(
        M=2,
        legit=((1.0, 1.0), (1.0, -1.0)),
        eaves=((1.0, 0.0), (0.0, 1.0)),
        power=P,
        noise_var=noise_var,
    )


def multilevel_scheme(
    P, eps_target: float, noise_var: float = 1.0, mc_trials: int = 0, seed: int = 0
):
    """Design the stacked code for the sum/difference example channel.

    Reports the exact bit rate and zero leakage of the deterministic layer;
    with ``mc_trials`` > 0 also estimates the decoding error probability
    over Gaussian noise.
    """
    from ..analysis import monte_carlo_pe
    from .base import SchemeReport, finite_dof

    code = design_multilevel_code(P, eps_target, noise_var, seed=seed)
    channel = multilevel_example_channel(float(P), noise_var)
    pe = trials = None
    extras = {"T": code.T, "Mlev": code.Mlev, "num_bits": code.num_bits}
    if mc_trials > 0:
        est = monte_carlo_pe(MultilevelEncoder(code), channel, mc_trials, seed)
        pe, trials = est.pe, est.trials
        extras["pe_ci95"] = est.ci95
    rate = float(code.num_bits)
    return SchemeReport(
        scheme_name="multilevel",
        M=2,
        J1=2,
        J2=2,
        P=float(P),
        rate_bits=rate,
        leakage_bits=0.0,
        dof_contribution=finite_dof(rate, P),
        eps=eps_target,
        pe_estimate=pe,
        trials=trials,
        analytic_limit=LOG3_2,
        extras=extras,
    )


class MultilevelEncoder:
    """Encoder protocol adapter for Monte Carlo error estimation.

    Encodes onto the two antennas of the sum/difference example channel;
    receiver j of that channel sees x1 + x2 (j = 0) or x1 - x2 (j = 1).
    """

    def __init__(self, code: MultilevelCode):
        self.code = code

    def sample_message(self, rng) -> tuple:
        return tuple(int(b) for b in rng.integers(0, 2, size=self.code.num_bits))

    def encode(self, msg, rng) -> np.ndarray:
        coins = tuple(int(c) for c in rng.integers(0, 2, size=self.code.num_bits))
        x1, x2 = multilevel_encode(msg, self.code, coins)
        return np.array([float(x1), float(x2)])

    def decode(self, y: float, receiver: int) -> tuple:
        return multilevel_decode(y, self.code, receiver)
