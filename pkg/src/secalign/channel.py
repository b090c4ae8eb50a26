"""Compound MISO channel model and linear-algebra primitives.

A compound channel has M transmit antennas and a finite set of candidate
receiver states: J1 legitimate gain vectors h_j and J2 eavesdropper gain
vectors g_k.  One channel use of input x yields

    y_j = <h_j, x> + v_j        (legitimate state j)
    z_k = <g_k, x> + w_k        (eavesdropper state k)

with independent zero-mean Gaussian noise of variance ``noise_var`` and the
average power constraint E[||x||^2] <= ``power``.  Gains are plain doubles;
all exactness-critical identity checks live in :mod:`secalign.align`'s
integer exponents, never here.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, replace

import numpy as np

from . import seeds
from .errors import FullRankInput

#: Relative singular-value threshold for rank and orthogonality decisions.
RANK_REL_TOL = 1e-10


def _frozen_array(values, dtype=np.float64) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class ChannelVector:
    """One candidate gain vector: finite, nonzero, length M.

    Parameters
    ----------
    coefficients : array_like
        The M real gains.
    """

    coefficients: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.coefficients, dtype=np.float64)
        if arr.ndim != 1 or arr.size < 1:
            raise ValueError("gain vector must be 1-d and nonempty")
        if not np.all(np.isfinite(arr)):
            raise ValueError("gain vector entries must be finite")
        if not np.any(arr):
            raise ValueError("gain vector must not be all zero")
        object.__setattr__(self, "coefficients", _frozen_array(arr))

    def __len__(self) -> int:
        return self.coefficients.size

    def __array__(self, dtype=None):
        return np.asarray(self.coefficients, dtype=dtype)


def _as_vectors(vectors, M: int | None = None) -> tuple[ChannelVector, ...]:
    out = tuple(
        v if isinstance(v, ChannelVector) else ChannelVector(v) for v in vectors
    )
    if M is not None:
        for v in out:
            if len(v) != M:
                raise ValueError(f"gain vector length {len(v)} != M={M}")
    return out


@dataclass(frozen=True, eq=False)
class CompoundChannel:
    """The compound channel: candidate gains plus power/noise parameters.

    Parameters
    ----------
    M : int
        Antenna count.
    legit, eaves : sequences of ChannelVector (or array_like)
        The J1 legitimate and J2 eavesdropper states.
    power : float
        Average transmit power budget P.
    noise_var : float, optional
        Receiver noise variance (0 gives the noiseless diagnostic channel).
    """

    M: int
    legit: tuple
    eaves: tuple
    power: float
    noise_var: float = 1.0

    def __post_init__(self):
        if self.M < 1:
            raise ValueError("M must be >= 1")
        legit = _as_vectors(self.legit, self.M)
        eaves = _as_vectors(self.eaves, self.M)
        if not legit or not eaves:
            raise ValueError("need at least one state per group")
        if not (self.power > 0):
            raise ValueError("power must be positive")
        if self.noise_var < 0:
            raise ValueError("noise_var must be non-negative")
        object.__setattr__(self, "legit", legit)
        object.__setattr__(self, "eaves", eaves)
        object.__setattr__(self, "power", float(self.power))
        object.__setattr__(self, "noise_var", float(self.noise_var))

    @property
    def J1(self) -> int:
        return len(self.legit)

    @property
    def J2(self) -> int:
        return len(self.eaves)

    @property
    def legit_matrix(self) -> np.ndarray:
        """(J1, M) matrix with h_j as rows."""
        return np.vstack([v.coefficients for v in self.legit])

    @property
    def eaves_matrix(self) -> np.ndarray:
        """(J2, M) matrix with g_k as rows."""
        return np.vstack([v.coefficients for v in self.eaves])

    def with_power(self, power: float) -> "CompoundChannel":
        return replace(self, power=float(power))

    def to_json(self) -> str:
        """Serialize to the canonical JSON form.

        Floats round-trip through 17 significant digits (Python's shortest
        repr), so from_json(to_json(c)) reproduces the gains bit-exactly.
        """
        payload = {
            "M": self.M,
            "legit": [v.coefficients.tolist() for v in self.legit],
            "eaves": [v.coefficients.tolist() for v in self.eaves],
            "power": self.power,
            "noise_var": self.noise_var,
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, text: str) -> "CompoundChannel":
        payload = json.loads(text)
        return cls(
            M=int(payload["M"]),
            legit=payload["legit"],
            eaves=payload["eaves"],
            power=float(payload["power"]),
            noise_var=float(payload.get("noise_var", 1.0)),
        )

    def fingerprint(self) -> int:
        """Stable 128-bit hash of the canonical JSON serialization."""
        return seeds.text_fingerprint(self.to_json())


def sample_compound_channel(
    M: int,
    J1: int,
    J2: int,
    seed: int,
    *,
    power: float = 1.0,
    noise_var: float = 1.0,
) -> CompoundChannel:
    """Draw a channel with i.i.d. standard normal gains.

    The continuous distribution is a modelling choice (any continuous law
    gives general position almost surely); identical seeds give identical
    channels via the "channel" derivation path.
    """
    if min(M, J1, J2) < 1:
        raise ValueError("M, J1, J2 must all be >= 1")
    rng = seeds.derive(seed, "channel")
    gains = rng.standard_normal((J1 + J2, M))
    return CompoundChannel(
        M=M,
        legit=gains[:J1],
        eaves=gains[J1:],
        power=power,
        noise_var=noise_var,
    )


def _rank(matrix: np.ndarray, rel_tol: float = RANK_REL_TOL) -> int:
    s = np.linalg.svd(np.atleast_2d(matrix), compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > rel_tol * s[0]))


def check_general_position(
    channel: CompoundChannel, rel_tol: float = RANK_REL_TOL
) -> bool:
    """True iff every subset of min(M, available) candidate vectors has full rank.

    A rank-deficient subset of size k < min(M, available) would extend to a
    rank-deficient subset of that size, so checking the largest size covers
    all smaller ones.
    """
    vectors = np.vstack([channel.legit_matrix, channel.eaves_matrix])
    k = min(channel.M, vectors.shape[0])
    for idx in itertools.combinations(range(vectors.shape[0]), k):
        if _rank(vectors[list(idx)], rel_tol) < k:
            return False
    return True


def null_space_basis(vectors, rel_tol: float = RANK_REL_TOL) -> np.ndarray:
    """Orthonormal rows spanning the orthogonal complement of the input span.

    Parameters
    ----------
    vectors : 2-d array_like or sequence of ChannelVector
        K vectors of length M.

    Returns
    -------
    (M - rank, M) ndarray with orthonormal rows, each orthogonal to every
    input vector.

    Raises
    ------
    FullRankInput
        If the inputs already span all of R^M.
    """
    if isinstance(vectors, np.ndarray):
        A = np.atleast_2d(np.asarray(vectors, dtype=np.float64))
    else:
        A = np.vstack([np.asarray(v, dtype=np.float64) for v in vectors])
    M = A.shape[1]
    _, s, Vt = np.linalg.svd(A)
    if s.size and s[0] > 0.0:
        rank = int(np.count_nonzero(s > rel_tol * s[0]))
    else:
        rank = 0
    if rank >= M:
        raise FullRankInput(f"{A.shape[0]} vectors already span R^{M}")
    return Vt[rank:]


def transmit_receive(channel: CompoundChannel, x, seed: int):
    """One (batched) channel use of input x.

    Parameters
    ----------
    x : array_like, shape (M,) or (M, n)
        Transmit vector(s); the power constraint is the caller's business.
    seed : int
        Noise comes from the "noise" derivation path of this seed; with
        noise_var == 0 no noise is drawn and the map is exactly linear.

    Returns
    -------
    (y, z) with shapes (J1,)/(J2,) or (J1, n)/(J2, n).
    """
    x = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(x)):
        raise ValueError("transmit vector must be finite")
    y = channel.legit_matrix @ x
    z = channel.eaves_matrix @ x
    if channel.noise_var > 0:
        rng = seeds.derive(seed, "noise")
        scale = np.sqrt(channel.noise_var)
        noise = rng.standard_normal((channel.J1 + channel.J2,) + x.shape[1:])
        y = y + scale * noise[: channel.J1]
        z = z + scale * noise[channel.J1:]
    return y, z
