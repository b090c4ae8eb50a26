"""Zero-forcing and artificial-noise baselines.

These schemes only need linear algebra: project the signal away from the
eavesdroppers (or flood their subspace with noise) and count Gaussian rates.
They give full multiplexing when the opposing group is small and serve as
the easy regime of every bound.
"""

from __future__ import annotations

import math

import numpy as np

from .. import seeds
from ..channel import null_space_basis
from ..errors import PreconditionFailed
from .base import SchemeReport, finite_dof

#: Candidate directions sampled when optimizing the artificial-noise beam.
AN_CANDIDATES = 10_000


def zf_eavesdroppers_rate(channel) -> SchemeReport:
    """Beamform inside the eavesdroppers' common null space.

    Requires J2 < M.  The beam is the projection of each legitimate vector
    onto the null space; the rate is the worst legitimate user's, leakage is
    exactly zero because every eavesdropper observation is pure noise.
    """
    if channel.J2 >= channel.M:
        raise PreconditionFailed(
            f"zero-forcing needs J2 < M, got J2={channel.J2}, M={channel.M}"
        )
    B = null_space_basis(channel.eaves)  # rows orthonormal, span the null space
    P0 = channel.power / channel.M
    gains = np.sum((channel.legit_matrix @ B.T) ** 2, axis=1)
    if np.min(gains) <= 0:
        raise PreconditionFailed("a legitimate vector lies in the eavesdropper span")
    rate = float(min(0.5 * math.log2(1.0 + P0 * g) for g in gains))
    return SchemeReport(
        scheme_name="zero_force",
        M=channel.M,
        J1=channel.J1,
        J2=channel.J2,
        P=channel.power,
        rate_bits=rate,
        leakage_bits=0.0,
        dof_contribution=finite_dof(rate, channel.power),
        extras={"null_space_dim": B.shape[0], "worst_gain": float(np.min(gains))},
    )


def _best_common_direction(vectors: np.ndarray, rng) -> np.ndarray:
    """Unit direction maximizing the smallest |v^T t| over the given rows."""
    M = vectors.shape[1]
    cand = rng.standard_normal((AN_CANDIDATES, M))
    cand /= np.linalg.norm(cand, axis=1, keepdims=True)
    scores = np.min(np.abs(cand @ vectors.T), axis=1)
    return cand[int(np.argmax(scores))]


def artificial_noise_rate(channel) -> SchemeReport:
    """Single data beam plus isotropic noise in its orthogonal complement.

    Works for any J2: the noise subspace has dimension M-1 and degrades
    every eavesdropper that is not collinear with the data beam, while
    legitimate receivers see only the beam.  Power splits evenly over the
    M-dimensional input (beam plus noise directions).
    """
    if channel.M < 2:
        raise PreconditionFailed("artificial noise needs M >= 2")
    rng = seeds.derive(channel.fingerprint(), "an-beam")
    t = _best_common_direction(channel.legit_matrix, rng)
    A = null_space_basis([t])  # noise directions, orthonormal rows
    P0 = channel.power / channel.M

    legit_rate = min(
        0.5 * math.log2(1.0 + P0 * g**2) for g in channel.legit_matrix @ t
    )
    eaves_rate = 0.0
    for g in channel.eaves_matrix:
        sig = P0 * float(g @ t) ** 2
        jam = P0 * float(np.sum((A @ g) ** 2))
        eaves_rate = max(eaves_rate, 0.5 * math.log2(1.0 + sig / (1.0 + jam)))
    rate = max(0.0, legit_rate - eaves_rate)
    return SchemeReport(
        scheme_name="artificial_noise",
        M=channel.M,
        J1=channel.J1,
        J2=channel.J2,
        P=channel.power,
        rate_bits=rate,
        leakage_bits=eaves_rate,
        dof_contribution=finite_dof(rate, channel.power),
        extras={
            "beam": tuple(float(v) for v in t),
            "legit_rate_bits": float(legit_rate),
            "eaves_rate_bits": float(eaves_rate),
        },
    )


def pb_zero_force(channel) -> SchemeReport:
    """Two-group private broadcast by mutual zero-forcing.

    Needs both group sizes below M.  Each group's message rides a beam in
    the other group's null space with half the power; the reported rate is
    the sum of the two worst-user rates and the leakage is exactly zero.
    """
    if channel.J1 >= channel.M or channel.J2 >= channel.M:
        raise PreconditionFailed(
            "mutual zero-forcing needs J1 < M and J2 < M, got "
            f"J1={channel.J1}, J2={channel.J2}, M={channel.M}"
        )
    B1 = null_space_basis(channel.eaves)  # carries group-1 data
    B2 = null_space_basis(channel.legit)  # carries group-2 data
    P0 = channel.power / 2.0

    r1 = min(
        0.5 * math.log2(1.0 + P0 * float(g))
        for g in np.sum((channel.legit_matrix @ B1.T) ** 2, axis=1)
    )
    r2 = min(
        0.5 * math.log2(1.0 + P0 * float(g))
        for g in np.sum((channel.eaves_matrix @ B2.T) ** 2, axis=1)
    )
    if r1 <= 0 or r2 <= 0:
        raise PreconditionFailed("a receiver lies in the opposing span")
    rate = r1 + r2
    return SchemeReport(
        scheme_name="pb_zero_force",
        M=channel.M,
        J1=channel.J1,
        J2=channel.J2,
        P=channel.power,
        rate_bits=rate,
        leakage_bits=0.0,
        dof_contribution=finite_dof(rate, channel.power),
        extras={"group1_rate_bits": float(r1), "group2_rate_bits": float(r2)},
    )
