"""Deterministic randomness derivation.

All randomness in the toolkit flows from a single integer seed through
named derivation paths, e.g. ``derive(seed, "channel")`` for gain draws or
``trial_rng(seed, "noise", i)`` for the i-th Monte Carlo trial.  Paths are
hashed with sha256 so streams for different purposes never overlap, and
trial streams use a counter-based generator (Philox) so trials can be
evaluated independently, in any order, or in parallel.
"""

from __future__ import annotations

import hashlib

import numpy as np


def derive_key(root: int, *path: object) -> int:
    """128-bit key for the stream named by ``root`` and a derivation path."""
    text = str(int(root)) + "".join("/" + str(p) for p in path)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:16], "big")


def derive(root: int, *path: object) -> np.random.Generator:
    """Sequential generator for the derivation path (PCG64)."""
    return np.random.default_rng(derive_key(root, *path))


def trial_rng(root: int, path: str, trial: int) -> np.random.Generator:
    """Counter-based generator for one trial of the named stream.

    Stream ``path`` gets one Philox key; trial ``i`` starts the counter at
    ``i << 64``, giving every trial a disjoint block of 2^64 draws.
    """
    key = derive_key(root, path)
    bitgen = np.random.Philox(key=key, counter=int(trial) << 64)
    return np.random.Generator(bitgen)


def text_fingerprint(text: str) -> int:
    """Stable 128-bit fingerprint of a canonical text serialization."""
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:16], "big")
