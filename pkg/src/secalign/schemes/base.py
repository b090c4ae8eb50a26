"""Uniform result record shared by every scheme constructor."""

from __future__ import annotations

import math
from dataclasses import dataclass, field


#: CSV column order for scheme reports.  leakage_bits is an exact or bounding
#: equivocation-loss figure, pe/trials come from Monte Carlo when run (else
#: empty), dof is the pointwise rate / (0.5*log2 P) contribution.
CSV_COLUMNS = (
    "scheme",
    "M",
    "J1",
    "J2",
    "P",
    "N",
    "eps",
    "rate_bits",
    "leakage_bits",
    "pe",
    "trials",
    "dof",
)


@dataclass(frozen=True)
class SchemeReport:
    """One scheme evaluated at one operating point.

    rate_bits is per channel use after secrecy accounting; dof_contribution
    is the pointwise ratio rate_bits / (0.5*log2 P), not a fitted slope.
    ``extras`` carries scheme-specific diagnostics and never enters the CSV.
    """

    scheme_name: str
    M: int
    J1: int
    J2: int
    P: float
    rate_bits: float
    leakage_bits: float
    dof_contribution: float
    N: int | None = None
    eps: float | None = None
    pe_estimate: float | None = None
    trials: int | None = None
    analytic_limit: float | None = None
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.rate_bits < 0 or self.leakage_bits < 0:
            raise ValueError("rates and leakage must be non-negative")
        if self.P <= 1:
            raise ValueError("P must exceed 1 so 0.5*log2(P) is positive")

    def csv_row(self) -> list:
        """Values matching CSV_COLUMNS; floats repr-formatted, None empty."""

        def fmt(v):
            if v is None:
                return ""
            if isinstance(v, float):
                return repr(v)
            return str(v)

        return [
            self.scheme_name,
            str(self.M),
            str(self.J1),
            str(self.J2),
            repr(float(self.P)),
            fmt(self.N),
            fmt(self.eps),
            repr(self.rate_bits),
            repr(self.leakage_bits),
            fmt(self.pe_estimate),
            fmt(self.trials),
            repr(self.dof_contribution),
        ]


def finite_dof(rate_bits: float, P: float) -> float:
    """Pointwise degrees-of-freedom contribution of a rate at power P."""
    if P <= 1:
        raise ValueError("P must exceed 1")
    return rate_bits / (0.5 * math.log2(P))
