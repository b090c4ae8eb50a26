"""Batch front end: seeded experiment runs emitting plot-ready CSV.

Subcommands: ``bounds`` (closed-form tables), ``sweep`` (a scheme across a
power grid plus a fitted-slope summary row), ``simulate`` (Monte Carlo at a
single operating point), ``verify`` (the invariant registry).  Configuration
comes from a JSON file; the few repeated knobs also exist as flags, and
flags win.  Identical config and seed give byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import analysis, channel as chan, verify
from .errors import ConfigError, InsufficientSpan, SecalignError
from .schemes import aligned, multicast, nulling, ternary
from .schemes.base import CSV_COLUMNS

SCHEME_NAMES = (
    "zero_force",
    "artificial_noise",
    "pb_zero_force",
    "ia_wiretap",
    "pb_one_sided_ia",
    "pb_double_ia",
    "timeshare_multicast",
    "timeshare_eaves",
    "multilevel",
)

#: Schemes with an encoder suitable for trial-by-trial simulation.
SIMULATABLE = ("ia_wiretap", "multilevel")

SWEEP_COLUMNS = CSV_COLUMNS + ("slope", "analytic_limit")

_CONFIG_KEYS = {"scheme", "channel", "powers", "N", "eps", "trials", "seed", "out"}
_CHANNEL_KEYS = {"M", "J1", "J2", "seed", "legit", "eaves"}

DEFAULT_M_VALUES = tuple(range(1, 7))
DEFAULT_J_VALUES = tuple(range(1, 9))


@dataclass(frozen=True)
class ExperimentConfig:
    """One reproducible experiment: scheme, channel recipe, and grid."""

    scheme: str
    channel_spec: dict | None = None
    powers: tuple = (2.0**10, 2.0**20, 2.0**30, 2.0**40)
    N: int = 2
    eps: float = 0.1
    trials: int = 1
    seed: int = 0
    out: str | None = None

    def __post_init__(self):
        if self.scheme not in SCHEME_NAMES:
            raise ConfigError(
                f"unknown scheme {self.scheme!r}; choose from {SCHEME_NAMES}"
            )
        object.__setattr__(self, "powers", tuple(self.powers))
        if not self.powers:
            raise ConfigError("powers must be a nonempty list")
        for p in self.powers:
            if not p > 1:
                raise ConfigError(f"every power must exceed 1, got {p}")
        if any(b <= a for a, b in zip(self.powers, self.powers[1:])):
            raise ConfigError("powers must be strictly increasing")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.N < 1:
            raise ConfigError("N must be >= 1")
        if not 0 < self.eps < 1:
            raise ConfigError("eps must lie in (0, 1)")
        if self.channel_spec is not None:
            unknown = set(self.channel_spec) - _CHANNEL_KEYS
            if unknown:
                raise ConfigError(f"unknown channel keys {sorted(unknown)}")
        elif self.scheme != "multilevel":
            raise ConfigError(f"scheme {self.scheme!r} needs a channel section")


def load_config(path: str, overrides: dict | None = None) -> ExperimentConfig:
    """Read a JSON config; non-None override values (from flags) win."""
    try:
        with open(path, encoding="utf-8") as fh:
            payload = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(payload, dict):
        raise ConfigError("config root must be a JSON object")
    unknown = set(payload) - _CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys {sorted(unknown)}")
    merged = dict(payload)
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value
    if "scheme" not in merged:
        raise ConfigError("config must name a scheme")
    try:
        return ExperimentConfig(
            scheme=merged["scheme"],
            channel_spec=merged.get("channel"),
            powers=tuple(merged.get("powers", ExperimentConfig.powers)),
            N=int(merged.get("N", 2)),
            eps=float(merged.get("eps", 0.1)),
            trials=int(merged.get("trials", 1)),
            seed=int(merged.get("seed", 0)),
            out=merged.get("out"),
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"malformed config value: {exc}") from exc


def build_channel(config: ExperimentConfig) -> chan.CompoundChannel:
    spec = config.channel_spec
    if spec is None:
        raise ConfigError("this operation needs a channel section")
    if "legit" in spec or "eaves" in spec:
        try:
            return chan.CompoundChannel(
                M=int(spec["M"]),
                legit=spec["legit"],
                eaves=spec["eaves"],
                power=1.0,
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise ConfigError(f"bad inline channel: {exc}") from exc
    try:
        return chan.sample_compound_channel(
            int(spec["M"]),
            int(spec["J1"]),
            int(spec["J2"]),
            seed=int(spec.get("seed", config.seed)),
        )
    except (KeyError, ValueError) as exc:
        raise ConfigError(f"bad channel spec: {exc}") from exc


def evaluate_scheme(config: ExperimentConfig, P, mc_trials: int = 0):
    """Run the configured scheme at one power; preconditions re-raise."""
    name = config.scheme
    if name == "multilevel":
        return ternary.multilevel_scheme(
            P, config.eps, mc_trials=mc_trials, seed=config.seed
        )
    ch = build_channel(config).with_power(float(P))
    if name == "zero_force":
        return nulling.zf_eavesdroppers_rate(ch)
    if name == "artificial_noise":
        return nulling.artificial_noise_rate(ch)
    if name == "pb_zero_force":
        return nulling.pb_zero_force(ch)
    if name == "ia_wiretap":
        return aligned.ia_wiretap_scheme(ch, config.N, config.eps, mc_trials=mc_trials)
    if name == "pb_one_sided_ia":
        return aligned.pb_one_sided_ia(ch, config.N, config.eps)
    if name == "pb_double_ia":
        return aligned.pb_double_ia(ch, config.N, config.eps)
    if name == "timeshare_multicast":
        return multicast.timeshare_multicast_plan(ch).report(ch, name)
    if name == "timeshare_eaves":
        return multicast.timeshare_eavesdropper_plan(ch).report(ch, name)
    raise ConfigError(f"unknown scheme {name!r}")


def _csv_text(header, rows) -> str:
    import csv
    import io

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def run_bounds(m_values=DEFAULT_M_VALUES, j1_values=DEFAULT_J_VALUES,
               j2_values=DEFAULT_J_VALUES) -> str:
    """Closed-form table over the grid, in canonical (M, J1, J2) order."""
    if not (m_values and j1_values and j2_values):
        raise ConfigError("bounds ranges must be nonempty")
    rows = [
        analysis.dof_bounds(M, J1, J2)
        for M in m_values
        for J1 in j1_values
        for J2 in j2_values
    ]
    return analysis.bounds_csv(rows)


def run_sweep(config: ExperimentConfig) -> str:
    """Scheme reports across the power grid plus a trailing summary row.

    The summary row carries the slope fitted to the rate curve (empty when
    the grid spans fewer than two decades) and the scheme's analytic limit
    when it has one.  Data rows leave both trailing columns empty.
    """
    reports = [evaluate_scheme(config, P) for P in config.powers]
    rows = [r.csv_row() + ["", ""] for r in reports]
    try:
        slope = repr(analysis.dof_slope([(r.P, r.rate_bits) for r in reports]))
    except InsufficientSpan:
        slope = ""
    limit = reports[-1].analytic_limit
    summary = ["summary"] + [""] * (len(CSV_COLUMNS) - 1)
    summary += [slope, "" if limit is None else repr(limit)]
    return _csv_text(SWEEP_COLUMNS, rows + [summary])


def run_simulate(config: ExperimentConfig) -> str:
    """Monte Carlo at the largest configured power; one CSV data row."""
    if config.scheme not in SIMULATABLE:
        raise ConfigError(
            f"scheme {config.scheme!r} has no trial encoder; "
            f"simulate supports {SIMULATABLE}"
        )
    report = evaluate_scheme(config, config.powers[-1], mc_trials=config.trials)
    return _csv_text(SWEEP_COLUMNS, [report.csv_row() + ["", ""]])


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="secalign",
        description="Construct, sweep, simulate, and verify secure "
        "transmission schemes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_bounds = sub.add_parser("bounds", help="emit the closed-form table")
    p_bounds.add_argument("--config", help="JSON with m_values/j1_values/j2_values")
    p_bounds.add_argument("--out", help="output CSV path (default stdout)")

    for name, text in (
        ("sweep", "run a scheme across its power grid"),
        ("simulate", "Monte Carlo a scheme at one operating point"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", required=True, help="experiment JSON")
        p.add_argument("--seed", type=int, help="override config seed")
        p.add_argument("--out", help="output CSV path (default stdout)")
        p.add_argument("--trials", type=int, help="override config trials")
        p.add_argument("--scheme", help="override config scheme")

    p_verify = sub.add_parser("verify", help="run invariant suites")
    p_verify.add_argument(
        "suites",
        nargs="*",
        help=f"suites to run (default all): {', '.join(verify.suites())}",
    )
    p_verify.add_argument("--out", help="report path (default stdout)")
    return parser


def _cmd_bounds(args) -> int:
    m_values, j1_values, j2_values = (
        DEFAULT_M_VALUES,
        DEFAULT_J_VALUES,
        DEFAULT_J_VALUES,
    )
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                payload = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        unknown = set(payload) - {"m_values", "j1_values", "j2_values"}
        if unknown:
            raise ConfigError(f"unknown bounds config keys {sorted(unknown)}")
        m_values = tuple(payload.get("m_values", m_values))
        j1_values = tuple(payload.get("j1_values", j1_values))
        j2_values = tuple(payload.get("j2_values", j2_values))
    _emit(run_bounds(m_values, j1_values, j2_values), args.out)
    return 0


def _cmd_verify(args) -> int:
    try:
        results = verify.run_verify(suite=args.suites or None)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    _emit(verify.report_text(results), args.out)
    return 0 if all(r.passed for r in results) else 3


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "bounds":
            return _cmd_bounds(args)
        if args.command == "verify":
            return _cmd_verify(args)
        overrides = {
            "seed": args.seed,
            "trials": args.trials,
            "scheme": args.scheme,
            "out": args.out,
        }
        config = load_config(args.config, overrides)
        text = run_sweep(config) if args.command == "sweep" else run_simulate(config)
        _emit(text, config.out)
        return 0
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except SecalignError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
