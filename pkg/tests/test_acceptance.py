"""Acceptance suite: one test per gate criterion, tolerances pinned.

Each criterion gets exactly one top-level test (run with -v for the
per-criterion pass/fail lines).  Criterion 7 contains one asymptotic
sub-claim that is numerically unattainable exactly as stated; it is kept
as a strict xfail (the reason string carries the arithmetic) next to a
passing companion at a deeper operating point.
"""

import math
import time
from fractions import Fraction
from itertools import combinations, product

import numpy as np
import pytest

from secalign import align, analysis, channel as chan, cli, seeds, verify
from secalign.schemes import (
    aligned,
    ia_analytic_dof_limit,
    ia_wiretap_scheme,
    mds_decode,
    mds_encode,
    multilevel_scheme,
    pb_double_ia_limit,
    pb_one_sided_ia_limit,
    ternary,
    timeshare_dof,
    timeshare_multicast_plan,
)
from secalign.schemes.nulling import artificial_noise_rate, zf_eavesdroppers_rate


def test_criterion_1_bound_tables_exact():
    t0 = time.perf_counter()
    for M in range(1, 7):
        for J1 in range(1, 9):
            for J2 in range(1, 9):
                b = analysis.dof_bounds(M, J1, J2)
                lo, hi = min(J1, J2), max(J1, J2)
                if lo < M:
                    assert (b.single_lower, b.single_timeshare, b.single_upper) == (
                        1,
                        1,
                        1,
                    )
                else:
                    assert b.single_lower == Fraction(M - 1, M)
                    assert b.single_timeshare == Fraction(M - 1, lo)
                    assert b.single_upper == Fraction(M * M - M, M * M - M + 1)
                if hi < M:
                    assert (b.joint_lower, b.joint_upper) == (2, 2)
                elif lo < M:
                    assert b.joint_lower == Fraction(2 * M - 2, M)
                    assert b.joint_upper == Fraction(2 * M - 1, M)
                else:
                    assert b.joint_lower == Fraction(2 * M - 2, M + 1)
                    assert b.joint_upper == Fraction(2 * M - 2, M)
    spot = analysis.dof_bounds(2, 2, 2)
    assert spot.single_lower == Fraction(1, 2)
    assert spot.single_upper == Fraction(2, 3)
    for J1, J2 in ((2, 2), (3, 8), (8, 2)):
        b = analysis.dof_bounds(2, J1, J2)
        assert b.joint_lower == Fraction(2, 3)
        assert b.joint_upper == 1
    assert time.perf_counter() - t0 < 1.0


def test_criterion_2_deterministic_code_exhaustive():
    for bit, coin in product((0, 1), repeat=2):
        x1, x2 = ternary.f3_encode(bit, coin)
        assert ternary.f3_decode_y1((x1 + x2) % 3) == bit
        assert ternary.f3_decode_y2((x1 - x2) % 3) == bit
    # H(bit | x_i) = 1.000000 exactly: joint counts over (bit, coin)
    for observed in (0, 1):
        joint = {}
        for bit, coin in product((0, 1), repeat=2):
            x = ternary.f3_encode(bit, coin)[observed]
            joint[(bit, x)] = joint.get((bit, x), 0) + 1
        h = 0.0
        for (_, x), cnt in joint.items():
            px = sum(c for (b2, x2), c in joint.items() if x2 == x)
            h -= (cnt / 4.0) * math.log2(cnt / px)
        assert h == 1.0


def test_criterion_3_multilevel_equivocation_dof_and_error():
    t0 = time.perf_counter()
    P = 2 * 3**40
    designed = ternary.design_multilevel_code(P, 1e-3)
    assert (designed.T, designed.Mlev) == (3, 20)
    # exact equivocation Mlev - T bits, enumerable codes up to 4 levels
    for mlev in range(designed.T + 1, designed.T + 5):
        code = ternary.MultilevelCode(
            T=designed.T, Mlev=mlev, P=P, noise_var=1.0, eps_target=1e-3
        )
        for observed in (0, 1):
            h = ternary.multilevel_equivocation_bits(code, observed)
            assert h == pytest.approx(mlev - designed.T, abs=1e-9)
    # dof converges to log3(2) within 0.01 over six grid points
    dofs = [ternary.multilevel_dof(2 * 3 ** (200 * k), 1e-3) for k in range(1, 7)]
    assert all(b > a for a, b in zip(dofs, dofs[1:]))
    assert abs(dofs[-1] - math.log(2.0, 3.0)) < 0.01
    # Monte Carlo error within budget at 10^4 trials
    rep = multilevel_scheme(P, 1e-3, mc_trials=10_000, seed=0)
    lo, _ = analysis.wilson_interval(round(rep.pe_estimate * rep.trials), rep.trials)
    assert lo <= 1e-3
    assert time.perf_counter() - t0 < 60.0


def test_criterion_4_structure_maps_partition_and_golden():
    t0 = time.perf_counter()
    combos = list(product((2, 3), (2, 3), (1, 2)))
    for i in range(50):
        M, J, N = combos[i % len(combos)]
        ch = chan.sample_compound_channel(M, J, J, seed=i)
        mset = align.build_monomial_set(ch.eaves_matrix, N, align.GENERATOR)
        pre = align.build_precoder(mset, M)
        _, smaps, _ = align.effective_channels(pre, ch)
        assert len(smaps) == J
        for s in smaps:
            assert s.is_partition()
            assert s.max_row_weight() <= M
    ch = chan.sample_compound_channel(2, 2, 1, seed=0)
    mset = align.build_monomial_set(ch.eaves_matrix, 2, align.GENERATOR)
    _, smaps, _ = align.effective_channels(align.build_precoder(mset, 2), ch)
    assert smaps[0].ones == ((), (4,), (5,), (0,), (1, 6), (7,), (2,), (3,), ())
    assert time.perf_counter() - t0 < 10.0


def test_criterion_5_min_distance_band_and_collision_flag():
    t0 = time.perf_counter()
    for L in (2, 3):
        rng = seeds.derive(5, "alpha", L)
        for _ in range(10):
            alpha = rng.standard_normal(L)
            vals = []
            for Q in range(1, 9):
                pam = align.PamCode(a=1.0, Q=Q, dims=L, gamma=1.0)
                c = align.enumerate_receiver_constellation(alpha, pam)
                assert c.collision_count == 0
                vals.append(align.min_distance(c) * Q ** (L - 1))
            assert min(vals) > 0.0
            assert max(vals) / min(vals) <= 50.0
    # rationally dependent coefficients produce flagged exact collisions
    pam = align.PamCode(a=1.0, Q=2, dims=2, gamma=1.0)
    c = align.enumerate_receiver_constellation(np.array([1.0, 2.0]), pam)
    assert c.collision_count > 0
    assert time.perf_counter() - t0 < 30.0


def test_criterion_6_leakage_oracle_orderings():
    t0 = time.perf_counter()
    rng = seeds.derive(6, "maps")
    maps = [
        align.StructureMap(rows=2, cols=2, ones=((0, 1), (1,))),
        align.StructureMap(rows=1, cols=3, ones=((0, 1, 2),)),
        align.StructureMap(rows=3, cols=6, ones=((0, 1), (2, 3), (4, 5))),
    ]
    for _ in range(25):
        cols = int(rng.integers(2, 9))
        rows = int(rng.integers(1, 5))
        ones = tuple(
            tuple(int(c) for c in np.flatnonzero(rng.integers(0, 2, size=cols)))
            for _ in range(rows)
        )
        maps.append(align.StructureMap(rows=rows, cols=cols, ones=ones))
    # grid-derived aligned maps that stay enumerable (cols <= 10)
    for seed, N in ((0, 1), (1, 1), (0, 2)):
        ch = chan.sample_compound_channel(2, 2, 1, seed=seed)
        mset = align.build_monomial_set(ch.eaves_matrix, N, align.GENERATOR)
        _, smaps, _ = align.effective_channels(align.build_precoder(mset, 2), ch)
        maps.extend(s for s in smaps if s.cols <= 10)
    for Q in (1, 2):
        for s in maps:
            if (2 * Q + 1) ** s.cols > 10**7:
                continue
            joint = analysis.leakage_joint_entropy_exact(s, Q)
            marg = analysis.leakage_marginal_entropy(s, Q)
            assert joint <= marg + 1e-9
    identity = align.StructureMap(rows=4, cols=4, ones=((0,), (1,), (2,), (3,)))
    for Q in (1, 2):
        assert analysis.leakage_joint_entropy_exact(identity, Q) == pytest.approx(
            analysis.leakage_marginal_entropy(identity, Q), rel=1e-12
        )
    # per-row entropy never exceeds the aligned support bound log2(2MQ+1)
    for M in (2, 3):
        for w in range(0, M + 1):
            for Q in (1, 2):
                h = analysis.entropy_bits_from_counts(
                    analysis.row_sum_pmf_counts(w, Q)
                )
                assert h <= math.log2(2 * M * Q + 1) + 1e-12
    assert time.perf_counter() - t0 < 60.0


def test_criterion_7_slopes_and_analytic_limits():
    t0 = time.perf_counter()
    powers = [2.0**k for k in range(10, 41, 6)]
    ch = chan.sample_compound_channel(3, 2, 2, seed=1)
    for build in (zf_eavesdroppers_rate, artificial_noise_rate):
        pts = [(P, build(ch.with_power(P)).rate_bits) for P in powers]
        assert analysis.dof_slope(pts) == pytest.approx(1.0, abs=0.02)
    rng = seeds.derive(7, "pairwise")
    h, g = rng.standard_normal(3), rng.standard_normal(3)
    pts = [(P, analysis.pairwise_bound_rate(h, g, P, M=3)) for P in powers]
    assert analysis.dof_slope(pts) == pytest.approx(1.0, abs=0.02)
    # analytic-limit plug-ins, exact rational reference evaluated in floats
    for M in (2, 3):
        for J2 in (1, 2):
            for N in (2, 8, 64):
                for eps in (0.1, 0.01):
                    want = float(
                        1
                        - 2 * Fraction(eps).limit_denominator(10**6)
                        - Fraction(N + 1, N) ** (M * J2)
                        / (M * (1 + Fraction(eps).limit_denominator(10**6)))
                    )
                    got = ia_analytic_dof_limit(M, J2, N, eps)
                    assert abs(got - want) < 1e-9
    for M in (2, 3):
        for Jb in (2, 3):
            L2 = Fraction(2) ** (M * Jb)
            L2p = Fraction(3) ** (M * Jb)
            eps = Fraction(1, 100)
            want = float(
                ((M - 1) * L2 + M * L2 - L2p)
                * (1 - eps)
                / ((M - 1) * L2 + L2p + eps)
            )
            assert abs(pb_one_sided_ia_limit(M, Jb, 2, 0.01) - want) < 1e-9
        L1 = Fraction(2) ** (M * 2)
        want = float(
            (1 - eps) * ((M * L1 - Fraction(3) ** (M * 2)) * 2)
            / (M * L1 + Fraction(3) ** (M * 2) + eps)
        )
        assert abs(pb_double_ia_limit(M, 2, 2, 2, 0.01) - want) < 1e-9
    # limits approach the joint targets as N grows (gap shrinking, final < 0.1)
    for M in (2, 3):
        gaps1 = [
            2 * (M - 1) / M - pb_one_sided_ia_limit(M, 2, N2, 0.01)
            for N2 in (8, 16, 32, 64)
        ]
        gaps2 = [
            2 * (M - 1) / (M + 1) - pb_double_ia_limit(M, 2, 2, N, 0.01)
            for N in (8, 16, 32, 64)
        ]
        for gaps in (gaps1, gaps2):
            assert all(a > b for a, b in zip(gaps, gaps[1:]))
            assert gaps[-1] < 0.1
    # companion for the as-stated sub-claim below: the wiretap limit does
    # reach the 0.02 window at a deeper operating point
    for M in (2, 3):
        for J2 in (1, 2):
            gap = (1 - 1 / M) - ia_analytic_dof_limit(M, J2, 128, 0.001)
            assert 0.0 < gap < 0.02
    assert time.perf_counter() - t0 < 60.0


@pytest.mark.xfail(
    strict=True,
    reason="at N=64, eps=0.01 the wiretap limit's distance to 1 - 1/M is "
    "0.0306 at best (M=2, J2=1); the 2*eps term alone consumes the whole "
    "0.02 window at this eps, so no N closes the gap",
)
def test_criterion_7_wiretap_limit_window_as_stated():
    for M in (2, 3):
        for J2 in (1, 2):
            gap = (1 - 1 / M) - ia_analytic_dof_limit(M, J2, 64, 0.01)
            assert abs(gap) <= 0.02


def test_criterion_8_timeshare_exact_and_erasure_complete():
    t0 = time.perf_counter()
    for M in range(2, 7):
        for J in range(M - 1, 200):
            if math.comb(J, M - 1) > 10**4:
                break
            assert timeshare_dof(M, J) == Fraction(M - 1, J)
    ch = chan.sample_compound_channel(3, 3, 2, seed=0, power=2.0**30)
    plan = timeshare_multicast_plan(ch)
    assert plan.slots == math.comb(3, 2)
    assert plan.per_receiver == math.comb(2, 1)
    assert list(plan.membership_counts()) == [2, 2, 2]
    msg = (314159, 271828)
    code = mds_encode(msg, plan.slots)
    for pos in combinations(range(plan.slots), plan.per_receiver):
        assert mds_decode([(i, code[i]) for i in pos], len(msg)) == msg
    assert time.perf_counter() - t0 < 10.0


def test_criterion_9_seeded_runs_byte_identical(tmp_path):
    import json

    payload = {
        "scheme": "ia_wiretap",
        "channel": {"M": 2, "J1": 2, "J2": 2, "seed": 7},
        "powers": [2.0**16, 2.0**24, 2.0**32, 2.0**40],
        "N": 2,
        "eps": 0.1,
        "seed": 4,
    }
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(payload))
    cfg = cli.load_config(str(path))
    assert cli.run_sweep(cfg) == cli.run_sweep(cfg)
    assert cli.run_bounds() == cli.run_bounds()
    a = verify.report_text(verify.run_verify())
    b = verify.report_text(verify.run_verify())
    assert a == b
