import math

import numpy as np
import pytest

from secalign import analysis
from secalign.errors import DecodeFailure, InvalidEpsilon, PreconditionFailed
from secalign.schemes import ternary
from secalign.schemes.ternary import (
    MultilevelCode,
    design_multilevel_code,
    f3_decode_y1,
    f3_decode_y2,
    f3_encode,
    multilevel_decode,
    multilevel_dof,
    multilevel_encode,
    multilevel_equivocation_bits,
    multilevel_scheme,
)


def test_f3_exhaustive_four_codewords():
    seen = set()
    for bit in (0, 1):
        for coin in (0, 1):
            x1, x2 = f3_encode(bit, coin)
            seen.add((x1, x2))
            assert f3_decode_y1((x1 + x2) % 3) == bit
            assert f3_decode_y2((x1 - x2) % 3) == bit
    assert seen == {(0, 0), (1, 1), (0, 1), (1, 0)}


def test_f3_single_input_is_uniform():
    # Each observed input takes each value equally often under each bit:
    # exactly one bit of equivocation.
    for observed in (0, 1):
        for bit in (0, 1):
            vals = sorted(f3_encode(bit, coin)[observed] for coin in (0, 1))
            assert vals == [0, 1]


def test_f3_input_validation():
    with pytest.raises(ValueError):
        f3_encode(2, 0)
    with pytest.raises(ValueError):
        f3_decode_y1(3)
    with pytest.raises(ValueError):
        f3_decode_y2(-1)


def test_design_frozen_point():
    code = design_multilevel_code(2 * 3**40, 1e-3)
    assert code.T == 3
    assert code.Mlev == 20
    assert code.num_bits == 17


def test_design_uses_exact_integer_arithmetic():
    # float(3**2k) can round below the true power of three; the bracketing
    # must still include the exact boundary.
    for k in (20, 40, 100):
        code = design_multilevel_code(2 * 3 ** (2 * k), 1e-2)
        assert code.Mlev == k
        code = design_multilevel_code(2 * 3 ** (2 * k) - 1, 1e-2)
        assert code.Mlev == k - 1 or 3 ** (2 * code.Mlev) <= 3 ** (2 * k) - 1


def test_design_guard_grows_with_noise():
    quiet = design_multilevel_code(2 * 3**40, 1e-3, noise_var=1.0)
    loud = design_multilevel_code(2 * 3**40, 1e-3, noise_var=100.0)
    assert loud.T > quiet.T
    with pytest.raises(InvalidEpsilon):
        design_multilevel_code(2 * 3**40, 0.0)


def test_code_validation():
    with pytest.raises(PreconditionFailed):
        MultilevelCode(T=3, Mlev=3, P=2.0 * 3**6, noise_var=1.0, eps_target=0.1)


def test_encode_decode_roundtrip_noiseless():
    code = design_multilevel_code(2 * 3**30, 1e-2)
    rng = np.random.default_rng(0)
    for _ in range(20):
        bits = tuple(int(b) for b in rng.integers(0, 2, size=code.num_bits))
        coins = tuple(int(c) for c in rng.integers(0, 2, size=code.num_bits))
        x1, x2 = multilevel_encode(bits, code, coins)
        assert multilevel_decode(float(x1 + x2), code, receiver=0) == bits
        assert multilevel_decode(float(x1 - x2), code, receiver=1) == bits


def test_decode_survives_in_guard_noise():
    code = design_multilevel_code(2 * 3**20, 1e-2)
    bits = tuple([1, 0] * (code.num_bits // 2) + [1] * (code.num_bits % 2))
    x1, x2 = multilevel_encode(bits, code)
    guard = 3 ** (code.T - 1)
    for noise in (-(guard - 1), guard - 1):
        assert multilevel_decode(float(x1 + x2 + noise), code, receiver=0) == bits
    with pytest.raises(DecodeFailure):
        multilevel_decode(float(x1 + x2 + guard), code, receiver=0)


def test_decode_rejects_foreign_signal():
    code = design_multilevel_code(2 * 3**20, 1e-2)
    # a signal with a digit above the used levels
    with pytest.raises(DecodeFailure):
        multilevel_decode(float(3**code.Mlev * 2), code, receiver=0)


def test_equivocation_exact_small_codes():
    for Mlev in (3, 4, 5):
        code = MultilevelCode(
            T=1, Mlev=Mlev, P=2.0 * 9.0**Mlev, noise_var=1.0, eps_target=0.1
        )
        for observed in (0, 1):
            h = multilevel_equivocation_bits(code, observed)
            assert h == pytest.approx(code.num_bits, abs=1e-9)


def test_equivocation_cap():
    code = MultilevelCode(T=1, Mlev=15, P=2.0 * 9.0**15, noise_var=1.0, eps_target=0.1)
    with pytest.raises(PreconditionFailed):
        multilevel_equivocation_bits(code, 0)


def test_dof_frozen_and_convergent():
    assert multilevel_dof(2 * 3**40, 1e-3) == pytest.approx(
        0.5279626075882243, abs=1e-15
    )
    dofs = [multilevel_dof(2 * 3 ** (200 * k), 1e-3) for k in range(1, 7)]
    assert all(b > a for a, b in zip(dofs, dofs[1:]))
    assert abs(dofs[-1] - ternary.LOG3_2) < 0.01


def test_scheme_report_and_monte_carlo():
    rep = multilevel_scheme(2 * 3**40, 1e-3, mc_trials=400, seed=1)
    assert rep.scheme_name == "multilevel"
    assert rep.rate_bits == 17.0
    assert rep.leakage_bits == 0.0
    assert rep.analytic_limit == pytest.approx(ternary.LOG3_2)
    assert rep.trials == 400
    lo, hi = analysis.wilson_interval(
        round(rep.pe_estimate * rep.trials), rep.trials
    )
    assert rep.pe_estimate <= 1e-3 + (hi - rep.pe_estimate)


def test_example_channel_sees_sum_and_difference():
    ch = ternary.multilevel_example_channel(64.0)
    assert np.array_equal(ch.legit_matrix, [[1.0, 1.0], [1.0, -1.0]])
    x = np.array([5.0, 3.0])
    assert float(ch.legit_matrix[0] @ x) == 8.0
    assert float(ch.legit_matrix[1] @ x) == 2.0
