import math
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest

from secalign import channel as chan
from secalign.errors import (
    CombinatorialOverflow,
    DegenerateInput,
    PreconditionFailed,
)
from secalign.schemes.multicast import (
    FIELD_PRIME,
    mds_decode,
    mds_encode,
    timeshare_dof,
    timeshare_eavesdropper_plan,
    timeshare_multicast_plan,
)


def test_timeshare_dof_identity_grid():
    for M in range(2, 7):
        for J in range(M - 1, 30):
            if math.comb(J, M - 1) > 10**4:
                continue
            assert timeshare_dof(M, J) == Fraction(M - 1, J)
    assert timeshare_dof(1, 5) == Fraction(0)


def test_plan_counts_on_three_receiver_instance():
    ch = chan.sample_compound_channel(3, 3, 2, seed=0, power=2.0**30)
    plan = timeshare_multicast_plan(ch)
    assert plan.slots == 3
    assert plan.per_receiver == 2
    assert list(plan.membership_counts()) == [2, 2, 2]
    assert plan.dof == Fraction(2, 3)
    assert plan.rate_bits > 0.0
    assert len(plan.data_dirs) == plan.slots
    for u in plan.data_dirs:
        assert np.linalg.norm(u) == pytest.approx(1.0, rel=1e-12)


def test_plan_report_plumbing():
    ch = chan.sample_compound_channel(3, 3, 2, seed=0, power=2.0**30)
    rep = timeshare_multicast_plan(ch).report(ch, "timeshare_multicast")
    assert rep.scheme_name == "timeshare_multicast"
    assert rep.leakage_bits == 0.0
    assert rep.analytic_limit == pytest.approx(2.0 / 3.0)
    assert rep.extras["slots"] == 3


def test_plan_preconditions():
    with pytest.raises(PreconditionFailed):
        timeshare_multicast_plan(
            chan.sample_compound_channel(4, 2, 1, seed=0, power=4.0)
        )
    with pytest.raises(CombinatorialOverflow):
        timeshare_multicast_plan(
            chan.sample_compound_channel(6, 40, 1, seed=0, power=4.0)
        )


def test_single_antenna_plan_is_degenerate():
    ch = chan.sample_compound_channel(1, 3, 1, seed=0, power=4.0)
    plan = timeshare_multicast_plan(ch)
    assert plan.dof == Fraction(0)
    assert plan.rate_bits == 0.0


def test_degenerate_geometry_detected():
    ch = chan.CompoundChannel(
        M=2,
        legit=[(1.0, 0.0), (0.0, 1.0)],
        eaves=[(1.0, 0.0)],
        power=4.0,
    )
    with pytest.raises(DegenerateInput):
        timeshare_multicast_plan(ch)


def test_eavesdropper_variant_plan():
    ch = chan.sample_compound_channel(3, 2, 3, seed=1, power=2.0**30)
    plan = timeshare_eavesdropper_plan(ch)
    assert plan.slots == math.comb(3, 2)
    assert plan.dof == Fraction(2, 3)
    assert plan.rate_bits > 0.0


def test_mds_systematic_spot():
    assert mds_encode((11, 22), 3) == (11, 22, 33)


def test_mds_decode_from_every_pair():
    msg = (123456, 987654)
    code = mds_encode(msg, 3)
    for pos in combinations(range(3), 2):
        symbols = [(i, code[i]) for i in pos]
        assert mds_decode(symbols, 2) == msg


def test_mds_roundtrip_larger():
    rng = np.random.default_rng(4)
    msg = tuple(int(v) for v in rng.integers(0, FIELD_PRIME, size=4))
    code = mds_encode(msg, 9)
    assert code[:4] == msg
    for pos in ((0, 3, 5, 8), (5, 6, 7, 8), (1, 2, 4, 7)):
        symbols = [(i, code[i]) for i in pos]
        assert mds_decode(symbols, 4) == msg


def test_mds_rejects_bad_inputs():
    with pytest.raises(ValueError):
        mds_encode((1, 2), 1)
    with pytest.raises(ValueError):
        mds_decode([(0, 1)], 2)
