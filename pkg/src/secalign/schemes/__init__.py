"""Transmission scheme constructions and their rate/leakage accounting."""

from .base import CSV_COLUMNS, SchemeReport
from .nulling import artificial_noise_rate, pb_zero_force, zf_eavesdroppers_rate
from .aligned import (
    ia_analytic_dof_limit,
    ia_wiretap_scheme,
    pb_double_ia,
    pb_double_ia_limit,
    pb_one_sided_ia,
    pb_one_sided_ia_limit,
)
from .ternary import (
    MultilevelCode,
    design_multilevel_code,
    f3_encode,
    f3_decode_y1,
    f3_decode_y2,
    multilevel_decode,
    multilevel_dof,
    multilevel_encode,
    multilevel_example_channel,
    multilevel_scheme,
)
from .multicast import (
    MulticastPlan,
    mds_decode,
    mds_encode,
    timeshare_dof,
    timeshare_eavesdropper_plan,
    timeshare_multicast_plan,
)

__all__ = [
    "CSV_COLUMNS",
    "SchemeReport",
    "zf_eavesdroppers_rate",
    "artificial_noise_rate",
    "pb_zero_force",
    "ia_wiretap_scheme",
    "ia_analytic_dof_limit",
    "pb_one_sided_ia",
    "pb_one_sided_ia_limit",
    "pb_double_ia",
    "pb_double_ia_limit",
    "f3_encode",
    "f3_decode_y1",
    "f3_decode_y2",
    "MultilevelCode",
    "design_multilevel_code",
    "multilevel_encode",
    "multilevel_decode",
    "multilevel_dof",
    "multilevel_example_channel",
    "multilevel_scheme",
    "MulticastPlan",
    "timeshare_dof",
    "timeshare_multicast_plan",
    "timeshare_eavesdropper_plan",
    "mds_encode",
    "mds_decode",
]
