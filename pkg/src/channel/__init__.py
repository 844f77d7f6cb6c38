"""
Optical channel model: geometry, gains, blockage and rates
"""
from .geometry import (
    cos_angle,
    normal_from_orientation,
    orientation_from_normal,
    specular_reflect,
    steer_mirror,
    steer_normal,
    branch_normal,
    unit,
)
from .blockage import (
    segment_blocked,
    path_clear,
    sample_blockers,
)
from .optics import (
    lambertian_order,
    los_gain,
    irs_gain,
    mirror_aligned,
    branch_select,
    noise_variance,
)
from .tables import (
    ChannelTables,
    build_channel_tables,
    compute_channel_tables,
)
from .rates import (
    RATE_FACTOR,
    UNASSIGNED,
    Allocation,
    LinkMetrics,
    link_metrics,
    rates_batch,
    utility_batch,
    feasible_mask,
    sinr_value,
    rate_value,
    user_rates,
    interference,
    sinr,
    user_rate,
    allocation_utility,
    qos_satisfied,
)

__all__ = [
    # Geometry
    'cos_angle',
    'normal_from_orientation',
    'orientation_from_normal',
    'specular_reflect',
    'steer_mirror',
    'steer_normal',
    'branch_normal',
    'unit',

    # Blockage
    'segment_blocked',
    'path_clear',
    'sample_blockers',

    # Gains
    'lambertian_order',
    'los_gain',
    'irs_gain',
    'mirror_aligned',
    'branch_select',
    'noise_variance',

    # Tables
    'ChannelTables',
    'build_channel_tables',
    'compute_channel_tables',

    # Rates
    'RATE_FACTOR',
    'UNASSIGNED',
    'Allocation',
    'LinkMetrics',
    'link_metrics',
    'rates_batch',
    'utility_batch',
    'feasible_mask',
    'sinr_value',
    'rate_value',
    'user_rates',
    'interference',
    'sinr',
    'user_rate',
    'allocation_utility',
    'qos_satisfied',
]
