"""
장면 구성 모듈
"""
from .layout import (
    build_scene,
    build_access_points,
    build_mirrors,
    drop_users,
    array_element_centers,
    coverage_targets,
    nearest_ap,
    user_rng,
    blocker_rng,
    training_rng,
)

__all__ = [
    'build_scene',
    'build_access_points',
    'build_mirrors',
    'drop_users',
    'array_element_centers',
    'coverage_targets',
    'nearest_ap',
    'user_rng',
    'blocker_rng',
    'training_rng',
]
