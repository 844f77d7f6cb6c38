# src/channel/rates.py
"""
Interference, SINR, achievable rate and the log-utility objective

Every evaluator goes through rates_batch, which scores T candidate
allocations at once. A user whose AP is UNASSIGNED (-1) gets rate 0 and
neither interferes nor counts towards any K_in.
"""
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from ..models.errors import ContractViolationError, NoiselessLinkError
from ..models.scene import Scene
from .tables import ChannelTables, build_channel_tables

UNASSIGNED = -1
RATE_FACTOR = math.e / (2 * math.pi)


@dataclass(frozen=True)
class Allocation:
    """One AP and one mirror per user; mirror index M is the null mirror"""
    ap_of: Tuple[int, ...]
    mirror_of: Tuple[int, ...]

    def __post_init__(self):
        if len(self.ap_of) != len(self.mirror_of):
            raise ContractViolationError(
                "ap_of and mirror_of must cover the same users",
                {'ap_of': list(self.ap_of), 'mirror_of': list(self.mirror_of)}
            )

    @property
    def num_users(self) -> int:
        return len(self.ap_of)

    def is_complete(self) -> bool:
        return all(a != UNASSIGNED for a in self.ap_of)

    def validate(self, num_aps: int, num_mirrors: int) -> None:
        """Every user has an AP in range and a mirror in range (null allowed)"""
        for k, (a, m) in enumerate(zip(self.ap_of, self.mirror_of)):
            if not (0 <= a < num_aps) or not (0 <= m <= num_mirrors):
                raise ContractViolationError(
                    f"user {k} has invalid assignment (ap={a}, mirror={m})",
                    {'num_aps': num_aps, 'num_mirrors': num_mirrors}
                )

    def as_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        return (
            np.asarray(self.ap_of, dtype=np.int64)[None, :],
            np.asarray(self.mirror_of, dtype=np.int64)[None, :],
        )

    @classmethod
    def from_actions(cls, actions: Sequence[int], num_mirrors: int) -> 'Allocation':
        """Decode flattened (l * M + m) action ids"""
        return cls(
            ap_of=tuple(int(a) // num_mirrors for a in actions),
            mirror_of=tuple(int(a) % num_mirrors for a in actions),
        )


def sinr_value(signal_current, interference_current, noise_var):
    """S^2 / (I^2 + sigma^2), element-wise"""
    signal = np.asarray(signal_current, dtype=float)
    denom = np.asarray(interference_current, dtype=float) ** 2 + np.asarray(noise_var, dtype=float)
    return signal ** 2 / denom


def rate_value(sinr, bandwidth, k_in):
    """(B / K_in) log2(1 + e/(2 pi) SINR), element-wise"""
    return np.asarray(bandwidth, dtype=float) / np.asarray(k_in, dtype=float) * np.log2(
        1.0 + RATE_FACTOR * np.asarray(sinr, dtype=float)
    )


@dataclass(frozen=True)
class LinkMetrics:
    """Per-user link quantities for a batch of allocations, each (T, K)"""
    gain: np.ndarray
    interference: np.ndarray
    noise_var: np.ndarray
    sinr: np.ndarray
    k_in: np.ndarray
    rate: np.ndarray


def link_metrics(
    scene: Scene,
    tables: ChannelTables,
    ap: np.ndarray,
    mirror: np.ndarray,
) -> LinkMetrics:
    """Evaluate T allocations; ap and mirror are (T, K) integer arrays"""
    ap = np.atleast_2d(np.asarray(ap, dtype=np.int64))
    mirror = np.atleast_2d(np.asarray(mirror, dtype=np.int64))
    T, K = ap.shape
    L = tables.num_aps
    if K != tables.num_users or mirror.shape != ap.shape:
        raise ContractViolationError(
            "allocation shape does not match the channel tables",
            {'allocation': list(ap.shape), 'users': tables.num_users}
        )

    powers = np.array([a.optical_power for a in scene.access_points])
    bandwidths = np.array([a.bandwidth for a in scene.access_points])
    responsivity = np.array([u.responsivity for u in scene.users])
    noise = scene.noise
    q = noise.electron_charge

    assigned = ap != UNASSIGNED
    ap_safe = np.where(assigned, ap, 0)
    mirror_safe = np.where(assigned, mirror, tables.null_mirror)
    users = np.arange(K)[None, :]

    gain = tables.h_los[users, ap_safe] + tables.h_irs[users, mirror_safe, ap_safe]
    gain = np.where(assigned, gain, 0.0)

    one_hot = (ap[:, :, None] == np.arange(L)[None, None, :])
    serving = one_hot.any(axis=1)
    interferers = serving[:, None, :] & ~one_hot
    interference = responsivity[None, :] * np.sum(
        interferers * powers[None, None, :] * tables.h_los[None, :, :], axis=2
    )
    interference = np.where(assigned, interference, 0.0)

    p_serving = powers[ap_safe]
    b_serving = bandwidths[ap_safe]
    signal = responsivity[None, :] * p_serving * gain
    received = p_serving * gain
    shot = 2 * q * responsivity[None, :] * received * b_serving if noise.include_signal_shot else 0.0
    noise_var = shot + 2 * q * noise.background_current * b_serving + noise.amplifier_noise_density * b_serving

    denom = interference ** 2 + noise_var
    dead = assigned & (denom <= 0.0)
    if np.any(dead):
        raise NoiselessLinkError(int(np.argwhere(dead)[0][1]))

    k_in = np.take_along_axis(one_hot.sum(axis=1), ap_safe, axis=1)
    k_in = np.where(assigned, k_in, 1)

    with np.errstate(divide='ignore', invalid='ignore'):
        sinr = np.where(assigned, sinr_value(signal, interference, np.where(assigned, noise_var, 1.0)), 0.0)
    rate = np.where(assigned, rate_value(sinr, b_serving, k_in), 0.0)

    return LinkMetrics(
        gain=gain,
        interference=interference,
        noise_var=np.where(assigned, noise_var, 0.0),
        sinr=sinr,
        k_in=k_in,
        rate=rate,
    )


def rates_batch(scene: Scene, tables: ChannelTables, ap: np.ndarray, mirror: np.ndarray) -> np.ndarray:
    """(T, K) user rates in bit/s"""
    return link_metrics(scene, tables, ap, mirror).rate


def utility_batch(rates: np.ndarray) -> np.ndarray:
    """Sum of log rates per row; -inf where any rate is zero"""
    rates = np.atleast_2d(rates)
    with np.errstate(divide='ignore'):
        logs = np.log(rates)
    return np.where(np.all(rates > 0, axis=1), np.sum(np.where(rates > 0, logs, 0.0), axis=1), -np.inf)


def user_rates(scene: Scene, tables: ChannelTables, alloc: Allocation) -> np.ndarray:
    ap, mirror = alloc.as_arrays()
    return rates_batch(scene, tables, ap, mirror)[0]


def _single(scene: Scene, tables: ChannelTables, alloc: Allocation) -> LinkMetrics:
    ap, mirror = alloc.as_arrays()
    return link_metrics(scene, tables, ap, mirror)


def interference(k: int, alloc: Allocation, tables: ChannelTables, scene: Scene) -> float:
    """LoS interference current at user k from the other serving APs"""
    return float(_single(scene, tables, alloc).interference[0, k])


def sinr(k: int, alloc: Allocation, tables: ChannelTables, scene: Scene) -> float:
    return float(_single(scene, tables, alloc).sinr[0, k])


def user_rate(k: int, alloc: Allocation, tables: ChannelTables, scene: Scene) -> float:
    return float(_single(scene, tables, alloc).rate[0, k])


def allocation_utility(alloc: Allocation, scene: Scene, tables: Optional[ChannelTables] = None) -> float:
    """Sum of ln R_k; -inf if any user has zero rate"""
    tables = tables if tables is not None else build_channel_tables(scene)
    alloc.validate(tables.num_aps, tables.num_mirrors)
    return float(utility_batch(user_rates(scene, tables, alloc)[None, :])[0])


def qos_satisfied(alloc: Allocation, scene: Scene, tables: Optional[ChannelTables] = None) -> np.ndarray:
    """Per-user R_k >= R_min,k"""
    tables = tables if tables is not None else build_channel_tables(scene)
    alloc.validate(tables.num_aps, tables.num_mirrors)
    rates = user_rates(scene, tables, alloc)
    min_rates = np.array([u.min_rate for u in scene.users])
    return rates >= min_rates


def feasible_mask(scene: Scene, rates: np.ndarray) -> np.ndarray:
    """Per-row QoS feasibility for a (T, K) rate batch"""
    min_rates = np.array([u.min_rate for u in scene.users])
    return np.all(np.atleast_2d(rates) >= min_rates[None, :], axis=1)
