"""System model for a downlink NOMA secondary network under primary-user limits.

One base station serves N secondary users (SUs) on a channel shared with M
primary users (PUs). SUs are kept sorted by non-increasing channel gain; with
successive interference cancellation in that decoding order, user ``n`` sees
interference only from users ``1..n-1`` (the stronger-gain ones).

All quantities are linear scale: gains dimensionless, powers and noise in
watts, SINR linear. Conversions to dB/dBm live in :mod:`noma_crn.units` and
happen only at I/O boundaries.

Power vectors are plain 1-D ``float64`` numpy arrays indexed in the sorted
user order; producing functions guarantee non-negative entries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["Scenario", "sort_users", "compute_sinr", "power_budget"]


def _as_positive_array(name: str, values) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(values, dtype=float)).copy()
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional")
    if arr.size and (not np.all(np.isfinite(arr)) or np.any(arr <= 0.0)):
        raise ValueError(f"{name} entries must be strictly positive and finite")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Scenario:
    """A full problem instance with SUs already sorted by descending gain.

    Attributes
    ----------
    su_gains : channel gains G_n, non-increasing (linear, dimensionless).
    su_noise : per-SU aggregate noise-plus-PU-interference power (watts).
    su_thresholds : per-SU minimum SINR targets (linear).
    pu_gains : channel gains toward each PU (may be empty).
    pu_interference_limits : tolerable interference per PU (watts), parallel
        to ``pu_gains``.
    p_max : maximum total transmit power for the secondary system (watts).
    order : original index of the user at each sorted position, so results
        can be reported in the caller's original ordering. Defaults to the
        identity.

    Use :func:`sort_users` to build a Scenario from unsorted per-user lists;
    direct construction requires the gains to be sorted already. N = 0 is a
    legal, fully degenerate instance.
    """

    su_gains: np.ndarray
    su_noise: np.ndarray
    su_thresholds: np.ndarray
    pu_gains: np.ndarray
    pu_interference_limits: np.ndarray
    p_max: float
    order: np.ndarray | None = None

    def __post_init__(self):
        gains = _as_positive_array("su_gains", self.su_gains)
        noise = _as_positive_array("su_noise", self.su_noise)
        thresholds = _as_positive_array("su_thresholds", self.su_thresholds)
        pu_gains = _as_positive_array("pu_gains", self.pu_gains)
        pu_limits = _as_positive_array("pu_interference_limits", self.pu_interference_limits)
        if not (len(gains) == len(noise) == len(thresholds)):
            raise ValueError("su_gains, su_noise and su_thresholds must have equal length")
        if len(pu_gains) != len(pu_limits):
            raise ValueError("pu_gains and pu_interference_limits must have equal length")
        if np.any(np.diff(gains) > 0.0):
            raise ValueError("su_gains must be sorted non-increasing; use sort_users()")
        p_max = float(self.p_max)
        if not (np.isfinite(p_max) and p_max > 0.0):
            raise ValueError("p_max must be strictly positive and finite")
        if self.order is None:
            order = np.arange(len(gains))
        else:
            order = np.asarray(self.order, dtype=int).copy()
            if sorted(order.tolist()) != list(range(len(gains))):
                raise ValueError("order must be a permutation of 0..N-1")
        order.flags.writeable = False
        object.__setattr__(self, "su_gains", gains)
        object.__setattr__(self, "su_noise", noise)
        object.__setattr__(self, "su_thresholds", thresholds)
        object.__setattr__(self, "pu_gains", pu_gains)
        object.__setattr__(self, "pu_interference_limits", pu_limits)
        object.__setattr__(self, "p_max", p_max)
        object.__setattr__(self, "order", order)

    @property
    def n_sus(self) -> int:
        return len(self.su_gains)

    @property
    def n_pus(self) -> int:
        return len(self.pu_gains)

    @property
    def noise_over_gain(self) -> np.ndarray:
        """Per-user N_n/G_n (watts); the single-user power cost of one unit of SINR."""
        return self.su_noise / self.su_gains

    def prefix(self, count: int) -> Scenario:
        """The same instance restricted to the first ``count`` sorted users."""
        if not 0 <= count <= self.n_sus:
            raise ValueError(f"prefix count {count} out of range 0..{self.n_sus}")
        return Scenario(
            su_gains=self.su_gains[:count],
            su_noise=self.su_noise[:count],
            su_thresholds=self.su_thresholds[:count],
            pu_gains=self.pu_gains,
            pu_interference_limits=self.pu_interference_limits,
            p_max=self.p_max,
            order=np.argsort(np.argsort(self.order[:count])),
        )

    def to_original_order(self, values) -> np.ndarray:
        """Scatter per-user ``values`` (sorted order) back to the original ordering."""
        arr = np.asarray(values)
        if arr.shape[0] != self.n_sus:
            raise ValueError("values length must equal the SU count")
        out = np.empty_like(arr)
        out[self.order] = arr
        return out


def sort_users(
    su_gains,
    su_noise,
    su_thresholds,
    *,
    pu_gains=(),
    pu_interference_limits=(),
    p_max: float,
) -> Scenario:
    """Build a Scenario from unsorted per-user lists.

    The three SU lists are permuted jointly so gains are non-increasing; ties
    keep their original relative order, and the applied permutation is kept in
    ``Scenario.order`` so outputs can be mapped back.
    """
    gains = np.atleast_1d(np.asarray(su_gains, dtype=float))
    noise = np.atleast_1d(np.asarray(su_noise, dtype=float))
    thresholds = np.atleast_1d(np.asarray(su_thresholds, dtype=float))
    if not (len(gains) == len(noise) == len(thresholds)):
        raise ValueError("su_gains, su_noise and su_thresholds must have equal length")
    order = np.argsort(-gains, kind="stable")
    return Scenario(
        su_gains=gains[order],
        su_noise=noise[order],
        su_thresholds=thresholds[order],
        pu_gains=np.asarray(pu_gains, dtype=float),
        pu_interference_limits=np.asarray(pu_interference_limits, dtype=float),
        p_max=p_max,
        order=order,
    )


def compute_sinr(scenario: Scenario, powers) -> np.ndarray:
    """Per-user SINR for the given power vector (sorted order).

    gamma_n = P_n G_n / (sum_{j<n} P_j G_n + N_n): after SIC, only the
    stronger-gain users 1..n-1 interfere with user n.
    """
    p = np.asarray(powers, dtype=float)
    if p.shape != (scenario.n_sus,):
        raise ValueError(f"powers must have shape ({scenario.n_sus},), got {p.shape}")
    if p.size and (np.any(p < 0.0) or not np.all(np.isfinite(p))):
        raise ValueError("powers must be non-negative and finite")
    if p.size == 0:
        return np.zeros(0)
    prior = np.concatenate(([0.0], np.cumsum(p)[:-1]))
    return p * scenario.su_gains / (prior * scenario.su_gains + scenario.su_noise)


def power_budget(scenario: Scenario) -> float:
    """Total power available to the secondary system (watts).

    The tightest PU constraint min_m(I_m/g_m) capped at ``p_max``; with no PUs
    the cap alone applies.
    """
    if scenario.n_pus == 0:
        return scenario.p_max
    return float(min(np.min(scenario.pu_interference_limits / scenario.pu_gains), scenario.p_max))
