"""dB/dBm conversions used at the I/O boundary.

Everything inside the library works in linear scale (watts, linear SINR);
these helpers exist so that files, CLI flags and reports can speak dB/dBm.
"""

from __future__ import annotations

import numpy as np

__all__ = ["db_to_linear", "linear_to_db", "dbm_to_watts", "watts_to_dbm"]


def db_to_linear(x_db):
    """10^(x/10). Accepts scalars or arrays."""
    return 10.0 ** (np.multiply(x_db, 0.1))


def linear_to_db(x):
    """10*log10(x). Raises ValueError for non-positive input."""
    arr = np.asarray(x, dtype=float)
    if arr.size and (np.any(arr <= 0.0) or not np.all(np.isfinite(arr))):
        raise ValueError("linear_to_db requires strictly positive finite input")
    out = 10.0 * np.log10(arr)
    return float(out) if out.ndim == 0 else out


def dbm_to_watts(x_dbm):
    """Power in watts for a level in dBm (referenced to 1 mW)."""
    return 10.0 ** ((np.multiply(x_dbm, 1.0) - 30.0) / 10.0)


def watts_to_dbm(x_watts):
    """Inverse of :func:`dbm_to_watts`. Raises ValueError for non-positive input."""
    return linear_to_db(x_watts) + 30.0
