# regime/boxcox.py - Per-variable Box-Cox power transform followed by standardization

from dataclasses import dataclass

import numpy as np
import pandas as pd
from loguru import logger
from scipy import special, stats

from utils.errors import DomainError, InsufficientDataError

SHIFT_EPSILON = 1e-6
LAMBDA_GRID = np.round(np.linspace(-5.0, 5.0, 1001), 2)
MIN_ROWS = 20


@dataclass(frozen=True, eq=False)
class BoxCoxTransform:
    lambdas: np.ndarray
    shifts: np.ndarray
    means: np.ndarray
    stds: np.ndarray
    identity: np.ndarray    # True where the column was constant at fit time
    columns: tuple = ()

    def to_dict(self):
        return {
            'lambdas': self.lambdas.tolist(),
            'shifts': self.shifts.tolist(),
            'means': self.means.tolist(),
            'stds': self.stds.tolist(),
            'identity': self.identity.tolist(),
            'columns': list(self.columns),
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            lambdas=np.asarray(data['lambdas'], dtype=float),
            shifts=np.asarray(data['shifts'], dtype=float),
            means=np.asarray(data['means'], dtype=float),
            stds=np.asarray(data['stds'], dtype=float),
            identity=np.asarray(data['identity'], dtype=bool),
            columns=tuple(data.get('columns', ())),
        )


def boxcox_raw(x, lam):
    """((x^lam - 1) / lam), or ln(x) at lam = 0, without standardization."""
    return special.boxcox(np.asarray(x, dtype=float), lam)


def best_lambda(x):
    """Grid argmax of the Box-Cox profile log-likelihood."""
    llf = np.array([stats.boxcox_llf(lam, x) for lam in LAMBDA_GRID])
    llf[~np.isfinite(llf)] = -np.inf
    return float(LAMBDA_GRID[int(np.argmax(llf))])


def _split(rows):
    if isinstance(rows, pd.DataFrame):
        return rows.to_numpy(dtype=float), rows
    return np.asarray(rows, dtype=float), None


def _wrap(values, template):
    if template is None:
        return values
    return pd.DataFrame(values, index=template.index, columns=template.columns)


def boxcox_fit(rows):
    """
    Fit a shift, a power parameter and standardization moments per column.

    Args:
        rows: (T, V) observations, DataFrame or array, T >= 20

    Returns:
        BoxCoxTransform; constant columns pass through untouched
    """
    data, frame = _split(rows)
    data = np.atleast_2d(data)
    if data.shape[0] < MIN_ROWS:
        raise InsufficientDataError(f"Box-Cox fit needs >= {MIN_ROWS} rows, got {data.shape[0]}")
    n_vars = data.shape[1]
    lambdas = np.ones(n_vars)
    shifts = np.zeros(n_vars)
    means = np.zeros(n_vars)
    stds = np.ones(n_vars)
    identity = np.zeros(n_vars, dtype=bool)
    names = tuple(frame.columns) if frame is not None else tuple(str(i) for i in range(n_vars))

    for v in range(n_vars):
        x = data[:, v]
        if np.ptp(x) == 0:
            identity[v] = True
            logger.warning(f"Box-Cox: column {names[v]} is constant; using identity transform")
            continue
        shifts[v] = max(0.0, SHIFT_EPSILON - x.min())
        shifted = x + shifts[v]
        lambdas[v] = best_lambda(shifted)
        y = boxcox_raw(shifted, lambdas[v])
        means[v] = y.mean()
        stds[v] = y.std() or 1.0

    logger.debug(f"Box-Cox lambdas: {dict(zip(names, lambdas.round(2).tolist()))}")
    return BoxCoxTransform(lambdas, shifts, means, stds, identity, names if frame is not None else ())


def boxcox_apply(transform, rows, clip=False):
    """
    Transform and standardize rows with a fitted transform.

    Shifted values must be > 0; with clip=True they are raised to the
    shift epsilon instead of raising DomainError (out-of-window decoding).
    """
    data, frame = _split(rows)
    data = np.atleast_2d(data)
    out = np.empty_like(data)
    for v in range(data.shape[1]):
        x = data[:, v]
        if transform.identity[v]:
            out[:, v] = x
            continue
        shifted = x + transform.shifts[v]
        if (shifted <= 0).any():
            if not clip:
                raise DomainError(f"Box-Cox input for column {v} is <= 0 after shift {transform.shifts[v]}")
            shifted = np.maximum(shifted, SHIFT_EPSILON)
        out[:, v] = (boxcox_raw(shifted, transform.lambdas[v]) - transform.means[v]) / transform.stds[v]
    return _wrap(out, frame)


def boxcox_invert(transform, rows):
    data, frame = _split(rows)
    data = np.atleast_2d(data)
    out = np.empty_like(data)
    for v in range(data.shape[1]):
        if transform.identity[v]:
            out[:, v] = data[:, v]
            continue
        y = data[:, v] * transform.stds[v] + transform.means[v]
        out[:, v] = special.inv_boxcox(y, transform.lambdas[v]) - transform.shifts[v]
    return _wrap(out, frame)
