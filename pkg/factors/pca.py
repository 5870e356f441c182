# factors/pca.py - Covariance PCA used to reduce selected factors to the network input size

from dataclasses import dataclass

import numpy as np
import pandas as pd
from loguru import logger

import config
from utils.errors import DimensionError, InsufficientDataError

EIGEN_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class PCAModel:
    mean: np.ndarray            # (k_in,)
    components: np.ndarray      # (k_out, k_in), rows are principal axes
    explained_ratio: np.ndarray  # (k_out,)
    factor_names: tuple = ()

    @property
    def k_in(self):
        return self.components.shape[1]

    @property
    def k_out(self):
        return self.components.shape[0]

    def to_dict(self):
        return {
            'mean': self.mean.tolist(),
            'components': self.components.tolist(),
            'explained_ratio': self.explained_ratio.tolist(),
            'factor_names': list(self.factor_names),
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            mean=np.asarray(data['mean'], dtype=float),
            components=np.atleast_2d(np.asarray(data['components'], dtype=float)),
            explained_ratio=np.asarray(data['explained_ratio'], dtype=float),
            factor_names=tuple(data.get('factor_names', ())),
        )


def _as_matrix(rows):
    if isinstance(rows, pd.DataFrame):
        return rows.to_numpy(dtype=float), tuple(rows.columns)
    return np.atleast_2d(np.asarray(rows, dtype=float)), ()


def pca_fit(rows, k_out=config.NETWORK_SHAPE['k']):
    """
    Fit principal axes on the sample covariance of observation rows.

    Components come sorted by eigenvalue, unit norm, with the largest-magnitude
    entry of each made positive. Eigenvalues below a relative floor count as
    zero, so rank-deficient data keeps its axes with zero explained variance.
    """
    data, names = _as_matrix(rows)
    n_rows, k_in = data.shape
    if not 1 <= k_out <= k_in:
        raise DimensionError(f"k_out={k_out} must lie in [1, {k_in}]")
    if n_rows < k_out + 1:
        raise InsufficientDataError(f"PCA needs >= {k_out + 1} rows, got {n_rows}")

    mean = data.mean(axis=0)
    cov = np.atleast_2d(np.cov(data, rowvar=False, ddof=1))
    eigvals, eigvecs = np.linalg.eigh(cov)
    order = np.argsort(eigvals)[::-1]
    eigvals = eigvals[order]
    eigvecs = eigvecs[:, order]

    top = eigvals[0] if eigvals.size else 0.0
    eigvals = np.where(eigvals < EIGEN_FLOOR * max(top, 0.0), 0.0, eigvals)
    eigvals = np.clip(eigvals, 0.0, None)

    components = eigvecs[:, :k_out].T.copy()
    for row in components:
        if row[np.argmax(np.abs(row))] < 0:
            row *= -1.0

    total = eigvals.sum()
    ratios = eigvals[:k_out] / total if total > 0 else np.zeros(k_out)
    logger.debug(f"PCA {k_in}->{k_out}: explained {np.round(ratios, 4).tolist()}")
    return PCAModel(mean=mean, components=components, explained_ratio=ratios, factor_names=names)


def pca_transform(model, rows):
    """Centered rows projected on the components; a single row stays one-dimensional."""
    data = np.asarray(rows.to_numpy() if isinstance(rows, pd.DataFrame) else rows, dtype=float)
    if data.shape[-1] != model.k_in:
        raise DimensionError(f"row width {data.shape[-1]} != PCA input width {model.k_in}")
    return (data - model.mean) @ model.components.T


def pca_inverse(model, reduced):
    reduced = np.asarray(reduced, dtype=float)
    if reduced.shape[-1] != model.k_out:
        raise DimensionError(f"reduced width {reduced.shape[-1]} != {model.k_out}")
    return reduced @ model.components + model.mean
