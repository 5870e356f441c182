# factors/ic.py - Information coefficient ranking and factor selection

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd
from loguru import logger

import config
from factors.panel import Stage
from utils.errors import InsufficientDataError, ValidationError

MIN_PAIRS = 3
IC_DECIMALS = 12  # |IC| below this resolution ties and falls back to name order
REPORT_COLUMNS = ['factor', 'ic', 'rank', 'selected']


@dataclass(frozen=True, eq=False)
class ICReport:
    ic: pd.Series           # factor -> Pearson IC
    rank: pd.Series         # factor -> 1-based rank by |IC|
    selected: tuple         # top-k factor names in rank order
    n_obs: int
    target: str = 'index'
    warnings: tuple = ()

    def to_frame(self):
        order = self.rank.sort_values().index
        return pd.DataFrame({
            'factor': order,
            'ic': self.ic.loc[order].to_numpy(),
            'rank': self.rank.loc[order].to_numpy(),
            'selected': [name in self.selected for name in order],
        })

    def to_csv(self, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        self.to_frame().to_csv(path, index=False, float_format='%.12g')
        return path


def next_day_targets(panel, returns):
    """
    Align next-trading-day returns with each (date, stock) panel row.

    A date-indexed series is read as index returns (every stock on date t gets
    the index return of the following date); a (date, stock_id)-indexed series
    is read as per-stock returns shifted within each stock.
    """
    if returns.index.nlevels == 1:
        forward = returns.sort_index().shift(-1)
        dates = panel.values.index.get_level_values('date')
        return pd.Series(forward.reindex(dates).to_numpy(), index=panel.values.index), 'index'
    forward = returns.sort_index().groupby(level='stock_id').shift(-1)
    return forward.reindex(panel.values.index), 'stock'


def pearson(x, y):
    """Pearson correlation; None when either side has no variance."""
    dx = x - x.mean()
    dy = y - y.mean()
    denom = np.sqrt(np.dot(dx, dx) * np.dot(dy, dy))
    if denom == 0 or not np.isfinite(denom):
        return None
    return float(np.clip(np.dot(dx, dy) / denom, -1.0, 1.0))


def compute_ic(panel, returns, k=config.FACTOR_OPTIONS['k_select']):
    """
    Rank factors by |IC| against next-day returns and select the top k.

    Args:
        panel: Standardized FactorPanel
        returns: Date-indexed index returns or (date, stock_id)-indexed stock returns
        k: Number of factors to select

    Returns:
        ICReport
    """
    panel.require(Stage.STANDARDIZED, 'compute_ic')
    if k < 1:
        raise ValidationError("k must be >= 1")
    target, mode = next_day_targets(panel, returns)
    y_all = target.to_numpy(dtype=float)

    warnings = []
    values = {}
    n_obs = 0
    for name in panel.factor_names:
        x = panel.values[name].to_numpy(dtype=float)
        mask = np.isfinite(x) & np.isfinite(y_all)
        n = int(mask.sum())
        if n < MIN_PAIRS:
            raise InsufficientDataError(f"IC for {name} needs >= {MIN_PAIRS} paired observations, got {n}")
        n_obs = max(n_obs, n)
        ic = pearson(x[mask], y_all[mask])
        if ic is None:
            warnings.append(f"IC undefined for constant series ({name}); set to 0")
            ic = 0.0
        values[name] = ic

    for message in warnings:
        logger.warning(message)

    ordered = sorted(values, key=lambda name: (-round(abs(values[name]), IC_DECIMALS), name))
    if k > len(ordered):
        logger.warning(f"k={k} exceeds {len(ordered)} factors; selecting all")
    ic = pd.Series(values, name='ic')
    rank = pd.Series({name: i + 1 for i, name in enumerate(ordered)}, name='rank')
    selected = tuple(ordered[:k])
    logger.info(f"IC ({mode} target, {n_obs} obs): selected {', '.join(selected)}")
    return ICReport(ic=ic, rank=rank, selected=selected, n_obs=n_obs, target=mode, warnings=tuple(warnings))
