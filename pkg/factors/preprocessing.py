# factors/preprocessing.py - Null deletion, 3-sigma clamp, neutralization, z-score

import numpy as np
import pandas as pd
from loguru import logger

import config
from factors.panel import Stage
from utils.errors import EmptyPanelError

ZERO_STD = 1e-12


def _by_date(frame):
    return frame.groupby(level='date', sort=False)


def drop_null_rows(panel):
    """Delete every (date, stock) row holding a null factor, mktcap or industry."""
    panel.require(Stage.RAW, 'drop_null_rows')
    keep = panel.values.notna().all(axis=1) & panel.mktcap.notna() & panel.industry.notna()
    dropped = int((~keep).sum())
    if keep.sum() == 0:
        raise EmptyPanelError("every factor row contains a null value")
    if dropped:
        logger.debug(f"Dropped {dropped} of {len(panel)} rows with null values")
    return panel.evolve(panel.values.loc[keep], Stage.CLEANED)


def winsor_bounds(values, n_sigma=config.FACTOR_OPTIONS['n_sigma']):
    """Per (date, factor) clamp bounds; cross-sections with no spread get infinite bounds."""
    grouped = _by_date(values)
    mean = grouped.mean()
    std = grouped.std(ddof=1)
    flat = std.isna() | (std <= 0)
    lower = (mean - n_sigma * std).mask(flat, -np.inf)
    upper = (mean + n_sigma * std).mask(flat, np.inf)
    return lower, upper


def _clip(values, bounds):
    lower, upper = bounds
    dates = values.index.get_level_values('date')
    low = lower.loc[dates, values.columns].to_numpy()
    high = upper.loc[dates, values.columns].to_numpy()
    clipped = np.clip(values.to_numpy(), low, high)
    return pd.DataFrame(clipped, index=values.index, columns=values.columns)


def winsorize_3sigma(panel, n_sigma=config.FACTOR_OPTIONS['n_sigma']):
    """
    Clamp each (date, factor) cross-section to mean +/- n_sigma sample std.

    The bounds are kept on the returned panel so they can be re-applied
    with `clip_to_bounds`.
    """
    panel.require(Stage.CLEANED, 'winsorize_3sigma')
    bounds = winsor_bounds(panel.values, n_sigma)
    values = _clip(panel.values, bounds)
    changed = int((values.to_numpy() != panel.values.to_numpy()).sum())
    logger.debug(f"Winsorized {changed} values at {n_sigma} sigma")
    return panel.evolve(values, Stage.WINSORIZED, winsor_bounds=bounds)


def clip_to_bounds(panel, bounds):
    """Re-apply stored winsorization bounds without changing the stage."""
    return panel.evolve(_clip(panel.values, bounds), panel.stage)


def design_matrix(mktcap, industry, with_industry=True):
    """[1, ln(mktcap), industry dummies (first level dropped)] for one cross-section."""
    columns = [np.ones(len(mktcap)), np.log(np.asarray(mktcap, dtype=float))]
    if with_industry:
        dummies = pd.get_dummies(pd.Series(np.asarray(industry)), drop_first=True, dtype=float)
        columns.extend(dummies.to_numpy().T)
    return np.column_stack(columns)


def neutralize(panel):
    """Replace factor values by OLS residuals on size and industry, date by date."""
    panel.require(Stage.WINSORIZED, 'neutralize')
    residuals = np.empty(panel.values.shape)
    fallback_dates = []
    positions = _by_date(panel.values).indices

    raw = panel.values.to_numpy()
    caps = panel.mktcap.to_numpy()
    industries = panel.industry.to_numpy()
    for date, rows in positions.items():
        design = design_matrix(caps[rows], industries[rows])
        if np.linalg.matrix_rank(design) < design.shape[1]:
            fallback_dates.append(date)
            design = design_matrix(caps[rows], industries[rows], with_industry=False)
        y = raw[rows]
        beta = np.linalg.lstsq(design, y, rcond=None)[0]
        residuals[rows] = y - design @ beta

    warnings = ()
    if fallback_dates:
        message = (f"neutralize: singular size/industry design on {len(fallback_dates)} date(s), "
                   f"fell back to size-only regression (first {pd.Timestamp(fallback_dates[0]).date()})")
        logger.warning(message)
        warnings = (message,)
    values = pd.DataFrame(residuals, index=panel.values.index, columns=panel.values.columns)
    return panel.evolve(values, Stage.NEUTRALIZED, warnings=warnings)


def zscore(panel):
    """Cross-sectional standardization; cross-sections with zero spread become zeros."""
    panel.require(Stage.NEUTRALIZED, 'zscore')
    grouped = _by_date(panel.values)
    mean = grouped.transform('mean')
    std = grouped.transform('std')
    flat = std.isna() | (std < ZERO_STD)
    values = ((panel.values - mean) / std.mask(flat, 1.0)).mask(flat, 0.0)
    return panel.evolve(values, Stage.STANDARDIZED)


def preprocess(panel, n_sigma=config.FACTOR_OPTIONS['n_sigma']):
    """Raw panel -> standardized panel."""
    cleaned = drop_null_rows(panel)
    result = zscore(neutralize(winsorize_3sigma(cleaned, n_sigma)))
    logger.info(f"Preprocessed factor panel: {len(panel)} -> {len(result)} rows, "
                f"{len(result.factor_names)} factors, {len(result.dates)} dates")
    return result
