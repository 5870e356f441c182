# neural/picker.py - Score candidate stocks with the trained network and keep the best n

from dataclasses import dataclass

import numpy as np
import pandas as pd
from loguru import logger

import config
from neural.network import forward
from utils.errors import ValidationError


@dataclass(frozen=True, eq=False)
class PickResult:
    stocks: tuple           # picked ids, best first
    scores: pd.Series       # every candidate's predicted return
    short: bool = False     # fewer candidates than requested


def predict_and_pick(net, shape, rows, n_pick=config.TRADE_PARAMS['n_pick']):
    """
    Args:
        net: Trained NetworkParams
        shape: NetworkShape
        rows: DataFrame of reduced factor rows indexed by stock id (one row per stock)
        n_pick: How many stocks to return

    Returns:
        PickResult ordered by score descending, ties by stock id ascending
    """
    if n_pick < 1:
        raise ValidationError("n_pick must be >= 1")
    if not isinstance(rows, pd.DataFrame):
        rows = pd.DataFrame.from_dict(dict(rows), orient='index')
    if rows.empty:
        scores = pd.Series(dtype=float, name='score')
    else:
        scores = pd.Series(np.atleast_1d(forward(net, shape, rows.to_numpy(dtype=float))),
                           index=rows.index.astype(str), name='score')

    ranked = sorted(scores.index, key=lambda stock: (-scores[stock], stock))
    short = len(ranked) < n_pick
    if short:
        logger.warning(f"Only {len(ranked)} candidate stocks for n_pick={n_pick}; returning all")
    return PickResult(stocks=tuple(ranked[:n_pick]), scores=scores, short=short)
