# dataio/observables.py - The five index observables fed to the regime model

from typing import NamedTuple

import numpy as np
import pandas as pd

from utils.errors import DomainError, InsufficientDataError, ValidationError

OBSERVABLE_COLUMNS = ['lgrfsb', 'tv', 'dlshlp', 'dlr', 'fdlr']
LOOKBACK = 5


class ObservationRow(NamedTuple):
    lgrfsb: float
    tv: float
    dlshlp: float
    dlr: float
    fdlr: float


def compute_observables(index_bars):
    """
    Derive LGRFSB, TV, DLSHLP, DLR and FDLR from index bars.

    Rows lacking the full five-day lookback are dropped, so the result has
    len(index_bars) - 5 rows indexed by date.
    """
    if index_bars.kind != 'index':
        raise ValidationError("observables need index bars (fsb column)")
    if len(index_bars) < LOOKBACK + 1:
        raise InsufficientDataError(f"need at least {LOOKBACK + 1} index bars, got {len(index_bars)}")

    frame = index_bars.frame
    if (frame[['open', 'high', 'low', 'close', 'fsb']] <= 0).to_numpy().any():
        raise DomainError("prices and fsb must be > 0 for log observables")

    log_close = np.log(frame['close'])
    observed = pd.DataFrame({
        'lgrfsb': np.log(frame['fsb']).diff(),
        'tv': frame['volume'],
        'dlshlp': np.log(frame['high'] / frame['low']),
        'dlr': log_close.diff(),
        'fdlr': log_close.diff(LOOKBACK),
    }, index=frame.index)
    return observed.iloc[LOOKBACK:][OBSERVABLE_COLUMNS]


def observation_rows(observables):
    return [ObservationRow(*row) for row in observables[OBSERVABLE_COLUMNS].itertuples(index=False)]
