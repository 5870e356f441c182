# factors/panel.py - (date x stock x factor) container carrying its preprocessing stage

from dataclasses import dataclass, field, replace
from enum import Enum

import pandas as pd

from utils.errors import StageError, ValidationError

INDEX_NAMES = ['date', 'stock_id']


class Stage(str, Enum):
    RAW = 'raw'
    CLEANED = 'cleaned'
    WINSORIZED = 'winsorized'
    NEUTRALIZED = 'neutralized'
    STANDARDIZED = 'standardized'


@dataclass(frozen=True, eq=False)
class FactorPanel:
    """
    Long-format factor panel.

    `values` is indexed by (date, stock_id) with one column per factor; `mktcap`
    and `industry` share that index. Each preprocessing step returns a new panel
    with the next stage tag, so a panel value never changes after construction.
    """
    values: pd.DataFrame
    mktcap: pd.Series
    industry: pd.Series
    stage: Stage = Stage.RAW
    warnings: tuple = ()
    winsor_bounds: tuple = field(default=None, repr=False)

    def __post_init__(self):
        index = self.values.index
        if list(index.names) != INDEX_NAMES:
            raise ValidationError(f"factor panel index must be {INDEX_NAMES}, got {list(index.names)}")
        if not index.is_unique:
            raise ValidationError("factor panel has duplicate (date, stock_id) rows")
        if not (self.mktcap.index.equals(index) and self.industry.index.equals(index)):
            raise ValidationError("mktcap/industry must share the factor value index")
        caps = self.mktcap.dropna()
        if (caps <= 0).any():
            raise ValidationError("mktcap must be > 0")

    @classmethod
    def from_frame(cls, frame, factor_names=None, stage=Stage.RAW):
        """Build a panel from a flat frame with date, stock_id, mktcap, industry and factor columns."""
        if factor_names is None:
            factor_names = [c for c in frame.columns if c not in ('date', 'stock_id', 'mktcap', 'industry')]
        flat = frame.copy()
        flat['date'] = pd.to_datetime(flat['date'])
        flat['stock_id'] = flat['stock_id'].astype(str)
        flat = flat.set_index(INDEX_NAMES).sort_index()
        return cls(
            values=flat[list(factor_names)].astype(float),
            mktcap=flat['mktcap'].astype(float),
            industry=flat['industry'],
            stage=Stage(stage),
        )

    @property
    def dates(self):
        return self.values.index.get_level_values('date').unique()

    @property
    def stock_ids(self):
        return self.values.index.get_level_values('stock_id').unique().sort_values()

    @property
    def factor_names(self):
        return list(self.values.columns)

    def __len__(self):
        return len(self.values)

    def require(self, stage, operation):
        if self.stage != stage:
            raise StageError(f"{operation} expects a '{Stage(stage).value}' panel, got '{self.stage.value}'")

    def evolve(self, values, stage, warnings=(), **changes):
        """New panel with replaced values (row subset allowed) and the next stage tag."""
        index = values.index
        return replace(
            self,
            values=values,
            mktcap=self.mktcap.loc[index],
            industry=self.industry.loc[index],
            stage=Stage(stage),
            warnings=self.warnings + tuple(warnings),
            **changes,
        )

    def select(self, factors):
        return replace(self, values=self.values[list(factors)])

    def window(self, dates):
        """Rows whose date is in `dates`."""
        mask = self.values.index.get_level_values('date').isin(pd.DatetimeIndex(dates))
        index = self.values.index[mask]
        return replace(
            self,
            values=self.values.loc[index],
            mktcap=self.mktcap.loc[index],
            industry=self.industry.loc[index],
        )

    def cross_section(self, date):
        """Factor rows for one date, indexed by stock_id."""
        date = pd.Timestamp(date)
        try:
            return self.values.xs(date, level='date')
        except KeyError:
            return self.values.iloc[0:0].droplevel('date')

    def to_frame(self):
        flat = self.values.copy()
        flat.insert(0, 'industry', self.industry)
        flat.insert(0, 'mktcap', self.mktcap)
        return flat.reset_index()

    def has_nulls(self):
        return bool(self.values.isna().to_numpy().any())
