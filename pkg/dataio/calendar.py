# dataio/calendar.py - Trading calendar with month boundaries

from dataclasses import dataclass

import numpy as np
import pandas as pd

from utils.errors import ValidationError


@dataclass(frozen=True, eq=False)
class TradingCalendar:
    days: pd.DatetimeIndex

    def __post_init__(self):
        days = pd.DatetimeIndex(self.days)
        if not days.is_monotonic_increasing or not days.is_unique:
            raise ValidationError("trading days must be strictly increasing")
        object.__setattr__(self, 'days', days)
        months = days.to_period('M')
        starts = np.ones(len(days), dtype=bool)
        starts[1:] = months[1:] != months[:-1]
        object.__setattr__(self, '_months', months)
        object.__setattr__(self, '_month_starts', starts)

    def __len__(self):
        return len(self.days)

    def __getitem__(self, i):
        return self.days[i]

    def index_of(self, date):
        return self.days.get_loc(pd.Timestamp(date))

    def is_month_start(self, i):
        """True when day i is the first trading day of its month."""
        return bool(self._month_starts[i])

    @property
    def month_starts(self):
        return np.flatnonzero(self._month_starts)

    def window_start(self, i, months):
        """First index of the trailing window covering day i's month and the `months - 1` before it."""
        first_month = self._months[i] - (months - 1)
        return int(np.searchsorted(self.days, first_month.start_time))

    def months_between(self, i, j):
        """Whole calendar months from day i's month to day j's month."""
        return (self._months[j] - self._months[i]).n
