# backtest/params.py - Trading operation parameters

from dataclasses import asdict, dataclass

import config
from utils.errors import ValidationError

_defaults = config.TRADE_PARAMS


@dataclass(frozen=True)
class TradeParams:
    initial_capital: float = _defaults['initial_capital']
    buy_cost: float = _defaults['buy_cost']
    sell_cost: float = _defaults['sell_cost']
    slippage: float = _defaults['slippage']
    buy_fraction: float = _defaults['buy_fraction']
    sell_fraction: float = _defaults['sell_fraction']
    n_pick: int = _defaults['n_pick']
    picking_cycle: int = _defaults['picking_cycle']
    timing_cycle: int = _defaults['timing_cycle']
    training_cycle: int = _defaults['training_cycle']
    picker_train_window: int = _defaults['picker_train_window']
    regime_train_window: int = _defaults['regime_train_window']
    risk_free_rate: float = _defaults['risk_free_rate']
    periods_per_year: int = _defaults['periods_per_year']
    fractional_shares: bool = _defaults['fractional_shares']

    def __post_init__(self):
        problems = []
        if not self.initial_capital > 0:
            problems.append("initial_capital must be > 0")
        for name in ('buy_cost', 'sell_cost'):
            if not 0 <= getattr(self, name) < 1:
                problems.append(f"{name} must lie in [0, 1)")
        for name in ('buy_fraction', 'sell_fraction'):
            if not 0 < getattr(self, name) <= 1:
                problems.append(f"{name} must lie in (0, 1]")
        for name in ('n_pick', 'picking_cycle', 'timing_cycle', 'training_cycle',
                     'picker_train_window', 'regime_train_window', 'periods_per_year'):
            if getattr(self, name) < 1:
                problems.append(f"{name} must be >= 1")
        if self.slippage < 0:
            problems.append("slippage must be >= 0")
        if problems:
            raise ValidationError("invalid trade params: " + "; ".join(problems))

    @classmethod
    def from_dict(cls, data):
        return cls(**data)

    def to_dict(self):
        return asdict(self)
