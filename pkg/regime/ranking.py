# regime/ranking.py - Rank decoded states by their next-day index return and derive the timing signal

from dataclasses import dataclass
from enum import Enum

import numpy as np

from utils.errors import DimensionError, ValidationError


class Signal(str, Enum):
    LONG = 'long'
    FLAT = 'flat'


@dataclass(frozen=True, eq=False)
class StateRanking:
    totals: np.ndarray      # per-state sum of next-day returns
    ranks: np.ndarray       # 1 = best
    order: tuple            # states, best first
    visited: np.ndarray

    @property
    def top_two(self):
        return frozenset(self.order[:2])

    @property
    def n_states(self):
        return len(self.totals)

    def rank_of(self, state):
        return int(self.ranks[state])


def rank_states(path, next_returns, n_states=None):
    """
    Args:
        path: Decoded state per day
        next_returns: Entry t is the index return of day t+1
        n_states: State count (defaults to max(path) + 1)

    Returns:
        StateRanking; unvisited states sit below every visited one
    """
    path = np.asarray(path, dtype=int)
    next_returns = np.asarray(next_returns, dtype=float)
    if path.shape != next_returns.shape:
        raise DimensionError(f"path length {path.size} != returns length {next_returns.size}")
    if n_states is None:
        n_states = int(path.max()) + 1 if path.size else 1
    totals = np.bincount(path, weights=next_returns, minlength=n_states).astype(float)
    visited = np.bincount(path, minlength=n_states) > 0
    order = tuple(sorted(range(n_states), key=lambda s: (not visited[s], -totals[s], s)))
    ranks = np.empty(n_states, dtype=int)
    ranks[list(order)] = np.arange(1, n_states + 1)
    return StateRanking(totals=totals, ranks=ranks, order=order, visited=visited)


def timing_signal(ranking, current_state):
    """Long when the state ranks in the top two, flat otherwise."""
    if not 0 <= current_state < ranking.n_states:
        raise ValidationError(f"state {current_state} outside 0..{ranking.n_states - 1}")
    return Signal.LONG if current_state in ranking.top_two else Signal.FLAT
