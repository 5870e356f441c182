import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from regime.ranking import Signal, rank_states, timing_signal
from utils.errors import DimensionError, ValidationError


def test_ranks_by_summed_next_returns():
    path = [0, 1, 2, 0, 1, 2]
    returns = [0.01, -0.02, 0.005, 0.01, -0.01, 0.0]
    ranking = rank_states(path, returns, n_states=3)
    np.testing.assert_allclose(ranking.totals, [0.02, -0.03, 0.005])
    assert ranking.order == (0, 2, 1)
    assert ranking.ranks.tolist() == [1, 3, 2]
    assert ranking.top_two == {0, 2}


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 32 - 1), st.integers(min_value=1, max_value=6))
def test_totals_partition_the_returns(seed, n_states):
    rng = np.random.default_rng(seed)
    path = rng.integers(n_states, size=80)
    returns = rng.normal(0, 0.02, 80)
    ranking = rank_states(path, returns, n_states=n_states)
    assert ranking.totals.sum() == pytest.approx(returns.sum(), abs=1e-12)
    assert sorted(ranking.order) == list(range(n_states))


def test_unvisited_states_rank_last():
    ranking = rank_states([0, 0, 2], [-0.01, -0.01, -0.05], n_states=4)
    assert ranking.order[:2] == (0, 2)
    assert ranking.rank_of(1) > 2 and ranking.rank_of(3) > 2
    assert not ranking.visited[1]


def test_ties_break_by_state_number():
    ranking = rank_states([1, 0], [0.01, 0.01], n_states=2)
    assert ranking.order == (0, 1)


def test_state_count_defaults_to_path():
    assert rank_states([0, 3, 1], [0.0, 0.0, 0.0]).n_states == 4


def test_length_mismatch():
    with pytest.raises(DimensionError):
        rank_states([0, 1], [0.01])


class TestTimingSignal:
    @pytest.fixture
    def ranking(self):
        return rank_states([0, 1, 2, 3, 4], [0.05, 0.04, 0.03, 0.02, 0.01], n_states=5)

    @pytest.mark.parametrize('state, expected', [(0, Signal.LONG), (1, Signal.LONG), (2, Signal.FLAT), (4, Signal.FLAT)])
    def test_top_two_go_long(self, ranking, state, expected):
        assert timing_signal(ranking, state) is expected

    def test_single_state_is_always_long(self):
        assert timing_signal(rank_states([0, 0], [-0.1, -0.1]), 0) is Signal.LONG

    @pytest.mark.parametrize('state', [-1, 5])
    def test_unknown_state(self, ranking, state):
        with pytest.raises(ValidationError):
            timing_signal(ranking, state)
