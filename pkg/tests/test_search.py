import numpy as np
import pandas as pd
import pytest

from neural.search import default_hyperparameters, holdout_errors, hyperparameter_search
from neural.samples import TrainingSet
from neural.swarm import SwarmConfig
from utils.errors import InsufficientDataError, ValidationError

FAST_SWARM = SwarmConfig(i_max=5, ps=6)
TRAIN = pd.bdate_range('2021-01-04', periods=7)
TEST = pd.bdate_range('2021-01-13', periods=7)


class CountingPrepare:
    """Random data of the requested width; counts how often each (k_select, k) is prepared."""

    def __init__(self):
        self.calls = []

    def __call__(self, k_select, k):
        self.calls.append((k_select, k))
        rng = np.random.default_rng(k_select * 10 + k)
        return (TrainingSet(rng.standard_normal((30, k)), rng.normal(0, 0.02, 30)),
                TrainingSet(rng.standard_normal((10, k)), rng.normal(0, 0.02, 10)))


def test_perfect_predictions():
    assert holdout_errors([0.01, -0.02], [0.01, -0.02]) == (0.0, 0.0)


def test_constant_error():
    rmse, mae = holdout_errors(np.full(12, 0.01), np.zeros(12))
    assert rmse == pytest.approx(0.01, abs=1e-15)
    assert mae == pytest.approx(0.01, abs=1e-15)


def test_error_inputs():
    with pytest.raises(ValidationError):
        holdout_errors([0.1, 0.2], [0.1])
    with pytest.raises(InsufficientDataError):
        holdout_errors([], [])


def test_single_point_grids_keep_defaults():
    defaults = default_hyperparameters()
    grids = {name: [value] for name, value in defaults.items()}
    result = hyperparameter_search(TRAIN, TEST, grids, CountingPrepare(), FAST_SWARM, seed=1)
    assert result.best == defaults
    assert result.shape.k == defaults['k']
    assert result.k_select == defaults['k_select']


def test_sweep_table_and_cache():
    prepare = CountingPrepare()
    grids = {'n': [2, 3], 'k': [2, 7], 'a': [0.1], 'k_select': [5, 6]}
    result = hyperparameter_search(TRAIN, TEST, grids, prepare, FAST_SWARM, seed=1,
                                   defaults={'n': 2, 'k': 2, 'a': 0.1, 'k_select': 6})
    table = result.table
    assert len(table) == 7
    assert list(table['param'].unique()) == ['n', 'k', 'a', 'k_select']
    # k=7 cannot come from 6 selected factors
    assert table.loc[(table['param'] == 'k') & (table['value'] == 7), 'rmse'].isna().all()
    assert len(prepare.calls) == len(set(prepare.calls))
    assert result.best['k'] == 2
    assert result.best['k'] <= result.best['k_select']


def test_best_value_is_sweep_argmin():
    grids = {'n': [2, 3, 4]}
    result = hyperparameter_search(TRAIN, TEST, grids, CountingPrepare(), FAST_SWARM, seed=2,
                                   defaults={'n': 2, 'k': 2, 'a': 0.1, 'k_select': 4})
    sweep = result.table[result.table['param'] == 'n']
    assert result.best['n'] == sweep.loc[sweep['rmse'].idxmin(), 'value']


@pytest.mark.parametrize('grids', [{}, {'n': []}, {'depth': [1]}])
def test_invalid_grids(grids):
    with pytest.raises(ValidationError):
        hyperparameter_search(TRAIN, TEST, grids, CountingPrepare(), FAST_SWARM, seed=0)


def test_overlapping_windows():
    with pytest.raises(ValidationError):
        hyperparameter_search(TRAIN, TRAIN[3:], {'n': [2]}, CountingPrepare(), FAST_SWARM, seed=0)
