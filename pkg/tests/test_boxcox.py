import numpy as np
import pandas as pd
import pytest

from regime.boxcox import BoxCoxTransform, best_lambda, boxcox_apply, boxcox_fit, boxcox_invert, boxcox_raw
from utils.errors import DomainError, InsufficientDataError


class TestRawTransform:
    def test_lambda_one_is_affine(self):
        x = np.array([0.5, 2.0, 7.0])
        np.testing.assert_allclose(boxcox_raw(x, 1.0), x - 1.0, atol=1e-15)

    def test_lambda_zero_is_log(self):
        assert boxcox_raw(np.e, 0.0) == pytest.approx(1.0, abs=1e-15)

    def test_square_root_case(self):
        assert boxcox_raw(4.0, 0.5) == pytest.approx(2.0, abs=1e-15)


def test_lognormal_data_prefers_log(rng):
    x = rng.lognormal(mean=0.0, sigma=0.8, size=5000)
    assert -0.15 <= best_lambda(x) <= 0.15


def test_fit_standardizes_every_column(rng):
    rows = np.column_stack([rng.lognormal(0, 0.5, 300), rng.normal(0, 1, 300), rng.gamma(2.0, 1.0, 300)])
    transform = boxcox_fit(rows)
    z = boxcox_apply(transform, rows)
    np.testing.assert_allclose(z.mean(axis=0), 0.0, atol=1e-8)
    np.testing.assert_allclose(z.std(axis=0), 1.0, atol=1e-8)
    # The normal column contains negatives and needs a shift
    assert transform.shifts[1] > 0
    assert transform.shifts[0] == 0


def test_round_trip(rng):
    rows = np.column_stack([rng.lognormal(0, 0.4, 200), rng.uniform(1, 5, 200)])
    transform = boxcox_fit(rows)
    restored = boxcox_invert(transform, boxcox_apply(transform, rows))
    np.testing.assert_allclose(restored, rows, rtol=1e-8, atol=1e-8)


def test_constant_column_passes_through(rng):
    rows = np.column_stack([rng.lognormal(0, 0.5, 50), np.full(50, 3.0)])
    transform = boxcox_fit(rows)
    assert transform.identity.tolist() == [False, True]
    np.testing.assert_array_equal(boxcox_apply(transform, rows)[:, 1], 3.0)


def test_frames_keep_labels(rng):
    frame = pd.DataFrame({'tv': rng.lognormal(0, 0.5, 40), 'dlr': rng.normal(0, 0.01, 40)},
                         index=pd.bdate_range('2021-01-04', periods=40))
    transform = boxcox_fit(frame)
    out = boxcox_apply(transform, frame)
    assert isinstance(out, pd.DataFrame)
    assert out.index.equals(frame.index)
    assert transform.columns == ('tv', 'dlr')


def test_out_of_domain_values(rng):
    rows = rng.lognormal(0, 0.5, (30, 1))
    transform = boxcox_fit(rows)
    below = np.array([[-1.0]])
    with pytest.raises(DomainError):
        boxcox_apply(transform, below)
    assert np.isfinite(boxcox_apply(transform, below, clip=True)).all()


def test_too_few_rows(rng):
    with pytest.raises(InsufficientDataError):
        boxcox_fit(rng.lognormal(0, 1, (19, 2)))


def test_dict_round_trip(rng):
    transform = boxcox_fit(rng.lognormal(0, 0.5, (25, 2)))
    restored = BoxCoxTransform.from_dict(transform.to_dict())
    for name in ('lambdas', 'shifts', 'means', 'stds', 'identity'):
        np.testing.assert_array_equal(getattr(restored, name), getattr(transform, name))
