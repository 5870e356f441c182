import numpy as np
import pandas as pd
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from factors.pca import PCAModel, pca_fit, pca_inverse, pca_transform
from utils.errors import DimensionError, InsufficientDataError


def test_axis_aligned_variances():
    rows = np.array([[2.0, 0.0], [-2.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
    model = pca_fit(rows, k_out=2)
    np.testing.assert_allclose(model.explained_ratio, [0.8, 0.2], atol=1e-6)
    np.testing.assert_allclose(model.components[0], [1.0, 0.0], atol=1e-12)


@pytest.mark.parametrize('seed', range(10))
def test_components_orthonormal(seed):
    rng = np.random.default_rng(seed)
    rows = rng.standard_normal((60, 6)) @ rng.standard_normal((6, 6))
    model = pca_fit(rows, k_out=4)
    np.testing.assert_allclose(model.components @ model.components.T, np.eye(4), atol=1e-8)
    assert np.all(np.diff(model.explained_ratio) <= 1e-12)
    for row in model.components:
        assert row[np.argmax(np.abs(row))] > 0


def test_full_rank_reconstruction(rng):
    rows = rng.standard_normal((40, 5))
    model = pca_fit(rows, k_out=5)
    np.testing.assert_allclose(pca_inverse(model, pca_transform(model, rows)), rows, atol=1e-8)
    assert model.explained_ratio.sum() == pytest.approx(1.0)


def test_duplicated_feature_has_zero_ratio(rng):
    base = rng.standard_normal(50)
    model = pca_fit(np.column_stack([base, base]), k_out=2)
    assert model.explained_ratio[1] == pytest.approx(0.0, abs=1e-10)


def test_mean_maps_to_origin_and_axis_to_unit(rng):
    model = pca_fit(rng.standard_normal((30, 4)), k_out=3)
    np.testing.assert_allclose(pca_transform(model, model.mean), 0.0, atol=1e-12)
    np.testing.assert_allclose(pca_transform(model, model.mean + model.components[0]), [1.0, 0.0, 0.0], atol=1e-10)


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 32 - 1))
def test_projection_never_lengthens(seed):
    rng = np.random.default_rng(seed)
    model = pca_fit(rng.standard_normal((25, 5)), k_out=2)
    row = rng.standard_normal(5) * 3
    assert np.linalg.norm(pca_transform(model, row)) <= np.linalg.norm(row - model.mean) + 1e-10


def test_dataframe_keeps_factor_names(rng):
    frame = pd.DataFrame(rng.standard_normal((20, 3)), columns=['RVI', 'OBV', 'PE'])
    model = pca_fit(frame, k_out=2)
    assert model.factor_names == ('RVI', 'OBV', 'PE')
    restored = PCAModel.from_dict(model.to_dict())
    np.testing.assert_array_equal(restored.components, model.components)
    assert restored.factor_names == model.factor_names


def test_errors(rng):
    rows = rng.standard_normal((10, 3))
    with pytest.raises(DimensionError):
        pca_fit(rows, k_out=4)
    with pytest.raises(DimensionError):
        pca_fit(rows, k_out=0)
    with pytest.raises(InsufficientDataError):
        pca_fit(rows[:2], k_out=2)
    model = pca_fit(rows, k_out=2)
    with pytest.raises(DimensionError):
        pca_transform(model, np.zeros(4))
    with pytest.raises(DimensionError):
        pca_inverse(model, np.zeros(3))
