import numpy as np
import pytest

from pymagnomech.spectra import SweepGrid

from tests.helper import make_config


def test_uniform():
    config = make_config()
    grid = SweepGrid.uniform(config.omega_b, 5, 0.5)
    assert len(grid) == 5
    assert list(grid.delta_over_omega_b()) == pytest.approx([0.5, 0.75, 1.0, 1.25, 1.5], rel=1e-15)
    assert np.array_equal(grid.lambda_values, -grid.lambda_values[::-1])
    assert grid.refinement == SweepGrid.UNIFORM


def test_uniform_even_count_is_symmetric():
    grid = SweepGrid.uniform(1e8, 2000)
    assert np.array_equal(grid.lambda_values, -grid.lambda_values[::-1])
    assert 0.0 not in grid.lambda_values


def test_uniform_too_small():
    with pytest.raises(ValueError):
        SweepGrid.uniform(1e8, 1)


def test_center_refined_too_small():
    config = make_config()
    for n in (0, 1):
        with pytest.raises(ValueError):
            SweepGrid.center_refined(config.omega_b, config.rates.kappa_b, n=n)
        with pytest.raises(ValueError):
            SweepGrid.for_config(config, n=n)


def test_center_refined():
    config = make_config()
    kb = config.rates.kappa_b
    grid = SweepGrid.for_config(config)
    lam = grid.lambda_values
    assert np.array_equal(lam, -lam[::-1])
    assert 0.0 in lam
    assert grid.min_center_spacing() <= kb / 5 * (1 + 1e-12)
    assert np.all(np.diff(lam) > 0)
    assert lam[-1] == pytest.approx(0.5 * config.omega_b, rel=1e-15)
    near = np.abs(lam) <= 5 * kb * (1 + 1e-9)
    assert np.count_nonzero(near) >= 51
    # coarse points outside the refined band are the uniform ones
    uniform = SweepGrid.uniform(config.omega_b)
    far = np.abs(uniform.lambda_values) > 1e3 * kb * 1.1
    assert set(uniform.lambda_values[far]) <= set(lam)


def test_center_refined_rejects_bad_growth():
    with pytest.raises(ValueError):
        SweepGrid.center_refined(1e8, 100.0, growth=1.0)


def test_doubled():
    config = make_config()
    for grid in (SweepGrid.uniform(config.omega_b, 101), SweepGrid.for_config(config, n=101)):
        fine = grid.doubled()
        assert fine.refinement == grid.refinement
        assert len(fine) > 1.9 * len(grid)
        assert fine.min_center_spacing() < grid.min_center_spacing()
        assert np.array_equal(fine.lambda_values, -fine.lambda_values[::-1])


def test_explicit_grid():
    grid = SweepGrid.from_deltas(10.0, [9.0, 10.0, 12.0])
    assert list(grid.lambda_values) == [-1.0, 0.0, 2.0]
    assert list(grid.delta_values) == [9.0, 10.0, 12.0]
    fine = grid.doubled()
    assert list(fine.delta_values) == [9.0, 9.5, 10.0, 11.0, 12.0]
    d = grid.as_dict()
    assert d["refinement"] == SweepGrid.EXPLICIT
    assert d["points"] == 3
    assert d["delta_over_omega_b"] == [0.9, 1.0, 1.2]


def test_grid_rejects_bad_values():
    with pytest.raises(ValueError):
        SweepGrid.SweepGrid(1.0, [])
    with pytest.raises(ValueError):
        SweepGrid.SweepGrid(1.0, [0.0, np.nan])
    with pytest.raises(ValueError):
        SweepGrid.SweepGrid(1.0, [1.0, 0.0])
    with pytest.raises(ValueError):
        SweepGrid.SweepGrid(1.0, [0.0, 0.0])


def test_as_dict_records_parameters():
    config = make_config()
    d = SweepGrid.for_config(config, n=11).as_dict()
    assert d["refinement"] == SweepGrid.CENTER_REFINED
    assert d["n"] == 11
    assert d["kappa_b"] == config.rates.kappa_b
    assert "delta_over_omega_b" not in d
