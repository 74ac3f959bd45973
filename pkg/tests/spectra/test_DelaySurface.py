import numpy as np
import pytest

from pymagnomech.helpers.presets import preset_config
from pymagnomech.response import group_delay
from pymagnomech.spectra import SweepGrid
from pymagnomech.spectra.DelaySurface import DelaySurface, delay_surface


def small_surface(workers=1, convention=None):
    config = preset_config("fig6", convention)
    grid = SweepGrid.uniform(config.omega_b, 201)
    return delay_surface(config, [0.0, 0.5, 1.0, 2.0], grid, workers=workers)


def test_surface_shape():
    surface = small_surface()
    assert surface.tau.shape == (4, 201)
    assert np.array_equal(surface.delta_values, surface.grid.delta_values)


def test_surface_matches_group_delay():
    surface = small_surface()
    config = surface.config
    for i, j in ((0, 100), (1, 40), (2, 150), (3, 7)):
        eta = surface.eta_values[i]
        c = config.with_couplings(g_m=eta * config.couplings.g_c)
        assert surface.tau[i, j] == pytest.approx(group_delay(c, surface.delta_values[j]), rel=1e-9, abs=1e-20)


def test_negative_delay_at_resonance():
    surface = small_surface()
    config = surface.config
    k = config.rates
    g = config.couplings
    # at delta = omega_b without magnons, tau = -(g_a^2/kappa_a^2 + g_c^2/kappa_b^2 - 1) / D(0)
    d = k.kappa_c + g.g_a ** 2 / k.kappa_a + g.g_c ** 2 / k.kappa_b
    expected = -(g.g_a ** 2 / k.kappa_a ** 2 + g.g_c ** 2 / k.kappa_b ** 2 - 1) / d
    assert surface.tau[0, 100] == pytest.approx(expected, rel=1e-9)
    assert surface.tau[0, 100] == pytest.approx(-1.59e-3, rel=1e-2)
    assert surface.min_tau() < 0
    assert surface.min_tau() <= surface.tau[0, 100]


def test_summary():
    surface = small_surface()
    summary = surface.summary()
    assert summary["min_tau_s"] == surface.min_tau()
    assert summary["max_tau_s"] == surface.max_tau()
    assert summary["max_abs_tau_s"] == max(abs(surface.min_tau()), abs(surface.max_tau()))
    i, j = surface.argmin()
    assert summary["argmin"] == surface.cell(i, j)
    assert summary["argmin"]["tau_s"] == surface.min_tau()
    assert summary["eta_points"] == 4 and summary["delta_points"] == 201
    extremes = surface.per_eta_extremes()
    assert [e for e, _, _ in extremes] == [0.0, 0.5, 1.0, 2.0]
    assert min(lo for _, lo, _ in extremes) == surface.min_tau()


def test_workers_do_not_change_the_surface():
    assert np.array_equal(small_surface().tau, small_surface(workers=3).tau, equal_nan=True)


def test_paper_convention_mirrors_surface():
    standard = small_surface()
    paper = small_surface(convention="paper")
    np.testing.assert_allclose(paper.tau, standard.tau[:, ::-1], rtol=1e-12)


def test_bad_inputs():
    config = preset_config("fig6")
    grid = SweepGrid.uniform(config.omega_b, 11)
    with pytest.raises(ValueError):
        delay_surface(config.with_couplings(g_c=0.0), [0.0], grid)
    for etas in ([], [-1.0], [np.nan], [[0.0]]):
        with pytest.raises(ValueError):
            delay_surface(config, etas, grid)
    with pytest.raises(ValueError):
        DelaySurface(config, [0.0, 1.0], grid, np.zeros((2, 10)))
