import functools
import logging
import time

import numpy as np

from pymagnomech.response import probe_spectrum
from pymagnomech.spectra.SpectrumTable import evaluate_chunks


class DelaySurface:
    """
    tau[i, j] is the eq8 group delay (s) at eta_values[i] = g_m/g_c and
    grid.delta_values[j]. Undefined delays are NaN and ignored by the
    extremes.
    """
    def __init__(self, config, eta_values, grid, tau):
        self.config = config
        self.eta_values = np.asarray(eta_values, dtype=float)
        self.grid = grid
        self.tau = np.asarray(tau, dtype=float)
        if self.tau.shape != (len(self.eta_values), len(grid)):
            raise ValueError("tau shape %s does not match %d x %d lattice" % (
                self.tau.shape, len(self.eta_values), len(grid)))

    @property
    def delta_values(self):
        return self.grid.delta_values

    def _cell(self, flat_index):
        i, j = np.unravel_index(flat_index, self.tau.shape)
        return int(i), int(j)

    def argmax(self):
        return self._cell(np.nanargmax(self.tau))

    def argmin(self):
        return self._cell(np.nanargmin(self.tau))

    def max_tau(self):
        return float(np.nanmax(self.tau))

    def min_tau(self):
        return float(np.nanmin(self.tau))

    def max_abs_tau(self):
        return float(np.nanmax(np.abs(self.tau)))

    def cell(self, i, j):
        return dict(
            eta=float(self.eta_values[i]),
            delta_over_omega_b=float(self.grid.delta_over_omega_b()[j]),
            tau_s=float(self.tau[i, j]),
        )

    def per_eta_extremes(self):
        """
        (eta, min tau, max tau) for every row: how far the magnon-phonon
        coupling tunes the delay.
        """
        return [(float(eta), float(np.nanmin(row)), float(np.nanmax(row)))
                for eta, row in zip(self.eta_values, self.tau)]

    def summary(self):
        i_max, j_max = self.argmax()
        i_min, j_min = self.argmin()
        return dict(
            max_tau_s=self.max_tau(),
            argmax=self.cell(i_max, j_max),
            min_tau_s=self.min_tau(),
            argmin=self.cell(i_min, j_min),
            max_abs_tau_s=self.max_abs_tau(),
            eta_points=len(self.eta_values),
            delta_points=len(self.grid),
        )

    def __repr__(self):
        return "<DelaySurface %d x %d>" % self.tau.shape


def _delay_rows(config, lambda_values, etas):
    return [probe_spectrum(config.with_couplings(g_m=eta * config.couplings.g_c), lambda_values)["tau_eq8"]
            for eta in etas]


def delay_surface(config, eta_grid, delta_grid, workers=1):
    """
    eq8 delay on the eta x delta lattice, with g_m = eta * g_c.
    """
    if not config.couplings.g_c > 0:
        raise ValueError("delay surface needs g_c > 0 (g_m is scaled from it)")
    etas = np.asarray(eta_grid, dtype=float)
    if etas.ndim != 1 or len(etas) == 0 or np.any(etas < 0) or not np.all(np.isfinite(etas)):
        raise ValueError("eta grid must be a non-empty list of finite nonnegative values")
    start = time.time()
    step = max(1, len(etas) // max(workers, 1))
    chunks = [etas[i:i + step] for i in range(0, len(etas), step)]
    rows = evaluate_chunks(
        functools.partial(_delay_rows, config, delta_grid.lambda_values), chunks, workers)
    tau = np.array([row for chunk in rows for row in chunk])
    surface = DelaySurface(config, etas, delta_grid, tau)
    logging.info("delay surface %d x %d in %.3f s", len(etas), len(delta_grid), time.time() - start)
    return surface
