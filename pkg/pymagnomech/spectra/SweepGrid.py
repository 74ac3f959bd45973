import math

import numpy as np


UNIFORM = "uniform"
CENTER_REFINED = "center_refined"
EXPLICIT = "explicit"

DEFAULT_POINTS = 2001
DEFAULT_HALF_WIDTH = 0.5


class SweepGrid:
    """
    An ordered set of probe detunings. The detuning lam = delta - omega_b is
    the stored coordinate so that grids built here are exactly symmetric
    about delta = omega_b; delta_values is derived from it.
    """
    def __init__(self, omega_b, lambda_values, refinement=EXPLICIT, parameters=None):
        lam = np.asarray(lambda_values, dtype=float)
        if lam.ndim != 1 or len(lam) == 0:
            raise ValueError("grid needs a non-empty 1-d sequence of detunings")
        if not np.all(np.isfinite(lam)):
            raise ValueError("grid contains non-finite detunings")
        if np.any(np.diff(lam) <= 0):
            raise ValueError("grid detunings must be strictly increasing")
        self.omega_b = omega_b
        self.lambda_values = lam
        self.refinement = refinement
        self.parameters = dict(parameters or {})

    @property
    def delta_values(self):
        return self.omega_b + self.lambda_values

    def delta_over_omega_b(self):
        return self.delta_values / self.omega_b

    def __len__(self):
        return len(self.lambda_values)

    def min_center_spacing(self):
        """
        Spacing between the two points straddling (or next to) lam = 0.
        """
        lam = self.lambda_values
        idx = int(np.argmin(np.abs(lam)))
        gaps = np.diff(lam)
        if len(gaps) == 0:
            return math.inf
        return float(min(gaps[max(idx - 1, 0)], gaps[min(idx, len(gaps) - 1)]))

    def doubled(self):
        """
        The same kind of grid at twice the density.
        """
        p = self.parameters
        if self.refinement == UNIFORM:
            return uniform(self.omega_b, n=2 * p["n"] - 1, half_width=p["half_width"])
        if self.refinement == CENTER_REFINED:
            return center_refined(
                self.omega_b, p["kappa_b"], n=2 * p["n"] - 1, half_width=p["half_width"],
                core_step=p["core_step"] / 2, core_extent=p["core_extent"],
                growth=math.sqrt(p["growth"]), refine_extent=p["refine_extent"])
        lam = self.lambda_values
        mids = (lam[1:] + lam[:-1]) / 2
        merged = np.empty(2 * len(lam) - 1)
        merged[0::2] = lam
        merged[1::2] = mids
        return SweepGrid(self.omega_b, merged, EXPLICIT)

    def as_dict(self):
        d = dict(refinement=self.refinement, points=len(self))
        d.update(self.parameters)
        if self.refinement == EXPLICIT:
            d["delta_over_omega_b"] = [float(v) for v in self.delta_over_omega_b()]
        return d

    def __repr__(self):
        return "<SweepGrid %s with %d points>" % (self.refinement, len(self))


def _check_points(n):
    if n < 2:
        raise ValueError("uniform grid needs at least 2 points, got %d" % n)


def _uniform_positive(omega_b, n, half_width):
    hw = half_width * omega_b
    k = np.arange(n)
    lam = hw * (2 * k + 1 - n) / (n - 1)
    return lam[lam > 0]


def uniform(omega_b, n=DEFAULT_POINTS, half_width=DEFAULT_HALF_WIDTH):
    """
    n points over delta/omega_b in [1 - half_width, 1 + half_width], mirror
    symmetric in lam bit for bit.
    """
    _check_points(n)
    hw = half_width * omega_b
    k = np.arange(n)
    lam = hw * (2 * k + 1 - n) / (n - 1)
    return SweepGrid(omega_b, lam, UNIFORM, dict(n=n, half_width=half_width))


def center_refined(omega_b, kappa_b, n=DEFAULT_POINTS, half_width=DEFAULT_HALF_WIDTH,
                   core_step=0.2, core_extent=5.0, growth=1.05, refine_extent=1e3):
    """
    Uniform grid plus a refinement around lam = 0: spacing core_step*kappa_b
    out to core_extent*kappa_b, then spacing growing geometrically by growth
    until refine_extent*kappa_b. Steps are multiples of kappa_b.
    """
    if growth <= 1:
        raise ValueError("growth must exceed 1, got %g" % growth)
    _check_points(n)
    step = core_step * kappa_b
    points = []
    pos = 0.0
    while pos + step <= core_extent * kappa_b * (1 + 1e-12):
        pos += step
        points.append(pos)
    limit = refine_extent * kappa_b
    while pos < limit:
        step *= growth
        pos += step
        points.append(pos)
    refined = np.array(points)
    coarse = _uniform_positive(omega_b, n, half_width)
    pos = np.concatenate([refined[refined <= half_width * omega_b], coarse[coarse > refined[-1]]])
    lam = np.concatenate([-pos[::-1], [0.0], pos])
    return SweepGrid(omega_b, lam, CENTER_REFINED, dict(
        n=n, half_width=half_width, kappa_b=kappa_b, core_step=core_step,
        core_extent=core_extent, growth=growth, refine_extent=refine_extent))


def for_config(config, n=DEFAULT_POINTS, half_width=DEFAULT_HALF_WIDTH):
    return center_refined(config.omega_b, config.rates.kappa_b, n=n, half_width=half_width)


def from_deltas(omega_b, delta_values):
    return SweepGrid(omega_b, np.asarray(delta_values, dtype=float) - omega_b, EXPLICIT)
