import collections
import logging
import math

import numpy as np
from scipy import signal

from pymagnomech.spectra import SweepGrid
from pymagnomech.spectra.SpectrumTable import sweep_spectrum


FEATURE_COLUMNS = ("absorption", "dispersion", "transmission")

# default prominence as a fraction of the column maximum
DEFAULT_PROMINENCE_FRACTION = 0.1

# centers and widths are in delta/omega_b
Window = collections.namedtuple("Window", "center width floor prominence")
Peak = collections.namedtuple("Peak", "center height width prominence")


class FeatureReport:
    def __init__(self, windows, peaks, column="absorption", prominence=None):
        self.windows = sorted(windows, key=lambda w: w.center)
        self.peaks = sorted(peaks, key=lambda p: p.center)
        self.column = column
        self.prominence = prominence

    @property
    def window_count(self):
        return len(self.windows)

    def as_dict(self):
        return dict(
            column=self.column,
            prominence=self.prominence,
            window_count=self.window_count,
            windows=[w._asdict() for w in self.windows],
            peaks=[p._asdict() for p in self.peaks],
        )

    def __repr__(self):
        return "<FeatureReport %s: %d windows, %d peaks>" % (
            self.column, self.window_count, len(self.peaks))


def _extrema(x, y, prominence):
    idx, props = signal.find_peaks(y, prominence=prominence)
    if len(idx) == 0:
        return idx, props["prominences"], np.zeros(0), np.zeros(0)
    _, _, left, right = signal.peak_widths(
        y, idx, rel_height=0.5,
        prominence_data=(props["prominences"], props["left_bases"], props["right_bases"]))
    samples = np.arange(len(x))
    return idx, props["prominences"], np.interp(left, samples, x), np.interp(right, samples, x)


def extract_features(table, prominence=None, column="absorption"):
    """
    Windows are local minima of the column, peaks are local maxima, both kept
    when their prominence exceeds the threshold. Widths are taken at half the
    prominence.
    """
    if column not in FEATURE_COLUMNS:
        raise ValueError("unknown feature column %r" % column)
    if len(table) == 0:
        return FeatureReport([], [], column, prominence)
    y = np.asarray(table[column], dtype=float)
    x = table.delta_over_omega_b()
    if prominence is None:
        top = float(np.nanmax(y))
        if not top > 0:
            return FeatureReport([], [], column, prominence)
        prominence = DEFAULT_PROMINENCE_FRACTION * top
    elif not prominence > 0:
        raise ValueError("prominence must be positive, got %r" % prominence)

    idx, prom, left, right = _extrema(x, -y, prominence)
    windows = [Window(float(x[i]), float(r - l), float(y[i]), float(p))
               for i, p, l, r in zip(idx, prom, left, right)]
    idx, prom, left, right = _extrema(x, y, prominence)
    peaks = [Peak(float(x[i]), float(y[i]), float(r - l), float(p))
             for i, p, l, r in zip(idx, prom, left, right)]
    report = FeatureReport(windows, peaks, column, prominence)
    logging.debug("%r at prominence %g", report, prominence)
    return report


def central_feature(report):
    """
    The window or peak whose center is nearest delta/omega_b = 1, or None.
    """
    features = list(report.windows) + list(report.peaks)
    if not features:
        return None
    return min(features, key=lambda f: abs(f.center - 1))


def window_width_vs_gm(config, gm_values, grid=None, prominence=None, workers=1):
    """
    Width (rad/s) of the central |t_p|^2 feature for each g_m. NaN when the
    transmission shows no feature at all.
    """
    grid = grid or SweepGrid.for_config(config)
    result = []
    for gm in gm_values:
        if gm < 0:
            raise ValueError("g_m must be nonnegative, got %g" % gm)
        table = sweep_spectrum(config.with_couplings(g_m=gm), grid, workers=workers)
        report = extract_features(table, prominence=prominence, column="transmission")
        feature = central_feature(report)
        width = math.nan if feature is None else feature.width * config.omega_b
        logging.info("g_m = %g rad/s: central transmission width %g rad/s", gm, width)
        result.append((gm, width))
    return result
