"""
Time-domain check of the stationary solver.

The linearized, noise-free mean-value dynamics

    dx/dt = A x + v exp(i nu t),    v = (0, eps_p, 0, 0)

are integrated with fixed-step classical RK4 and the trailing part of the
trajectory is demodulated at the drive frequency nu. In the standard
convention the sideband at detuning lam is driven at nu = -lam; in the paper
convention at nu = +lam. Either way the demodulated vector is directly
comparable with solve_sidebands(config, lam).
"""

import dataclasses
import logging
import math

import numpy as np
from scipy import integrate as sp_integrate

from pymagnomech.SystemConfig import TWO_PI, CONVENTION_STANDARD
from pymagnomech.response import solve_sidebands

logging = logging.getLogger("timedomain")


DESK_KAPPA_B = TWO_PI * 1e5

STEPS_PER_FASTEST_SCALE = 50
DECAY_TIMES = 10.0
DEMOD_PERIODS = 20

CONVERGENCE_TOLERANCE = 1e-3
AGREEMENT_TOLERANCE = 1e-3
INSTABILITY_FACTOR = 1e6

# steps between instability checks
CHECK_EVERY = 1000


class IntegrationInstabilityError(RuntimeError):
    pass


def drift_matrix(config):
    """
    Damped orientation: diagonal -(kappa_o + i offset_o), couplings as in
    sideband_matrix. For the standard convention M(lam) = -i lam I - A.
    """
    ka, kc, km, kb = config.rates.as_tuple()
    ga, gc, gm = config.couplings.as_tuple()
    oa, oc, om = config.detuning_offsets.as_tuple()
    A = np.diag([-(ka + 1j * oa), -(kc + 1j * oc), -(km + 1j * om), -kb + 0j])
    A[0, 1] = A[1, 0] = -1j * ga
    A[1, 3] = A[3, 1] = 1j * gc
    A[2, 3] = A[3, 2] = -1j * gm
    return A


def anti_damped_drift_matrix(config):
    """
    drift_matrix with the sign of every decay rate flipped, the orientation
    of the printed stationary equations read as an ODE.
    """
    A = drift_matrix(config)
    return A - 2 * np.diag(np.diag(A).real)


def drive_vector(config):
    return np.array([0, config.probe_amplitude, 0, 0], dtype=complex)


def drive_frequency(config, lam):
    return -lam if config.sign_convention == CONVENTION_STANDARD else lam


def desk_scale(config, kappa_b=DESK_KAPPA_B):
    """
    Raise kappa_b so transients die out in a tractable number of steps.
    """
    if config.rates.kappa_b >= kappa_b:
        return config
    return config.with_rates(kappa_b=kappa_b)


@dataclasses.dataclass(frozen=True)
class IntegrationSpec:
    dt: float
    t_end: float
    demod_window: float
    initial_state: tuple = (0j, 0j, 0j, 0j)

    @classmethod
    def for_config(class_, config, lam):
        kappa_min = config.rates.minimum()
        fastest = max(abs(lam), config.fastest_rate())
        if lam != 0:
            window = DEMOD_PERIODS * TWO_PI / max(abs(lam), kappa_min)
        else:
            window = DEMOD_PERIODS / kappa_min
        return class_(
            dt=1.0 / (STEPS_PER_FASTEST_SCALE * fastest),
            t_end=DECAY_TIMES / kappa_min + 2 * window,
            demod_window=window,
        )

    def problems(self, config, lam):
        """
        Human-readable list of the ways these settings fall short for (config, lam).
        """
        kappa_min = config.rates.minimum()
        fastest = max(abs(lam), config.fastest_rate())
        result = []
        if self.dt > 1.0 / (STEPS_PER_FASTEST_SCALE * fastest) * (1 + 1e-12):
            result.append("dt = %g s does not resolve the fastest scale %g rad/s" % (self.dt, fastest))
        if self.t_end < (DECAY_TIMES / kappa_min + 2 * self.demod_window) * (1 - 1e-12):
            result.append("t_end = %g s leaves less than %g decay times before the last two windows" % (
                self.t_end, DECAY_TIMES))
        minimum_window = (DEMOD_PERIODS * TWO_PI / max(abs(lam), kappa_min) if lam != 0
                          else DEMOD_PERIODS / kappa_min)
        if self.demod_window < minimum_window * (1 - 1e-12):
            result.append("demodulation window %g s is shorter than %g s" % (self.demod_window, minimum_window))
        return result

    def steps(self):
        return int(math.ceil(self.t_end / self.dt - 1e-9))


class TimeSeries:
    def __init__(self, t, x, frequency):
        self.t = t
        self.x = x
        self.frequency = frequency

    def __len__(self):
        return len(self.t)

    def span(self):
        return self.t[-1] - self.t[0]

    def __repr__(self):
        return "<TimeSeries %d samples over %g s at %g rad/s>" % (len(self), self.span(), self.frequency)


def rk4_step(f, t, x, h):
    """
    Textbook RK4 stage form. integrate uses the equivalent matrix map from
    rk4_propagator; this is the reference that map is tested against.
    """
    k1 = f(t, x)
    k2 = f(t + h / 2, x + h / 2 * k1)
    k3 = f(t + h / 2, x + h / 2 * k2)
    k4 = f(t + h, x + h * k3)
    return x + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def rk4_propagator(A, h, nu):
    """
    Return (R, Q) with rk4_step on dx/dt = A x + v exp(i nu t) equal to
    x + = R x + Q v exp(i nu t).
    """
    eye = np.eye(len(A), dtype=complex)
    B = h * A
    z = np.exp(0.5j * nu * h)
    B2 = B.dot(B)
    R = eye + B + B2 / 2 + B2.dot(B) / 6 + B2.dot(B2) / 24
    k2 = B / 2 + z * eye
    k3 = (B / 2).dot(k2) + z * eye
    k4 = B.dot(k3) + z * z * eye
    Q = h / 6 * (eye + 2 * k2 + 2 * k3 + k4)
    return R, Q


def fast_forward(R, Q, u0, x0, n, w):
    """
    State after n steps of x -> R x + Q u0 w^k, k = 0..n-1, in closed form.
    """
    eye = np.eye(len(R), dtype=complex)
    with np.errstate(over="ignore", invalid="ignore"):
        Rn = np.linalg.matrix_power(R, n)
        wn = w ** n
        forced = (Rn - wn * eye).dot(np.linalg.solve(R - w * eye, Q.dot(u0)))
        return Rn.dot(x0) + forced


def _instability(config, x, v):
    limit = INSTABILITY_FACTOR * np.linalg.norm(v) / config.rates.minimum()
    norm = np.linalg.norm(x)
    if not np.isfinite(norm) or (limit > 0 and norm > limit) or (limit == 0 and norm > 0):
        return norm, limit
    return None


def integrate(config, lam, spec, drift=None, skip_transient=False):
    """
    RK4 trajectory of dx/dt = A x + v exp(i nu t). With skip_transient the
    steps before the last two demodulation windows are taken in one
    closed-form jump (the same RK4 map applied repeatedly) and only those
    windows are returned.
    """
    if not spec.dt > 0 or not spec.t_end > 0:
        raise ValueError("dt and t_end must be positive")
    for problem in spec.problems(config, lam):
        logging.warning("integration spec: %s", problem)
    A = drift_matrix(config) if drift is None else np.asarray(drift, dtype=complex)
    v = drive_vector(config)
    nu = drive_frequency(config, lam)
    h = spec.dt
    n_total = spec.steps()
    R, Q = rk4_propagator(A, h, nu)
    x = np.array(spec.initial_state, dtype=complex)

    first = 0
    if skip_transient:
        first = max(0, n_total - 2 * int(math.ceil(spec.demod_window / h)) - 2)
        if first > 0:
            x = fast_forward(R, Q, v, x, first, np.exp(1j * nu * h))
            bad = _instability(config, x, v)
            if bad:
                raise IntegrationInstabilityError(
                    "state norm %g exceeds %g after %d steps; is the drift anti-damped?" % (bad[0], bad[1], first))
            logging.debug("jumped %d steps to t = %g s", first, first * h)

    count = n_total - first
    t = h * np.arange(first, n_total + 1)
    qv = Q.dot(v)
    drive = np.exp(1j * nu * t[:-1])
    xs = np.empty((count + 1, len(x)), dtype=complex)
    xs[0] = x
    for n in range(count):
        x = R.dot(x) + qv * drive[n]
        xs[n + 1] = x
        if (n + 1) % CHECK_EVERY == 0 or n + 1 == count:
            bad = _instability(config, x, v)
            if bad:
                raise IntegrationInstabilityError(
                    "state norm %g exceeds %g at t = %g s; is the drift anti-damped?" % (
                        bad[0], bad[1], t[n + 1]))
    logging.debug("integrated %d RK4 steps of %g s at nu = %g rad/s", count, h, nu)
    return TimeSeries(t, xs, nu)


def demodulate(series, frequency, window):
    """
    (1/T) * integral of x(t) exp(-i frequency t) over the trailing window,
    trapezoidal rule.
    """
    if window > series.span() * (1 + 1e-9):
        raise ValueError("demodulation window %g s exceeds the series span %g s" % (window, series.span()))
    start = int(np.searchsorted(series.t, series.t[-1] - window * (1 + 1e-12)))
    start = min(start, len(series) - 2)
    t = series.t[start:]
    y = series.x[start:] * np.exp(-1j * frequency * t)[:, np.newaxis]
    return sp_integrate.trapezoid(y, t, axis=0) / (t[-1] - t[0])


def transient_estimate(series, frequency, window):
    """
    Relative change of the demodulated vector between the last two windows.
    """
    late = demodulate(series, frequency, window)
    end = np.searchsorted(series.t, series.t[-1] - window * (1 - 1e-9), side="right")
    earlier = TimeSeries(series.t[:end], series.x[:end], series.frequency)
    early = demodulate(earlier, frequency, window)
    scale = np.linalg.norm(late)
    if scale == 0:
        return 0.0 if np.linalg.norm(early - late) == 0 else math.inf
    return float(np.linalg.norm(early - late) / scale)


@dataclasses.dataclass
class OracleResult:
    lam: float
    amplitudes: np.ndarray
    expected: np.ndarray
    transient: float
    relative_error: float
    steady_state_residual: float
    steps: int
    tolerance: float = AGREEMENT_TOLERANCE

    @property
    def converged(self):
        return self.transient < CONVERGENCE_TOLERANCE

    @property
    def agrees(self):
        return self.converged and self.relative_error <= self.tolerance

    def as_dict(self):
        return dict(
            lam=self.lam, converged=self.converged, agrees=self.agrees,
            transient=self.transient, relative_error=self.relative_error,
            steady_state_residual=self.steady_state_residual, steps=self.steps,
            tolerance=self.tolerance,
        )


def cross_check(config, lambdas, spec=None, drift=None, tolerance=AGREEMENT_TOLERANCE):
    """
    Integrate and demodulate at each lam and compare with solve_sidebands.
    spec=None picks IntegrationSpec.for_config per point.
    """
    results = []
    for lam in lambdas:
        lam = float(lam)
        point_spec = spec or IntegrationSpec.for_config(config, lam)
        series = integrate(config, lam, point_spec, drift=drift, skip_transient=True)
        x = demodulate(series, series.frequency, point_spec.demod_window)
        expected = solve_sidebands(config, lam).as_array()
        A = drift_matrix(config) if drift is None else drift
        v = drive_vector(config)
        residual = (1j * series.frequency * np.eye(4) - A).dot(x) - v
        scale = np.linalg.norm(expected)
        result = OracleResult(
            lam=lam,
            amplitudes=x,
            expected=expected,
            transient=transient_estimate(series, series.frequency, point_spec.demod_window),
            relative_error=float(np.linalg.norm(x - expected) / scale) if scale else float(np.linalg.norm(x)),
            steady_state_residual=float(np.linalg.norm(residual) / np.linalg.norm(v)) if np.linalg.norm(v) else 0.0,
            steps=point_spec.steps(),
            tolerance=tolerance,
        )
        if result.agrees:
            logging.info("oracle lam = %g: relative error %.3g, transient %.3g", lam,
                         result.relative_error, result.transient)
        else:
            logging.warning("oracle lam = %g disagrees: relative error %.3g, transient %.3g", lam,
                            result.relative_error, result.transient)
        results.append(result)
    return results
