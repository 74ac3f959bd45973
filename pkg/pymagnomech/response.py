"""
Steady-state probe response of the four-mode chain.

Unknowns are ordered (a, c, m, b). In the "standard" convention the stationary
system at probe detuning lam = delta - omega_b reads

    (kappa_a - i lam_a) a + i g_a c                 = 0
    i g_a a + (kappa_c - i lam_c) c - i g_c b       = eps_p
    (kappa_m - i lam_m) m + i g_m b                 = 0
    -i g_c c + i g_m m + (kappa_b - i lam) b        = 0

with lam_o = lam - offset_o. The "paper" convention is the printed form:
every entry negated and the detuning axis reversed, so its solution at lam is
the standard solution at -lam.

Group delays are derivatives with respect to the physical probe frequency,
in seconds.
"""

import dataclasses
import logging

import numpy as np

from pymagnomech.SystemConfig import CONVENTION_STANDARD


UNDEFINED_DELAY_MAGNITUDE = 1e-30

# probe_response rejects solver/closed-form disagreement above this
CLOSED_FORM_RTOL = 1e-6

RESIDUAL_RTOL = 1e-12

DELAY_MODES = ("eq8", "phase_tp")


class SingularSystemError(ArithmeticError):
    pass


class UndefinedDelayError(ArithmeticError):
    pass


class ResponseMismatchError(ArithmeticError):
    pass


@dataclasses.dataclass(frozen=True)
class SidebandAmplitudes:
    a_plus: complex
    c_plus: complex
    m_plus: complex
    b_plus: complex

    def as_array(self):
        return np.array([self.a_plus, self.c_plus, self.m_plus, self.b_plus], dtype=complex)

    @classmethod
    def from_array(class_, x):
        return class_(*(complex(v) for v in x))


@dataclasses.dataclass(frozen=True)
class ProbeResponse:
    delta: float
    lam: float
    eps_out: complex
    t_p: complex
    absorption: float
    dispersion: float
    transmission: float
    phase: float


def convention_sign(config):
    return 1.0 if config.sign_convention == CONVENTION_STANDARD else -1.0


def _check_finite(lam):
    lam = np.asarray(lam, dtype=float)
    if not np.all(np.isfinite(lam)):
        raise ValueError("non-finite detuning %r" % (lam,))
    return lam


def sideband_matrix(config, lam):
    """
    Return (M, v) with M x = v. lam may be a scalar or an array, in which
    case M has shape lam.shape + (4, 4).
    """
    lam = _check_finite(lam)
    s = convention_sign(config)
    lam_std = s * lam
    ka, kc, km, kb = config.rates.as_tuple()
    ga, gc, gm = config.couplings.as_tuple()
    oa, oc, om = config.detuning_offsets.as_tuple()

    M = np.zeros(lam.shape + (4, 4), dtype=complex)
    M[..., 0, 0] = ka - 1j * (lam_std - oa)
    M[..., 1, 1] = kc - 1j * (lam_std - oc)
    M[..., 2, 2] = km - 1j * (lam_std - om)
    M[..., 3, 3] = kb - 1j * lam_std
    M[..., 0, 1] = M[..., 1, 0] = 1j * ga
    M[..., 1, 3] = M[..., 3, 1] = -1j * gc
    M[..., 2, 3] = M[..., 3, 2] = 1j * gm
    v = np.array([0, config.probe_amplitude, 0, 0], dtype=complex)
    if s < 0:
        M = -M
        v = -v
    return M, v


def _solve(M, rhs):
    try:
        return np.linalg.solve(M, rhs)
    except np.linalg.LinAlgError as ex:
        raise SingularSystemError("sideband system is singular (%s); is a decay rate zero?" % ex)


def _batched_solve(M, v):
    rhs = np.broadcast_to(v, M.shape[:-1])[..., np.newaxis]
    return _solve(M, rhs)[..., 0]


def solve_sidebands(config, lam):
    M, v = sideband_matrix(config, lam)
    x = _solve(M, v)
    residual = np.linalg.norm(M.dot(x) - v)
    scale = np.linalg.norm(v)
    if residual > RESIDUAL_RTOL * scale:
        logging.warning("sideband residual %g exceeds %g at lambda=%g", residual, RESIDUAL_RTOL * scale, lam)
    return SidebandAmplitudes.from_array(x)


def _denominator(config, lam_std):
    """
    The continued fraction D with c_plus = eps_p / D, and dD/dlam, both in the
    standard orientation.
    """
    ka, kc, km, kb = config.rates.as_tuple()
    ga, gc, gm = config.couplings.as_tuple()
    da = ka - 1j * lam_std
    dm = km - 1j * lam_std
    db = (kb - 1j * lam_std) + gm ** 2 / dm
    d = (kc - 1j * lam_std) + ga ** 2 / da + gc ** 2 / db
    ddb = -1j + 1j * gm ** 2 / dm ** 2
    dd = -1j + 1j * ga ** 2 / da ** 2 - gc ** 2 * ddb / db ** 2
    return d, dd


def c_plus_closed_form(config, lam):
    if not config.detuning_offsets.is_zero():
        raise ValueError("closed form needs zero detuning offsets; use solve_sidebands")
    lam = _check_finite(lam)
    d, _ = _denominator(config, convention_sign(config) * lam)
    return config.probe_amplitude / d


def epsilon_out(config, c_plus):
    return 2 * config.rates.kappa_c * c_plus / config.probe_amplitude


def _wrap_phase(phase):
    # Arg into (-pi, pi]
    return np.where(phase == -np.pi, np.pi, phase)


def transmission(eps_out):
    t_p = 1 - eps_out
    T = np.abs(t_p) ** 2
    phase = _wrap_phase(np.angle(t_p))
    if np.ndim(eps_out) == 0:
        return complex(t_p), float(T), float(phase)
    return t_p, T, phase


def _log_derivatives(config, lam, M=None, x=None):
    """
    d(ln eps_out)/d(omega_p) and d(ln t_p)/d(omega_p), plus eps_out and t_p.
    Closed form with its chain-rule derivative when offsets are zero,
    otherwise the linear solve differentiated through dM/dlam = -i.
    """
    s = convention_sign(config)
    kc = config.rates.kappa_c
    if config.detuning_offsets.is_zero():
        d, dd = _denominator(config, s * lam)
        d, dd = np.asarray(d, dtype=complex), np.asarray(dd, dtype=complex)
        eps = 2 * kc / d
        t = 1 - eps
        with np.errstate(divide="ignore", invalid="ignore"):
            dln_eps = -dd / d
            dln_t = 2 * kc * dd / (d * (d - 2 * kc))
        return eps, t, dln_eps, dln_t
    if M is None:
        M, v = sideband_matrix(config, lam)
        x = _batched_solve(M, v)
    dx = _solve(M, (1j * s * x)[..., np.newaxis])[..., 0]
    c = x[..., 1]
    dc = dx[..., 1]
    eps = 2 * kc * c / config.probe_amplitude
    t = 1 - eps
    deps = 2 * kc * dc / config.probe_amplitude
    with np.errstate(divide="ignore", invalid="ignore"):
        dln_eps = dc / c
        dln_t = -deps / t
    return eps, t, dln_eps, dln_t


def group_delay(config, delta, mode="eq8"):
    if mode not in DELAY_MODES:
        raise ValueError("unknown delay mode %r" % mode)
    lam = float(_check_finite(delta - config.omega_b))
    eps, t, dln_eps, dln_t = _log_derivatives(config, np.asarray(lam))
    if mode == "eq8":
        if not abs(eps) >= UNDEFINED_DELAY_MAGNITUDE:
            raise UndefinedDelayError("|eps_out| = %g at delta = %r" % (abs(eps), delta))
        return float(np.imag(dln_eps))
    if not abs(t) >= UNDEFINED_DELAY_MAGNITUDE:
        raise UndefinedDelayError("|t_p| = %g at delta = %r" % (abs(t), delta))
    return float(np.imag(dln_t))


def _phase_of(config, lam, mode):
    M, v = sideband_matrix(config, lam)
    x = _batched_solve(M, v)
    eps = epsilon_out(config, x[..., 1])
    return eps if mode == "eq8" else 1 - eps


def finite_difference_delay(config, delta, mode="eq8", step=None):
    """
    Central difference of the phase with one Richardson extrapolation
    (steps h and 2h), through the linear solve.
    """
    if mode not in DELAY_MODES:
        raise ValueError("unknown delay mode %r" % mode)
    h = step or 1e-4 * config.rates.kappa_c
    lam = delta - config.omega_b
    offsets = np.array([-2 * h, -h, h, 2 * h])
    z = _phase_of(config, lam + offsets, mode)
    s = convention_sign(config)
    d1 = np.angle(z[2] / z[1]) / (2 * h)
    d2 = np.angle(z[3] / z[0]) / (4 * h)
    return s * (4 * d1 - d2) / 3


def phase_singularity_distance(config, delta):
    """
    Estimated distance in rad/s from delta to the nearest zero of eps_out or
    t_p, |z| / |dz/d(omega_p)|. Zero when either is exactly zero.
    """
    lam = float(_check_finite(delta - config.omega_b))
    _, _, dln_eps, dln_t = _log_derivatives(config, np.asarray(lam))
    rates = np.abs([complex(dln_eps), complex(dln_t)])
    if not np.all(np.isfinite(rates)):
        return 0.0
    rate = float(np.max(rates))
    return 1.0 / rate if rate > 0 else np.inf


def probe_response(config, delta):
    lam = float(_check_finite(delta - config.omega_b))
    amplitudes = solve_sidebands(config, lam)
    if config.detuning_offsets.is_zero():
        _assert_closed_form(config, lam, amplitudes.c_plus)
    eps = epsilon_out(config, amplitudes.c_plus)
    t_p, T, phase = transmission(eps)
    return ProbeResponse(
        delta=float(delta), lam=lam, eps_out=eps, t_p=t_p,
        absorption=eps.real, dispersion=eps.imag, transmission=T, phase=phase)


def _assert_closed_form(config, lam, c_plus):
    expected = c_plus_closed_form(config, lam)
    err = np.abs(expected - c_plus)
    bad = err > CLOSED_FORM_RTOL * np.abs(expected)
    if np.any(bad):
        where = np.flatnonzero(np.atleast_1d(bad))[0]
        raise ResponseMismatchError(
            "closed form and linear solve disagree by %g relative at lambda = %r" % (
                np.max(err / np.abs(expected)), np.atleast_1d(lam)[where]))


def probe_spectrum(config, lambdas):
    """
    Vectorised probe_response over an array of lam, plus both delays. Returns a
    dict of arrays keyed by column name; delays are NaN where undefined.
    """
    lam = _check_finite(np.asarray(lambdas, dtype=float))
    M, v = sideband_matrix(config, lam)
    x = _batched_solve(M, v)
    c = x[..., 1]
    if config.detuning_offsets.is_zero():
        _assert_closed_form(config, lam, c)
    eps = epsilon_out(config, c)
    t_p, T, phase = transmission(eps)
    _, _, dln_eps, dln_t = _log_derivatives(config, lam, M, x)
    tau_eq8 = np.where(~(np.abs(eps) >= UNDEFINED_DELAY_MAGNITUDE), np.nan, np.imag(dln_eps))
    tau_phase = np.where(~(np.abs(t_p) >= UNDEFINED_DELAY_MAGNITUDE), np.nan, np.imag(dln_t))
    return dict(
        lam=lam, eps_out=eps, t_p=t_p, absorption=eps.real, dispersion=eps.imag,
        transmission=T, phase=phase, tau_eq8=tau_eq8, tau_phase=tau_phase, amplitudes=x)
