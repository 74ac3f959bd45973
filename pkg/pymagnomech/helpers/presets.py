#!/usr/bin/env python

"""
Named scenarios. Couplings are in Hz (the "/2pi" numbers); rates come from
default_config. Each preset names the table column it is read from and
lists the parameters the scenario leaves unstated.
"""

from pymagnomech.SystemConfig import TWO_PI, check, default_config


MHZ = 1e6

FIG3_ASSUMPTIONS = [
    "rates are the default configuration (kappa_a = kappa_m = 1 MHz, kappa_c = 2 MHz, kappa_b = 100 Hz)",
    "all detuning offsets zero (Delta_a = Delta_c = Delta_m = omega_b)",
]

FIG5_ASSUMPTIONS = FIG3_ASSUMPTIONS + [
    "g_c = 8 MHz in every panel",
    "g_m = 8 MHz in panels (b) and (d), g_a = 8 MHz in panels (c) and (d)",
]

FIG6_ASSUMPTIONS = FIG3_ASSUMPTIONS + [
    "g_c = 8 MHz, the value used for the spectrum presets",
    "eta = g_m / g_c spans [0, 2]",
    "delta / omega_b spans [0.5, 1.5]",
]


def _spectrum(couplings, column, assumptions, description):
    return dict(
        KIND="spectrum",
        COUPLINGS_HZ=dict(g_a=couplings[0] * MHZ, g_c=couplings[1] * MHZ, g_m=couplings[2] * MHZ),
        COLUMN=column,
        ASSUMPTIONS=list(assumptions),
        DESCRIPTION=description,
    )


FIG3A = _spectrum((0, 0, 0), "absorption", FIG3_ASSUMPTIONS, "bare cavity Lorentzian")
FIG3B = _spectrum((0, 8, 0), "absorption", FIG3_ASSUMPTIONS, "optomechanical transparency")
FIG3C = _spectrum((0, 8, 8), "absorption", FIG3_ASSUMPTIONS, "magnomechanical windows")
FIG3D = _spectrum((8, 8, 8), "absorption", FIG3_ASSUMPTIONS, "atoms split the central window")

FIG4A = _spectrum((0, 0, 0), "dispersion", FIG3_ASSUMPTIONS, "bare cavity dispersion")
FIG4B = _spectrum((0, 8, 0), "dispersion", FIG3_ASSUMPTIONS, "optomechanical dispersion")
FIG4C = _spectrum((0, 8, 8), "dispersion", FIG3_ASSUMPTIONS, "magnomechanical dispersion")
FIG4D = _spectrum((8, 8, 8), "dispersion", FIG3_ASSUMPTIONS, "dispersion with atoms")

FIG5A = _spectrum((0, 8, 4), "transmission", FIG5_ASSUMPTIONS, "no atoms, g_m = 4 MHz")
FIG5B = _spectrum((0, 8, 8), "transmission", FIG5_ASSUMPTIONS, "no atoms, g_m = 8 MHz")
FIG5C = _spectrum((8, 8, 4), "transmission", FIG5_ASSUMPTIONS, "atoms, g_m = 4 MHz")
FIG5D = _spectrum((8, 8, 8), "transmission", FIG5_ASSUMPTIONS, "atoms, g_m = 8 MHz")

FIG6 = dict(
    KIND="delay_surface",
    COUPLINGS_HZ=dict(g_a=8 * MHZ, g_c=8 * MHZ, g_m=0.0),
    COLUMN="tau_eq8",
    ETA=(0.0, 2.0, 200),
    DELTA_POINTS=201,
    HALF_WIDTH=0.5,
    ASSUMPTIONS=list(FIG6_ASSUMPTIONS),
    DESCRIPTION="group delay versus delta and eta = g_m / g_c",
)

PRESETS = dict(
    fig3a=FIG3A, fig3b=FIG3B, fig3c=FIG3C, fig3d=FIG3D,
    fig4a=FIG4A, fig4b=FIG4B, fig4c=FIG4C, fig4d=FIG4D,
    fig5a=FIG5A, fig5b=FIG5B, fig5c=FIG5C, fig5d=FIG5D,
    fig6=FIG6,
)


class UnknownPresetError(KeyError):
    pass


def preset(name):
    try:
        return PRESETS[name]
    except KeyError:
        raise UnknownPresetError("unknown preset %r (known: %s)" % (name, ", ".join(sorted(PRESETS))))


def preset_config(name, sign_convention=None, base=None):
    """
    The default configuration with the preset's couplings applied.
    """
    p = preset(name)
    config = (base or default_config()).with_couplings(
        **dict((k, v * TWO_PI) for k, v in p["COUPLINGS_HZ"].items()))
    if sign_convention:
        config = config.with_convention(sign_convention)
    return check(config)
