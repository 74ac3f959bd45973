import numpy as np

from pymagnomech.SystemConfig import TWO_PI, CONVENTION_STANDARD, default_config
from pymagnomech.helpers.verify import random_config


MHZ = TWO_PI * 1e6

SEED = 1729


def make_config(g_a=0, g_c=0, g_m=0, sign_convention=CONVENTION_STANDARD, **rates_hz):
    """
    Default rates with couplings given in MHz (the "/2pi" numbers). Extra
    keyword arguments override rates, also in Hz.
    """
    config = default_config().with_couplings(g_a=g_a * MHZ, g_c=g_c * MHZ, g_m=g_m * MHZ)
    if rates_hz:
        config = config.with_rates(**dict((k, v * TWO_PI) for k, v in rates_hz.items()))
    return config.with_convention(sign_convention)


def random_configs(count, seed=SEED, **kwargs):
    rng = np.random.default_rng(seed)
    return [random_config(rng, **kwargs) for _ in range(count)]


def rel_err(a, b):
    a = np.asarray(a)
    b = np.asarray(b)
    return float(np.max(np.abs(a - b) / np.abs(b)))
