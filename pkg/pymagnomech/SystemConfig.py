"""
Parameter set of the atom opto-magnomechanical chain.

Every frequency is stored as an angular rate in rad/s. Values quoted as
"f/2pi" (Hz) only exist at the I/O boundary: from_hz_over_2pi, to_hz_over_2pi
and the JSON config files.

The four modes, in the order used everywhere in this package, are
a (atom ensemble), c (optical cavity), m (magnon), b (phonon).
"""

import collections
import dataclasses
import json
import logging
import math


TWO_PI = 2 * math.pi

CONVENTION_STANDARD = "standard"
# printed-equation convention: e^{+i delta t} ansatz, detuning axis mirrored
CONVENTION_PAPER = "paper"
CONVENTIONS = (CONVENTION_STANDARD, CONVENTION_PAPER)

RATE_NAMES = ("kappa_a", "kappa_c", "kappa_m", "kappa_b")
COUPLING_NAMES = ("g_a", "g_c", "g_m")
OFFSET_NAMES = ("a", "c", "m")

# fraction of omega_b above which the single-sideband reading gets dubious
SIDEBAND_RESOLUTION_FRACTION = 0.1

Diagnostic = collections.namedtuple("Diagnostic", "level field message")


class ConfigError(ValueError):
    def __init__(self, message, diagnostics=()):
        super(ConfigError, self).__init__(message)
        self.diagnostics = list(diagnostics)


@dataclasses.dataclass(frozen=True)
class ModeRates:
    """
    Angular decay rates. kappa_b doubles as the mechanical gamma_b: there is
    only one mechanical damping rate.
    """
    kappa_a: float
    kappa_c: float
    kappa_m: float
    kappa_b: float

    def as_tuple(self):
        return (self.kappa_a, self.kappa_c, self.kappa_m, self.kappa_b)

    def minimum(self):
        return min(self.as_tuple())


@dataclasses.dataclass(frozen=True)
class Couplings:
    """
    Effective linearized couplings: g_a (atoms-cavity), g_c (cavity-phonon),
    g_m (magnon-phonon). Zero switches the branch off exactly.
    """
    g_a: float = 0.0
    g_c: float = 0.0
    g_m: float = 0.0

    def as_tuple(self):
        return (self.g_a, self.g_c, self.g_m)


@dataclasses.dataclass(frozen=True)
class DetuningOffsets:
    """
    Per-mode Delta_o - omega_b for o = a, c, m. All zero puts every mode on the
    mechanical sideband, which is the regime the closed form covers.
    """
    a: float = 0.0
    c: float = 0.0
    m: float = 0.0

    def as_tuple(self):
        return (self.a, self.c, self.m)

    def is_zero(self):
        return self.as_tuple() == (0.0, 0.0, 0.0)


@dataclasses.dataclass(frozen=True)
class Metadata:
    # carried for provenance only, never used by the solvers
    omega_m_over_2pi_hz: float = 10e9
    laser_wavelength_m: float = 1064e-9


@dataclasses.dataclass(frozen=True)
class SystemConfig:
    omega_b: float
    rates: ModeRates
    couplings: Couplings = Couplings()
    probe_amplitude: float = 1.0
    detuning_offsets: DetuningOffsets = DetuningOffsets()
    sign_convention: str = CONVENTION_STANDARD
    metadata: Metadata = Metadata()

    def with_couplings(self, **kwargs):
        return dataclasses.replace(self, couplings=dataclasses.replace(self.couplings, **kwargs))

    def with_rates(self, **kwargs):
        return dataclasses.replace(self, rates=dataclasses.replace(self.rates, **kwargs))

    def with_offsets(self, **kwargs):
        return dataclasses.replace(
            self, detuning_offsets=dataclasses.replace(self.detuning_offsets, **kwargs))

    def with_convention(self, sign_convention):
        return dataclasses.replace(self, sign_convention=sign_convention)

    def with_probe_amplitude(self, probe_amplitude):
        return dataclasses.replace(self, probe_amplitude=probe_amplitude)

    def scaled(self, factor):
        """
        Multiply every frequency (omega_b, rates, couplings, offsets) by factor.
        """
        return dataclasses.replace(
            self,
            omega_b=self.omega_b * factor,
            rates=ModeRates(*(v * factor for v in self.rates.as_tuple())),
            couplings=Couplings(*(v * factor for v in self.couplings.as_tuple())),
            detuning_offsets=DetuningOffsets(*(v * factor for v in self.detuning_offsets.as_tuple())),
        )

    def fastest_rate(self):
        return max(
            self.rates.as_tuple() + self.couplings.as_tuple()
            + tuple(abs(v) for v in self.detuning_offsets.as_tuple()))

    def as_json(self, indent=2):
        return json.dumps(as_file_dict(self), indent=indent, sort_keys=True)

    @classmethod
    def from_json(class_, the_json):
        try:
            d = json.loads(the_json)
        except json.JSONDecodeError as ex:
            raise ConfigError(describe_json_error(the_json, ex))
        return from_file_dict(d)

    def __repr__(self):
        return "<SystemConfig omega_b/2pi=%g Hz g/2pi=(%g, %g, %g) Hz %s>" % (
            (self.omega_b / TWO_PI,) + tuple(v / TWO_PI for v in self.couplings.as_tuple())
            + (self.sign_convention,))


def default_config():
    """
    omega_b/2pi = 40 MHz, kappa_b/2pi = 100 Hz, kappa_a/2pi = kappa_m/2pi = 1 MHz,
    kappa_c/2pi = 2 MHz, all couplings off (bare cavity), offsets zero.
    """
    return from_hz_over_2pi(dict(
        omega_b=40e6, kappa_a=1e6, kappa_c=2e6, kappa_m=1e6, kappa_b=1e2,
        g_a=0, g_c=0, g_m=0,
    ))


def validate(config):
    """
    Return a list of Diagnostic. Empty for a physical configuration.
    """
    diagnostics = []

    def error(field, message):
        diagnostics.append(Diagnostic("error", field, message))

    def warning(field, message):
        diagnostics.append(Diagnostic("warning", field, message))

    values = [("omega_b", config.omega_b), ("probe_amplitude", config.probe_amplitude)]
    values += list(zip(RATE_NAMES, config.rates.as_tuple()))
    values += list(zip(COUPLING_NAMES, config.couplings.as_tuple()))
    values += [("offset_%s" % n, v) for n, v in zip(OFFSET_NAMES, config.detuning_offsets.as_tuple())]
    finite = True
    for name, v in values:
        if not math.isfinite(v):
            error(name, "%s is not finite (%r)" % (name, v))
            finite = False
    if not finite:
        return diagnostics

    if config.omega_b <= 0:
        error("omega_b", "omega_b must be positive, got %g rad/s" % config.omega_b)
    if config.probe_amplitude <= 0:
        error("probe_amplitude", "probe_amplitude must be positive, got %g" % config.probe_amplitude)
    if config.sign_convention not in CONVENTIONS:
        error("sign_convention", "unknown sign convention %r" % config.sign_convention)

    limit = SIDEBAND_RESOLUTION_FRACTION * config.omega_b
    for name, v in zip(RATE_NAMES, config.rates.as_tuple()):
        if v <= 0:
            error(name, "non-positive rate %s = %g rad/s" % (name, v))
        elif config.omega_b > 0 and v > limit:
            warning(name, "sideband resolution: %s = %g rad/s exceeds omega_b/10 = %g rad/s" % (
                name, v, limit))
    for name, v in zip(COUPLING_NAMES, config.couplings.as_tuple()):
        if v < 0:
            error(name, "negative coupling %s = %g rad/s" % (name, v))
    for name, v in zip(OFFSET_NAMES, config.detuning_offsets.as_tuple()):
        if config.omega_b > 0 and abs(v) > limit:
            warning("offset_%s" % name, "sideband resolution: offset %s = %g rad/s exceeds omega_b/10" % (
                name, v))
    return diagnostics


def check(config):
    """
    Raise ConfigError if validate reports an error; log the warnings.
    """
    diagnostics = validate(config)
    errors = [d for d in diagnostics if d.level == "error"]
    for d in diagnostics:
        if d.level == "warning":
            logging.warning("config %s: %s", d.field, d.message)
    if errors:
        raise ConfigError("; ".join(d.message for d in errors), diagnostics)
    return config


def from_hz_over_2pi(values, probe_amplitude=1.0, sign_convention=CONVENTION_STANDARD,
                     detuning_offsets=None, metadata=None):
    """
    values: dict with omega_b, kappa_a, kappa_c, kappa_m, kappa_b, g_a, g_c, g_m
    in Hz (the "/2pi" numbers). detuning_offsets: optional dict with keys a, c, m,
    also in Hz.
    """
    required = ("omega_b",) + RATE_NAMES + COUPLING_NAMES
    missing = [k for k in required if k not in values]
    if missing:
        raise ConfigError("missing field(s): %s" % ", ".join(missing),
                          [Diagnostic("error", k, "missing field %s" % k) for k in missing])
    extra = sorted(set(values) - set(required))
    if extra:
        raise ConfigError("unknown field(s): %s" % ", ".join(extra),
                          [Diagnostic("error", k, "unknown field %s" % k) for k in extra])
    v = dict((k, _as_float(k, values[k]) * TWO_PI) for k in required)
    offsets = DetuningOffsets()
    if detuning_offsets:
        unknown = sorted(set(detuning_offsets) - set(OFFSET_NAMES))
        if unknown:
            raise ConfigError("unknown detuning offset(s): %s" % ", ".join(unknown))
        offsets = DetuningOffsets(**dict(
            (k, _as_float("offset_%s" % k, val) * TWO_PI) for k, val in detuning_offsets.items()))
    config = SystemConfig(
        omega_b=v["omega_b"],
        rates=ModeRates(*(v[k] for k in RATE_NAMES)),
        couplings=Couplings(*(v[k] for k in COUPLING_NAMES)),
        probe_amplitude=_as_float("probe_amplitude", probe_amplitude),
        detuning_offsets=offsets,
        sign_convention=sign_convention,
        metadata=metadata or Metadata(),
    )
    return check(config)


def to_hz_over_2pi(config):
    d = dict(omega_b=config.omega_b / TWO_PI)
    for name, v in zip(RATE_NAMES, config.rates.as_tuple()):
        d[name] = v / TWO_PI
    for name, v in zip(COUPLING_NAMES, config.couplings.as_tuple()):
        d[name] = v / TWO_PI
    return d


def _as_float(name, v):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError("%s must be a number, got %r" % (name, v),
                          [Diagnostic("error", name, "not a number")])
    v = float(v)
    if not math.isfinite(v):
        raise ConfigError("%s is not finite (%r)" % (name, v),
                          [Diagnostic("error", name, "not finite")])
    return v


FILE_KEYS = dict(
    omega_b_over_2pi_hz="omega_b",
    kappa_a_over_2pi_hz="kappa_a",
    kappa_c_over_2pi_hz="kappa_c",
    kappa_m_over_2pi_hz="kappa_m",
    kappa_b_over_2pi_hz="kappa_b",
    g_a_over_2pi_hz="g_a",
    g_c_over_2pi_hz="g_c",
    g_m_over_2pi_hz="g_m",
)
OPTIONAL_FILE_KEYS = ("probe_amplitude", "sign_convention", "detuning_offsets_over_2pi_hz", "metadata")
METADATA_KEYS = ("omega_m_over_2pi_hz", "laser_wavelength_m")


def as_file_dict(config):
    hz = to_hz_over_2pi(config)
    d = dict((file_key, hz[name]) for file_key, name in FILE_KEYS.items())
    d["probe_amplitude"] = config.probe_amplitude
    d["sign_convention"] = config.sign_convention
    d["detuning_offsets_over_2pi_hz"] = dict(
        (n, v / TWO_PI) for n, v in zip(OFFSET_NAMES, config.detuning_offsets.as_tuple()))
    d["metadata"] = dataclasses.asdict(config.metadata)
    return d


def from_file_dict(d):
    if not isinstance(d, dict):
        raise ConfigError("config must be a JSON object, got %s" % type(d).__name__)
    unknown = sorted(set(d) - set(FILE_KEYS) - set(OPTIONAL_FILE_KEYS))
    if unknown:
        raise ConfigError(
            "unknown config key(s): %s" % ", ".join(unknown),
            [Diagnostic("error", k, "unknown key %s" % k) for k in unknown])
    missing = sorted(k for k in FILE_KEYS if k not in d)
    if missing:
        raise ConfigError(
            "missing config key(s): %s" % ", ".join(missing),
            [Diagnostic("error", k, "missing key %s" % k) for k in missing])
    values = dict((name, d[file_key]) for file_key, name in FILE_KEYS.items())
    sign_convention = d.get("sign_convention", CONVENTION_STANDARD)
    if sign_convention not in CONVENTIONS:
        raise ConfigError("sign_convention must be one of %s, got %r" % (
            "|".join(CONVENTIONS), sign_convention))
    offsets = d.get("detuning_offsets_over_2pi_hz") or None
    if offsets is not None and not isinstance(offsets, dict):
        raise ConfigError("detuning_offsets_over_2pi_hz must be an object")
    metadata = None
    if "metadata" in d:
        md = d["metadata"]
        if not isinstance(md, dict):
            raise ConfigError("metadata must be an object")
        unknown = sorted(set(md) - set(METADATA_KEYS))
        if unknown:
            raise ConfigError("unknown metadata key(s): %s" % ", ".join(unknown))
        metadata = Metadata(**dict((k, _as_float(k, v)) for k, v in md.items()))
    return from_hz_over_2pi(
        values, probe_amplitude=d.get("probe_amplitude", 1.0), sign_convention=sign_convention,
        detuning_offsets=offsets, metadata=metadata)


def describe_json_error(text, ex):
    if isinstance(text, bytes):
        byte_offset = ex.pos
    else:
        byte_offset = len(text[:ex.pos].encode("utf8"))
    return "malformed JSON at byte offset %d (line %d column %d): %s" % (
        byte_offset, ex.lineno, ex.colno, ex.msg)


def load_config(path):
    try:
        with open(path, "rb") as f:
            data = f.read()
    except OSError as ex:
        raise ConfigError("%s: cannot read config: %s" % (path, ex.strerror or ex))
    try:
        d = json.loads(data)
    except json.JSONDecodeError as ex:
        raise ConfigError("%s: %s" % (path, describe_json_error(ex.doc, ex)))
    except UnicodeDecodeError as ex:
        raise ConfigError("%s: not UTF-8 at byte offset %d" % (path, ex.start))
    config = from_file_dict(d)
    logging.debug("loaded %s from %s", config, path)
    return config
