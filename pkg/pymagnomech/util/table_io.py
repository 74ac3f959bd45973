import hashlib
import io
import json
import logging
import math
import os

import numpy as np


# 17 significant digits, C-locale formatting
FLOAT_FORMAT = "%.16e"

SPECTRUM_HEADER = (
    "delta_over_omega_b", "lambda_rad_s", "absorption", "dispersion",
    "transmission", "phase_rad", "tau_eq8_s", "tau_phase_s",
)
SURFACE_HEADER = ("eta", "delta_over_omega_b", "tau_s")


def write_file(path, data):
    """
    Write bytes (or text, UTF-8) through a temporary file and rename it into place.
    """
    if isinstance(data, str):
        data = data.encode("utf8")
    tmp_path = path + ".tmp"
    with open(tmp_path, "wb") as f:
        f.write(data)
    os.replace(tmp_path, path)
    logging.info("wrote %s (%d bytes)", path, len(data))
    return path


def csv_text(header, columns):
    buf = io.StringIO()
    np.savetxt(buf, np.column_stack(columns), fmt=FLOAT_FORMAT, delimiter=",",
               header=",".join(header), comments="", newline="\n")
    return buf.getvalue()


def spectrum_csv_text(table):
    columns = [
        table.delta_over_omega_b(), table["lambda"], table["absorption"], table["dispersion"],
        table["transmission"], table["phase"], table["tau_eq8"], table["tau_phase"],
    ]
    return csv_text(SPECTRUM_HEADER, columns)


def surface_csv_text(surface):
    n_eta, n_delta = surface.tau.shape
    eta = np.repeat(surface.eta_values, n_delta)
    delta = np.tile(surface.grid.delta_over_omega_b(), n_eta)
    return csv_text(SURFACE_HEADER, [eta, delta, surface.tau.ravel()])


def read_csv_header(path):
    with open(path) as f:
        line = f.readline()
    if not line.strip():
        raise ValueError("%s has no header line" % path)
    return line.strip().split(",")


def read_csv(path):
    """
    Return (header, 2-d float array).
    """
    header = read_csv_header(path)
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return header, data


def _sanitize(obj):
    if isinstance(obj, dict):
        return dict((k, _sanitize(v)) for k, v in obj.items())
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def json_text(obj):
    """
    Canonical JSON: sorted keys, non-finite numbers as null, trailing newline.
    """
    return json.dumps(_sanitize(obj), indent=2, sort_keys=True) + "\n"


def write_json(path, obj):
    return write_file(path, json_text(obj))


def sha256_of(path):
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()
