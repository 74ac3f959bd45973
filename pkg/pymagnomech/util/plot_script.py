import os

from pymagnomech.util.table_io import SPECTRUM_HEADER, SURFACE_HEADER, read_csv_header, write_file


# kind -> (y column, axis label); x is always delta_over_omega_b
LINE_KINDS = dict(
    absorption=("absorption", "Re[eps_out]"),
    dispersion=("dispersion", "Im[eps_out]"),
    transmission=("transmission", "|t_p|^2"),
    phase=("phase_rad", "arg t_p (rad)"),
    delay=("tau_eq8_s", "group delay (s)"),
)
KINDS = tuple(sorted(LINE_KINDS)) + ("surface",)


LINE_TEMPLATE = '''#!/usr/bin/env python
# plots column %(y_index)d (%(y_name)s) against column %(x_index)d (%(x_name)s) of %(table)s
import sys

import numpy as np
import matplotlib.pyplot as plt

table = sys.argv[1] if len(sys.argv) > 1 else %(table)r
data = np.loadtxt(table, delimiter=",", skiprows=1, ndmin=2)
plt.plot(data[:, %(x_col)d], data[:, %(y_col)d])
plt.xlabel("delta / omega_b")
plt.ylabel(%(label)r)
plt.tight_layout()
if len(sys.argv) > 2:
    plt.savefig(sys.argv[2])
else:
    plt.show()
'''

SURFACE_TEMPLATE = '''#!/usr/bin/env python
# heatmap of tau over the (eta, delta/omega_b) lattice in %(table)s
import sys

import numpy as np
import matplotlib.pyplot as plt

table = sys.argv[1] if len(sys.argv) > 1 else %(table)r
data = np.loadtxt(table, delimiter=",", skiprows=1, ndmin=2)
eta = np.unique(data[:, 0])
delta = np.unique(data[:, 1])
tau = data[:, 2].reshape(len(eta), len(delta))
plt.pcolormesh(delta, eta, tau, shading="auto", cmap="RdBu_r")
plt.colorbar(label="group delay (s)")
plt.xlabel("delta / omega_b")
plt.ylabel("eta = g_m / g_c")
plt.tight_layout()
if len(sys.argv) > 2:
    plt.savefig(sys.argv[2])
else:
    plt.show()
'''


def plot_script_text(table_path, kind):
    if kind not in KINDS:
        raise ValueError("unknown plot kind %r (known: %s)" % (kind, ", ".join(KINDS)))
    header = read_csv_header(table_path)
    table = os.path.basename(table_path)
    if kind == "surface":
        if tuple(header) != SURFACE_HEADER:
            raise ValueError("%s is not a delay surface table" % table_path)
        return SURFACE_TEMPLATE % dict(table=table)
    if tuple(header) != SPECTRUM_HEADER:
        raise ValueError("%s is not a spectrum table" % table_path)
    y_name, label = LINE_KINDS[kind]
    x_col = header.index("delta_over_omega_b")
    y_col = header.index(y_name)
    return LINE_TEMPLATE % dict(
        table=table, x_col=x_col, y_col=y_col, x_index=x_col + 1, y_index=y_col + 1,
        x_name=header[x_col], y_name=y_name, label=label)


def emit_plot_script(table_path, kind, out_path=None):
    """
    Write a matplotlib script rendering the table; returns its path.
    """
    text = plot_script_text(table_path, kind)
    out_path = out_path or os.path.join(os.path.dirname(table_path) or ".", "plot_%s.py" % kind)
    return write_file(out_path, text)
