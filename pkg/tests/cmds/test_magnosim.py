import json
import os

from tempfile import TemporaryDirectory

import numpy as np
import pytest

from pymagnomech.cmds import magnosim
from pymagnomech.util.table_io import read_csv


def read_json(path):
    with open(path) as f:
        return json.load(f)


def read_bytes(path):
    with open(path, "rb") as f:
        return f.read()


def test_parse_eta():
    assert list(magnosim.parse_eta("0..0")) == [0.0]
    assert list(magnosim.parse_eta("0..2:3")) == [0.0, 1.0, 2.0]
    assert len(magnosim.parse_eta("0..2")) == 200
    for bad in ("2", "2..1", "-1..1:3", "0..1:0", "a..b"):
        with pytest.raises(magnosim.UsageError):
            magnosim.parse_eta(bad)


def test_spectrum_bare_cavity():
    with TemporaryDirectory() as the_dir:
        assert magnosim.main(["spectrum", "-p", "fig3a", "-n", "201", "-o", the_dir]) == magnosim.EXIT_OK
        features = read_json(os.path.join(the_dir, "features.json"))
        assert features["window_count"] == 0
        assert len(features["peaks"]) == 1
        header, data = read_csv(os.path.join(the_dir, "spectrum.csv"))
        assert header[0] == "delta_over_omega_b"
        assert np.all(np.diff(data[:, 0]) > 0)
        manifest = read_json(os.path.join(the_dir, "manifest.json"))
        assert manifest["command"] == "spectrum"
        assert set(manifest["files"]) == set(["spectrum.csv", "features.json"])
        assert manifest["extra"]["preset"] == "fig3a"


def test_spectrum_is_reproducible():
    outputs = []
    for _ in range(2):
        with TemporaryDirectory() as the_dir:
            argv = ["-w", "2", "spectrum", "-p", "fig3d", "-o", the_dir, "--emit-plot", "absorption"]
            assert magnosim.main(argv) == magnosim.EXIT_OK
            assert os.path.exists(os.path.join(the_dir, "plot_absorption.py"))
            outputs.append((read_bytes(os.path.join(the_dir, "spectrum.csv")),
                            read_bytes(os.path.join(the_dir, "features.json"))))
    assert outputs[0] == outputs[1]
    assert json.loads(outputs[0][1])["window_count"] == 3


def test_spectrum_transmission_preset():
    with TemporaryDirectory() as the_dir:
        assert magnosim.main(["spectrum", "-p", "fig5b", "-n", "201", "-o", the_dir]) == magnosim.EXIT_OK
        assert read_json(os.path.join(the_dir, "features.json"))["column"] == "transmission"


def test_spectrum_from_config_file():
    config = dict(
        omega_b_over_2pi_hz=40e6, kappa_a_over_2pi_hz=1e6, kappa_c_over_2pi_hz=2e6,
        kappa_m_over_2pi_hz=1e6, kappa_b_over_2pi_hz=100, g_a_over_2pi_hz=0,
        g_c_over_2pi_hz=8e6, g_m_over_2pi_hz=0, sign_convention="paper")
    with TemporaryDirectory() as the_dir:
        path = os.path.join(the_dir, "config.json")
        with open(path, "w") as f:
            json.dump(config, f)
        assert magnosim.main(["spectrum", "-c", path, "-n", "201", "-o", the_dir]) == magnosim.EXIT_OK
        assert read_json(os.path.join(the_dir, "features.json"))["window_count"] == 1
        assert read_json(os.path.join(the_dir, "manifest.json"))["config"]["sign_convention"] == "paper"


def test_config_errors_exit_2():
    with TemporaryDirectory() as the_dir:
        path = os.path.join(the_dir, "config.json")
        with open(path, "w") as f:
            f.write('{"omega_b_over_2pi_hz": 4e7,\n "kappa_a_over_2pi_hz": }')
        assert magnosim.main(["spectrum", "-c", path, "-o", the_dir]) == magnosim.EXIT_CONFIG
        assert magnosim.main(["spectrum", "-p", "fig9", "-o", the_dir]) == magnosim.EXIT_CONFIG
        missing = os.path.join(the_dir, "missing.json")
        assert magnosim.main(["spectrum", "-c", missing, "-o", the_dir]) == magnosim.EXIT_CONFIG
        assert magnosim.main(["spectrum", "-p", "fig3a", "-n", "1", "-o", the_dir]) == magnosim.EXIT_CONFIG
        assert magnosim.main(["spectrum", "-p", "fig6", "-o", the_dir]) == magnosim.EXIT_CONFIG
        assert magnosim.main(["delay-surface", "-p", "fig3b", "--eta", "3..1", "-o", the_dir]) == magnosim.EXIT_CONFIG
        assert magnosim.main(["delay-surface", "-p", "fig3a", "-o", the_dir]) == magnosim.EXIT_CONFIG
        assert magnosim.main(["delay-surface", "--eta", "0..0", "-n", "1", "-o", the_dir]) == magnosim.EXIT_CONFIG
        assert not os.path.exists(os.path.join(the_dir, "manifest.json"))


def test_missing_plot_table_exits_3():
    with TemporaryDirectory() as the_dir:
        code = magnosim.main(["plot", os.path.join(the_dir, "nothing.csv"), "-k", "absorption"])
        assert code == magnosim.EXIT_RUNTIME


def test_delay_surface_single_eta():
    with TemporaryDirectory() as the_dir:
        argv = ["delay-surface", "--eta", "0..0", "-n", "21", "-o", the_dir, "--emit-plot", "surface"]
        assert magnosim.main(argv) == magnosim.EXIT_OK
        header, data = read_csv(os.path.join(the_dir, "surface.csv"))
        assert header == ["eta", "delta_over_omega_b", "tau_s"]
        assert data.shape == (21, 3)
        assert np.all(data[:, 0] == 0)
        summary = read_json(os.path.join(the_dir, "summary.json"))
        assert summary["eta_points"] == 1
        assert summary["min_tau_s"] < 0
        assert summary["argmin"]["delta_over_omega_b"] == 1.0
        assert len(summary["per_eta"]) == 1
        assert os.path.exists(os.path.join(the_dir, "plot_surface.py"))


def test_plot_command():
    with TemporaryDirectory() as the_dir:
        assert magnosim.main(["spectrum", "-p", "fig3b", "-n", "101", "-o", the_dir]) == magnosim.EXIT_OK
        table = os.path.join(the_dir, "spectrum.csv")
        out = os.path.join(the_dir, "delay.py")
        assert magnosim.main(["plot", table, "-k", "delay", "-o", out]) == magnosim.EXIT_OK
        assert os.path.exists(out)
        assert magnosim.main(["plot", table, "-k", "surface"]) == magnosim.EXIT_RUNTIME


def test_verify_passes():
    assert magnosim.main(["verify"]) == magnosim.EXIT_OK
