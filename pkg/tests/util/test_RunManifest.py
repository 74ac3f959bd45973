import json
import os

from tempfile import TemporaryDirectory

from pymagnomech import __version__
from pymagnomech.helpers.presets import preset_config
from pymagnomech.util.RunManifest import RunManifest
from pymagnomech.util.table_io import sha256_of, write_file


def make_manifest(timestamp):
    return RunManifest(
        "spectrum", ["spectrum", "-p", "fig3d"], config=preset_config("fig3d"),
        grid=dict(refinement="uniform", points=11), assumptions=["a", "b"],
        extra=dict(preset="fig3d"), timestamp=timestamp)


def test_inputs_hash_ignores_timestamp():
    first = make_manifest("2020-01-01T00:00:00+00:00")
    second = make_manifest("2021-06-01T12:00:00+00:00")
    assert first.inputs_sha256() == second.inputs_sha256()
    assert first.as_json() != second.as_json()
    other = RunManifest("spectrum", ["spectrum"], config=preset_config("fig3c"), timestamp=first.timestamp)
    assert other.inputs_sha256() != first.inputs_sha256()


def test_manifest_contents():
    manifest = make_manifest(None)
    d = manifest.as_dict()
    assert d["version"] == __version__
    assert abs(d["config"]["g_c_over_2pi_hz"] - 8e6) < 1e-6
    assert d["assumptions"] == ["a", "b"]
    assert d["timestamp"]
    assert d["inputs_sha256"] == manifest.inputs_sha256()


def test_manifest_write_and_read():
    with TemporaryDirectory() as the_dir:
        manifest = make_manifest("2020-01-01T00:00:00+00:00")
        data_path = write_file(os.path.join(the_dir, "spectrum.csv"), "x\n1\n")
        manifest.add_file(data_path)
        path = manifest.write(the_dir)
        with open(path) as f:
            text = f.read()
        assert json.loads(text)["files"] == {"spectrum.csv": sha256_of(data_path)}
        again = RunManifest.from_json(text)
        assert again.as_json() == text
        assert again.inputs_sha256() == manifest.inputs_sha256()
