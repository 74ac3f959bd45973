import pytest

from pymagnomech.SystemConfig import TWO_PI, ConfigError, default_config
from pymagnomech.helpers import presets


def test_all_presets_build():
    for name, p in presets.PRESETS.items():
        config = presets.preset_config(name)
        assert p["KIND"] in ("spectrum", "delay_surface")
        assert p["ASSUMPTIONS"]
        assert config.rates == default_config().rates
        for key, hz in p["COUPLINGS_HZ"].items():
            assert getattr(config.couplings, key) == hz * TWO_PI


def test_fig3_couplings():
    expected = dict(fig3a=(0, 0, 0), fig3b=(0, 8, 0), fig3c=(0, 8, 8), fig3d=(8, 8, 8))
    for name, mhz in expected.items():
        config = presets.preset_config(name)
        assert config.couplings.as_tuple() == tuple(v * 1e6 * TWO_PI for v in mhz)
        assert presets.preset(name)["COLUMN"] == "absorption"
        assert presets.preset(name.replace("3", "4"))["COUPLINGS_HZ"] == presets.preset(name)["COUPLINGS_HZ"]


def test_fig5_panels():
    g_m = [presets.preset("fig5" + panel)["COUPLINGS_HZ"]["g_m"] for panel in "abcd"]
    g_a = [presets.preset("fig5" + panel)["COUPLINGS_HZ"]["g_a"] for panel in "abcd"]
    assert g_m == [4e6, 8e6, 4e6, 8e6]
    assert g_a == [0, 0, 8e6, 8e6]
    assert all(presets.preset("fig5" + panel)["COLUMN"] == "transmission" for panel in "abcd")


def test_fig6():
    p = presets.preset("fig6")
    assert p["KIND"] == "delay_surface"
    assert p["ETA"] == (0.0, 2.0, 200)
    assert presets.preset_config("fig6").couplings.g_c == 8e6 * TWO_PI


def test_preset_convention_and_base():
    config = presets.preset_config("fig3d", "paper")
    assert config.sign_convention == "paper"
    base = default_config().with_offsets(c=TWO_PI * 1e5)
    config = presets.preset_config("fig3c", base=base)
    assert config.detuning_offsets.c == TWO_PI * 1e5
    assert config.couplings.g_m == 8e6 * TWO_PI


def test_unknown_preset():
    with pytest.raises(presets.UnknownPresetError) as excinfo:
        presets.preset("fig7")
    assert "fig3a" in str(excinfo.value)
    with pytest.raises(KeyError):
        presets.preset_config("fig7")


def test_preset_rejects_invalid_base():
    with pytest.raises(ConfigError):
        presets.preset_config("fig3a", base=default_config().with_rates(kappa_c=-1.0))
