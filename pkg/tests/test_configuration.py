from dataclasses import fields
from pathlib import Path

import pytest

from configuration.loader import (
    KEYS, RunConfig, build_run_config, load_run_config, parse_config_text, parse_override, parse_value,
)
from configuration.units import Dimension, parse_bool, parse_list, parse_quantity
from errors import ConfigError

SHIPPED_CONFIG = Path(__file__).resolve().parent.parent / "nmcdse.conf"
GROUPS = ("system", "energy", "profile", "characterization", "thresholds")


# =============================================================================
# Units
# =============================================================================


@pytest.mark.parametrize("text, dimension, expected", [
    ("3GHz", Dimension.FREQUENCY, 3e9),
    ("1.2 GHz", Dimension.FREQUENCY, 1.2e9),
    ("137GB/s", Dimension.BANDWIDTH, 137e9),
    ("32KB", Dimension.BYTES, 32768),
    ("4GiB", Dimension.BYTES, 4 * 1024 ** 3),
    ("64", Dimension.BYTES, 64),
    ("3.7pJ/b", Dimension.ENERGY_PER_BIT, 3.7),
    ("370fJ/bit", Dimension.ENERGY_PER_BIT, 0.37),
    ("50pJ", Dimension.ENERGY_PER_OP, 50.0),
    ("960mW", Dimension.POWER, 0.96),
    ("5us", Dimension.TIME, 5e-6),
    ("2cycles", Dimension.CYCLES, 2.0),
    ("1e9", Dimension.REAL, 1e9),
    ("16", Dimension.COUNT, 16),
])
def test_parse_quantity(text, dimension, expected):
    value = parse_quantity(text, dimension)
    assert value == pytest.approx(expected)
    if dimension in (Dimension.COUNT, Dimension.BYTES):
        assert isinstance(value, int)


@pytest.mark.parametrize("text, dimension", [
    ("3GB/s", Dimension.FREQUENCY),
    ("16GB", Dimension.BANDWIDTH),
    ("4 cores", Dimension.COUNT),
    ("1.5", Dimension.BYTES),
    ("2.5", Dimension.COUNT),
    ("fast", Dimension.REAL),
    ("", Dimension.TIME),
])
def test_parse_quantity_rejects(text, dimension):
    with pytest.raises(ValueError):
        parse_quantity(text, dimension)


def test_fractional_size_with_unit_is_whole_bytes():
    assert parse_quantity("0.5KB", Dimension.BYTES) == 512


def test_lists_and_booleans():
    assert parse_list("8, 16,32", Dimension.BYTES) == (8, 16, 32)
    assert parse_list("0.25,0.75", Dimension.REAL) == (0.25, 0.75)
    with pytest.raises(ValueError):
        parse_list(" , ", Dimension.COUNT)
    assert parse_bool("Yes") is True
    assert parse_bool("off") is False
    with pytest.raises(ValueError):
        parse_bool("maybe")


# =============================================================================
# Config files
# =============================================================================


def assert_same_fields(a, b):
    for f in fields(a):
        left, right = getattr(a, f.name), getattr(b, f.name)
        if isinstance(left, float):
            assert left == pytest.approx(right, rel=1e-12), f.name
        else:
            assert left == right, f.name


def test_shipped_config_matches_defaults():
    loaded = load_run_config(SHIPPED_CONFIG)
    defaults = RunConfig()
    for group in GROUPS:
        assert_same_fields(getattr(loaded, group), getattr(defaults, group))
    assert loaded.source == str(SHIPPED_CONFIG)


def test_shipped_config_sets_every_key_but_weights():
    values = parse_config_text(SHIPPED_CONFIG.read_text(encoding="utf-8"))
    assert set(KEYS) - set(values) == {"weights"}


def test_published_constants_appear_verbatim():
    text = SHIPPED_CONFIG.read_text(encoding="utf-8")
    for line in ("e_dram_layer = 3.7pJ/b", "e_logic_layer = 1.5pJ/b", "p_static_nmc = 0.96W"):
        assert line in text


def test_no_file_gives_defaults():
    assert load_run_config() == RunConfig()


def test_comments_and_repeated_keys(caplog):
    values = parse_config_text("# header\nn_links = 2  # two\n\nn_links = 8\n", "x.conf")
    assert values == {"n_links": "8"}
    assert "x.conf:4" in caplog.text


def test_line_without_equals_names_the_line():
    with pytest.raises(ConfigError, match="x.conf:2"):
        parse_config_text("n_links = 2\nn_vaults 16\n", "x.conf")


def test_unknown_key():
    with pytest.raises(ConfigError, match="'bogus'"):
        build_run_config({"bogus": "1"})


def test_wrong_unit_names_the_key():
    with pytest.raises(ConfigError) as info:
        build_run_config({"f_host": "3GB"})
    assert info.value.key == "f_host"


def test_out_of_range_value_names_the_key():
    with pytest.raises(ConfigError) as info:
        build_run_config({"m1": "1.5"})
    assert info.value.key == "m1"


def test_line_size_feeds_model_and_characterization():
    run = build_run_config({"line_size": "128B", "line_pairs": "16,32,64,128"})
    assert run.system.line_size == run.characterization.line_size == 128


def test_auto_nmc_cores():
    assert parse_value("n_nmc_cores", "auto") is None
    assert parse_value("n_nmc_cores", "8") == 8


def test_overrides_win_over_file(tmp_path):
    path = tmp_path / "run.conf"
    path.write_text("n_vaults = 32\nn_links = 2\n", encoding="utf-8")
    run = load_run_config(path, ["n_links=8", "reuse_profile = true"])
    assert run.system.n_vaults == 32
    assert run.system.n_links == 8
    assert run.characterization.reuse_profile is True


def test_bad_override():
    with pytest.raises(ConfigError, match="not key=value"):
        parse_override("n_links")


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        load_run_config(tmp_path / "absent.conf")
