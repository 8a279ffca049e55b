"""
Tests for configuration loading.
"""
import json
from fractions import Fraction

from script.config import DEFAULT_CONFIG, load_config, return_time_cap, setting, tolerance


def test_missing_file_gives_defaults(tmp_path):
    """Test that a missing config file falls back to the defaults."""
    config = load_config(tmp_path / "absent.json")
    assert config == DEFAULT_CONFIG
    assert config is not DEFAULT_CONFIG


def test_partial_file_is_merged(tmp_path):
    """Test that nested keys override only what they name."""
    path = tmp_path / "config.json"
    path.write_text(json.dumps({"logging": {"level": "DEBUG"}, "averages": {"tolerance": "1/100"}}),
                    encoding="utf-8")
    config = load_config(path)
    assert setting(config, "logging.level") == "DEBUG"
    assert setting(config, "logging.max_files") == DEFAULT_CONFIG["logging"]["max_files"]
    assert tolerance(config) == Fraction(1, 100)


def test_malformed_file_is_ignored(tmp_path):
    """Test that invalid JSON or a non-object top level is ignored."""
    path = tmp_path / "config.json"
    path.write_text("{broken", encoding="utf-8")
    assert load_config(path) == DEFAULT_CONFIG
    path.write_text("[1, 2]", encoding="utf-8")
    assert load_config(path) == DEFAULT_CONFIG


def test_setting_lookup():
    """Test dotted lookups and defaults."""
    assert setting(DEFAULT_CONFIG, "render.tile_size") == 48
    assert setting(DEFAULT_CONFIG, "render.missing", "x") == "x"
    assert setting(DEFAULT_CONFIG, "logging.level.deeper") is None
    assert tolerance(DEFAULT_CONFIG) == Fraction(1, 50)
    assert return_time_cap(DEFAULT_CONFIG, 3) == 50


def test_shipped_config_matches_defaults():
    """Test that config/config.json loads and keeps every default section."""
    config = load_config()
    assert set(DEFAULT_CONFIG) <= set(config)
