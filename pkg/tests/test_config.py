"""Tests for configuration loading and validation."""

import json
import math
from pathlib import Path

import pytest

from dyadic_averaging.config import ExperimentConfig, IndexConfig, create_default_config, load_config
from dyadic_averaging.errors import ConfigError

REPO_ROOT = Path(__file__).resolve().parents[1]


def test_defaults():
    config = ExperimentConfig()
    assert (config.order, config.J, config.j_max) == (4, 14, 10)
    assert config.n_values == list(range(1, 10))
    assert len(config.families) == 6
    assert all(family.count == 8 for family in config.families)
    assert config.indices[3].r == math.inf


def test_shipped_example_matches_defaults():
    config = load_config(REPO_ROOT / "example_config.json")
    assert config.model_dump() == ExperimentConfig().model_dump()


def test_infinity_round_trip():
    index = IndexConfig.model_validate({"p": "inf", "q": 2, "s": 0.1, "r": "Infinity"})
    assert index.p == math.inf and index.r == math.inf
    assert index.model_dump(mode="json")["p"] == "inf"
    assert index.to_index().p == math.inf


def test_none_uses_defaults(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert load_config() == ExperimentConfig()


def test_create_and_load(tmp_path):
    path = create_default_config(tmp_path / "nested" / "config.json")
    assert load_config(path) == ExperimentConfig()


def test_load_toml(tmp_path):
    path = tmp_path / "config.toml"
    path.write_text(
        'J = 12\n'
        'j_max = 8\n'
        'n_values = [1, 2, 3]\n'
        '[[indices]]\n'
        'p = 1.0\n'
        'q = 2.0\n'
        's = 0.5\n'
        'r = "inf"\n'
        '[output]\n'
        'results_dir = "out"\n'
    )
    config = load_config(path)
    assert config.J == 12 and config.j_max == 8
    assert config.indices[0].r == math.inf
    assert config.output.results_dir == "out"


@pytest.mark.parametrize("update", [
    {"unknown_key": 1},
    {"j_max": 11},
    {"J": 25},
    {"order": 11},
    {"n_values": [1, 11]},
    {"n_values": [2, 2]},
    {"x0": 0.1},
    {"x0": 1.0},
    {"experiments": ["en", "fourier"]},
    {"families": [{"name": "sawtooth"}]},
    {"families": [{"name": "jump", "colour": "red"}]},
    {"tn_families": ["bv_bounded"]},
    {"mult_scales": ["H"]},
    {"indices": [{"p": 0.0, "q": 1.0, "s": 0.0}]},
    {"seed": -1},
    {"seed": 2**64},
    {"jobs": 0},
])
def test_invalid(tmp_path, update):
    path = tmp_path / "config.json"
    path.write_text(json.dumps(update))
    with pytest.raises(ConfigError):
        load_config(path)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.json")


def test_bad_json(tmp_path):
    path = tmp_path / "config.json"
    path.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(path)


def test_overrides():
    config = ExperimentConfig().with_overrides(seed=2**64 - 1, results_dir="elsewhere", jobs=3)
    assert config.seed == 2**64 - 1
    assert config.output.results_dir == "elsewhere"
    assert config.jobs == 3
    assert ExperimentConfig().with_overrides() == ExperimentConfig()
    with pytest.raises(ConfigError):
        ExperimentConfig().with_overrides(jobs=0)


def test_smoothness_indices():
    indices = ExperimentConfig().smoothness_indices()
    assert indices[0].as_tuple() == (1.0, 2.0, 0.5, 2.0)
