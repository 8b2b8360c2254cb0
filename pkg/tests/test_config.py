import json

import pytest

from fernhex.config import FernhexConfig, get_config, load_config, set_config
from fernhex.errors import InvalidInput


def test_missing_file_gives_defaults(tmp_path):
    cfg = load_config(str(tmp_path / "absent.json"))
    assert cfg == FernhexConfig()
    assert cfg.engines.dp_width_cap == 22
    assert cfg.grid.max_k == 4


def test_file_values_and_env_overrides(tmp_path, monkeypatch):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({
        "engines": {"dp_width_cap": 9, "ryser_max_pairs": 5},
        "grid": {"max_xyz": 1, "jobs": 0},
        "log_level": "debug",
    }))
    cfg = load_config(str(path))
    assert cfg.engines.dp_width_cap == 9
    assert cfg.engines.ryser_max_pairs == 5
    assert cfg.grid.max_xyz == 1
    assert cfg.grid.jobs == 1
    assert cfg.log_level == "DEBUG"

    monkeypatch.setenv("FERNHEX_RYSER_CAP", "7")
    monkeypatch.setenv("FERNHEX_STORAGE", str(tmp_path / "s"))
    cfg = load_config(str(path))
    assert cfg.engines.ryser_max_pairs == 7
    assert cfg.storage_dir == str(tmp_path / "s")


def test_config_path_from_environment(tmp_path, monkeypatch):
    path = tmp_path / "env.json"
    path.write_text(json.dumps({"grid": {"max_lobe": 6}}))
    monkeypatch.setenv("FERNHEX_CONFIG", str(path))
    assert load_config().grid.max_lobe == 6


@pytest.mark.parametrize(
    "content",
    [
        "{not json",
        json.dumps({"engines": {"dp_width_cap": -1}}),
        json.dumps({"grid": {"max_k": "many"}}),
    ],
)
def test_bad_config_is_invalid_input(tmp_path, content):
    path = tmp_path / "bad.json"
    path.write_text(content)
    with pytest.raises(InvalidInput):
        load_config(str(path))


def test_bad_env_override(monkeypatch, tmp_path):
    monkeypatch.setenv("FERNHEX_DP_WIDTH_CAP", "-3")
    with pytest.raises(InvalidInput):
        load_config(str(tmp_path / "absent.json"))


def test_set_and_get_config():
    cfg = FernhexConfig(log_level="ERROR")
    set_config(cfg)
    assert get_config() is cfg
