from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional

from .errors import InvalidInput

DEFAULT_CONFIG_PATH = "configs/default.json"


@dataclass
class EngineCaps:
    dp_width_cap: int = 22
    ryser_max_pairs: int = 16
    cross_check_max_pairs: int = 60
    auto_ryser_max_pairs: int = 10


@dataclass
class GridDefaults:
    max_xyz: int = 3
    max_lobe: int = 2
    max_k: int = 4
    jobs: int = 1


@dataclass
class FernhexConfig:
    engines: EngineCaps = field(default_factory=EngineCaps)
    grid: GridDefaults = field(default_factory=GridDefaults)
    storage_dir: str = "storage"
    log_level: str = "INFO"
    persist_counts: bool = False


def _non_negative(name: str, value: Any) -> int:
    try:
        number = int(value)
    except (TypeError, ValueError):
        raise InvalidInput(f"config field {name} must be an integer, got {value!r}")
    if number < 0:
        raise InvalidInput(f"config field {name} must be >= 0, got {number}")
    return number


def _env_override(name: str, current: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return current
    return _non_negative(name, raw)


def load_config(path: Optional[str] = None) -> FernhexConfig:
    path = path or os.environ.get("FERNHEX_CONFIG", DEFAULT_CONFIG_PATH)
    data: Dict[str, Any] = {}
    config_file = Path(path)
    if config_file.exists():
        try:
            with open(config_file, "r", encoding="utf-8") as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise InvalidInput(f"config file {path} is not valid JSON: {e}")

    engine_data = data.get("engines", {})
    engines = EngineCaps(
        dp_width_cap=_non_negative("dp_width_cap", engine_data.get("dp_width_cap", 22)),
        ryser_max_pairs=_non_negative("ryser_max_pairs", engine_data.get("ryser_max_pairs", 16)),
        cross_check_max_pairs=_non_negative(
            "cross_check_max_pairs", engine_data.get("cross_check_max_pairs", 60)
        ),
        auto_ryser_max_pairs=_non_negative(
            "auto_ryser_max_pairs", engine_data.get("auto_ryser_max_pairs", 10)
        ),
    )
    engines.dp_width_cap = _env_override("FERNHEX_DP_WIDTH_CAP", engines.dp_width_cap)
    engines.ryser_max_pairs = _env_override("FERNHEX_RYSER_CAP", engines.ryser_max_pairs)

    grid_data = data.get("grid", {})
    grid = GridDefaults(
        max_xyz=_non_negative("max_xyz", grid_data.get("max_xyz", 3)),
        max_lobe=_non_negative("max_lobe", grid_data.get("max_lobe", 2)),
        max_k=_non_negative("max_k", grid_data.get("max_k", 4)),
        jobs=max(1, _non_negative("jobs", grid_data.get("jobs", 1))),
    )

    return FernhexConfig(
        engines=engines,
        grid=grid,
        storage_dir=os.environ.get("FERNHEX_STORAGE") or data.get("storage_dir", "storage"),
        log_level=str(data.get("log_level", "INFO")).upper(),
        persist_counts=bool(data.get("persist_counts", False)),
    )


# Process-wide configuration, loaded on first use
_config: Optional[FernhexConfig] = None


def get_config() -> FernhexConfig:
    global _config
    if _config is None:
        _config = load_config()
    return _config


def set_config(cfg: Optional[FernhexConfig]) -> None:
    global _config
    _config = cfg
