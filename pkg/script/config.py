"""
Configuration loading for metallic-tiler.

Settings live in ``config/config.json`` and are merged over DEFAULT_CONFIG,
so a partial file only overrides the keys it names.
"""
import copy
import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional, Union

from script.logger import logger

APP_DIR = Path(__file__).parent.parent
CONFIG_FILE = APP_DIR / 'config' / 'config.json'

DEFAULT_CONFIG: Dict[str, Any] = {
    'logging': {
        'level': 'INFO',
        'to_file': False,
        'directory': 'logs',
        'max_files': 10,
    },
    'parallel': {
        'enabled': False,
        'max_workers': 0,
        'chunk_size': 2048,
    },
    'induction': {
        'return_time_cap_factor': 10,
    },
    'averages': {
        'tolerance': '1/50',
        'horizons': [100, 1000, 10000],
    },
    'render': {
        'tile_size': 48,
        'partition_size': 600,
        'stroke_width': 1,
        'font_size': 10,
        'png_density': 96,
    },
}


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config(path: Optional[Union[str, Path]] = None) -> Dict[str, Any]:
    """Load configuration from a JSON file, falling back to the defaults."""
    config_file = Path(path) if path else CONFIG_FILE
    config: Dict[str, Any] = {}

    if config_file.exists():
        try:
            with open(config_file, 'r', encoding='utf-8') as f:
                config = json.load(f)
            if not isinstance(config, dict):
                logger.warning(f"Ignoring config {config_file}: top level is not an object")
                config = {}
        except (json.JSONDecodeError, IOError) as e:
            logger.warning(f"Error loading config {config_file}: {e}")
            config = {}

    return _merge(DEFAULT_CONFIG, config)


def setting(config: Dict[str, Any], dotted_key: str, default: Any = None) -> Any:
    """Look up ``section.key`` in a loaded configuration."""
    node: Any = config
    for part in dotted_key.split('.'):
        if not isinstance(node, dict) or part not in node:
            return default
        node = node[part]
    return node


def tolerance(config: Dict[str, Any]) -> Fraction:
    return Fraction(str(setting(config, 'averages.tolerance', '1/50')))


def return_time_cap(config: Dict[str, Any], n: int) -> int:
    return int(setting(config, 'induction.return_time_cap_factor', 10)) * (n + 2)
