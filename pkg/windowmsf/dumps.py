"""
JSON files for counterexample logs.
"""

import json
import os
from typing import Any, Dict, Optional

from windowmsf.models import CommandLog

DEFAULT_DIR = "./dumps"


def _get_path(name: str, directory: Optional[str] = None) -> str:
    if name.endswith(".json") or os.sep in name:
        return name
    return os.path.join(directory or DEFAULT_DIR, f"{name}.json")


def load_json(name: str, directory: Optional[str] = None) -> Dict[str, Any]:
    path = _get_path(name, directory)
    if not os.path.exists(path):
        return {}
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def save_json(name: str, data: Dict[str, Any], directory: Optional[str] = None) -> str:
    path = _get_path(name, directory)
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        json.dump(data, f, indent=2)
    return path


def save_log(name: str, log: CommandLog, directory: Optional[str] = None) -> str:
    return save_json(name, log.model_dump(mode="json"), directory)


def load_log(name: str, directory: Optional[str] = None) -> Optional[CommandLog]:
    data = load_json(name, directory)
    if not data:
        return None
    return CommandLog.model_validate(data)
