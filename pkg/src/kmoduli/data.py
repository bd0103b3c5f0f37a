"""Location and loading of the bundled JSON data.

Set ``KMODULI_DATA_DIR`` to point every loader at another directory with the
same layout (used by the CLI negative controls and by downstream users who
want to perturb the ledger).
"""

from __future__ import annotations

import json
import os
from importlib import resources
from pathlib import Path
from typing import Any

ENV_VAR = "KMODULI_DATA_DIR"


def data_dir() -> Path:
    override = os.environ.get(ENV_VAR)
    if override:
        return Path(override)
    return Path(str(resources.files("kmoduli") / "data"))


def load_json(name: str) -> Any:
    path = data_dir() / name
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def dumps(obj: Any) -> str:
    """Byte-stable JSON text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
