"""
Result persistence helpers

1. Atomic text writes (temp file in the destination directory + os.replace)
2. CSV tables through pandas at full float precision
3. YAML manifests
"""

import os
import tempfile
from pathlib import Path
from typing import Any, Dict

import pandas as pd
import yaml

FLOAT_FORMAT = "%.17g"


def atomic_write_text(path: Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def write_csv(df: pd.DataFrame, path: Path) -> Path:
    return atomic_write_text(path, df.to_csv(index=False, float_format=FLOAT_FORMAT))


def read_csv(path: Path) -> pd.DataFrame:
    return pd.read_csv(path)


def write_manifest(manifest: Dict[str, Any], path: Path) -> Path:
    return atomic_write_text(path, yaml.safe_dump(manifest, sort_keys=False, default_flow_style=False))
