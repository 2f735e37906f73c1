"""Per-run log capture into the output directory"""

import logging
from contextlib import contextmanager
from datetime import datetime
from pathlib import Path
from typing import Iterator


@contextmanager
def capture_run_log(out_dir: Path, name: str = "run.log") -> Iterator[Path]:
    """
    Attach a FileHandler to the root logger for the duration of a run.

    Everything logged by the engines while the block runs lands in
    out_dir/name; the handler is detached afterwards.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / name

    handler = logging.FileHandler(path, mode="w", encoding="utf-8")
    handler.setLevel(logging.DEBUG)
    handler.setFormatter(
        logging.Formatter(
            "%(asctime)s - %(name)s - %(levelname)s - %(message)s",
            datefmt="%Y-%m-%d %H:%M:%S",
        )
    )
    root_logger = logging.getLogger()
    root_logger.addHandler(handler)
    handler.stream.write(f"{'=' * 80}\nRun started: {datetime.now().isoformat()}\n{'=' * 80}\n")
    try:
        yield path
    finally:
        handler.stream.write(f"{'=' * 80}\nRun finished: {datetime.now().isoformat()}\n{'=' * 80}\n")
        root_logger.removeHandler(handler)
        handler.close()
