import logging
import os
from typing import Dict, List, Tuple

logging.basicConfig(
    level=os.environ.get("RAINBOW_LOG_LEVEL", "INFO").upper(),
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s'
)

# file handler -> (previous root level, console handlers pinned to that level)
_saved_levels: Dict[logging.Handler, Tuple[int, List[logging.Handler]]] = {}


def add_log_file(path: str, level: int = logging.INFO) -> logging.Handler:
    """
    Attach a file handler at `level` to the root logger.

    When the root logger is quieter than `level` it is lowered for the lifetime of
    the handler; the handlers already attached keep the previous level.
    """
    handler = logging.FileHandler(path, mode="w", encoding="utf-8")
    handler.setFormatter(logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s'))
    handler.setLevel(level)
    root = logging.getLogger()
    previous = root.level
    pinned: List[logging.Handler] = []
    if root.getEffectiveLevel() > level:
        for existing in root.handlers:
            if existing.level == logging.NOTSET:
                existing.setLevel(root.getEffectiveLevel())
                pinned.append(existing)
        root.setLevel(level)
    _saved_levels[handler] = (previous, pinned)
    root.addHandler(handler)
    return handler


def remove_log_file(handler: logging.Handler) -> None:
    root = logging.getLogger()
    root.removeHandler(handler)
    handler.close()
    previous, pinned = _saved_levels.pop(handler, (root.level, []))
    root.setLevel(previous)
    for existing in pinned:
        existing.setLevel(logging.NOTSET)
