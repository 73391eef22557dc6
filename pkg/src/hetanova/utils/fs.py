"""
File system utility functions for hetanova
"""

import json
import logging
from pathlib import Path

import numpy as np

# Configure logging
logger = logging.getLogger("hetanova")


def read_json(path) -> dict:
    """Load a JSON document from disk."""
    with open(path, "r") as f:
        return json.load(f)


def write_json(path, data: dict) -> Path:
    """Write a JSON document, creating parent directories."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(data, f, indent=2)
        f.write("\n")
    logger.debug(f"Wrote {path}")
    return path


def write_values(path, values) -> Path:
    """Write one float per line using repr precision."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    values = np.asarray(values, dtype=float).ravel()
    with open(path, "w") as f:
        for value in values:
            f.write(f"{float(value)!r}\n")
    logger.info(f"Wrote {values.size} values to {path}")
    return path
