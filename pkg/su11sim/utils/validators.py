"""Input file and path validation utilities."""

import json
import logging
import os
from typing import Dict

logger = logging.getLogger(__name__)


def validate_json_file(path: str) -> Dict[str, any]:
    """Validate that a file exists and holds well-formed JSON.

    Returns:
        Dict with 'valid' (bool), 'size' (int), 'error' (Optional[str])
    """
    if not os.path.exists(path):
        return {"valid": False, "size": 0, "error": "File not found"}

    size = os.path.getsize(path)
    if size == 0:
        return {"valid": False, "size": 0, "error": "File is empty"}

    if size > 50 * 1024 * 1024:  # 50MB max for tabulated data
        return {"valid": False, "size": size, "error": "File exceeds 50MB limit"}

    ext = os.path.splitext(path)[1].lower()
    if ext != ".json":
        return {"valid": False, "size": size, "error": f"Unsupported format: {ext}"}

    try:
        with open(path, "r") as f:
            json.load(f)
    except json.JSONDecodeError as e:
        return {"valid": False, "size": size, "error": f"line {e.lineno}, column {e.colno}: {e.msg}"}

    return {"valid": True, "size": size, "error": None}


def validate_output_dir(path: str) -> Dict[str, any]:
    """Validate (and create) an output directory.

    Returns:
        Dict with 'valid' (bool), 'path' (str), 'error' (Optional[str])
    """
    if not path or not path.strip():
        return {"valid": False, "path": path, "error": "Output directory is empty"}

    if os.path.exists(path) and not os.path.isdir(path):
        return {"valid": False, "path": path, "error": "Path exists and is not a directory"}

    try:
        os.makedirs(path, exist_ok=True)
    except OSError as e:
        return {"valid": False, "path": path, "error": str(e)}

    if not os.access(path, os.W_OK):
        return {"valid": False, "path": path, "error": "Directory is not writable"}

    return {"valid": True, "path": os.path.abspath(path), "error": None}


def parse_gamma_range(spec: str) -> Dict[str, any]:
    """Parse a ``start:stop[:lin|log[:count]]`` gain range.

    Returns:
        Dict with 'valid' (bool), 'start', 'stop', 'scale', 'count',
        'error' (Optional[str])
    """
    parts = [p.strip() for p in spec.split(":")]
    result = {"valid": False, "start": None, "stop": None, "scale": "log", "count": 12, "error": None}
    if len(parts) < 2 or len(parts) > 4:
        result["error"] = "Expected start:stop[:lin|log[:count]]"
        return result

    try:
        start, stop = float(parts[0]), float(parts[1])
    except ValueError:
        result["error"] = f"Non-numeric bounds in '{spec}'"
        return result

    if start <= 0 or stop <= start:
        result["error"] = "Bounds must satisfy 0 < start < stop"
        return result

    if len(parts) >= 3:
        if parts[2] not in ("lin", "log"):
            result["error"] = f"Unknown scale '{parts[2]}'"
            return result
        result["scale"] = parts[2]

    if len(parts) == 4:
        try:
            count = int(parts[3])
        except ValueError:
            result["error"] = f"Non-integer count '{parts[3]}'"
            return result
        if count < 2:
            result["error"] = "Count must be at least 2"
            return result
        result["count"] = count

    result.update({"valid": True, "start": start, "stop": stop})
    return result
