"""Plain-text CSV with ``# key=value`` metadata header lines."""
from __future__ import annotations

import csv
from pathlib import Path
from typing import Any, Dict, Mapping, Sequence

import numpy as np


def _fmt(value: Any) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (list, tuple, np.ndarray)):
        return ",".join(_fmt(v) for v in value)
    return str(value)


def write_csv(path, columns: Mapping[str, Sequence], meta: Mapping[str, Any]) -> Path:
    """Write equal-length ``columns`` under a metadata header; returns the path."""
    path = Path(path)
    names = list(columns)
    data = [np.asarray(columns[n]) for n in names]
    if len({d.shape for d in data}) > 1:
        raise ValueError("columns must have equal length")
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        for key, value in meta.items():
            fh.write(f"# {key}={_fmt(value)}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(names)
        for row in zip(*data):
            writer.writerow([_fmt(v) for v in row])
    return path


def read_csv(path) -> tuple[Dict[str, str], Dict[str, np.ndarray]]:
    """Inverse of :func:`write_csv`; metadata values come back as strings."""
    meta: Dict[str, str] = {}
    with open(path, newline="") as fh:
        lines = fh.read().splitlines()
    body = []
    for line in lines:
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            meta[key] = value
        elif line.strip():
            body.append(line)
    rows = list(csv.reader(body))
    if not rows:
        return meta, {}
    names, values = rows[0], np.array(rows[1:], dtype=float).reshape(-1, len(rows[0]))
    return meta, {name: values[:, i] for i, name in enumerate(names)}
