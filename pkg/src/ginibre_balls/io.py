"""CSV/JSON persistence with byte-stable formatting.

Floats are written with repr-faithful precision (%.17g), so identical runs
produce identical bytes, and a run directory always contains a ``run.json``
echoing every parameter (including derived defaults) needed to reproduce it.
"""

from __future__ import annotations

import json
import os

import numpy as np

from .ginibre import PointPattern
from .radii import MarkedPattern
from .windows import window_from_dict

__all__ = [
    "write_pattern_csv",
    "read_pattern_csv",
    "write_marked_csv",
    "read_marked_csv",
    "write_values_csv",
    "read_values_csv",
    "write_json",
    "read_json",
    "pattern_summary",
]

_FMT = "%.17g"


def _fmt(x: float) -> str:
    return _FMT % x


def write_pattern_csv(pattern: PointPattern, path: str) -> None:
    with open(path, "w") as fh:
        fh.write("re,im\n")
        for z in pattern.points:
            fh.write(f"{_fmt(z.real)},{_fmt(z.imag)}\n")


def read_pattern_csv(path: str, window_spec: dict, c: float, alpha: float = 1.0) -> PointPattern:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    pts = data[:, 0] + 1j * data[:, 1] if data.size else np.zeros(0, dtype=complex)
    return PointPattern(points=pts, window=window_from_dict(window_spec), c=c, alpha=alpha)


def write_marked_csv(marked: MarkedPattern, path: str) -> None:
    with open(path, "w") as fh:
        fh.write("re,im,radius\n")
        for z, r in zip(marked.centers, marked.radii):
            fh.write(f"{_fmt(z.real)},{_fmt(z.imag)},{_fmt(r)}\n")


def read_marked_csv(path: str) -> tuple[np.ndarray, np.ndarray]:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.size == 0:
        return np.zeros(0, dtype=complex), np.zeros(0)
    return data[:, 0] + 1j * data[:, 1], data[:, 2]


def write_values_csv(values, path: str) -> None:
    values = np.asarray(values, dtype=float)
    with open(path, "w") as fh:
        fh.write("replicate_id,value\n")
        for i, v in enumerate(values):
            fh.write(f"{i},{_fmt(v)}\n")


def read_values_csv(path: str) -> np.ndarray:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.size == 0:
        return np.zeros(0)
    return data[:, 1]


def write_json(obj: dict, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def pattern_summary(pattern: PointPattern, seed) -> dict:
    return {
        "count": int(len(pattern)),
        "c": pattern.c,
        "alpha": pattern.alpha,
        "window": pattern.window.describe(),
        "seed": seed,
    }


def ensure_dir(path: str) -> str:
    os.makedirs(path, exist_ok=True)
    return path
