"""Bounded observation windows on the complex plane.

Points are complex numbers (``x + 1j*y``).  Windows know their area, the
circumradius about the origin (used to size the sampling matrix), whether
they contain given points, and the area of overlap with a translate of
themselves (the translation edge-correction weight of spatial statistics).
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

__all__ = ["Window", "DiskWindow", "RectWindow", "disk_overlap_area"]


def disk_overlap_area(d, r1, r2):
    """Area of the intersection of two disks with radii r1, r2 at distance d.

    Broadcasts over all three arguments.  Classic lens formula; exact up to
    roundoff.
    """
    d, r1, r2 = np.broadcast_arrays(
        np.asarray(d, dtype=float), np.asarray(r1, dtype=float), np.asarray(r2, dtype=float)
    )
    rmin = np.minimum(r1, r2)
    rmax = np.maximum(r1, r2)
    out = np.zeros(d.shape)
    full = d <= rmax - rmin
    out[full] = np.pi * rmin[full] ** 2
    partial = (~full) & (d < r1 + r2)
    dp, p1, p2 = d[partial], r1[partial], r2[partial]
    # clip guards against roundoff outside [-1, 1] at tangency
    a1 = np.arccos(np.clip((dp * dp + p1 * p1 - p2 * p2) / (2.0 * dp * p1), -1.0, 1.0))
    a2 = np.arccos(np.clip((dp * dp + p2 * p2 - p1 * p1) / (2.0 * dp * p2), -1.0, 1.0))
    s = (-dp + p1 + p2) * (dp + p2 - p1) * (dp - p2 + p1) * (dp + p2 + p1)
    out[partial] = p1 * p1 * a1 + p2 * p2 * a2 - 0.5 * np.sqrt(np.clip(s, 0.0, None))
    if out.ndim == 0:
        return float(out)
    return out


class Window(ABC):
    """Abstract bounded observation window."""

    @property
    @abstractmethod
    def area(self) -> float:
        """Exact area of the window."""

    @property
    @abstractmethod
    def circumradius(self) -> float:
        """sup of |z| over the window (measured from the origin)."""

    @abstractmethod
    def contains(self, z) -> np.ndarray:
        """Boolean mask of points inside the window (boundary inclusive)."""

    @abstractmethod
    def covers_disk(self, radius: float, center: complex = 0j) -> bool:
        """True if the closed disk B(center, radius) lies inside the window."""

    @abstractmethod
    def translation_overlap(self, v) -> np.ndarray:
        """Area of the window intersected with itself translated by v."""

    @abstractmethod
    def sample_uniform(self, rng: np.random.Generator, n: int) -> np.ndarray:
        """n i.i.d. uniform points in the window, as complex numbers."""

    @abstractmethod
    def describe(self) -> dict:
        """JSON-serializable description."""


@dataclass(frozen=True)
class DiskWindow(Window):
    center: complex = 0j
    radius: float = 1.0

    def __post_init__(self):
        if not (self.radius > 0 and np.isfinite(self.radius)):
            raise ValueError(f"disk radius must be positive and finite, got {self.radius}")
        if not np.isfinite(complex(self.center)):
            raise ValueError("disk center must be finite")

    @property
    def area(self) -> float:
        return float(np.pi * self.radius**2)

    @property
    def circumradius(self) -> float:
        return float(abs(self.center) + self.radius)

    def contains(self, z) -> np.ndarray:
        z = np.asarray(z)
        return np.abs(z - self.center) <= self.radius

    def covers_disk(self, radius: float, center: complex = 0j) -> bool:
        return abs(center - self.center) + radius <= self.radius + 1e-12

    def translation_overlap(self, v) -> np.ndarray:
        return disk_overlap_area(np.abs(v), self.radius, self.radius)

    def sample_uniform(self, rng, n):
        r = self.radius * np.sqrt(rng.random(n))
        theta = rng.random(n) * (2.0 * np.pi)
        return self.center + r * np.exp(1j * theta)

    def describe(self) -> dict:
        return {
            "shape": "disk",
            "center": [self.center.real, self.center.imag],
            "radius": self.radius,
            "area": self.area,
        }


@dataclass(frozen=True)
class RectWindow(Window):
    xmin: float
    xmax: float
    ymin: float
    ymax: float

    def __post_init__(self):
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise ValueError("rectangle must have positive extent in both axes")
        if not all(np.isfinite([self.xmin, self.xmax, self.ymin, self.ymax])):
            raise ValueError("rectangle bounds must be finite")

    @property
    def area(self) -> float:
        return float((self.xmax - self.xmin) * (self.ymax - self.ymin))

    @property
    def circumradius(self) -> float:
        corners = np.array(
            [
                complex(self.xmin, self.ymin),
                complex(self.xmin, self.ymax),
                complex(self.xmax, self.ymin),
                complex(self.xmax, self.ymax),
            ]
        )
        return float(np.abs(corners).max())

    def contains(self, z) -> np.ndarray:
        z = np.asarray(z)
        return (
            (z.real >= self.xmin)
            & (z.real <= self.xmax)
            & (z.imag >= self.ymin)
            & (z.imag <= self.ymax)
        )

    def covers_disk(self, radius: float, center: complex = 0j) -> bool:
        return (
            center.real - radius >= self.xmin - 1e-12
            and center.real + radius <= self.xmax + 1e-12
            and center.imag - radius >= self.ymin - 1e-12
            and center.imag + radius <= self.ymax + 1e-12
        )

    def translation_overlap(self, v) -> np.ndarray:
        v = np.asarray(v)
        w = np.clip((self.xmax - self.xmin) - np.abs(v.real), 0.0, None)
        h = np.clip((self.ymax - self.ymin) - np.abs(v.imag), 0.0, None)
        out = w * h
        if out.ndim == 0:
            return float(out)
        return out

    def sample_uniform(self, rng, n):
        x = rng.uniform(self.xmin, self.xmax, n)
        y = rng.uniform(self.ymin, self.ymax, n)
        return x + 1j * y

    def describe(self) -> dict:
        return {
            "shape": "rectangle",
            "bounds": [self.xmin, self.xmax, self.ymin, self.ymax],
            "area": self.area,
        }


def window_from_dict(spec: dict) -> Window:
    """Inverse of ``Window.describe`` (used by config files)."""
    shape = spec.get("shape")
    if shape == "disk":
        cx, cy = spec.get("center", [0.0, 0.0])
        return DiskWindow(center=complex(cx, cy), radius=float(spec["radius"]))
    if shape == "rectangle":
        return RectWindow(*[float(b) for b in spec["bounds"]])
    raise ValueError(f"unknown window shape {shape!r} (expected 'disk' or 'rectangle')")
