"""Exponential spatial correlation and regular-dodecahedron geometry.

The correlation law exp(-d**alpha / theta) drives every distance-to-correlation
conversion in the package; the dodecahedron constants size node sensing ranges.
All functions here are pure and safe to call from any thread.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Regular dodecahedron with edge length 1.
CIRCUMRADIUS_PER_EDGE = math.sqrt(3.0) * (1.0 + math.sqrt(5.0)) / 4.0
VOLUME_PER_EDGE_CUBED = (15.0 + 7.0 * math.sqrt(5.0)) / 4.0

_PHI = (1.0 + math.sqrt(5.0)) / 2.0


@dataclass(frozen=True)
class CorrelationModel:
    """Exponential correlation model with range parameter theta and smoothness alpha."""

    theta: float
    alpha: float = 1.0

    def __post_init__(self):
        if not (self.theta > 0.0):
            raise ValueError(f"theta must be positive, got {self.theta}")
        if not (0.0 < self.alpha <= 2.0):
            raise ValueError(f"alpha must lie in (0, 2], got {self.alpha}")


@dataclass(frozen=True)
class Dodecahedron:
    """Regular dodecahedron described by its edge length in meters."""

    edge: float

    def __post_init__(self):
        if not (self.edge > 0.0):
            raise ValueError(f"edge must be positive, got {self.edge}")


@dataclass(frozen=True)
class EventSource:
    """Point event at a 3D position with a correlation threshold tau_e in (0, 1]."""

    position: tuple[float, float, float]
    tau_e: float = 0.85

    def __post_init__(self):
        if len(self.position) != 3 or not all(math.isfinite(c) for c in self.position):
            raise ValueError(f"position must be a finite 3D point, got {self.position}")
        if not (0.0 < self.tau_e <= 1.0):
            raise ValueError(f"tau_e must lie in (0, 1], got {self.tau_e}")


def correlation(model: CorrelationModel, d):
    """Correlation coefficient exp(-d**alpha / theta) at distance d >= 0.

    Accepts a scalar or an array of distances; equals 1 at d = 0 and decreases
    strictly toward 0 as d grows.
    """
    arr = np.asarray(d, dtype=float)
    if np.any(arr < 0.0):
        raise ValueError("distance must be non-negative")
    out = np.exp(-(arr ** model.alpha) / model.theta)
    return float(out) if np.isscalar(d) or arr.ndim == 0 else out


def correlation_radius(model: CorrelationModel, tau: float) -> float:
    """Distance at which the correlation drops to tau: (theta * ln(1/tau))**(1/alpha).

    Inverse of :func:`correlation` for tau in (0, 1); tau = 1 maps to 0.
    """
    if not (0.0 < tau <= 1.0):
        raise ValueError(f"tau must lie in (0, 1], got {tau}")
    if tau == 1.0:
        return 0.0
    return (model.theta * math.log(1.0 / tau)) ** (1.0 / model.alpha)


def event_volume(model: CorrelationModel, tau_e: float) -> float:
    """Volume of the sphere inside which correlation with the event stays >= tau_e."""
    r = correlation_radius(model, tau_e)
    return 4.0 / 3.0 * math.pi * r**3


def dodeca_circumradius(d: Dodecahedron) -> float:
    """Radius of the sphere through the 20 vertices: edge * (sqrt(3)/4)(1 + sqrt(5))."""
    return CIRCUMRADIUS_PER_EDGE * d.edge


def dodeca_edge_from_circumradius(r: float) -> float:
    """Edge length of the regular dodecahedron with circumradius r (exact inverse)."""
    if r < 0.0:
        raise ValueError(f"circumradius must be non-negative, got {r}")
    return r / CIRCUMRADIUS_PER_EDGE


def dodeca_volume(d: Dodecahedron) -> float:
    """Volume edge**3 * (15 + 7*sqrt(5)) / 4 of the regular dodecahedron."""
    return VOLUME_PER_EDGE_CUBED * d.edge**3


def dodeca_vertices(edge: float = 1.0) -> np.ndarray:
    """The 20 vertices of a regular dodecahedron with the given edge, centered at 0.

    Uses the classic construction from cube corners (+-1, +-1, +-1) plus the
    golden-rectangle points; that set has edge 2/phi and is rescaled.
    """
    if edge <= 0.0:
        raise ValueError(f"edge must be positive, got {edge}")
    inv = 1.0 / _PHI
    pts = []
    for sx in (-1.0, 1.0):
        for sy in (-1.0, 1.0):
            for sz in (-1.0, 1.0):
                pts.append((sx, sy, sz))
    for a in (-inv, inv):
        for b in (-_PHI, _PHI):
            pts.append((0.0, a, b))
            pts.append((a, b, 0.0))
            pts.append((b, 0.0, a))
    scale = edge / (2.0 / _PHI)
    return np.asarray(pts) * scale
