"""Forward circular-arc transform over detector-centered circles.

The measurement geometry: detectors sit on the boundary of the unit disk
at polar angles phi, and each sample integrates the image along the part
of the circle of radius rho < R (centered at the detector) that lies
inside the disk. Measurements therefore cover the partial radial range
(0, R) instead of (0, 2R).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .phantom import EllipsePhantom, eval_point

FULL_VIEW_SIDE = 128
LIMITED_VIEW_SIDE = 64

# Arc quadrature: midpoint nodes spaced at half a pixel width of the
# 128-grid, never fewer than 32 per arc.
_NODE_SPACING = 1.0 / 128.0
_MIN_NODES = 32


@dataclass(frozen=True)
class MeasurementGrid:
    """Sampling of (rho, phi) space.

    rho samples are cell-centered on (0, rho_max): rho_i = (i + 1/2) * rho_max / n_rho.
    phi samples start at 0: phi_j = j * phi_span / n_phi.
    """

    view: str
    n_rho: int
    n_phi: int
    rho_max: float = 1.0
    phi_span: float = 2.0 * math.pi
    R: float = 1.0

    def __post_init__(self):
        if self.view not in ("full", "limited"):
            raise ValueError(f"view must be 'full' or 'limited', got {self.view!r}")
        if not 0 < self.rho_max <= self.R:
            raise ValueError("need 0 < rho_max <= R")

    @classmethod
    def full_view(cls) -> "MeasurementGrid":
        """128 x 128 samples of [0, 1] x [0, 2pi)."""
        return cls(view="full", n_rho=FULL_VIEW_SIDE, n_phi=FULL_VIEW_SIDE)

    @classmethod
    def limited_view(cls) -> "MeasurementGrid":
        """64 x 64 samples of [0, 1] x [0, pi): half the angular range,
        coarser by a factor of two in rho."""
        return cls(view="limited", n_rho=LIMITED_VIEW_SIDE, n_phi=LIMITED_VIEW_SIDE,
                   phi_span=math.pi)

    @property
    def rho(self) -> np.ndarray:
        return (np.arange(self.n_rho) + 0.5) * self.rho_max / self.n_rho

    @property
    def phi(self) -> np.ndarray:
        return np.arange(self.n_phi) * self.phi_span / self.n_phi


@dataclass(frozen=True)
class Sinogram:
    """Measured values on a grid: values[i, j] = g(rho_i, phi_j)."""

    grid: MeasurementGrid
    values: np.ndarray
    noise_level_percent: float = 0.0

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.n_rho, self.grid.n_phi):
            raise ValueError(f"sinogram shape {v.shape} does not match grid "
                             f"({self.grid.n_rho}, {self.grid.n_phi})")
        if not np.all(np.isfinite(v)):
            raise ValueError("sinogram values must be finite")
        object.__setattr__(self, "values", v)


def arc_halfwidth(rho: float, R: float = 1.0) -> float:
    """Half-angle of the arc of the measurement circle inside the disk.

    A point at angle psi from the circle center (psi = pi pointing back
    toward the origin) lies inside the disk iff cos(psi) <= -rho / (2R),
    so the interior arc spans psi in [pi - w, pi + w] with
    w = arccos(rho / (2R)).
    """
    if rho <= 0 or rho > 2.0 * R:
        raise ValueError(f"need 0 < rho <= 2R, got rho={rho}, R={R}")
    return math.acos(rho / (2.0 * R))


def _arc_nodes(rho: float, R: float, oversample: float):
    """Midpoint angular offsets (relative to the inward direction) and the
    angular step for the interior arc of radius rho."""
    w = arc_halfwidth(rho, R)
    length = 2.0 * rho * w
    m = max(_MIN_NODES, math.ceil(length * oversample / _NODE_SPACING))
    dt = 2.0 * w / m
    return -w + (np.arange(m) + 0.5) * dt, dt


def forward_transform(phantom, grid: MeasurementGrid, oversample: float = 1.0) -> Sinogram:
    """Integrate the phantom along interior arcs for every grid sample.

    Parameters
    ----------
    phantom : EllipsePhantom or callable
        Image to project. A callable must accept broadcastable arrays
        (x, y) and return values of the same shape.
    grid : MeasurementGrid
    oversample : float
        Multiplier on the arc node density (1.0 = default density).

    Returns
    -------
    Sinogram with noise_level_percent = 0.
    """
    if isinstance(phantom, EllipsePhantom):
        f = lambda x, y: eval_point(phantom, x, y)
    elif callable(phantom):
        f = phantom
    else:
        raise TypeError("phantom must be an EllipsePhantom or a callable f(x, y)")

    R = grid.R
    phi = grid.phi
    cx, cy = R * np.cos(phi), R * np.sin(phi)
    out = np.empty((grid.n_rho, grid.n_phi))
    for i, rho in enumerate(grid.rho):
        offsets, dt = _arc_nodes(rho, R, oversample)
        # arc direction angles for every (detector, node) pair
        t = phi[:, None] + math.pi + offsets[None, :]
        px = cx[:, None] + rho * np.cos(t)
        py = cy[:, None] + rho * np.sin(t)
        out[i, :] = f(px, py).sum(axis=1) * rho * dt
    return Sinogram(grid=grid, values=out, noise_level_percent=0.0)


def add_noise(s: Sinogram, level_percent: float, rng) -> Sinogram:
    """Add i.i.d. Gaussian noise of standard deviation
    sqrt(level_percent / 100) * max|g| to every entry.

    level_percent = 100 * sigma^2 where sigma is the noise standard
    deviation relative to the peak magnitude of the clean sinogram.
    """
    if level_percent < 0:
        raise ValueError("noise level must be non-negative")
    if level_percent == 0:
        return replace(s, noise_level_percent=0.0)
    sigma = math.sqrt(level_percent / 100.0)
    scale = float(np.max(np.abs(s.values)))
    noisy = s.values + sigma * scale * rng.standard_normal(s.values.shape)
    return replace(s, values=noisy, noise_level_percent=float(level_percent))
