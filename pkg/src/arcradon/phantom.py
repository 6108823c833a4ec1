"""Analytic ellipse phantoms: the standard head phantom, randomized
perturbation, rigid-motion augmentation, point evaluation and rasterization.

A phantom is a superposition of ellipse indicator functions with signed
intensities, scaled by a global factor so that rasterized values stay in
[0, 1]. All geometry lives on the Cartesian square [-1, 1]^2 and the
support of a usable phantom is contained in the open unit disk.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

# Standard ten-ellipse head phantom (Toft's tabulation): intensity,
# semi-axes (a, b), center (c, d), tilt in degrees.
_HEAD_TABLE = [
    # I       a       b       c      d       tilt_deg
    (1.00, 0.6900, 0.9200, 0.00, 0.0000, 0.0),
    (-0.98, 0.6624, 0.8740, 0.00, -0.0184, 0.0),
    (-0.02, 0.1100, 0.3100, 0.22, 0.0000, -18.0),
    (-0.02, 0.1600, 0.4100, -0.22, 0.0000, 18.0),
    (0.01, 0.2100, 0.2500, 0.00, 0.3500, 0.0),
    (0.01, 0.0460, 0.0460, 0.00, 0.1000, 0.0),
    (0.01, 0.0460, 0.0460, 0.00, -0.1000, 0.0),
    (0.01, 0.0460, 0.0230, -0.08, -0.6050, 0.0),
    (0.01, 0.0230, 0.0230, 0.00, -0.6060, 0.0),
    (0.01, 0.0230, 0.0460, 0.06, -0.6050, 0.0),
]

GROUND_TRUTH_SIDE = 128

# Perturbation step sizes per parameter: center, semi-axes, tilt, intensity.
_CENTER_STEP = 0.01
_AXIS_STEP = 0.01
_TILT_STEP = 0.08
_INTENSITY_STEP = 0.001

# Augmentation translation range in pixels of the 128-grid.
_SHIFT_PIXELS = 15


@dataclass(frozen=True)
class Ellipse:
    """One ellipse: center (c, d), semi-axes (a, b) > 0, tilt psi in
    radians, signed intensity."""

    c: float
    d: float
    a: float
    b: float
    psi: float
    intensity: float

    def __post_init__(self):
        if self.a <= 0 or self.b <= 0:
            raise ValueError(f"semi-axes must be positive, got a={self.a}, b={self.b}")

    def boundary_points(self, n=256):
        """Sample n points on the ellipse boundary (used for support checks)."""
        t = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
        ex, ey = self.a * np.cos(t), self.b * np.sin(t)
        cp, sp = math.cos(self.psi), math.sin(self.psi)
        return self.c + cp * ex - sp * ey, self.d + sp * ex + cp * ey


@dataclass(frozen=True)
class EllipsePhantom:
    """Ordered list of ellipses plus a global intensity scale applied at
    evaluation time."""

    ellipses: tuple
    intensity_scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "ellipses", tuple(self.ellipses))
        if self.intensity_scale <= 0:
            raise ValueError("intensity_scale must be positive")


def shepp_logan_base() -> EllipsePhantom:
    """Return the ten-ellipse standard head phantom with unit intensity scale."""
    ellipses = [
        Ellipse(c=c, d=d, a=a, b=b, psi=math.radians(deg), intensity=inten)
        for inten, a, b, c, d, deg in _HEAD_TABLE
    ]
    return EllipsePhantom(ellipses=tuple(ellipses), intensity_scale=1.0)


def eval_point(p: EllipsePhantom, x, y):
    """Evaluate the phantom at point(s) (x, y).

    Returns intensity_scale times the signed sum of intensities of the
    ellipses containing the point. Accepts scalars or numpy arrays
    (broadcast together); the return matches the broadcast shape.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = np.zeros(np.broadcast(x, y).shape, dtype=float)
    for e in p.ellipses:
        dx = x - e.c
        dy = y - e.d
        cp, sp = math.cos(e.psi), math.sin(e.psi)
        u = (dx * cp + dy * sp) / e.a
        v = (-dx * sp + dy * cp) / e.b
        out += e.intensity * (u * u + v * v <= 1.0)
    out *= p.intensity_scale
    return out if out.ndim else float(out)


def pixel_centers(n: int):
    """Pixel-center coordinates of the n x n raster on [-1, 1]^2.

    Returns (x, y) 1-d arrays; pixel (i, j) is centered at (x[j], y[i])
    with y decreasing down the rows.
    """
    x = -1.0 + (2.0 * np.arange(n) + 1.0) / n
    y = 1.0 - (2.0 * np.arange(n) + 1.0) / n
    return x, y


def rasterize(p: EllipsePhantom, n: int) -> np.ndarray:
    """Evaluate the phantom at the pixel centers of an n x n grid.

    Output values are clipped to [0, 1] (negative excursions from signed
    intensities are clamped, as are rescale residuals above 1).
    """
    if n < 2:
        raise ValueError("raster side must be at least 2")
    x, y = pixel_centers(n)
    img = eval_point(p, x[None, :], y[:, None])
    return np.clip(img, 0.0, 1.0)


def support_radius(p: EllipsePhantom, samples_per_ellipse=512) -> float:
    """Largest distance from the origin over all ellipse boundaries."""
    r = 0.0
    for e in p.ellipses:
        bx, by = e.boundary_points(samples_per_ellipse)
        r = max(r, float(np.max(np.hypot(bx, by))))
    return r


def normalize_intensity(p: EllipsePhantom, probe_side=256) -> EllipsePhantom:
    """Recompute the intensity scale so rasterized values stay within [0, 1].

    The maximum is probed on a dense grid; the scale shrinks only when the
    probe maximum exceeds 1 (values already in range are left untouched).
    """
    probe = eval_point(replace(p, intensity_scale=1.0),
                       *np.meshgrid(*pixel_centers(probe_side), indexing="xy"))
    peak = float(probe.max())
    scale = 1.0 / peak if peak > 1.0 else 1.0
    return replace(p, intensity_scale=scale)


def perturb(p: EllipsePhantom, rng, max_retries=100) -> EllipsePhantom:
    """Randomly offset every ellipse of the phantom.

    Per ellipse, six independent uniform draws on [-0.5, 0.5] offset the
    center (step 0.01), the semi-axes (step 0.01), the tilt (step 0.08 rad)
    and the intensity (step 0.001). The intensity scale is then recomputed
    so the rasterized phantom stays in [0, 1]. Draws that would produce a
    non-positive semi-axis are rejected and redrawn.
    """
    k = len(p.ellipses)
    for _ in range(max_retries):
        sigma = rng.uniform(-0.5, 0.5, size=(k, 6))
        new = []
        ok = True
        for e, s in zip(p.ellipses, sigma):
            a = e.a + _AXIS_STEP * s[2]
            b = e.b + _AXIS_STEP * s[3]
            if a <= 0 or b <= 0:
                ok = False
                break
            new.append(Ellipse(
                c=float(e.c + _CENTER_STEP * s[0]),
                d=float(e.d + _CENTER_STEP * s[1]),
                a=float(a),
                b=float(b),
                psi=float(e.psi + _TILT_STEP * s[4]),
                intensity=float(e.intensity + _INTENSITY_STEP * s[5]),
            ))
        if ok:
            return normalize_intensity(replace(p, ellipses=tuple(new)))
    raise RuntimeError(f"perturbation produced degenerate semi-axes {max_retries} times")


def rigid_transform(p: EllipsePhantom, alpha: float, n_px: int, m_px: int) -> EllipsePhantom:
    """Rotate the phantom by alpha radians about the origin and translate by
    (n_px, m_px) pixels of the 128-grid (2/128 physical units per pixel)."""
    ca, sa = math.cos(alpha), math.sin(alpha)
    tx = 2.0 * n_px / GROUND_TRUTH_SIDE
    ty = 2.0 * m_px / GROUND_TRUTH_SIDE
    moved = tuple(
        replace(e,
                c=ca * e.c - sa * e.d + tx,
                d=sa * e.c + ca * e.d + ty,
                psi=e.psi + alpha)
        for e in p.ellipses
    )
    return replace(p, ellipses=moved)


def augment(p: EllipsePhantom, rng) -> EllipsePhantom:
    """Apply a random rigid motion: rotation angle uniform on [-0.5, 0.5]
    radians, then integer pixel shifts uniform on {-15, ..., 15}."""
    alpha = float(rng.uniform(-0.5, 0.5))
    n_px = int(rng.integers(-_SHIFT_PIXELS, _SHIFT_PIXELS + 1))
    m_px = int(rng.integers(-_SHIFT_PIXELS, _SHIFT_PIXELS + 1))
    return rigid_transform(p, alpha, n_px, m_px)


def save_phantom(path, p: EllipsePhantom) -> None:
    """Write the phantom as a text record: a header line with the intensity
    scale, then one `c d a b psi I` line per ellipse (full precision)."""
    lines = [f"intensity_scale {float(p.intensity_scale)!r}"]
    for e in p.ellipses:
        fields = (e.c, e.d, e.a, e.b, e.psi, e.intensity)
        lines.append(" ".join(repr(float(v)) for v in fields))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def load_phantom(path) -> EllipsePhantom:
    """Read a phantom text record written by :func:`save_phantom`."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or not lines[0].startswith("intensity_scale"):
        raise ValueError(f"{path}: missing intensity_scale header")
    scale = float(lines[0].split()[1])
    ellipses = []
    for ln in lines[1:]:
        vals = [float(tok) for tok in ln.split()]
        if len(vals) != 6:
            raise ValueError(f"{path}: expected 6 values per ellipse line, got {len(vals)}")
        c, d, a, b, psi, inten = vals
        ellipses.append(Ellipse(c=c, d=d, a=a, b=b, psi=psi, intensity=inten))
    return EllipsePhantom(ellipses=tuple(ellipses), intensity_scale=scale)
