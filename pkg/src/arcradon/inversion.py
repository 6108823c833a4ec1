"""Half-rank truncated-SVD solution of the per-mode Volterra systems and
reassembly of the image on the Cartesian ground-truth grid."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .forward import Sinogram
from .volterra import angular_fourier, assemble_all_modes

GROUND_TRUTH_SIDE = 128


@dataclass(frozen=True)
class TsvdConfig:
    """Reconstruction settings.

    rank : "half" keeps floor(n_rho / 2) singular values per mode;
        an integer fixes the retained rank instead.
    output_side : side of the Cartesian output raster.
    n_modes : number of non-negative modes inverted; None means every mode
        below the angular Nyquist (the Nyquist mode itself is dropped, its
        phase being ambiguous for real data).
    """

    rank: object = "half"
    output_side: int = GROUND_TRUTH_SIDE
    n_modes: int | None = None


def resolve_rank(rank, dim: int) -> int:
    if rank == "half":
        return dim // 2
    k = int(rank)
    if not 1 <= k <= dim:
        raise ValueError(f"rank must be in [1, {dim}], got {k}")
    return k


def tsvd_solve(A: np.ndarray, b: np.ndarray, rank: int) -> np.ndarray:
    """Least-squares solution of A x = b restricted to the top singular
    directions.

    Computes A = U S V^T, keeps the `rank` largest singular values and
    returns V S_k^{-1} U^T b. A complex right-hand side is handled by
    applying the real truncated pseudo-inverse to its real and imaginary
    parts (equivalently, directly to the complex vector).
    """
    A = np.asarray(A, dtype=float)
    n = min(A.shape)
    if not 1 <= rank <= n:
        raise ValueError(f"rank must be in [1, {n}], got {rank}")
    U, sv, Vt = np.linalg.svd(A, full_matrices=False)
    return Vt[:rank].T @ ((U[:, :rank].T @ b) / sv[:rank])


@lru_cache(maxsize=8)
def _mode_pinvs(view: str, n_rho: int, n_phi: int, rho_max: float, R: float,
                rank_key, n_modes: int):
    """Truncated pseudo-inverses of the mode matrices for one grid shape.

    The matrices depend only on the rho grid, so they are assembled and
    decomposed once and reused across sinograms.
    """
    rho = (np.arange(n_rho) + 0.5) * rho_max / n_rho
    mats = assemble_all_modes(n_modes, rho, R)
    rank = resolve_rank(rank_key, n_rho)
    pinvs = np.zeros_like(mats)
    failed = []
    for n in range(n_modes):
        try:
            U, sv, Vt = np.linalg.svd(mats[n], full_matrices=False)
        except np.linalg.LinAlgError:
            failed.append(n)
            continue
        pinvs[n] = (Vt[:rank].T / sv[:rank]) @ U[:, :rank].T
    return mats, pinvs, tuple(failed)


def polar_to_cartesian(values: np.ndarray, r: np.ndarray, side: int,
                       R: float = 1.0) -> np.ndarray:
    """Resample a polar field onto the Cartesian pixel grid of [-1, 1]^2.

    values[k, j] samples radius r[k] (strictly increasing) and angle
    theta_j = 2*pi*j/n_theta. Interpolation is bilinear with periodic wrap
    in theta; radii between r[-1] and R hold the outermost sample, pixels
    with radius beyond R or below r[0] are set to 0.
    """
    values = np.asarray(values, dtype=float)
    r = np.asarray(r, dtype=float)
    if np.any(np.diff(r) <= 0):
        raise ValueError("radial samples must be strictly increasing")
    n_r, n_theta = values.shape

    coords = -1.0 + (2.0 * np.arange(side) + 1.0) / side
    x = coords[None, :]
    y = coords[::-1][:, None]
    rad = np.hypot(x, y)
    ang = np.mod(np.arctan2(y, x), 2.0 * math.pi)

    # fractional radial index, clamped to the sample range (hold at edges)
    ir = np.clip(np.searchsorted(r, rad) - 1, 0, n_r - 2)
    r_lo = r[ir]
    tr = np.clip((rad - r_lo) / (r[ir + 1] - r_lo), 0.0, 1.0)

    ft = ang * n_theta / (2.0 * math.pi)
    it = np.floor(ft).astype(int) % n_theta
    tt = ft - np.floor(ft)
    it1 = (it + 1) % n_theta

    img = ((1 - tr) * (1 - tt) * values[ir, it]
           + (1 - tr) * tt * values[ir, it1]
           + tr * (1 - tt) * values[ir + 1, it]
           + tr * tt * values[ir + 1, it1])
    img[(rad > R) | (rad < r[0])] = 0.0
    return img


def solve_modes(s: Sinogram, cfg: TsvdConfig | None = None):
    """Angular Fourier decomposition plus per-mode truncated-SVD solves.

    Returns (spectrum, skipped): spectrum[i, k] holds the solved F_n at
    u = rho_i with modes in FFT order over the synthesis length, and
    skipped lists modes dropped because their SVD failed. The matrices
    depend on |n| only and real data gives conjugate-symmetric
    coefficients, so negative modes reuse the |n| pseudo-inverse.
    """
    if cfg is None:
        cfg = TsvdConfig()
    grid = s.grid
    modes = angular_fourier(s)
    length = len(modes)
    n_modes = cfg.n_modes if cfg.n_modes is not None else length // 2 - 1

    coeffs = {m.n: m.values for m in modes}
    _, pinvs, failed = _mode_pinvs(grid.view, grid.n_rho, grid.n_phi,
                                   grid.rho_max, grid.R, cfg.rank, n_modes + 1)

    skipped = [n for n in failed if n <= n_modes]
    spectrum = np.zeros((grid.n_rho, length), dtype=complex)
    for n in range(n_modes + 1):
        if n in skipped:
            continue
        spectrum[:, n % length] = pinvs[n] @ coeffs[n]
        if n > 0:
            spectrum[:, -n % length] = pinvs[n] @ coeffs[-n]
    return spectrum, skipped


def reconstruct(s: Sinogram, cfg: TsvdConfig | None = None, full_output: bool = False):
    """Invert a sinogram: angular Fourier decomposition, per-mode truncated
    SVD solves, inverse angular synthesis and polar-to-Cartesian resampling.

    Returns the reconstructed image clipped to [0, 1] (shape
    cfg.output_side squared). With full_output=True also returns an info
    dict with the modes skipped due to SVD failures (normally empty).
    """
    if cfg is None:
        cfg = TsvdConfig()
    spectrum, skipped = solve_modes(s, cfg)
    length = spectrum.shape[1]

    # F_n is sampled at u = rho, i.e. radius r = R - rho (descending)
    f_polar = np.real(np.fft.ifft(spectrum, axis=1) * length)
    rho = s.grid.rho
    r = s.grid.R - rho
    img = polar_to_cartesian(f_polar[::-1], r[::-1], cfg.output_side, s.grid.R)
    img = np.clip(img, 0.0, 1.0)
    if full_output:
        return img, {"skipped_modes": skipped}
    return img
