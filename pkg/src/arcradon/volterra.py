"""Per-mode reduction of the arc-transform inversion.

An angular Fourier decomposition turns the 2-D integral equation into a
family of 1-D first-kind Volterra equations

    g_n(rho) = int_0^rho K_n(rho, u) F_n(u) / sqrt(rho - u) du,

one per angular mode n, where F_n(u) = f_n(R - u) and the kernel K_n
involves a Chebyshev polynomial of the geometry. The weakly singular
1/sqrt(rho - u) factor is integrated analytically by a product
trapezoidal rule, producing one lower-triangular matrix per mode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .forward import Sinogram

# Tolerance for the Chebyshev argument: roundoff near u -> 0 or u -> rho
# can push the argument marginally outside [-1, 1].
_CHEB_TOL = 1e-9


@dataclass(frozen=True)
class ModeCoefficients:
    """Angular Fourier coefficients of one mode over the rho grid."""

    n: int
    values: np.ndarray


def _transform_length(s: Sinogram) -> int:
    # limited-view samples cover only half a period and are zero-extended
    return s.grid.n_phi if s.grid.view == "full" else 2 * s.grid.n_phi


def angular_fourier(s: Sinogram) -> list:
    """Discrete Fourier transform over the angular samples of each rho row.

    Uses the convention g_n(rho_i) = (1/N) sum_j g(rho_i, phi_j) e^{-i n phi_j}
    over a full 2*pi period of N samples. Limited-view sinograms are
    zero-extended to a full period (N = 2 * n_phi) before transforming.

    Returns a list of ModeCoefficients for n in {-N/2, ..., N/2 - 1}.
    """
    length = _transform_length(s)
    vals = s.values
    if length != s.grid.n_phi:
        vals = np.concatenate([vals, np.zeros_like(vals)], axis=1)
    coeffs = np.fft.fft(vals, axis=1) / length
    modes = []
    for n in range(-length // 2, length // 2):
        modes.append(ModeCoefficients(n=n, values=coeffs[:, n % length].copy()))
    return modes


def angular_synthesis(modes, length: int | None = None) -> np.ndarray:
    """Inverse of :func:`angular_fourier`: rebuild g(rho_i, phi_j) from mode
    coefficients on the N-point angular grid phi_j = 2*pi*j/N.

    Missing modes are treated as zero, so a truncated mode set yields the
    band-limited synthesis. Returns the real part (imaginary residuals of
    conjugate-symmetric inputs are discarded).
    """
    if length is None:
        length = len(modes)
    n_rho = len(modes[0].values)
    spectrum = np.zeros((n_rho, length), dtype=complex)
    for m in modes:
        spectrum[:, m.n % length] = m.values
    return np.real(np.fft.ifft(spectrum, axis=1) * length)


def chebyshev_T(n: int, x):
    """Chebyshev polynomial of the first kind, T_n(x) = cos(n arccos x).

    x may be a scalar or array; values within 1e-9 of [-1, 1] are clamped,
    anything further out raises ValueError.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(np.abs(arr) > 1.0 + _CHEB_TOL):
        worst = float(arr.flat[np.argmax(np.abs(arr))])
        raise ValueError(f"Chebyshev argument {worst} outside [-1, 1] tolerance")
    out = np.cos(abs(n) * np.arccos(np.clip(arr, -1.0, 1.0)))
    return out if out.ndim else float(out)


def _kernel_parts(rho, u, R):
    """Geometric factor and Chebyshev angle of the mode kernels.

    The kernels share K_n = geom * cos(n * theta); splitting them lets all
    modes reuse one geometry evaluation.
    """
    rho = np.asarray(rho, dtype=float)
    u = np.asarray(u, dtype=float)
    radicand = (u + rho) * (2.0 * R + rho - u) * (2.0 * R - rho - u)
    if np.any(radicand <= 0):
        raise ValueError("kernel evaluated outside the Volterra triangle "
                         "(0 <= u <= rho < R)")
    arg = ((R - u) ** 2 + R**2 - rho**2) / (2.0 * R * (R - u))
    if np.any(np.abs(arg) > 1.0 + _CHEB_TOL):
        raise ValueError("Chebyshev argument outside [-1, 1]: geometry violates "
                         "the kernel domain")
    theta = np.arccos(np.clip(arg, -1.0, 1.0))
    geom = 4.0 * rho * (R - u) / np.sqrt(radicand)
    return geom, theta


def kernel_K(n: int, rho, u, R: float = 1.0):
    """Smooth factor of the mode-n Volterra kernel (singular 1/sqrt(rho-u)
    excluded). rho and u may be scalars or broadcastable arrays."""
    geom, theta = _kernel_parts(rho, u, R)
    out = geom * np.cos(abs(n) * theta)
    return out if out.ndim else float(out)


def singular_moments(rho: float, u_lo: float, u_hi: float):
    """Exact moments of the singular weight over [u_lo, u_hi]:

        m0 = int (rho - u)^(-1/2) du
        m1 = int u (rho - u)^(-1/2) du

    Both stay finite when u_hi == rho.
    """
    if u_hi > rho:
        raise ValueError(f"upper limit {u_hi} exceeds the singularity at {rho}")
    if u_lo >= u_hi:
        raise ValueError("need u_lo < u_hi")
    s_lo = math.sqrt(rho - u_lo)
    s_hi = math.sqrt(rho - u_hi)
    m0 = 2.0 * (s_lo - s_hi)
    m1 = 2.0 * rho * (s_lo - s_hi) - (2.0 / 3.0) * (s_lo**3 - s_hi**3)
    return m0, m1


def u_grid(rho: np.ndarray) -> np.ndarray:
    """Integration grid: the rho samples prefixed with u_0 = 0, so the
    singular endpoint u = rho_i of every row coincides with a node."""
    return np.concatenate([[0.0], np.asarray(rho, dtype=float)])


def _product_weights(rho: np.ndarray) -> np.ndarray:
    """Product-trapezoidal weights w[i, j] such that

        sum_j w[i, j] H(u_j)  ~=  int_0^{rho_i} H(u) (rho_i - u)^(-1/2) du

    for H piecewise linear on the u grid. Shape (n_rho, n_rho + 1);
    w[i, j] = 0 whenever u_j > rho_i.
    """
    rho = np.asarray(rho, dtype=float)
    u = u_grid(rho)
    n = len(rho)
    w = np.zeros((n, n + 1))
    for i in range(n):
        lo = u[: i + 1]
        hi = u[1 : i + 2]
        h = hi - lo
        s_lo = np.sqrt(rho[i] - lo)
        s_hi = np.sqrt(np.maximum(rho[i] - hi, 0.0))
        m0 = 2.0 * (s_lo - s_hi)
        m1 = 2.0 * rho[i] * (s_lo - s_hi) - (2.0 / 3.0) * (s_lo**3 - s_hi**3)
        w[i, : i + 1] += (hi * m0 - m1) / h
        w[i, 1 : i + 2] += (m1 - lo * m0) / h
    return w


def assemble_matrix(n: int, rho: np.ndarray, R: float = 1.0, kernel=None) -> np.ndarray:
    """Discretize the mode-n Volterra integral by the product trapezoidal rule.

    On each subinterval of the u grid ({0} followed by the rho samples) the
    smooth part K_n(rho_i, u) F_n(u) is treated linearly and the singular
    weight (rho_i - u)^(-1/2) is integrated exactly.

    Parameters
    ----------
    n : mode index (the matrix depends on |n| only).
    rho : strictly increasing samples in (0, R).
    R : acquisition radius.
    kernel : optional replacement for :func:`kernel_K` with the same
        signature; used for surrogate checks of the quadrature weights.

    Returns
    -------
    (n_rho, n_rho + 1) array; column j multiplies F_n(u_j) with u_j the
    j-th node of :func:`u_grid`. Entries with u_j > rho_i are zero.
    """
    rho = np.asarray(rho, dtype=float)
    if rho.ndim != 1 or np.any(np.diff(rho) <= 0) or rho[0] <= 0 or rho[-1] >= R:
        raise ValueError("rho must be strictly increasing within (0, R)")
    if kernel is None:
        kernel = kernel_K
    u = u_grid(rho)
    w = _product_weights(rho)
    kv = np.zeros_like(w)
    rows, cols = np.nonzero(w)
    kv[rows, cols] = kernel(n, rho[rows], u[cols], R)
    return w * kv


def system_matrix(n: int, rho: np.ndarray, R: float = 1.0) -> np.ndarray:
    """Square lower-triangular mode-n matrix acting on F_n at the rho
    samples. The u = 0 column is dropped: F_n(0) = f_n(R) vanishes for
    fields supported strictly inside the disk."""
    return assemble_matrix(n, rho, R)[:, 1:]


def assemble_all_modes(n_modes: int, rho: np.ndarray, R: float = 1.0) -> np.ndarray:
    """Square system matrices for modes 0 .. n_modes - 1 in one pass.

    Shares the quadrature weights and kernel geometry across modes (the
    kernels differ only through cos(n * theta)). Returns an array of shape
    (n_modes, n_rho, n_rho) with entry [n] equal to system_matrix(n, rho, R).
    """
    rho = np.asarray(rho, dtype=float)
    u = u_grid(rho)
    w = _product_weights(rho)
    geom = np.zeros_like(w)
    theta = np.zeros_like(w)
    rows, cols = np.nonzero(w)
    geom[rows, cols], theta[rows, cols] = _kernel_parts(rho[rows], u[cols], R)
    wg = w * geom
    out = np.empty((n_modes, len(rho), len(rho)))
    for n in range(n_modes):
        out[n] = (wg * np.cos(n * theta))[:, 1:]
    return out
