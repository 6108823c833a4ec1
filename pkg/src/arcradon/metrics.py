"""Image-quality metrics (PSNR, SSIM) and batch evaluation reports."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import gaussian_filter

# SSIM constants (Wang et al. configuration): 11 x 11 Gaussian window with
# sigma = 1.5 (truncate 3.5), K1 = 0.01, K2 = 0.03, dynamic range 1.
_SSIM_SIGMA = 1.5
_SSIM_TRUNCATE = 3.5
_SSIM_K1 = 0.01
_SSIM_K2 = 0.03
_SSIM_PAD = 5  # (11 - 1) // 2


def psnr(x: np.ndarray, ref: np.ndarray, peak: float = 1.0) -> float:
    """Peak signal-to-noise ratio in dB: 10 log10(peak^2 / MSE).

    Identical images (MSE = 0) report +inf.
    """
    x = np.asarray(x, dtype=float)
    ref = np.asarray(ref, dtype=float)
    if x.shape != ref.shape:
        raise ValueError(f"shape mismatch: {x.shape} vs {ref.shape}")
    if peak <= 0:
        raise ValueError("peak must be positive")
    mse = float(np.mean((x - ref) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(peak**2 / mse)


def ssim(x: np.ndarray, ref: np.ndarray) -> float:
    """Mean local structural similarity with a Gaussian window.

    Local means, variances and covariance come from Gaussian filtering
    (sigma 1.5, 11 x 11 support, reflect boundary); the map is averaged
    over the region where the window fits fully. Dynamic range is 1.
    """
    x = np.asarray(x, dtype=float)
    ref = np.asarray(ref, dtype=float)
    if x.shape != ref.shape:
        raise ValueError(f"shape mismatch: {x.shape} vs {ref.shape}")
    if min(x.shape) < 2 * _SSIM_PAD + 1:
        raise ValueError(f"images must be at least {2 * _SSIM_PAD + 1} pixels "
                         f"per side for the SSIM window, got {x.shape}")

    blur = lambda a: gaussian_filter(a, _SSIM_SIGMA, truncate=_SSIM_TRUNCATE)
    mu_x = blur(x)
    mu_r = blur(ref)
    var_x = blur(x * x) - mu_x * mu_x
    var_r = blur(ref * ref) - mu_r * mu_r
    cov = blur(x * ref) - mu_x * mu_r

    c1 = _SSIM_K1**2
    c2 = _SSIM_K2**2
    num = (2 * mu_x * mu_r + c1) * (2 * cov + c2)
    den = (mu_x**2 + mu_r**2 + c1) * (var_x + var_r + c2)
    smap = num / den
    p = _SSIM_PAD
    return float(smap[p:-p, p:-p].mean())


@dataclass(frozen=True)
class MetricReport:
    """Per-sample (psnr_db, ssim) pairs with population mean/std summaries."""

    per_sample: tuple
    mean_psnr: float
    std_psnr: float
    mean_ssim: float
    std_ssim: float


def evaluate_set(recons, truths) -> MetricReport:
    """Compute PSNR/SSIM per pair plus mean and population standard
    deviation over the set."""
    recons = list(recons)
    truths = list(truths)
    if len(recons) != len(truths):
        raise ValueError("reconstruction and truth counts differ")
    if not recons:
        raise ValueError("cannot evaluate an empty set")
    pairs = [(psnr(x, t), ssim(x, t)) for x, t in zip(recons, truths)]
    ps = np.array([p for p, _ in pairs])
    ss = np.array([s for _, s in pairs])
    if np.all(np.isfinite(ps)):
        mean_psnr, std_psnr = float(np.mean(ps)), float(np.std(ps))
    else:
        # exact matches carry the +inf sentinel; the spread is undefined
        # unless every sample matched exactly
        mean_psnr = math.inf
        std_psnr = 0.0 if np.all(np.isinf(ps)) else math.nan
    return MetricReport(
        per_sample=tuple(pairs),
        mean_psnr=mean_psnr,
        std_psnr=std_psnr,
        mean_ssim=float(np.mean(ss)),
        std_ssim=float(np.std(ss)),
    )


def format_report(name: str, report: MetricReport) -> str:
    """Render a report as a text table followed by one machine-readable
    line `name mean_psnr std_psnr mean_ssim std_ssim`."""
    lines = [f"{'sample':>8} {'psnr_db':>12} {'ssim':>10}"]
    for i, (p, s) in enumerate(report.per_sample):
        lines.append(f"{i:>8d} {p:>12.4f} {s:>10.6f}")
    lines.append(f"{'mean':>8} {report.mean_psnr:>12.4f} {report.mean_ssim:>10.6f}")
    lines.append(f"{'std':>8} {report.std_psnr:>12.4f} {report.std_ssim:>10.6f}")
    lines.append(report_line(name, report))
    return "\n".join(lines) + "\n"


def report_line(name: str, report: MetricReport) -> str:
    return (f"{name} {report.mean_psnr!r} {report.std_psnr!r} "
            f"{report.mean_ssim!r} {report.std_ssim!r}")


def parse_report_line(line: str):
    """Parse a machine-readable report line back into
    (name, mean_psnr, std_psnr, mean_ssim, std_ssim)."""
    parts = line.split()
    if len(parts) != 5:
        raise ValueError(f"expected 5 fields in report line, got {len(parts)}")
    return parts[0], float(parts[1]), float(parts[2]), float(parts[3]), float(parts[4])


def parse_report(text: str):
    """Extract the machine-readable summary from a rendered report."""
    for line in reversed(text.strip().splitlines()):
        parts = line.split()
        if len(parts) == 5 and parts[0] not in ("mean", "std", "sample"):
            try:
                return parts[0], *(float(v) for v in parts[1:])
            except ValueError:
                continue
    raise ValueError("no machine-readable report line found")
