"""Circular-arc Radon transform toolkit for disk-boundary measurements:
analytic phantoms, the forward projector, spectral Volterra inversion by
truncated SVD, image metrics, and a deterministic dataset factory."""

from .phantom import (
    Ellipse,
    EllipsePhantom,
    augment,
    eval_point,
    load_phantom,
    perturb,
    pixel_centers,
    rasterize,
    rigid_transform,
    save_phantom,
    shepp_logan_base,
)
from .forward import (
    MeasurementGrid,
    Sinogram,
    add_noise,
    arc_halfwidth,
    forward_transform,
)
from .volterra import (
    ModeCoefficients,
    angular_fourier,
    angular_synthesis,
    assemble_matrix,
    chebyshev_T,
    kernel_K,
    singular_moments,
    system_matrix,
    u_grid,
)
from .inversion import TsvdConfig, polar_to_cartesian, reconstruct, tsvd_solve
from .metrics import MetricReport, evaluate_set, format_report, parse_report, psnr, ssim
from .dataset import (
    DatasetManifest,
    SamplePair,
    SampleRecord,
    generate_dataset,
    generate_sample,
    load_manifest,
    make_manifest,
    read_sample,
    sample_seed,
    save_manifest,
)
from .tensorio import read_tensor, write_pgm, write_png, write_tensor

__version__ = "0.1.0"
