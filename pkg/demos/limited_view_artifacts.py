#!/usr/bin/env python3
"""Limited-view inversion: with half the angular range (zero-filled before
the angular transform) and half the radial sampling, the TSVD
reconstruction collapses into artifacts."""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

import arcradon as ar

out_dir = Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)

rng = np.random.default_rng(13)
p = ar.augment(ar.perturb(ar.shepp_logan_base(), rng), rng)
truth = ar.rasterize(p, 128)

full = ar.forward_transform(p, ar.MeasurementGrid.full_view())
limited = ar.forward_transform(p, ar.MeasurementGrid.limited_view())

recon_full = ar.reconstruct(full)
recon_lim = ar.reconstruct(limited)

fig, axes = plt.subplots(1, 3, figsize=(12, 4))
for ax, (title, img) in zip(axes, [
    ("truth", truth),
    (f"full view TSVD\nssim {ar.ssim(recon_full, truth):.3f}", recon_full),
    (f"limited view TSVD\nssim {ar.ssim(recon_lim, truth):.3f}", recon_lim),
]):
    ax.imshow(img, cmap="gray", vmin=0, vmax=1)
    ax.set_title(title)
    ax.axis("off")
fig.tight_layout()
fig.savefig(out_dir / "limited_view.png", dpi=150)
print(f"saved {out_dir / 'limited_view.png'}")
