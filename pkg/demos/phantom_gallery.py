#!/usr/bin/env python3
"""Gallery of analytic phantoms: the base head phantom, a randomized
perturbation, and a rigid-motion augmentation of it."""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

import arcradon as ar

out_dir = Path(__file__).parent / "output"
out_dir.mkdir(exist_ok=True)

rng = np.random.default_rng(7)

base = ar.shepp_logan_base()
perturbed = ar.perturb(base, rng)
moved = ar.augment(perturbed, rng)

fig, axes = plt.subplots(1, 3, figsize=(12, 4))
for ax, (title, p) in zip(axes, [("base", base),
                                 ("perturbed", perturbed),
                                 ("perturbed + rigid motion", moved)]):
    ax.imshow(ar.rasterize(p, 128), cmap="gray", vmin=0, vmax=1, extent=(-1, 1, -1, 1))
    ax.set_title(title)
    ax.axis("off")
fig.tight_layout()
fig.savefig(out_dir / "phantom_gallery.png", dpi=150)
print(f"saved {out_dir / 'phantom_gallery.png'}")

# the analytic model also evaluates off-grid: profile along the x axis
x = np.linspace(-1, 1, 1024)
profile = ar.eval_point(moved, x, np.zeros_like(x))
fig, ax = plt.subplots(figsize=(7, 3))
ax.plot(x, profile, lw=1)
ax.set_xlabel("x")
ax.set_ylabel("f(x, 0)")
ax.set_title("analytic cross-section (no pixelization)")
fig.tight_layout()
fig.savefig(out_dir / "phantom_profile.png", dpi=150)
print(f"saved {out_dir / 'phantom_profile.png'}")
