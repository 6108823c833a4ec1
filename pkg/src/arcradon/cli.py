"""Command-line surface tying the toolkit together.

Subcommands: phantom, forward, tsvd, dataset, metrics, export. All
randomness sits behind explicit --seed flags; the ARCRADON_OUT environment
variable supplies the default output root.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import dataset as ds
from . import phantom as ph
from .forward import MeasurementGrid, Sinogram, add_noise, forward_transform
from .inversion import TsvdConfig, reconstruct
from .metrics import evaluate_set, format_report
from .tensorio import read_tensor, write_pgm, write_png, write_tensor


def _out_root(value):
    return Path(value if value is not None else os.environ.get("ARCRADON_OUT", "."))


def _cmd_phantom(args) -> int:
    rng = np.random.default_rng(args.seed)
    p = ph.shepp_logan_base()
    if not args.base:
        p = ph.perturb(p, rng)
        p = ph.augment(p, rng)
    out = _out_root(args.out)
    out.mkdir(parents=True, exist_ok=True)
    ph.save_phantom(out / "phantom.txt", p)
    write_tensor(out / "image.f32", ph.rasterize(p, args.side))
    print(f"wrote {out / 'phantom.txt'} and {out / 'image.f32'}")
    return 0


def _cmd_forward(args) -> int:
    p = ph.load_phantom(args.phantom)
    grid = (MeasurementGrid.full_view() if args.view == "full"
            else MeasurementGrid.limited_view())
    sino = forward_transform(p, grid)
    if args.noise > 0:
        sino = add_noise(sino, args.noise, np.random.default_rng(args.seed))
    write_tensor(args.out, sino.values)
    print(f"wrote {args.out} ({grid.n_rho}x{grid.n_phi}, view={args.view}, "
          f"noise={args.noise}%)")
    return 0


def _sinogram_from_file(path) -> Sinogram:
    values = read_tensor(path).astype(float)
    if values.shape == (128, 128):
        grid = MeasurementGrid.full_view()
    elif values.shape == (64, 64):
        grid = MeasurementGrid.limited_view()
    else:
        raise ValueError(f"{path}: sinogram shape {values.shape} is neither "
                         "128x128 (full) nor 64x64 (limited)")
    return Sinogram(grid=grid, values=values)


def _cmd_tsvd(args) -> int:
    sino = _sinogram_from_file(args.sinogram)
    rank = "half" if args.rank == "half" else int(args.rank)
    img, info = reconstruct(sino, TsvdConfig(rank=rank), full_output=True)
    write_tensor(args.out, img)
    if info["skipped_modes"]:
        print(f"warning: skipped modes {info['skipped_modes']}", file=sys.stderr)
    if args.pgm:
        write_pgm(args.pgm, img)
    print(f"wrote {args.out}")
    return 0


def _parse_counts(spec):
    counts = {}
    if spec:
        for part in spec.split(","):
            phase, _, num = part.partition("=")
            if not num:
                raise ValueError(f"bad counts entry {part!r}, expected phase=N")
            counts[phase.strip()] = int(num)
    return counts


def _cmd_dataset(args) -> int:
    if args.manifest:
        manifest = ds.load_manifest(args.manifest)
    else:
        counts = _parse_counts(args.counts)
        if args.full_scale:
            base = {p: ds.PAPER_COUNTS[p] for p in ds.parse_dataset_name(args.name)[0]}
            base.update(counts)
            counts = base
        manifest = ds.make_manifest(args.name, args.seed, counts or None)
    out = _out_root(args.out) / manifest.name
    path = ds.generate_dataset(manifest, out, workers=args.workers)
    print(f"wrote {len(manifest.samples)} samples under {out} (manifest {path})")
    return 0


def _cmd_metrics(args) -> int:
    recon_dir, truth_dir = Path(args.recon), Path(args.truth)
    names = sorted(p.name for p in recon_dir.glob("*.f32"))
    if not names:
        raise ValueError(f"no .f32 tensors found in {recon_dir}")
    recons = [read_tensor(recon_dir / n).astype(float) for n in names]
    truths = [read_tensor(truth_dir / n).astype(float) for n in names]
    report = evaluate_set(recons, truths)
    text = format_report(args.name, report)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    print(text, end="")
    return 0


def _cmd_export(args) -> int:
    values = read_tensor(args.tensor)
    suffix = Path(args.out).suffix.lower()
    if suffix == ".pgm":
        write_pgm(args.out, values)
    elif suffix == ".png":
        write_png(args.out, values)
    else:
        raise ValueError(f"unsupported preview format {suffix!r} (use .pgm or .png)")
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arcradon",
        description="Circular-arc transform toolkit: phantoms, forward "
                    "projection, TSVD inversion, datasets and metrics.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("phantom", help="emit a perturbed/augmented phantom and its raster")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--side", type=int, default=128)
    p.add_argument("--base", action="store_true", help="skip perturbation and augmentation")
    p.add_argument("--out", help="output directory (default ARCRADON_OUT or .)")
    p.set_defaults(func=_cmd_phantom)

    p = sub.add_parser("forward", help="project a phantom file to a sinogram")
    p.add_argument("phantom", help="phantom text record")
    p.add_argument("--view", choices=["full", "limited"], default="full")
    p.add_argument("--noise", type=float, default=0.0, help="noise level percent")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="sinogram.f32")
    p.set_defaults(func=_cmd_forward)

    p = sub.add_parser("tsvd", help="reconstruct an image from a sinogram file")
    p.add_argument("sinogram")
    p.add_argument("--rank", default="half", help="'half' or an integer rank")
    p.add_argument("--out", default="recon.f32")
    p.add_argument("--pgm", help="optional 8-bit PGM preview path")
    p.set_defaults(func=_cmd_tsvd)

    p = sub.add_parser("dataset", help="generate a named dataset")
    p.add_argument("--name", default="Train128c",
                   help="dataset name, e.g. Train128cn15 or Test64n5")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--counts", help="per-phase overrides, e.g. train=200,validation=50")
    p.add_argument("--full-scale", action="store_true",
                   help="use the full-size counts (2000/500/500) as the base")
    p.add_argument("--manifest", help="regenerate from an existing manifest.json")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="output root (default ARCRADON_OUT or .)")
    p.set_defaults(func=_cmd_dataset)

    p = sub.add_parser("metrics", help="evaluate reconstructions against truths")
    p.add_argument("--recon", required=True, help="directory of reconstruction tensors")
    p.add_argument("--truth", required=True, help="directory of matching truth tensors")
    p.add_argument("--name", default="run", help="label for the report line")
    p.add_argument("--out", help="optional report file")
    p.set_defaults(func=_cmd_metrics)

    p = sub.add_parser("export", help="render a tensor file as a PGM/PNG preview")
    p.add_argument("tensor")
    p.add_argument("--out", required=True, help="preview path ending in .pgm or .png")
    p.set_defaults(func=_cmd_export)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (OSError, ValueError, KeyError, RuntimeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
