"""Deterministic dataset factory for paired (image, measurement) samples.

Datasets follow the naming scheme {PHASE}{N_Y}{NOISE-TYPE}: Train128cn15
holds training-phase samples at measurement resolution 128 mixing clean
and 15%-noise measurements, Test64n5 holds test samples at resolution 64
with 5% noise only. Mixed datasets interleave noise levels so each level
receives exactly the same number of samples.

Every sample is regenerable from (master_seed, sample id) alone, so any
subset of ids can be produced independently, in any order, by any number
of workers, with byte-identical results.
"""

from __future__ import annotations

import hashlib
import json
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import phantom as ph
from .forward import MeasurementGrid, Sinogram, add_noise, forward_transform
from .tensorio import TensorFormatError, read_tensor, write_tensor

GROUND_TRUTH_SIDE = 128

DESK_COUNTS = {"train": 200, "validation": 50, "test": 50}
PAPER_COUNTS = {"train": 2000, "validation": 500, "test": 500}

TABLE_NAMES = (
    "Train128c", "Train128cn15", "Test128c", "Test128n5", "Test128n15",
    "Train64cn15", "Test64n5", "Test64n15",
)

_NAME_RE = re.compile(r"^(Train|Test)(64|128)(c|n\d+|cn\d+)$")


@dataclass(frozen=True)
class SampleRecord:
    id: str
    phase: str
    seed: int
    noise_level_percent: float
    x_file: str
    y_file: str


@dataclass(frozen=True)
class DatasetManifest:
    name: str
    n_y: int
    view: str
    noise_levels_percent: tuple
    counts: dict
    master_seed: int
    samples: tuple


def parse_dataset_name(name: str):
    """Split a dataset name into (phases, n_y, noise levels)."""
    m = _NAME_RE.match(name)
    if m is None:
        raise ValueError(f"dataset name {name!r} does not match "
                         "{{Train|Test}}{{64|128}}{{c|nP|cnP}}")
    phase_tag, n_y, noise_tag = m.group(1), int(m.group(2)), m.group(3)
    phases = ("train", "validation") if phase_tag == "Train" else ("test",)
    if noise_tag == "c":
        levels = (0.0,)
    elif noise_tag.startswith("cn"):
        levels = (0.0, float(noise_tag[2:]))
    else:
        levels = (float(noise_tag[1:]),)
    return phases, n_y, levels


def sample_seed(master_seed: int, sample_id: str) -> int:
    """Order-independent 64-bit per-sample seed."""
    digest = hashlib.blake2b(f"{master_seed}:{sample_id}".encode(), digest_size=8)
    return int.from_bytes(digest.digest(), "little")


def make_manifest(name: str, master_seed: int, counts: dict | None = None) -> DatasetManifest:
    """Build a manifest for a named dataset.

    counts overrides the desk-scale defaults (200 train / 50 validation /
    50 test) per phase; pass PAPER_COUNTS values for the full-size sets.
    Counts of mixed clean/noisy datasets must divide evenly across the
    noise levels.
    """
    phases, n_y, levels = parse_dataset_name(name)
    chosen = {p: DESK_COUNTS[p] for p in phases}
    if counts:
        for p, c in counts.items():
            if p not in phases:
                raise ValueError(f"phase {p!r} not part of dataset {name}")
            chosen[p] = int(c)
    records = []
    for p in phases:
        if chosen[p] <= 0:
            raise ValueError(f"count for phase {p!r} must be positive")
        if chosen[p] % len(levels) != 0:
            raise ValueError(f"count {chosen[p]} for phase {p!r} does not split "
                             f"evenly over noise levels {levels}")
        for k in range(chosen[p]):
            sid = f"{p}-{k:05d}"
            records.append(SampleRecord(
                id=sid,
                phase=p,
                seed=sample_seed(master_seed, sid),
                noise_level_percent=levels[k % len(levels)],
                x_file=f"x_{sid}.f32",
                y_file=f"y_{sid}.f32",
            ))
    return DatasetManifest(
        name=name,
        n_y=n_y,
        view="full" if n_y == GROUND_TRUTH_SIDE else "limited",
        noise_levels_percent=levels,
        counts=chosen,
        master_seed=int(master_seed),
        samples=tuple(records),
    )


def measurement_grid(manifest: DatasetManifest) -> MeasurementGrid:
    return (MeasurementGrid.full_view() if manifest.view == "full"
            else MeasurementGrid.limited_view())


def generate_sample(seed: int, noise_level_percent: float, view: str):
    """Produce one (image, sinogram) pair from its provenance.

    Pipeline: base phantom -> random perturbation -> random rigid motion ->
    rasterize the truth and project the measurement (noise added last).
    Returns float32 arrays (x, y).
    """
    rng = np.random.default_rng(seed)
    p = ph.augment(ph.perturb(ph.shepp_logan_base(), rng), rng)
    x = ph.rasterize(p, GROUND_TRUTH_SIDE)
    grid = (MeasurementGrid.full_view() if view == "full"
            else MeasurementGrid.limited_view())
    sino = forward_transform(p, grid)
    if noise_level_percent > 0:
        sino = add_noise(sino, noise_level_percent, rng)
    return x.astype("<f4"), sino.values.astype("<f4")


def _worker(args):
    seed, level, view = args
    return generate_sample(seed, level, view)


def generate_dataset(manifest: DatasetManifest, out_dir, workers: int = 1) -> Path:
    """Generate every sample of the manifest under out_dir.

    Sample content depends only on (master_seed, id), so worker count and
    generation order never change the emitted bytes. The completed manifest
    is written last as manifest.json; on failure the error names the last
    sample whose files were completed, for resume.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    specs = [(r.seed, r.noise_level_percent, manifest.view) for r in manifest.samples]
    last_done = None
    try:
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = pool.map(_worker, specs, chunksize=4)
                for rec, (x, y) in zip(manifest.samples, results):
                    write_tensor(out / rec.x_file, x)
                    write_tensor(out / rec.y_file, y)
                    last_done = rec.id
        else:
            for rec, spec in zip(manifest.samples, specs):
                x, y = _worker(spec)
                write_tensor(out / rec.x_file, x)
                write_tensor(out / rec.y_file, y)
                last_done = rec.id
    except OSError as err:
        raise RuntimeError(f"dataset generation aborted after sample "
                           f"{last_done!r}: {err}") from err
    path = out / "manifest.json"
    save_manifest(path, manifest)
    return path


def save_manifest(path, manifest: DatasetManifest) -> None:
    doc = asdict(manifest)
    doc["noise_levels_percent"] = list(manifest.noise_levels_percent)
    doc["samples"] = [asdict(r) for r in manifest.samples]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_manifest(path) -> DatasetManifest:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    samples = tuple(SampleRecord(**r) for r in doc["samples"])
    return DatasetManifest(
        name=doc["name"],
        n_y=int(doc["n_y"]),
        view=doc["view"],
        noise_levels_percent=tuple(doc["noise_levels_percent"]),
        counts={k: int(v) for k, v in doc["counts"].items()},
        master_seed=int(doc["master_seed"]),
        samples=samples,
    )


@dataclass(frozen=True)
class SamplePair:
    """One dataset pair: ground-truth image, measurement, and the record
    it can be regenerated from."""

    x: np.ndarray
    y: Sinogram
    record: SampleRecord


def read_sample(dataset_dir, sample_id: str) -> SamplePair:
    """Load a sample pair and validate shapes against the manifest."""
    root = Path(dataset_dir)
    manifest = load_manifest(root / "manifest.json")
    matches = [r for r in manifest.samples if r.id == sample_id]
    if not matches:
        raise KeyError(f"sample {sample_id!r} not in manifest {manifest.name}")
    rec = matches[0]
    try:
        x = read_tensor(root / rec.x_file)
        y = read_tensor(root / rec.y_file)
    except TensorFormatError as err:
        raise TensorFormatError(f"sample {sample_id!r}: {err}") from err
    if x.shape != (GROUND_TRUTH_SIDE, GROUND_TRUTH_SIDE):
        raise ValueError(f"sample {sample_id!r}: truth shape {x.shape} is not "
                         f"({GROUND_TRUTH_SIDE}, {GROUND_TRUTH_SIDE})")
    if y.shape != (manifest.n_y, manifest.n_y):
        raise ValueError(f"sample {sample_id!r}: measurement shape {y.shape} "
                         f"does not match N_Y = {manifest.n_y}")
    grid = measurement_grid(manifest)
    sino = Sinogram(grid=grid, values=y.astype(float),
                    noise_level_percent=rec.noise_level_percent)
    return SamplePair(x=x.astype(float), y=sino, record=rec)
