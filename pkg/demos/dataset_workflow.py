#!/usr/bin/env python3
"""End-to-end dataset workflow: generate a small named dataset, read a
sample back, run TSVD over the test split, and print a metric report."""

import tempfile
from pathlib import Path

import numpy as np

import arcradon as ar

with tempfile.TemporaryDirectory() as tmp:
    manifest = ar.make_manifest("Test128n15", master_seed=2024, counts={"test": 6})
    root = Path(tmp) / manifest.name
    ar.generate_dataset(manifest, root, workers=2)
    print(f"generated {len(manifest.samples)} samples under {root}")

    pair = ar.read_sample(root, manifest.samples[0].id)
    print(f"sample {pair.record.id}: x {pair.x.shape}, y {pair.y.values.shape}, "
          f"noise {pair.record.noise_level_percent}%")

    recons, truths = [], []
    for rec in manifest.samples:
        sample = ar.read_sample(root, rec.id)
        recons.append(ar.reconstruct(sample.y))
        truths.append(sample.x)
    report = ar.evaluate_set(recons, truths)
    print(ar.format_report(manifest.name, report))
