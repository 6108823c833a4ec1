import math

import numpy as np
import pytest
from skimage.metrics import peak_signal_noise_ratio as sk_psnr
from skimage.metrics import structural_similarity as sk_ssim

import arcradon as ar
from arcradon.metrics import parse_report_line, report_line


def random_pair(seed, side=96):
    rng = np.random.default_rng(seed)
    x = rng.uniform(0, 1, size=(side, side))
    ref = np.clip(x + 0.1 * rng.standard_normal((side, side)), 0, 1)
    return x, ref


def test_psnr_identical_is_infinite():
    x = np.random.default_rng(0).uniform(0, 1, (32, 32))
    assert ar.psnr(x, x.copy()) == math.inf


def test_psnr_uniform_error():
    ref = np.zeros((16, 16))
    x = np.full((16, 16), 0.1)
    assert ar.psnr(x, ref, peak=1.0) == pytest.approx(20.0)


def test_psnr_matches_reference_implementation():
    for seed in range(10):
        x, ref = random_pair(seed)
        assert ar.psnr(x, ref) == pytest.approx(
            sk_psnr(ref, x, data_range=1.0), abs=1e-9)


def test_psnr_shape_and_peak_validation():
    with pytest.raises(ValueError):
        ar.psnr(np.zeros((4, 4)), np.zeros((5, 5)))
    with pytest.raises(ValueError):
        ar.psnr(np.zeros((4, 4)), np.zeros((4, 4)), peak=0.0)


def test_psnr_decreases_with_noise():
    rng = np.random.default_rng(1)
    ref = rng.uniform(0, 1, (64, 64))
    values = []
    for sigma in (0.01, 0.05, 0.1):
        x = ref + sigma * np.random.default_rng(2).standard_normal(ref.shape)
        values.append(ar.psnr(x, ref))
    assert values[0] > values[1] > values[2]


def test_ssim_identical_is_one():
    x = np.random.default_rng(3).uniform(0, 1, (64, 64))
    assert ar.ssim(x, x.copy()) == pytest.approx(1.0)


def test_ssim_inverted_image_below_one():
    x = ar.rasterize(ar.shepp_logan_base(), 128)
    assert ar.ssim(1.0 - x, x) < 1.0


def test_ssim_matches_reference_implementation():
    for seed in range(10):
        x, ref = random_pair(seed)
        ref_val = sk_ssim(x, ref, data_range=1.0, gaussian_weights=True,
                          sigma=1.5, use_sample_covariance=False)
        assert ar.ssim(x, ref) == pytest.approx(ref_val, abs=1e-6)


def test_ssim_symmetric():
    x, ref = random_pair(11)
    assert ar.ssim(x, ref) == pytest.approx(ar.ssim(ref, x), abs=1e-12)


def test_ssim_joint_shift_nearly_invariant():
    rng = np.random.default_rng(12)
    x = 0.3 + 0.3 * rng.uniform(0, 1, (64, 64))
    ref = np.clip(x + 0.05 * rng.standard_normal((64, 64)), 0, 1)
    base = ar.ssim(x, ref)
    joint = ar.ssim(x + 0.2, ref + 0.2)
    single = ar.ssim(x + 0.2, ref)
    assert abs(joint - base) < 0.05
    assert abs(joint - base) < abs(single - base)


def test_ssim_range():
    for seed in range(5):
        x, ref = random_pair(seed)
        assert -1.0 <= ar.ssim(x, ref) <= 1.0


def test_evaluate_set_single_identical():
    x = np.random.default_rng(4).uniform(0, 1, (32, 32))
    report = ar.evaluate_set([x], [x.copy()])
    assert report.mean_ssim == pytest.approx(1.0)
    assert report.std_ssim == 0.0
    assert report.mean_psnr == math.inf


def test_evaluate_set_population_std():
    # two samples engineered to psnr 10 and 30 dB
    ref = np.zeros((16, 16))
    x1 = np.full((16, 16), math.sqrt(10 ** -1.0))   # mse 0.1 -> 10 dB
    x2 = np.full((16, 16), math.sqrt(10 ** -3.0))   # mse 0.001 -> 30 dB
    report = ar.evaluate_set([x1, x2], [ref, ref])
    assert report.mean_psnr == pytest.approx(20.0)
    assert report.std_psnr == pytest.approx(10.0)


def test_evaluate_set_validation():
    x = np.zeros((8, 8))
    with pytest.raises(ValueError):
        ar.evaluate_set([], [])
    with pytest.raises(ValueError):
        ar.evaluate_set([x], [x, x])


def test_report_round_trip():
    x1, ref1 = random_pair(6)
    x2, ref2 = random_pair(16)
    report = ar.evaluate_set([x1, x2], [ref1, ref2])
    text = ar.format_report("Trial64n5", report)
    name, mp, sp, ms, ss = ar.parse_report(text)
    assert name == "Trial64n5"
    assert (mp, sp, ms, ss) == (report.mean_psnr, report.std_psnr,
                                report.mean_ssim, report.std_ssim)


def test_report_line_round_trip_exact():
    x, ref = random_pair(7)
    report = ar.evaluate_set([x], [ref])
    line = report_line("run", report)
    name, mp, sp, ms, ss = parse_report_line(line)
    assert name == "run"
    assert mp == report.mean_psnr and ss == report.std_ssim
