"""Acceptance suite: one test per exit criterion, each printing a PASS/FAIL
line (run with -s or check captured output).  Criterion 7's count-ordering
clause is asserted exactly as stated even though the operation-count
formulas invert one link of the expected chain below n = 84; see the test
docstring for the numbers.
"""

import math
import os
import time
from pathlib import Path

import numpy as np
import pytest

from gyrator.core import Angle, ComplexField, nrmse, reflect
from gyrator.apps import (
    CryptoKey,
    WatermarkKey,
    decrypt_image,
    detector_sweep,
    encrypt_image,
    psnr,
    synthetic_image,
    watermark_embed,
    watermark_extract,
)
from gyrator.hgf import (
    basis_interval,
    build_shell_matrices,
    cached_basis,
    cached_shells,
    dgt_dhgf_direct,
    dgt_dhgf_fast,
    discrete_hgf_basis,
    rhgf,
    wigner_D,
    wigner_d,
    wigner_d_matrix,
)
from gyrator.oracle import (
    GaussianInput,
    accuracy_sweep,
    additivity_error_trend,
    complexity_order_check,
    multiplication_count,
)
from gyrator.transforms import (
    DgtMethod,
    dgt_auto,
    dgt_ccc,
    dgt_dft,
    dgt_direct,
    dgt_lcc_central,
)

from conftest import random_field


def report(number, ok, detail):
    print(f"ACCEPTANCE {number}: {'PASS' if ok else 'FAIL'} - {detail}")


def lena_path(n):
    override = os.environ.get("GYRATOR_LENA_DIR")
    candidates = []
    if override:
        candidates.append(Path(override) / f"lena_{n}.pgm")
    candidates.append(Path(__file__).parent / "assets" / f"lena_{n}.pgm")
    for c in candidates:
        if c.exists():
            return c
    return None


def test_criterion_1_oracle_equivalence(rng):
    """Convolution-route central block and DFT route match direct summation."""
    t0 = time.perf_counter()
    worst = 0.0
    for deg in (20.0, 45.0, 100.0, 160.0):
        a = Angle.from_degrees(deg)
        for _ in range(5):
            g = random_field(rng, 8, 8, dx=0.3, dy=0.25)
            lcc = dgt_lcc_central(g, a, 0.21, 0.17)
            ref = dgt_direct(g, a, 0.21, 0.17)
            worst = max(worst, nrmse(ref, lcc))
            dft = dgt_dft(g, a)
            ref = dgt_direct(g, a, dft.dx, dft.dy)
            worst = max(worst, nrmse(ref, dft))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-9 and elapsed < 1.0
    report(1, ok, f"worst relative error {worst:.2e}, runtime {elapsed:.2f}s")
    assert worst <= 1e-9
    assert elapsed < 1.0


def test_criterion_2_properties_table(rng):
    """Unitarity, reversibility, additivity behavior of the four routes."""
    g = random_field(rng, 16, 16, dx=basis_interval(16), dy=basis_interval(16))
    checks = {}
    for method in (DgtMethod.LCC, DgtMethod.DFT, DgtMethod.CCC, DgtMethod.DHGF):
        out = dgt_auto(g, 0.0, method)
        checks[f"unitarity {method.value}"] = np.array_equal(out.data, g.data)
    checks["unitarity ccc computed"] = nrmse(g, dgt_ccc(g, 0.0)) <= 1e-10

    a = Angle.from_degrees(40.0)
    checks["reversibility dft"] = nrmse(g, dgt_dft(dgt_dft(g, a), -a.radians)) <= 1e-9
    checks["reversibility ccc"] = nrmse(g, dgt_ccc(dgt_ccc(g, a), -a.radians)) <= 1e-9
    basis = cached_basis(16)
    fwd = dgt_dhgf_fast(g, a, basis, cached_shells(16, a.radians))
    back = dgt_dhgf_fast(fwd, -a.radians, basis, cached_shells(16, -a.radians))
    checks["reversibility dhgf"] = nrmse(g, back) <= 1e-9
    pseudo = dgt_lcc_central(dgt_lcc_central(g, a), -a.radians)
    checks["lcc negated angle fails"] = nrmse(g, pseudo) > 0.01

    a1, a2 = Angle.from_degrees(25.0), Angle.from_degrees(20.0)
    comp = dgt_dhgf_fast(dgt_dhgf_fast(g, a1, basis, cached_shells(16, a1.radians)),
                         a2, basis, cached_shells(16, a2.radians))
    single = dgt_dhgf_fast(g, a1 + a2.radians, basis,
                           cached_shells(16, a1.radians + a2.radians))
    checks["dhgf additivity"] = nrmse(single, comp) <= 1e-10

    img = ComplexField(synthetic_image(128), 0.1567, 0.1567)
    trend = [e for _, e in additivity_error_trend(img, 25.0, 20.0, [128, 256, 512])]
    checks["ccc additivity trend"] = trend[0] > trend[1] > trend[2]

    ok = all(checks.values())
    trend_txt = " -> ".join(f"{e:.4f}" for e in trend)
    report(2, ok, f"{sum(checks.values())}/{len(checks)} properties, trend {trend_txt}")
    assert all(checks.values()), {k: v for k, v in checks.items() if not v}

    lena = lena_path(128)
    if lena is None:
        print("ACCEPTANCE 2 (reference-image clause): SKIP - no 128x128 reference "
              "host supplied; composition error on it would be checked against "
              "0.1198 +/- 0.02")
    else:
        from gyrator.fileio import read_pgm

        host = read_pgm(lena, 0.1567, 0.1567)
        base = additivity_error_trend(host, 25.0, 20.0, [128])[0][1]
        assert abs(base - 0.1198) <= 0.02


def test_criterion_3_gaussian_accuracy_sweep():
    """All four routes track the analytic Gaussian transform across angles."""
    t0 = time.perf_counter()
    alphas = [Angle.from_degrees(d) for d in range(20, 161, 5)]
    errs = {m: dict(accuracy_sweep(m, GaussianInput(0.4), alphas, 101))
            for m in ("lcc", "dft", "ccc", "dhgf")}
    elapsed = time.perf_counter() - t0
    worst = {m: max(d.values()) for m, d in errs.items()}
    all_small = all(v <= 0.05 for v in worst.values())
    wins = sum(1 for deg in errs["ccc"] if errs["ccc"][deg] <= errs["lcc"][deg])
    ranked = wins >= 0.9 * len(alphas)
    ok = all_small and ranked and elapsed < 30.0
    report(3, ok, f"worst per route {({m: f'{v:.1e}' for m, v in worst.items()})}, "
                  f"circular<=convolution at {wins}/{len(alphas)} angles, "
                  f"runtime {elapsed:.1f}s")
    assert all_small
    assert ranked
    assert elapsed < 30.0


def test_criterion_4_eigen_structure(rng):
    """Rotated-basis orthonormality and the transform eigenrelation."""
    n = 16
    basis = discrete_hgf_basis(n)
    vecs = np.stack([rhgf(k, l, basis).data.real.ravel()
                     for k in range(n) for l in range(n)])
    gram_defect = float(np.abs(vecs @ vecs.T - np.eye(n * n)).max())

    mode = rhgf(2, 5, basis)
    worst_phase = 0.0
    for alpha in rng.uniform(-math.pi, math.pi, 10):
        out = dgt_dhgf_fast(mode, alpha, basis, build_shell_matrices(n, alpha))
        expected = np.exp(1j * 3 * alpha) * mode.data
        worst_phase = max(worst_phase, nrmse(expected, out.data))
    ok = gram_defect <= 1e-10 and worst_phase <= 1e-10
    report(4, ok, f"gram defect {gram_defect:.2e}, eigenrelation error {worst_phase:.2e}")
    assert gram_defect <= 1e-10
    assert worst_phase <= 1e-10


def test_criterion_5_fast_vs_direct(rng):
    """Shell-mixing fast path reproduces the full expansion transform."""
    worst = 0.0
    for n in (3, 8, 16):
        basis = discrete_hgf_basis(n)
        step = basis_interval(n)
        g = ComplexField(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)),
                         step, step)
        ref = dgt_dhgf_direct(g, 0.9, basis)
        out = dgt_dhgf_fast(g, 0.9, basis, build_shell_matrices(n, 0.9))
        worst = max(worst, nrmse(ref, out))
    shells = build_shell_matrices(3, 0.7)
    sizes = [shells.matrix(L).shape[0] for L in range(5)]
    structure = (sizes == [1, 2, 3, 2, 1]
                 and abs(shells.matrix(0)[0, 0] - 1.0) <= 1e-14
                 and abs(shells.matrix(4)[0, 0] - 1.0) <= 1e-14)
    ok = worst <= 1e-9 and structure
    report(5, ok, f"fast-vs-direct worst {worst:.2e}, "
                  f"smallest-grid shell sizes {sizes}")
    assert worst <= 1e-9
    assert structure


def test_criterion_6_wigner_machinery(rng):
    """Displayed mixing matrix and the quarter-turn resummation identity."""
    expected = np.array([
        [0.5, -1 / math.sqrt(2), 0.5],
        [1 / math.sqrt(2), 0.0, -1 / math.sqrt(2)],
        [0.5, 1 / math.sqrt(2), 0.5],
    ])
    matrix_err = float(np.abs(wigner_d_matrix(2, math.pi / 2) - expected).max())

    worst_identity = 0.0
    betas = rng.uniform(-math.pi, math.pi, 100)
    for beta in betas:
        two_j = int(rng.integers(0, 13))
        j = two_j / 2
        for _ in range(3):
            two_m1 = int(rng.integers(-two_j, two_j + 1))
            two_m1 -= (two_j - two_m1) % 2
            two_m2 = int(rng.integers(-two_j, two_j + 1))
            two_m2 -= (two_j - two_m2) % 2
            m1, m2 = two_m1 / 2, two_m2 / 2
            lhs = sum(
                wigner_d(j, (two_j - 2 * i) / 2, m1, math.pi / 2)
                * wigner_d(j, (two_j - 2 * i) / 2, m2, math.pi / 2)
                * np.exp(1j * (two_j - 2 * i) / 2 * beta)
                for i in range(two_j + 1))
            rhs = wigner_D(j, m1, m2, -math.pi / 2, beta, math.pi / 2)
            worst_identity = max(worst_identity, abs(lhs - rhs))
    ok = matrix_err <= 1e-12 and worst_identity <= 1e-12
    report(6, ok, f"mixing-matrix error {matrix_err:.2e}, "
                  f"resummation identity worst {worst_identity:.2e}")
    assert matrix_err <= 1e-12
    assert worst_identity <= 1e-12


def test_criterion_7_exact_counts():
    """Frozen operation counts at n = 256."""
    values = {
        "dft": multiplication_count("dft", 256),
        "ccc": multiplication_count("ccc", 256),
        "dhgf": multiplication_count("dhgf", 256),
    }
    ok = (values["dft"] == 2_621_440 and values["ccc"] == 4_980_736
          and values["dhgf"] == 178_957_312)
    report("7a", ok, f"counts at 256: {values}")
    assert ok


def test_criterion_7_count_ordering_from_64():
    """Count chain dft < ccc < lcc < dhgf < direct asserted for n >= 64.

    The formulas themselves place the eigenbasis route BELOW the convolution
    route until n = 84 (at n = 64: convolution 3,456,424 vs eigenbasis
    2,796,288 real multiplications), so the stated bound is not attainable at
    the boundary; the chain does hold from n = 84 up.  This test states the
    criterion verbatim and is expected to fail on the n = 64 sample.
    """
    sizes = [64, 72, 84, 96, 128, 256, 512, 1024]
    report_obj = complexity_order_check(sizes)
    failing = [n for n in sizes if not report_obj.ordering_ok[n]]
    ok = not failing
    detail = "chain holds at every sampled size" if ok else (
        f"chain fails at {failing} (convolution/eigenbasis crossover is at 84)")
    report("7b", ok, detail)
    assert ok, detail


def test_criterion_7_wall_clock_informational():
    """Measured transform timings (precomputed tables), informational only."""
    n = 512 if os.environ.get("GYRATOR_ACCEPT_TIMING") == "1" else 256
    report_obj = complexity_order_check([n], with_timings=True)
    timings = {m: report_obj.timings[m][n] for m in ("dft", "ccc", "lcc", "dhgf")}
    order = sorted(timings, key=timings.get)
    expected = ["dft", "ccc", "lcc", "dhgf"]
    match = order == expected
    report("7c", True, f"wall-clock at {n}: "
                       + ", ".join(f"{m}={timings[m] * 1e3:.1f}ms" for m in order)
                       + f"; ordering {'matches' if match else 'differs from'} counts"
                       + (" (informational, not a gate; set GYRATOR_ACCEPT_TIMING=1"
                          " for the 512 measurement)" if n != 512 else ""))


def test_criterion_8_watermarking(rng):
    """Exact roundtrip and detector reliability under noise."""
    n, L, Q, strength = 256, 4096, 8000, 0.15
    host = ComplexField(synthetic_image(n), 0.1567, 0.1567)
    key = WatermarkKey(Angle.from_degrees(45.0), Q, L, strength, strength)
    w1 = rng.integers(0, 256, L).astype(float)
    w2 = rng.integers(0, 256, L).astype(float)
    marked = watermark_embed(host, w1, w2, key)
    r1, r2 = watermark_extract(marked, host, key)
    roundtrip = max(np.abs(r1 - w1).max(), np.abs(r2 - w2).max())

    candidates1 = rng.integers(0, 256, (1000, L)).astype(float)
    candidates2 = rng.integers(0, 256, (1000, L)).astype(float)
    correct = 199
    candidates1[correct] = w1
    candidates2[correct] = w2
    wins = 0
    trials = 100
    for _ in range(trials):
        noisy = ComplexField(marked.data.real + rng.normal(0.0, 10.0, (n, n)),
                             host.dx, host.dy)
        responses = detector_sweep(noisy, candidates1, candidates2, key)
        wins += int(np.argmax(responses) == correct)
    ok = roundtrip <= 1e-8 and wins >= 99
    report(8, ok, f"noiseless roundtrip {roundtrip:.1e}, "
                  f"correct set won {wins}/{trials} noisy trials")
    assert roundtrip <= 1e-8
    assert wins >= 99

    lena = lena_path(256)
    if lena is None:
        print("ACCEPTANCE 8 (reference-image clause): SKIP - no 256x256 reference "
              "host; its watermarked psnr would be checked against 37.2 +/- 3 dB")
    else:
        from gyrator.fileio import read_pgm

        ref_host = read_pgm(lena, 0.1567, 0.1567)
        ref_marked = watermark_embed(ref_host, w1, w2,
                                     WatermarkKey(key.alpha, Q, L, strength, strength))
        assert abs(psnr(ref_host, ref_marked) - 37.2) <= 3.0


def test_criterion_9_encryption():
    """Quantization-limited roundtrip and microscopic key sensitivity."""
    n, bits = 256, 16
    step = basis_interval(n)
    image = ComplexField(synthetic_image(n), step, step)
    seeds = tuple(np.random.default_rng(99).uniform(0.05, 0.95, bits))
    key = CryptoKey(Angle.from_degrees(40.0), bits, seeds)

    t0 = time.perf_counter()
    encrypted, meta = encrypt_image(image, key)
    restored = decrypt_image(encrypted, key, meta)
    elapsed = time.perf_counter() - t0
    quality = psnr(image, restored)

    wrong_seeds = CryptoKey(key.alpha, bits, tuple(x + 1e-12 for x in seeds))
    err_seeds = nrmse(image, decrypt_image(encrypted, wrong_seeds, meta))
    top = list(seeds)
    top[bits - 1] += 1e-12
    wrong_top = CryptoKey(key.alpha, bits, tuple(top))
    err_top = nrmse(image, decrypt_image(encrypted, wrong_top, meta))
    wrong_angle = CryptoKey(Angle.from_degrees(40.0001), bits, seeds)
    err_angle = nrmse(image, decrypt_image(encrypted, wrong_angle, meta))

    ok = (quality >= 40.0 and elapsed < 10.0
          and err_seeds > 0.5 and err_top > 0.5 and err_angle > 0.5)
    report(9, ok, f"roundtrip psnr {quality:.1f} dB in {elapsed:.1f}s; wrong-key "
                  f"errors: seeds {err_seeds:.2f}, top plane {err_top:.2f}, "
                  f"angle {err_angle:.2f}")
    assert quality >= 40.0
    assert elapsed < 10.0
    assert err_seeds > 0.5
    assert err_top > 0.5
    assert err_angle > 0.5


def test_criterion_10_figure_regeneration(tmp_path):
    """The command-line pipelines rebuild every panel and table quickly."""
    from gyrator.cli import main

    t0 = time.perf_counter()
    steps = [
        ["modes", "--k", "2", "--l", "5", "--alpha-list", "0:22.5:180",
         "--n", "128", "--out-dir", str(tmp_path / "modes")],
        ["verify", "gaussian", "--s", "0.4", "--n", "101", "--alphas", "5:175:5",
         "--methods", "all", "--out", str(tmp_path / "gaussian.csv")],
        ["verify", "rhgf", "--k", "25", "--l", "40", "--n", "128",
         "--alphas", "20:160:10", "--methods", "all",
         "--out", str(tmp_path / "rhgf.csv")],
        ["verify", "additivity", "--alphas", "25,20", "--sizes", "128,256,512",
         "--out", str(tmp_path / "additivity.csv")],
        ["bench", "--sizes", "64,128,256", "--out", str(tmp_path / "bench.csv")],
        ["sample-demo", "--alpha", "15", "--out-dir", str(tmp_path / "demo")],
    ]
    for argv in steps:
        assert main(argv) == 0, argv
    elapsed = time.perf_counter() - t0

    panels = list((tmp_path / "modes").glob("*_mag.pgm"))
    gaussian = (tmp_path / "gaussian.csv").read_text().splitlines()
    bench = (tmp_path / "bench.csv").read_text()
    demo = (tmp_path / "demo" / "report.txt").read_text()
    content_ok = (len(panels) == 9
                  and len(gaussian) == 1 + 4 * 35
                  and "256,dft,2621440" in bench
                  and "fourier_lowpass" in demo)
    ok = elapsed < 300.0 and content_ok
    report(10, ok, f"all pipelines regenerated in {elapsed:.0f}s "
                   f"({len(panels)} mode panels, {len(gaussian) - 1} sweep rows)")
    assert content_ok
    assert elapsed < 300.0
