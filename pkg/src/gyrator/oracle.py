"""Closed-form references, accuracy sweeps, and operation-count accounting.

The Gaussian reference is the analytic transform of exp(-s(x^2+y^2)/2); the
rotated-mode reference uses the eigenrelation (phase exp(-j*alpha*(k-l))).
Sweeps route near-singular angles through the reduction branch; the routing
band is a parameter because the crossover between the plain and reduced
branches sits a quarter turn from each singular angle.
"""

import math
import time
from dataclasses import dataclass

import numpy as np

from .core import ComplexField, Angle, as_angle, centered_indices, nrmse
from .errors import RangeError
from .hgf import (
    basis_interval,
    cached_basis,
    cached_shells,
    dgt_dhgf_fast,
    hermite_gaussian,
    sample_points,
)
from .transforms import (
    DgtMethod,
    as_method,
    dgt_auto,
    half_turn_ccc,
    quarter_turn_transform,
    transform,
)

#: angular half-width of the routing band used by sweeps.  The reduction is
#: more accurate than the plain branch anywhere past the midpoint between
#: the two branches' singular angles: a quarter turn for the convolution and
#: DFT routes (singular at 0 and pi vs +-pi/2), a half turn for the circular
#: route (singular at pi vs 0), with exact ties at the midpoints.
SWEEP_ROUTING_BAND = 0.25 * math.pi
SWEEP_ROUTING_BAND_CCC = 0.5 * math.pi


def scaled_gaussian(s, n, interval=None, half_offset=False):
    """Sampled exp(-s(x^2+y^2)/2) on an n x n grid."""
    if s <= 0:
        raise RangeError(f"scale parameter must be positive, got {s}")
    step = basis_interval(n) if interval is None else float(interval)
    x = sample_points(n, step) if half_offset else centered_indices(n) * step
    xx, yy = np.meshgrid(x, x, indexing="ij")
    return ComplexField(np.exp(-0.5 * s * (xx * xx + yy * yy)), step, step)


def gaussian_gyrator_closed_form(s, alpha, n1, n2, du, dv, half_offset=False):
    """Analytic gyrator transform of the scaled Gaussian, sampled on a grid.

    Amplitude 1/sqrt(cos^2 a + s^2 sin^2 a), Gaussian envelope with rate
    s over the same denominator, and a uv chirp proportional to
    (s^2 - 1) sin(2a).
    """
    if s <= 0:
        raise RangeError(f"scale parameter must be positive, got {s}")
    a = as_angle(alpha).radians
    den = math.cos(a) ** 2 + s * s * math.sin(a) ** 2
    amp = 1.0 / math.sqrt(den)
    chirp = 0.5 * (s * s - 1.0) * math.sin(2.0 * a) / den
    rate = s / den
    if half_offset:
        u = (np.arange(n1) - 0.5 * (n1 - 1)) * du
        v = (np.arange(n2) - 0.5 * (n2 - 1)) * dv
    else:
        u = centered_indices(n1) * du
        v = centered_indices(n2) * dv
    uu, vv = np.meshgrid(u, v, indexing="ij")
    data = amp * np.exp(1j * chirp * uu * vv) * np.exp(-0.5 * rate * (uu * uu + vv * vv))
    return ComplexField(data, du, dv)


def sampled_rhgf(k, l, n, interval=None, half_offset=False):
    """Samples of the 45-degree-rotated continuous 2D Hermite-Gaussian mode."""
    step = basis_interval(n) if interval is None else float(interval)
    x = sample_points(n, step) if half_offset else centered_indices(n) * step
    xx, yy = np.meshgrid(x, x, indexing="ij")
    xr = (xx + yy) / math.sqrt(2.0)
    yr = (-xx + yy) / math.sqrt(2.0)
    data = (hermite_gaussian(k, xr.ravel()).reshape(n, n)
            * hermite_gaussian(l, yr.ravel()).reshape(n, n))
    return ComplexField(data, step, step)


def sampled_rhgf_on(k, l, x_axis, y_axis):
    """Rotated continuous mode sampled on explicit axes (for varied grids)."""
    xx, yy = np.meshgrid(np.asarray(x_axis, float), np.asarray(y_axis, float),
                         indexing="ij")
    xr = (xx + yy) / math.sqrt(2.0)
    yr = (-xx + yy) / math.sqrt(2.0)
    return (hermite_gaussian(k, xr.ravel()).reshape(xx.shape)
            * hermite_gaussian(l, yr.ravel()).reshape(xx.shape))


@dataclass(frozen=True)
class GaussianInput:
    """Scaled-Gaussian accuracy experiment (reference: closed form)."""

    s: float = 0.4


@dataclass(frozen=True)
class RhgfInput:
    """Rotated-mode accuracy experiment (reference: the eigenrelation phase)."""

    k: int = 25
    l: int = 40


def _sweep_transform(g, a, method, band):
    """Route through the reduction branch inside the sweep's angular band."""
    method = as_method(method)
    if method == DgtMethod.DHGF:
        return dgt_dhgf_fast(g, a, cached_basis(g.n1), cached_shells(g.n1, a.radians))
    if a.is_exact_multiple_of_pi:
        return dgt_auto(g, a, method)
    r = a.radians
    if method == DgtMethod.CCC:
        band_ccc = SWEEP_ROUTING_BAND_CCC if band == SWEEP_ROUTING_BAND else band
        if math.pi - abs(r) < band_ccc:
            return half_turn_ccc(g, a)
        return dgt_auto(g, a, method)
    if min(abs(r), math.pi - abs(r)) < band:
        return quarter_turn_transform(g, a, method)
    return dgt_auto(g, a, method)


def accuracy_sweep(method, input_kind, alpha_list, n,
                   routing_band=SWEEP_ROUTING_BAND):
    """NRMSE of a transform route against its continuous reference per angle.

    Returns a list of (alpha_degrees, nrmse) rows.  The input sits on the
    sqrt(2*pi/n) grid; the eigenbasis route uses its half-sample-offset grid,
    the others the integer-centered grid, and each reference is evaluated on
    the route's own output grid.
    """
    method = as_method(method)
    half = method == DgtMethod.DHGF
    if isinstance(input_kind, GaussianInput):
        g = scaled_gaussian(input_kind.s, n, half_offset=half)
    elif isinstance(input_kind, RhgfInput):
        g = sampled_rhgf(input_kind.k, input_kind.l, n, half_offset=half)
    else:
        raise RangeError(f"unknown input kind {input_kind!r}")

    rows = []
    for alpha in alpha_list:
        a = alpha if isinstance(alpha, Angle) else Angle(float(alpha))
        if a.is_exact_zero:
            rows.append((a.degrees, 0.0))
            continue
        out = _sweep_transform(g, a, method, routing_band)
        if isinstance(input_kind, GaussianInput):
            ref = gaussian_gyrator_closed_form(
                input_kind.s, a, out.n1, out.n2, out.dx, out.dy, half_offset=half)
        else:
            if half:
                u = (np.arange(out.n1) - 0.5 * (out.n1 - 1)) * out.dx
                v = (np.arange(out.n2) - 0.5 * (out.n2 - 1)) * out.dy
            else:
                u = centered_indices(out.n1) * out.dx
                v = centered_indices(out.n2) * out.dy
            phase = np.exp(-1j * a.radians * (input_kind.k - input_kind.l))
            ref = ComplexField(phase * sampled_rhgf_on(input_kind.k, input_kind.l, u, v),
                               out.dx, out.dy)
        rows.append((a.degrees, nrmse(ref, out)))
    return rows


# ---------------------------------------------------------------------------
# operation counts


def multiplication_count(method, n):
    """Real-multiplication count of one transform at size n x n.

    Exact formula evaluation; precomputable tables (eigenbasis, mixing
    matrices, chirp grids) are excluded, matching how the dominant-cost
    terms are stated.
    """
    method = as_method(method)
    if n < 2:
        raise RangeError(f"size must be at least 2, got {n}")
    if method == DgtMethod.DIRECT:
        return 4 * n ** 4
    if method == DgtMethod.LCC:
        m = 3 * n - 2
        return 8 * n ** 2 + 4 * m ** 2 + 6 * m ** 2 * math.log2(m ** 2)
    if method == DgtMethod.DFT:
        return _int_log_count(8, 2, n)
    if method == DgtMethod.CCC:
        return _int_log_count(12, 4, n)
    # eigenbasis route: four matrix products plus the per-shell mixing
    total = 32 * n ** 3 + 4 * n
    return total // 3 if total % 3 == 0 else total / 3


def _int_log_count(c0, c1, n):
    log_term = math.log2(n * n)
    total = c0 * n * n + c1 * n * n * log_term
    rounded = round(total)
    return rounded if abs(total - rounded) < 1e-6 else total


_ORDER = (DgtMethod.DFT, DgtMethod.CCC, DgtMethod.LCC, DgtMethod.DHGF, DgtMethod.DIRECT)


@dataclass
class ComplexityReport:
    sizes: list
    counts: dict            # method name -> list of counts per size
    ordering_ok: dict       # size -> bool, full expected chain holds
    timings: dict | None    # method name -> seconds per size, optional

    def expected_chain(self):
        return [m.value for m in _ORDER]


def complexity_order_check(n_list, with_timings=False, timing_sizes=None, rng_seed=0):
    """Evaluate counts (and optionally wall-clock) over sizes.

    The expected low-to-high chain is dft < ccc < lcc < dhgf < direct; note
    the eigenbasis route costs less than the convolution route until n is
    large enough (the cubic term overtakes the padded-FFT constant near
    n = 84), so the chain inverts one link below that.
    """
    if not n_list:
        raise RangeError("size list must be nonempty")
    counts = {m.value: [multiplication_count(m, n) for n in n_list] for m in _ORDER}
    ordering = {}
    for i, n in enumerate(n_list):
        vals = [counts[m.value][i] for m in _ORDER]
        ordering[n] = all(vals[j] < vals[j + 1] for j in range(len(vals) - 1))
    timings = None
    if with_timings:
        timings = {}
        rng = np.random.default_rng(rng_seed)
        for n in (timing_sizes or n_list):
            dx = basis_interval(n)
            data = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            g = ComplexField(data, dx, dx)
            a = Angle.from_degrees(50.0)
            for m in (DgtMethod.DFT, DgtMethod.CCC, DgtMethod.LCC, DgtMethod.DHGF):
                timings.setdefault(m.value, {})
                timings[m.value][n] = _time_method(g, a, m)
    return ComplexityReport(list(n_list), counts, ordering, timings)


def _time_method(g, a, method, repeats=3):
    if method == DgtMethod.DHGF:
        basis = cached_basis(g.n1)
        shells = cached_shells(g.n1, a.radians)
        runner = lambda: dgt_dhgf_fast(g, a, basis, shells)
    else:
        runner = lambda: transform(g, a, method)
    runner()  # warm caches and plans
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        runner()
        best = min(best, time.perf_counter() - t0)
    return best


def upsample_and_pad(image, target_n):
    """Refine a square field onto a target_n grid: band-limited upsampling of
    the content to a shrinking fraction of the frame, zero padding around it.

    The content fraction drops from 13/16 at one doubling to 11/16 at two
    (and 2/16 less per further doubling, floored at 1/2), so both the sample
    density and the guard margin grow with the frame.
    """
    from .spectral import fourier_upsample, zero_pad_center

    base = image.n1
    if image.n1 != image.n2:
        raise RangeError("additivity protocol expects square inputs")
    if target_n == base:
        return image
    if target_n < base or target_n % base:
        raise RangeError(f"target size {target_n} must be a multiple of {base}")
    doublings = int(round(math.log2(target_n / base)))
    frac = max(0.5, (15 - 2 * doublings) / 16.0)
    content = int(round(target_n * frac)) & ~1
    dense = fourier_upsample(image, content, content)
    return zero_pad_center(dense, target_n, target_n)


def additivity_error_trend(image, alpha1_deg, alpha2_deg, sizes):
    """Composition-vs-single-transform error of the circular route per size.

    For each frame size the image is refined by upsample_and_pad, then
    NRMSE(single transform at a1+a2, composition a2 after a1) is recorded;
    the error shrinks as the grid refines because the underlying continuous
    transform is exactly additive.
    """
    from .transforms import dgt_ccc

    a1 = Angle.from_degrees(alpha1_deg)
    a2 = Angle.from_degrees(alpha2_deg)
    a12 = Angle.from_degrees(alpha1_deg + alpha2_deg)
    rows = []
    for n in sizes:
        g = upsample_and_pad(image, n)
        composed = dgt_ccc(dgt_ccc(g, a1), a2)
        single = dgt_ccc(g, a12)
        rows.append((n, nrmse(single, composed)))
    return rows


def sweep_rows_to_csv(rows, header=("alpha_deg", "nrmse")):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(f"{v:.10g}" for v in row))
    return "\n".join(lines) + "\n"


def complexity_report_to_csv(report):
    lines = ["n,method,count,seconds"]
    for i, n in enumerate(report.sizes):
        for m in report.expected_chain():
            secs = ""
            if report.timings and m in report.timings and n in report.timings[m]:
                secs = f"{report.timings[m][n]:.6f}"
            lines.append(f"{n},{m},{report.counts[m][i]:.10g},{secs}")
    return "\n".join(lines) + "\n"
