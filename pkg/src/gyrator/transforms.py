"""The decomposition-based discrete gyrator transforms and their dispatcher.

Four routes are provided:

  * dgt_direct  - brute-force sampled kernel sum, O(N^4); the oracle.
  * dgt_lcc     - chirp multiply, full linear chirp convolution, chirp
                  multiply; arbitrary output intervals; output grows to
                  (3N-2) per axis and must be kept whole for exact inversion.
  * dgt_dft     - chirp multiply, one centered DFT, chirp multiply; the
                  output intervals are forced by the DFT grid matching.
  * dgt_ccc     - chirp / DFT / chirp / inverse DFT / chirp (a circular chirp
                  convolution); output intervals equal input intervals.

dgt_auto handles the conventional values at exact multiples of pi and
re-routes angles inside the singular guard band through a quarter-turn
(or half-turn) reduction so every method stays usable at every angle.
"""

import math

import numpy as np

from . import backend
from .core import ComplexField, as_angle, reflect
from .errors import (
    ConditioningError,
    InsufficientDataError,
    SingularAngleError,
)
from .spectral import (
    central_block,
    centered_dft2,
    chirp_grid,
    convolution_kernel_spectrum,
    linear_convolve2,
)

try:
    from enum import StrEnum as _MethodBase
except ImportError:  # pragma: no cover - python < 3.11
    from enum import Enum

    class _MethodBase(str, Enum):
        pass


class DgtMethod(_MethodBase):
    DIRECT = "direct"
    LCC = "lcc"
    DFT = "dft"
    CCC = "ccc"
    DHGF = "dhgf"


def as_method(value):
    if isinstance(value, DgtMethod):
        return value
    return DgtMethod(str(value).lower())


def _require_regular(angle, method_name):
    if angle.near_kpi:
        raise SingularAngleError(
            f"{method_name} is singular near multiples of pi "
            f"(angle {angle.degrees:.4g} deg); use dgt_auto")


def dgt_direct(g, alpha, du=None, dv=None, out_shape=None):
    """Direct summation of the sampled gyrator kernel (oracle, O(N^4)).

    At exactly 0 the transform is the identity and at exactly pi the point
    reflection, matching the continuous convention.  Output intervals are
    (du, dv), defaulting to the input intervals; out_shape defaults to the
    input shape.
    """
    a = as_angle(alpha)
    if a.is_exact_zero:
        return g.copy()
    if a.is_exact_pi:
        return reflect(g)
    if a.near_kpi:
        raise SingularAngleError(
            f"angle {a.degrees:.4g} deg lies in the singular band of the sampled "
            "kernel; use dgt_auto for near-singular angles")
    du = g.dx if du is None else float(du)
    dv = g.dy if dv is None else float(dv)
    out_n1, out_n2 = g.shape if out_shape is None else out_shape
    sa = math.sin(a.radians)
    cot_a = math.cos(a.radians) / sa
    csc_a = 1.0 / sa
    scale = abs(csc_a) * g.dx * g.dy / (2.0 * math.pi)
    out = backend.direct_gyrator_sum(
        np.ascontiguousarray(g.data), cot_a, csc_a,
        g.dx, g.dy, du, dv, out_n1, out_n2, scale)
    return ComplexField(out, du, dv)


def _lcc_kernel(n1, n2, du, dv, dx, dy, csc_a):
    return chirp_grid(0.5 * dv * dx * csc_a, 0.5 * du * dy * csc_a, 0.0,
                      2 * n1 - 1, 2 * n2 - 1)


def _lcc_input_chirp(n1, n2, du, dv, dx, dy, cot_a, csc_a):
    return chirp_grid(-0.5 * dv * dx * csc_a, -0.5 * du * dy * csc_a,
                      dx * dy * cot_a, n1, n2)


def _lcc_output_chirp(s1, s2, du, dv, dx, dy, cot_a, csc_a):
    return chirp_grid(-0.5 * du * dy * csc_a, -0.5 * dv * dx * csc_a,
                      du * dv * cot_a, s1, s2)


def dgt_lcc(g, alpha, du=None, dv=None):
    """Linear-chirp-convolution gyrator transform, full extended output.

    Output intervals (du, dv) are unconstrained and default to the input's.
    The result spans the whole (3n2-2) x (3n1-2) convolution support (the u
    axis is dual to the input y axis, hence the swap; shapes coincide for
    square inputs).  Only the central block, central_block(out, n2, n1), is
    free of kernel truncation, but the rest is required by dgt_lcc_inverse.
    """
    a = as_angle(alpha)
    _require_regular(a, "the linear-chirp-convolution route")
    du = g.dx if du is None else float(du)
    dv = g.dy if dv is None else float(dv)
    n1, n2 = g.shape
    sa = math.sin(a.radians)
    cot_a, csc_a = math.cos(a.radians) / sa, 1.0 / sa

    g1 = _lcc_input_chirp(n1, n2, du, dv, g.dx, g.dy, cot_a, csc_a).data * g.data
    kern = _lcc_kernel(n1, n2, du, dv, g.dx, g.dy, csc_a)
    conv = linear_convolve2(ComplexField(g1, g.dx, g.dy), kern)
    scale = abs(csc_a) * g.dx * g.dy / (2.0 * math.pi)
    # convolution axis 0 runs over the v index, axis 1 over u: swap them
    swapped = scale * conv.data.T
    out_chirp = _lcc_output_chirp(swapped.shape[0], swapped.shape[1],
                                  du, dv, g.dx, g.dy, cot_a, csc_a)
    return ComplexField(out_chirp.data * swapped, du, dv)


def dgt_lcc_central(g, alpha, du=None, dv=None):
    """Truncation-free central block of the extended dgt_lcc output."""
    full = dgt_lcc(g, alpha, du, dv)
    return central_block(full, g.n2, g.n1)


#: floor on |FFT(kernel)| accepted by the deconvolution in dgt_lcc_inverse
DECONV_GUARD = 1e-12


def dgt_lcc_inverse(g_full, alpha, dx, dy):
    """Exact inverse of dgt_lcc given its full extended output.

    Runs the three steps backwards: undo the output chirp and index swap,
    deconvolve in the frequency domain, undo the input chirp.  (dx, dy) are
    the sampling intervals of the original input; the output intervals of the
    forward pass travel with ``g_full``.
    """
    a = as_angle(alpha)
    _require_regular(a, "the linear-chirp-convolution route")
    s1, s2 = g_full.shape
    if (s1 + 2) % 3 or (s2 + 2) % 3:
        raise InsufficientDataError(
            f"full extended output required for lossless inversion; "
            f"{g_full.shape} is not of the form (3k-2, 3k'-2)")
    n2, n1 = (s1 + 2) // 3, (s2 + 2) // 3
    du, dv = g_full.dx, g_full.dy
    sa = math.sin(a.radians)
    cot_a, csc_a = math.cos(a.radians) / sa, 1.0 / sa

    out_chirp = _lcc_output_chirp(s1, s2, du, dv, dx, dy, cot_a, csc_a)
    scale = abs(csc_a) * dx * dy / (2.0 * math.pi)
    conv = (g_full.data / out_chirp.data).T / scale

    kern = _lcc_kernel(n1, n2, du, dv, dx, dy, csc_a)
    kf = convolution_kernel_spectrum(kern, conv.shape)
    if np.min(np.abs(kf)) < DECONV_GUARD:
        raise ConditioningError(
            "chirp kernel spectrum has entries below the deconvolution guard")
    cf = np.fft.fft2(conv, s=kf.shape)
    g1 = np.fft.ifft2(cf / kf)[:n1, :n2]

    in_chirp = _lcc_input_chirp(n1, n2, du, dv, dx, dy, cot_a, csc_a)
    return ComplexField(g1 / in_chirp.data, dx, dy)


def dft_output_intervals(n1, n2, dx, dy, alpha):
    """Output intervals (du, dv) forced on the DFT route by grid matching."""
    sa = abs(math.sin(as_angle(alpha).radians))
    return 2.0 * math.pi * sa / (n2 * dy), 2.0 * math.pi * sa / (n1 * dx)


def dgt_dft(g, alpha):
    """Single-DFT gyrator transform under the interval-matching constraints.

    The products dx*dv and dy*du are pinned to 2*pi*|sin alpha| / N per axis,
    so the output intervals depend on the angle and are recorded on the
    returned field.  Identical to dgt_direct on the same grid.
    """
    a = as_angle(alpha)
    _require_regular(a, "the DFT route")
    n1, n2 = g.shape
    sa = math.sin(a.radians)
    cot_a, csc_a = math.cos(a.radians) / sa, 1.0 / sa
    du, dv = dft_output_intervals(n1, n2, g.dx, g.dy, a)

    in_chirp = chirp_grid(0.0, 0.0, g.dx * g.dy * cot_a, n1, n2)
    g1 = ComplexField(in_chirp.data * g.data, g.dx, g.dy)
    sign = -1 if sa > 0 else +1
    t = centered_dft2(g1, sign).data * (g.dx * g.dy / (2.0 * math.pi))
    # t[q, p]: the first DFT axis pairs with m (the q slot), the second with n
    out_chirp = chirp_grid(0.0, 0.0, du * dv * cot_a, n2, n1)
    out = abs(csc_a) * out_chirp.data * t.T
    return ComplexField(out, du, dv)


def dgt_ccc(g, alpha):
    """Circular-chirp-convolution gyrator transform (out intervals = in).

    Five steps: chirp, centered DFT, chirp, centered inverse DFT, chirp.
    Size-preserving, energy-conserving, and exactly inverted by the negated
    angle; singular only near odd multiples of pi.
    """
    a = as_angle(alpha)
    if a.near_odd_pi:
        raise SingularAngleError(
            f"the circular-convolution route is singular near odd multiples of pi "
            f"(angle {a.degrees:.4g} deg); use dgt_auto")
    n1, n2 = g.shape
    tan_half = math.tan(0.5 * a.radians)
    sa = math.sin(a.radians)
    dxp = 2.0 * math.pi / (n1 * g.dx)
    dyp = 2.0 * math.pi / (n2 * g.dy)

    c1 = chirp_grid(0.0, 0.0, -g.dx * g.dy * tan_half, n1, n2)
    s1 = ComplexField(c1.data * g.data, g.dx, g.dy)
    spec = centered_dft2(s1, -1).data * (g.dx * g.dy / (2.0 * math.pi))
    c2 = chirp_grid(0.0, 0.0, -dxp * dyp * sa, n1, n2)
    mixed = ComplexField(c2.data * spec, dxp, dyp)
    back = centered_dft2(mixed, +1).data * (dxp * dyp / (2.0 * math.pi))
    c3 = chirp_grid(0.0, 0.0, -g.dx * g.dy * tan_half, n1, n2)
    return ComplexField(c3.data * back, g.dx, g.dy)


def lcc_factor_matrices(alpha):
    """The four parameter-matrix factors realized by the convolution route.

    Right-to-left: chirp multiplication, chirp convolution, coordinate swap,
    and the same chirp multiplication; their product is gyrator_matrix(alpha).
    """
    a = as_angle(alpha)
    sa = math.sin(a.radians)
    cot_a, csc_a = math.cos(a.radians) / sa, 1.0 / sa
    chirp = np.eye(4)
    chirp[2, 0] = -csc_a
    chirp[2, 1] = cot_a
    chirp[3, 0] = cot_a
    chirp[3, 1] = -csc_a
    swap = np.zeros((4, 4))
    swap[0, 1] = swap[1, 0] = swap[2, 3] = swap[3, 2] = 1.0
    conv = np.eye(4)
    conv[0, 2] = conv[1, 3] = sa
    from .core import ABCDMatrix

    return (ABCDMatrix(chirp), ABCDMatrix(swap), ABCDMatrix(conv), ABCDMatrix(chirp))


def _quarter_turn_input(g):
    """Transposed, scaled centered DFT feeding the quarter-turn reduction."""
    t = centered_dft2(g, -1)
    data = t.data.T * (g.dx * g.dy / (2.0 * math.pi))
    return ComplexField(data, t.dy, t.dx)


def quarter_turn_transform(g, alpha, method=DgtMethod.DFT, du=None, dv=None):
    """Rebuild the transform as a centered DFT, an index swap, and the same
    method a quarter turn away.

    This keeps the convolution/DFT/direct routes usable arbitrarily close to
    multiples of pi at the cost of one extra FFT.  On the DFT route the output
    intervals become |sin(alpha - pi/2)| times the input intervals.  The
    result matches the input size (the extended convolution output is cropped
    to its central block).
    """
    a = as_angle(alpha)
    method = as_method(method)
    f = _quarter_turn_input(g)
    beta = a - 0.5 * math.pi
    if method == DgtMethod.DFT:
        return dgt_dft(f, beta)
    if method == DgtMethod.LCC:
        full = dgt_lcc(f, beta, du, dv)
        return central_block(full, g.n1, g.n2)
    if method == DgtMethod.DIRECT:
        return dgt_direct(f, beta, du, dv, out_shape=g.shape)
    raise ValueError(f"quarter-turn reduction does not apply to {method}")


def half_turn_ccc(g, alpha):
    """Circular-convolution route rebuilt a half turn away on the reflected
    input; exact for any angle away from even multiples of pi."""
    a = as_angle(alpha)
    return dgt_ccc(reflect(g), a - math.pi)


def dgt_auto(g, alpha, method=DgtMethod.CCC, du=None, dv=None):
    """Total gyrator transform: conventions at exact multiples of pi,
    singularity-avoiding reductions inside the guard band, plain delegation
    elsewhere.

    Near multiples of pi the convolution/DFT/direct routes are rebuilt as a
    centered DFT, an index swap, and the same method at alpha - pi/2; near
    odd multiples of pi the circular route becomes the method at alpha - pi
    applied to the reflected input.  The returned field always matches the
    input size (the extended convolution output is cropped to its central
    block) and carries the effective output intervals.
    """
    a = as_angle(alpha)
    method = as_method(method)
    if a.is_exact_zero:
        return g.copy()
    if a.is_exact_pi:
        return reflect(g)

    if method == DgtMethod.DHGF:
        from .hgf import dgt_dhgf

        return dgt_dhgf(g, a)

    if method == DgtMethod.CCC:
        if a.near_odd_pi:
            return half_turn_ccc(g, a)
        return dgt_ccc(g, a)

    if a.near_kpi:
        return quarter_turn_transform(g, a, method, du, dv)
    if method == DgtMethod.LCC:
        return dgt_lcc_central(g, a, du, dv)
    if method == DgtMethod.DIRECT:
        return dgt_direct(g, a, du, dv)
    return dgt_dft(g, a)


def transform(g, alpha, method, du=None, dv=None, safe=True):
    """Uniform entry point used by sweeps and the CLI.

    With safe=True (the default) the call is routed through dgt_auto; with
    safe=False the plain method is invoked and may raise SingularAngleError.
    """
    method = as_method(method)
    if safe:
        return dgt_auto(g, alpha, method, du, dv)
    if method == DgtMethod.DIRECT:
        return dgt_direct(g, alpha, du, dv)
    if method == DgtMethod.LCC:
        return dgt_lcc_central(g, alpha, du, dv)
    if method == DgtMethod.DFT:
        return dgt_dft(g, alpha)
    if method == DgtMethod.CCC:
        return dgt_ccc(g, alpha)
    from .hgf import dgt_dhgf

    return dgt_dhgf(g, alpha)
