"""Centered 2D DFT machinery, chirp grids, and full-size linear convolution.

The centered DFT is realized by index rotation around a standard FFT, which
reproduces the brute-force centered sum exactly (the exponential kernel is
periodic in the frequency index, so no phase correction is needed).
"""

import numpy as np

from .core import ComplexField, centered_indices
from .errors import ShapeError, SingularParameterError


def centered_dft2(field, sign=-1):
    """Unnormalized 2D DFT over centered index ranges.

    out(p_c, q_c) = sum_{m_c, n_c} in(m_c, n_c)
                    * exp(sign * 2j*pi*(p_c m_c / n1 + q_c n_c / n2))

    Output intervals are the frequency spacings (2*pi/(n1*dx), 2*pi/(n2*dy)).
    """
    if sign not in (-1, 1):
        raise ValueError(f"sign must be -1 or +1, got {sign}")
    shifted = np.fft.ifftshift(field.data)
    if sign == -1:
        spectrum = np.fft.fft2(shifted)
    else:
        spectrum = np.fft.ifft2(shifted) * (field.n1 * field.n2)
    out = np.fft.fftshift(spectrum)
    return ComplexField(out,
                        2.0 * np.pi / (field.n1 * field.dx),
                        2.0 * np.pi / (field.n2 * field.dy))


def chirp_grid(a, b, c, n1, n2, dx=1.0, dy=1.0):
    """Unit-modulus quadratic-phase grid exp(j(a m_c^2 + b n_c^2 + c m_c n_c))."""
    for name, coeff in (("a", a), ("b", b), ("c", c)):
        if not np.isfinite(coeff):
            raise SingularParameterError(
                f"chirp coefficient {name} is not finite ({coeff}); "
                "the requested angle sits on a kernel pole")
    mc = centered_indices(n1).astype(float)
    nc = centered_indices(n2).astype(float)
    phase = a * mc[:, None] ** 2 + b * nc[None, :] ** 2 + c * np.outer(mc, nc)
    return ComplexField(np.exp(1j * phase), dx, dy)


def _next_pow2(n):
    p = 1
    while p < n:
        p *= 2
    return p


def linear_convolve2(field, kernel):
    """Full linear convolution with a (2*n1-1) x (2*n2-1) kernel.

    The output has size (3*n1-2) x (3*n2-2) and uses the same centered index
    convention, so centered output index = centered input index + centered
    kernel index.  Only the central n1 x n2 block is free of kernel
    truncation; use :func:`central_block` to extract it.
    """
    n1, n2 = field.shape
    if kernel.shape != (2 * n1 - 1, 2 * n2 - 1):
        raise ShapeError(
            f"kernel must be {(2 * n1 - 1, 2 * n2 - 1)} for input {field.shape}, "
            f"got {kernel.shape}")
    out1, out2 = 3 * n1 - 2, 3 * n2 - 2
    p1, p2 = _next_pow2(out1), _next_pow2(out2)
    fg = np.fft.fft2(field.data, s=(p1, p2))
    fk = np.fft.fft2(kernel.data, s=(p1, p2))
    full = np.fft.ifft2(fg * fk)[:out1, :out2]
    return field.with_data(full)


def convolution_kernel_spectrum(kernel, out_shape):
    """FFT of the zero-padded kernel at the power-of-two size used internally."""
    p1, p2 = _next_pow2(out_shape[0]), _next_pow2(out_shape[1])
    return np.fft.fft2(kernel.data, s=(p1, p2))


def central_block(field, n1, n2):
    """Centered n1 x n2 sub-block, aligned on the shared centering convention."""
    f1, f2 = field.shape
    if n1 > f1 or n2 > f2:
        raise ShapeError(f"block {(n1, n2)} larger than field {field.shape}")
    r0 = f1 // 2 - n1 // 2
    c0 = f2 // 2 - n2 // 2
    return field.with_data(field.data[r0:r0 + n1, c0:c0 + n2])


def zero_pad_center(field, n1, n2):
    """Embed the field in a centered n1 x n2 grid of zeros (intervals kept)."""
    f1, f2 = field.shape
    if n1 < f1 or n2 < f2:
        raise ShapeError(f"target {(n1, n2)} smaller than field {field.shape}")
    out = np.zeros((n1, n2), dtype=np.complex128)
    r0 = n1 // 2 - f1 // 2
    c0 = n2 // 2 - f2 // 2
    out[r0:r0 + f1, c0:c0 + f2] = field.data
    return field.with_data(out)


def fourier_upsample(field, n1, n2):
    """Band-limited interpolation onto a denser grid covering the same extent.

    The centered spectrum is zero-padded to (n1, n2) and inverted; sampling
    intervals shrink by the corresponding factors.
    """
    f1, f2 = field.shape
    if n1 < f1 or n2 < f2:
        raise ShapeError(f"target {(n1, n2)} smaller than field {field.shape}")
    spectrum = centered_dft2(field, -1)
    padded = zero_pad_center(spectrum, n1, n2)
    dense = centered_dft2(padded, +1)
    return ComplexField(dense.data / (f1 * f2),
                        field.dx * f1 / n1, field.dy * f2 / n2)
