# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: brute-force gyrator summation and the chaotic keystream.

gyrator._kernels_py holds the pure NumPy twins; gyrator.backend picks one at
import time.  Both implementations must stay numerically interchangeable (the
keystream bit-exactly so), which tests/test_kernels_backends.py enforces.
"""

import numpy as np

from libc.math cimport cos, sin


def direct_gyrator_sum(const double complex[:, ::1] g,
                       double cot_a, double csc_a,
                       double dx, double dy, double du, double dv,
                       Py_ssize_t out_n1, Py_ssize_t out_n2,
                       double scale):
    """Quadruple-sum gyrator kernel on centered index grids.

    out[p, q] = scale * sum_{m,n} exp(j*((p_c q_c du dv + m_c n_c dx dy) cot_a
                - (p_c n_c du dy + q_c m_c dv dx) csc_a)) * g[m, n]

    The summand's exponential is factored into precomputed tables (input
    chirp, two cross-phase tables, output chirp) so the O(N^4) literal sum
    runs on complex multiplies instead of per-term cos/sin.
    """
    cdef Py_ssize_t n1 = g.shape[0]
    cdef Py_ssize_t n2 = g.shape[1]
    cdef Py_ssize_t h1 = n1 // 2
    cdef Py_ssize_t h2 = n2 // 2
    cdef Py_ssize_t hp = out_n1 // 2
    cdef Py_ssize_t hq = out_n2 // 2

    out_arr = np.empty((out_n1, out_n2), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr

    # chirped input: exp(j m_c n_c dx dy cot) * g
    w_arr = np.empty((n1, n2), dtype=np.complex128)
    cdef double complex[:, ::1] w = w_arr
    # cross tables: exp(-j q_c m_c dv dx csc), exp(-j p_c n_c du dy csc)
    em_arr = np.empty((out_n2, n1), dtype=np.complex128)
    en_arr = np.empty((out_n1, n2), dtype=np.complex128)
    cdef double complex[:, ::1] em = em_arr
    cdef double complex[:, ::1] en = en_arr

    cdef Py_ssize_t p, q, m, n
    cdef double pc, qc, mc, nc, phase
    cdef double acc_re, acc_im, fre, fim, wre, wim, ere, eim
    cdef double complex cval

    for m in range(n1):
        mc = <double>(m - h1)
        for n in range(n2):
            nc = <double>(n - h2)
            phase = mc * nc * dx * dy * cot_a
            cval = g[m, n]
            w[m, n].real = cos(phase) * cval.real - sin(phase) * cval.imag
            w[m, n].imag = cos(phase) * cval.imag + sin(phase) * cval.real
    for q in range(out_n2):
        qc = <double>(q - hq)
        for m in range(n1):
            phase = -qc * (<double>(m - h1)) * dv * dx * csc_a
            em[q, m].real = cos(phase)
            em[q, m].imag = sin(phase)
    for p in range(out_n1):
        pc = <double>(p - hp)
        for n in range(n2):
            phase = -pc * (<double>(n - h2)) * du * dy * csc_a
            en[p, n].real = cos(phase)
            en[p, n].imag = sin(phase)

    for p in range(out_n1):
        pc = <double>(p - hp)
        for q in range(out_n2):
            qc = <double>(q - hq)
            acc_re = 0.0
            acc_im = 0.0
            for m in range(n1):
                ere = em[q, m].real
                eim = em[q, m].imag
                for n in range(n2):
                    # w[m, n] * en[p, n]
                    wre = w[m, n].real * en[p, n].real - w[m, n].imag * en[p, n].imag
                    wim = w[m, n].real * en[p, n].imag + w[m, n].imag * en[p, n].real
                    acc_re += ere * wre - eim * wim
                    acc_im += ere * wim + eim * wre
            phase = pc * qc * du * dv * cot_a
            fre = scale * cos(phase)
            fim = scale * sin(phase)
            out[p, q].real = fre * acc_re - fim * acc_im
            out[p, q].imag = fre * acc_im + fim * acc_re
    return out_arr


def logistic_keystream(double x0, double r, Py_ssize_t burn_in, Py_ssize_t nbits):
    """Threshold bits of a logistic-map orbit after a burn-in prefix.

    The iteration is written exactly as in the fallback so both backends
    produce identical IEEE-754 orbits.
    """
    out_arr = np.empty(nbits, dtype=np.uint8)
    cdef unsigned char[::1] out = out_arr
    cdef double x = x0
    cdef Py_ssize_t i

    for i in range(burn_in):
        x = r * x * (1.0 - x)
    for i in range(nbits):
        x = r * x * (1.0 - x)
        out[i] = 1 if x > 0.5 else 0
    return out_arr
