"""Discrete Hermite-Gaussian machinery and the eigenbasis gyrator transform.

The 1D discrete basis is built from the orthonormal eigenvectors of a
periodic second-difference operator with a cosine potential centered on the
half-sample point (N-1)/2, ordered by zero-crossing count and sign-fixed
against samples of the continuous functions.  Rotated 2D basis functions mix
inside shells of constant total order via Wigner rotation coefficients; the
fast transform applies the per-shell mixing in the separable-basis domain.

Half-integer angular momentum labels are carried as doubled integers so shell
indexing stays exact.
"""

import math
import struct
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .core import ComplexField, as_angle
from .errors import (
    ConfigurationError,
    FormatError,
    NumericalError,
    RangeError,
    ShapeError,
)

_QUARTER_PI = 0.25 * math.pi


# ---------------------------------------------------------------------------
# continuous Hermite-Gaussian functions


def hermite_gaussian(k, x):
    """Order-k Hermite-Gaussian function evaluated at the points ``x``.

    Uses the normalized three-term recurrence (each step renormalizes by the
    order), which keeps intermediate values of order unity for large k.
    """
    if k < 0:
        raise RangeError(f"order must be nonnegative, got {k}")
    x = np.asarray(x, dtype=float)
    h_prev = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    if k == 0:
        return h_prev
    h = math.sqrt(2.0) * x * h_prev
    for j in range(2, k + 1):
        h, h_prev = x * math.sqrt(2.0 / j) * h - math.sqrt((j - 1) / j) * h_prev, h
    return h


def hermite_gaussian_stack(kmax, x):
    """All orders 0..kmax at once; rows are orders."""
    x = np.asarray(x, dtype=float)
    out = np.empty((kmax + 1, x.size))
    out[0] = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    if kmax >= 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for j in range(2, kmax + 1):
        out[j] = x * math.sqrt(2.0 / j) * out[j - 1] - math.sqrt((j - 1) / j) * out[j - 2]
    return out


def basis_interval(n):
    """Implied sampling interval of the N-point discrete basis."""
    return math.sqrt(2.0 * math.pi / n)


def sample_points(n, interval=None):
    """Half-sample-centered abscissae (m - (N-1)/2) * interval."""
    step = basis_interval(n) if interval is None else float(interval)
    return (np.arange(n) - 0.5 * (n - 1)) * step


def sampled_hgf(k, n, interval=None):
    """Unit-norm samples of the continuous order-k function on the basis grid."""
    v = hermite_gaussian(k, sample_points(n, interval))
    norm = np.linalg.norm(v)
    if norm == 0.0:
        raise NumericalError(f"sampled function of order {k} underflowed at n={n}")
    return v / norm


# ---------------------------------------------------------------------------
# discrete basis


class HGFBasis:
    """Orthonormal N x N matrix whose k-th column is the order-k discrete
    Hermite-Gaussian vector, plus its grid metadata."""

    __slots__ = ("matrix", "n")

    def __init__(self, matrix):
        m = np.asarray(matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ShapeError(f"basis matrix must be square, got {m.shape}")
        m = np.array(m, order="C")
        m.setflags(write=False)
        self.matrix = m
        self.n = m.shape[0]

    @property
    def center(self):
        return 0.5 * (self.n - 1)

    @property
    def interval(self):
        return basis_interval(self.n)

    def column(self, k):
        if not 0 <= k < self.n:
            raise RangeError(f"order {k} outside [0, {self.n})")
        return self.matrix[:, k]


def commuting_matrix(n):
    """Second difference plus cosine diagonal, centered at (N-1)/2.

    The cosine potential's quartic term cancels the leading discretization
    error of the second difference, which is what makes the eigenvectors
    track the continuous functions at the sqrt(2*pi/N) grid scale.
    """
    m = np.arange(n)
    mat = np.zeros((n, n))
    mat[m, m] = 2.0 * np.cos(2.0 * np.pi * (m - 0.5 * (n - 1)) / n)
    off = np.arange(n - 1)
    mat[off, off + 1] = 1.0
    mat[off + 1, off] = 1.0
    return mat


def zero_crossings(v, clamp=0.0):
    """Sign changes along a vector, ignoring entries with |v| <= clamp.

    Counts are reliable wherever components sit above the eigensolver noise
    floor; the deep evanescent tails of high-order vectors alternate at
    magnitudes near 1e-17 where signs are not meaningful.
    """
    s = v[np.abs(v) > clamp]
    return int(np.count_nonzero(s[:-1] * s[1:] < 0.0))


def _sector_eigvecs(diag, off):
    try:
        _, vec = eigh_tridiagonal(diag, off)
    except Exception as exc:  # pragma: no cover - LAPACK failure
        raise NumericalError(f"sector eigendecomposition failed: {exc}") from exc
    return vec[:, ::-1]  # descending eigenvalue: smooth states first


def discrete_hgf_basis(n):
    """Orthonormal discrete Hermite-Gaussian basis of size N.

    The commuting operator is reflection-symmetric about (N-1)/2, so it is
    folded into even and odd parity sectors (each a Jacobi matrix with simple
    spectrum); Sturm oscillation then guarantees the interleaved columns have
    0, 1, ..., N-1 sign changes by construction, which a sort on numerically
    degenerate pairs could not.  Signs are fixed so each column correlates
    positively with the sampled continuous function of the same order.
    """
    if n < 2:
        raise RangeError(f"basis size must be at least 2, got {n}")
    m = np.arange(n)
    diag = 2.0 * np.cos(2.0 * np.pi * (m - 0.5 * (n - 1)) / n)
    half = n // 2
    basis = np.zeros((n, n))
    inv_sqrt2 = 1.0 / math.sqrt(2.0)

    if n % 2 == 0:
        idx = np.arange(half, n)
        d_even = diag[idx].copy()
        d_even[0] += 1.0  # fold couples the two center samples
        d_odd = diag[idx].copy()
        d_odd[0] -= 1.0
        off = np.ones(half - 1)
        v_even = _sector_eigvecs(d_even, off)
        v_odd = _sector_eigvecs(d_odd, off)
        for j in range(half):
            basis[idx, 2 * j] = v_even[:, j] * inv_sqrt2
            basis[n - 1 - idx, 2 * j] = v_even[:, j] * inv_sqrt2
            basis[idx, 2 * j + 1] = v_odd[:, j] * inv_sqrt2
            basis[n - 1 - idx, 2 * j + 1] = -v_odd[:, j] * inv_sqrt2
    else:
        center = half
        idx = np.arange(center + 1, n)
        d_even = diag[center:].copy()
        off_even = np.ones(half)
        off_even[0] = math.sqrt(2.0)  # center sample couples to both neighbors
        v_even = _sector_eigvecs(d_even, off_even)
        for j in range(half + 1):
            basis[center, 2 * j] = v_even[0, j]
            basis[idx, 2 * j] = v_even[1:, j] * inv_sqrt2
            basis[2 * center - idx, 2 * j] = v_even[1:, j] * inv_sqrt2
        if half:
            v_odd = _sector_eigvecs(diag[idx].copy(), np.ones(half - 1))
            for j in range(half):
                basis[idx, 2 * j + 1] = v_odd[:, j] * inv_sqrt2
                basis[2 * center - idx, 2 * j + 1] = -v_odd[:, j] * inv_sqrt2

    sampled = hermite_gaussian_stack(n - 1, sample_points(n))
    for k in range(n):
        corr = float(sampled[k] @ basis[:, k])
        if corr < 0.0 or (corr == 0.0 and basis[np.argmax(np.abs(basis[:, k])), k] < 0.0):
            basis[:, k] = -basis[:, k]
    return HGFBasis(basis)


@lru_cache(maxsize=8)
def cached_basis(n):
    return discrete_hgf_basis(n)


def hgf2(k, l, basis):
    """Separable 2D discrete basis function of order (k, l)."""
    if not (0 <= k < basis.n and 0 <= l < basis.n):
        raise RangeError(f"orders ({k}, {l}) outside [0, {basis.n})")
    data = np.outer(basis.column(k), basis.column(l)).astype(np.complex128)
    step = basis.interval
    return ComplexField(data, step, step)


# ---------------------------------------------------------------------------
# Wigner rotation coefficients


def _doubled(value, name):
    doubled = 2.0 * float(value)
    rounded = round(doubled)
    if abs(doubled - rounded) > 1e-9:
        raise RangeError(f"{name} must be integer or half-integer, got {value}")
    return int(rounded)


def _validate_jm(two_j, two_m1, two_m2):
    if two_j < 0:
        raise RangeError("total order must be nonnegative")
    for two_m in (two_m1, two_m2):
        if abs(two_m) > two_j:
            raise RangeError(f"|M| = {abs(two_m) / 2} exceeds J = {two_j / 2}")
        if (two_j - two_m) % 2:
            raise RangeError("J - M must be an integer")


def wigner_d(j, m1, m2, beta):
    """Real rotation mixing coefficient d^J_{M1,M2}(beta).

    Evaluated by the factorial sum with log-factorials.  The alternating sum
    cancels catastrophically for large J (about 0.6*J decimal digits lost at
    beta near pi/2), so treat results as exact only for small orders; the
    matrix builder below stays accurate at any order.
    """
    two_j = _doubled(j, "J")
    two_m1 = _doubled(m1, "M1")
    two_m2 = _doubled(m2, "M2")
    _validate_jm(two_j, two_m1, two_m2)

    jp1 = (two_j + two_m1) // 2
    jm1 = (two_j - two_m1) // 2
    jp2 = (two_j + two_m2) // 2
    jm2 = (two_j - two_m2) // 2
    dm = (two_m1 - two_m2) // 2

    half = 0.5 * float(beta)
    c, s = math.cos(half), math.sin(half)
    prefactor_log = 0.5 * (math.lgamma(jp1 + 1) + math.lgamma(jm1 + 1)
                           + math.lgamma(jp2 + 1) + math.lgamma(jm2 + 1))
    total = 0.0
    for t in range(max(0, -dm), min(jp2, jm1) + 1):
        cos_exp = two_j + (two_m2 - two_m1) // 2 - 2 * t
        sin_exp = dm + 2 * t
        if (c == 0.0 and cos_exp != 0) or (s == 0.0 and sin_exp != 0):
            continue
        log_den = (math.lgamma(jp2 - t + 1) + math.lgamma(t + 1)
                   + math.lgamma(dm + t + 1) + math.lgamma(jm1 - t + 1))
        mag = math.exp(prefactor_log - log_den)
        term = mag * (c ** cos_exp) * (s ** sin_exp)
        total += term if (dm + t) % 2 == 0 else -term
    return total


def wigner_D(j, m1, m2, chi, beta, gamma):
    """Phase-dressed rotation coefficient e^{-j M1 chi} d e^{-j M2 gamma}."""
    d = wigner_d(j, m1, m2, beta)
    return complex(np.exp(-1j * float(m1) * chi) * d * np.exp(-1j * float(m2) * gamma))


def wigner_d_matrix(two_j, beta):
    """Full (2J+1) x (2J+1) real orthogonal d-matrix at angle beta.

    Rows and columns run over M = J, J-1, ..., -J.  Built by exponentiating
    the tridiagonal rotation generator through a symmetric-tridiagonal
    eigendecomposition, which stays orthogonal to machine precision at any
    order (unlike the alternating factorial sum).
    """
    if two_j < 0:
        raise RangeError("doubled order must be nonnegative")
    size = two_j + 1
    if size == 1:
        return np.ones((1, 1))
    # generator off-diagonal: couples M and M-1 with strength sqrt((J+M)(J-M+1))/2
    k = np.arange(1, size)
    t = 0.5 * np.sqrt(k * (size - k))
    lam, vec = eigh_tridiagonal(np.zeros(size), t)
    two_lam = np.round(2.0 * lam)
    if np.max(np.abs(2.0 * lam - two_lam)) > 1e-6:
        raise NumericalError("generator eigenvalues drifted from half-integers")
    lam = 0.5 * two_lam
    phases = np.exp(-1j * float(beta) * lam)
    core = (vec * phases) @ vec.T
    # undo the diagonal similarity that made the generator real symmetric
    u = (-1j) ** np.arange(size)
    d = (np.conj(u)[:, None] * core * u[None, :]).real
    return d


def gyrator_shell_matrix(two_l, alpha):
    """Complex unitary mixing matrix of one constant-order shell.

    Entry (i, j) equals the phase-dressed coefficient with M1 = L/2 - i,
    M2 = L/2 - j, inner rotation 2*alpha, and the fixed quarter-turn phases:
    a diagonal unimodular similarity of the orthogonal d-matrix.
    """
    d = wigner_d_matrix(two_l, 2.0 * float(alpha))
    m_doubled = two_l - 2 * np.arange(two_l + 1)
    p = np.exp(0.25j * math.pi * m_doubled)
    return p[:, None] * d * np.conj(p)[None, :]


class WignerShellSet:
    """Per-shell mixing matrices for one grid size and angle.

    Stores the matrices for shells L = 0..N-1; shells N..2(N-1) reuse the
    mirrored entry 2(N-1)-L, whose size matches the shortened anti-diagonal.
    """

    __slots__ = ("n", "alpha", "_mats")

    def __init__(self, n, alpha, mats):
        self.n = n
        self.alpha = float(alpha)
        self._mats = tuple(mats)

    def matrix(self, shell):
        if not 0 <= shell <= 2 * (self.n - 1):
            raise RangeError(f"shell {shell} outside [0, {2 * (self.n - 1)}]")
        if shell < self.n:
            return self._mats[shell]
        return self._mats[2 * (self.n - 1) - shell]

    def adjoint(self):
        """Shell set of the negated angle (conjugate transpose per shell)."""
        return WignerShellSet(self.n, -self.alpha,
                              [m.conj().T for m in self._mats])


def build_shell_matrices(n, alpha):
    """All shell mixing matrices for an N x N grid at the given angle."""
    a = as_angle(alpha)
    mats = [gyrator_shell_matrix(two_l, a.radians) for two_l in range(n)]
    return WignerShellSet(n, a.radians, mats)


_SHELL_CACHE = {}
_SHELL_CACHE_MAX = 4


def cached_shells(n, alpha):
    """Small keyed cache of shell sets; reuses the adjoint for negated angles."""
    a = as_angle(alpha).radians
    key = (n, a)
    if key in _SHELL_CACHE:
        return _SHELL_CACHE[key]
    mirror = (n, -a)
    if mirror in _SHELL_CACHE:
        shells = _SHELL_CACHE[mirror].adjoint()
    else:
        shells = build_shell_matrices(n, a)
    if len(_SHELL_CACHE) >= _SHELL_CACHE_MAX:
        _SHELL_CACHE.pop(next(iter(_SHELL_CACHE)))
    _SHELL_CACHE[key] = shells
    return shells


# ---------------------------------------------------------------------------
# rotated basis functions and the eigenbasis transform


def rhgf(k, l, basis):
    """Discrete rotated 2D basis function of order (k, l).

    A d(pi/2)-weighted combination of the separable functions with the same
    total order; shells at or above the grid size fall back to the mirrored
    coefficient set, which keeps the family orthonormal.
    """
    n = basis.n
    if not (0 <= k < n and 0 <= l < n):
        raise RangeError(f"orders ({k}, {l}) outside [0, {n})")
    total = k + l
    if total <= n - 1:
        s_range = range(0, total + 1)
        two_j = total
    else:
        s_range = range(total - n + 1, n)
        two_j = 2 * (n - 1) - total
    j = 0.5 * two_j
    m1 = 0.5 * (l - k)
    data = np.zeros((n, n))
    for s in s_range:
        coeff = wigner_d(j, m1, 0.5 * total - s, 0.5 * math.pi)
        data += coeff * np.outer(basis.column(s), basis.column(total - s))
    step = basis.interval
    return ComplexField(data.astype(np.complex128), step, step)


def _require_square(field):
    if field.n1 != field.n2:
        raise ShapeError(f"eigenbasis transform needs a square grid, got {field.shape}")


def dgt_dhgf_direct(g, alpha, basis):
    """Eigenbasis gyrator transform via the full rotated-function expansion.

    O(N^4); serves as the oracle for the shell-mixing fast path.  Each
    coefficient picks up the phase exp(-j*alpha*(k-l)).
    """
    _require_square(g)
    if basis.n != g.n1:
        raise ConfigurationError(f"basis size {basis.n} does not match grid {g.n1}")
    a = as_angle(alpha)
    n = g.n1
    out = np.zeros((n, n), dtype=np.complex128)
    for k in range(n):
        for l in range(n):
            r = rhgf(k, l, basis).data.real
            coeff = np.sum(g.data * r)
            out += np.exp(-1j * a.radians * (k - l)) * coeff * r
    step = basis.interval
    return ComplexField(out, step, step)


def _shell_index_arrays(n, shell):
    ks = np.arange(max(0, shell - n + 1), min(shell, n - 1) + 1)
    return ks, shell - ks


def dgt_dhgf_fast(g, alpha, basis=None, shells=None):
    """Eigenbasis gyrator transform via per-shell mixing.

    Two real-complex matrix products move the field into and out of the
    separable-basis domain; each anti-diagonal (constant total order) is
    mixed by its shell matrix, mirrored shells reusing the lower-order
    matrix.  Identical to dgt_dhgf_direct to roundoff.
    """
    _require_square(g)
    n = g.n1
    a = as_angle(alpha)
    if basis is None:
        basis = cached_basis(n)
    if basis.n != n:
        raise ConfigurationError(f"basis size {basis.n} does not match grid {n}")
    if shells is None:
        shells = cached_shells(n, a.radians)
    if shells.n != n:
        raise ConfigurationError(f"shell set built for n={shells.n}, grid is {n}")
    if shells.alpha != a.radians:
        raise ConfigurationError(
            f"shell set built for angle {shells.alpha!r}, requested {a.radians!r}")

    h = basis.matrix
    coeff = h.T @ g.data @ h
    mixed = np.empty_like(coeff)
    for shell in range(2 * n - 1):
        ks, ls = _shell_index_arrays(n, shell)
        mixed[ks, ls] = shells.matrix(shell) @ coeff[ks, ls]
    out = h @ mixed @ h.T
    step = basis.interval
    return ComplexField(out, step, step)


def dgt_dhgf(g, alpha):
    """Fast eigenbasis transform with cached basis and shell sets."""
    _require_square(g)
    return dgt_dhgf_fast(g, alpha, cached_basis(g.n1), cached_shells(g.n1, as_angle(alpha).radians))


def dfrft2_separable(g, ax, ay, basis=None):
    """Separable 2D fractional transform in the same discrete eigenbasis.

    Applies H diag(e^{-j k ax}) H^T along x and the ay version along y; the
    baseline the nonseparable transform is compared against.
    """
    _require_square(g)
    n = g.n1
    if basis is None:
        basis = cached_basis(n)
    if basis.n != n:
        raise ConfigurationError(f"basis size {basis.n} does not match grid {n}")
    h = basis.matrix
    orders = np.arange(n)
    op_x = (h * np.exp(-1j * float(ax) * orders)[None, :]) @ h.T
    op_y = (h * np.exp(-1j * float(ay) * orders)[None, :]) @ h.T
    out = op_x @ g.data @ op_y.T
    step = basis.interval
    return ComplexField(out, step, step)


# ---------------------------------------------------------------------------
# basis cache file

_BASIS_MAGIC = b"GYRH"
_BASIS_VERSION = 1


def save_basis(path, basis):
    """Binary dump of the basis matrix: magic, version u16, n u32, n*n f64."""
    with open(path, "wb") as fh:
        fh.write(_BASIS_MAGIC)
        fh.write(struct.pack("<HI", _BASIS_VERSION, basis.n))
        fh.write(np.ascontiguousarray(basis.matrix).tobytes())


def load_basis(path):
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != _BASIS_MAGIC:
            raise FormatError(f"bad basis magic {magic!r}", byte_offset=0)
        header = fh.read(6)
        if len(header) != 6:
            raise FormatError("truncated basis header", byte_offset=4)
        version, n = struct.unpack("<HI", header)
        if version != _BASIS_VERSION:
            raise FormatError(f"unsupported basis version {version}", byte_offset=4)
        payload = fh.read(8 * n * n)
        if len(payload) != 8 * n * n:
            raise FormatError("truncated basis payload", byte_offset=10 + len(payload))
        matrix = np.frombuffer(payload, dtype="<f8").reshape(n, n)
    gram_defect = np.max(np.abs(matrix.T @ matrix - np.eye(n)))
    if gram_defect > 1e-8:
        raise FormatError(f"cached basis is not orthonormal (defect {gram_defect:.2e})")
    return HGFBasis(matrix)
