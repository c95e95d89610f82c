"""Grids, angles, parameter matrices and the error metric shared by all transforms.

Conventions:
  * A field stores complex samples row-major; entry (m, n) is the sample at
    physical point ((m - n1//2) * dx, (n - n2//2) * dy).  The first axis is x.
  * Angles are radians normalized to (-pi, pi].  Singularity classification
    uses a configurable guard band tau (default sin(pi/36), a 5 degree band
    around multiples of pi).
"""

import math

import numpy as np

from .errors import ShapeError, ValidationError

TWO_PI = 2.0 * math.pi

#: construction-time tolerance for the symplectic block conditions
SYMPLECTIC_TOL = 1e-12
#: tolerance applied when re-validating a matrix product
COMPOSE_TOL = 1e-9
#: default half-width of the singular guard band, as a bound on |sin(angle)|
DEFAULT_SINGULAR_TAU = math.sin(math.pi / 36.0)


def centered_indices(n):
    """Centered index axis: stored index m maps to m - n//2."""
    return np.arange(n) - n // 2


class ComplexField:
    """A rectangular grid of complex samples with physical sampling intervals.

    The sample array is made read-only on construction; operations return new
    fields, so values are safe to share across threads.
    """

    __slots__ = ("data", "dx", "dy")

    def __init__(self, data, dx=1.0, dy=1.0):
        arr = np.array(data, dtype=np.complex128, order="C")
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ShapeError(f"field data must be a 2D grid, got shape {arr.shape}")
        if not (dx > 0.0 and dy > 0.0):
            raise ValidationError(f"sampling intervals must be positive, got ({dx}, {dy})")
        if not np.isfinite(arr).all():
            raise ValidationError("field contains non-finite samples")
        arr.setflags(write=False)
        self.data = arr
        self.dx = float(dx)
        self.dy = float(dy)

    @property
    def n1(self):
        return self.data.shape[0]

    @property
    def n2(self):
        return self.data.shape[1]

    @property
    def shape(self):
        return self.data.shape

    def centered_axes(self):
        """(x indices, y indices) as centered integer arrays."""
        return centered_indices(self.n1), centered_indices(self.n2)

    def physical_axes(self):
        """(x coordinates, y coordinates) of the sample grid."""
        mx, ny = self.centered_axes()
        return mx * self.dx, ny * self.dy

    def with_data(self, data, dx=None, dy=None):
        """New field holding ``data``, inheriting intervals unless overridden."""
        return ComplexField(data, self.dx if dx is None else dx,
                            self.dy if dy is None else dy)

    def energy(self):
        return float(np.sum(np.abs(self.data) ** 2))

    def copy(self):
        return ComplexField(self.data, self.dx, self.dy)

    def __repr__(self):
        return f"ComplexField(shape={self.data.shape}, dx={self.dx:g}, dy={self.dy:g})"


def _as_array(field_or_array):
    if isinstance(field_or_array, ComplexField):
        return field_or_array.data
    return np.asarray(field_or_array)


def nrmse(g, h):
    """Root error energy of h against g, normalized by g's root energy.

    Returns inf when g is identically zero but h is not, and 0 when both are.
    """
    ga = _as_array(g)
    ha = _as_array(h)
    if ga.shape != ha.shape:
        raise ShapeError(f"fields differ in shape: {ga.shape} vs {ha.shape}")
    num = math.sqrt(float(np.sum(np.abs(ga - ha) ** 2)))
    den = math.sqrt(float(np.sum(np.abs(ga) ** 2)))
    if den == 0.0:
        return 0.0 if num == 0.0 else math.inf
    return num / den


class Angle:
    """Rotation angle in radians, normalized to (-pi, pi].

    near_kpi flags |sin a| < tau (singular band of the convolution/DFT
    decompositions); near_odd_pi flags |cos(a/2)| < tau (singular band of the
    circular-convolution decomposition).  Note the odd-pi band is about twice
    as wide in angle for the same tau.
    """

    __slots__ = ("radians", "tau")

    def __init__(self, radians, tau=DEFAULT_SINGULAR_TAU):
        r = math.remainder(float(radians), TWO_PI)
        if r == -math.pi:
            r = math.pi
        self.radians = r
        self.tau = float(tau)

    @classmethod
    def from_degrees(cls, degrees, tau=DEFAULT_SINGULAR_TAU):
        # land exactly on the conventional branches for multiples of 180
        d = math.remainder(float(degrees), 360.0)
        if d == 0.0:
            return cls(0.0, tau)
        if abs(d) == 180.0:
            return cls(math.pi, tau)
        return cls(math.radians(d), tau)

    @property
    def degrees(self):
        return math.degrees(self.radians)

    @property
    def near_kpi(self):
        return abs(math.sin(self.radians)) < self.tau

    @property
    def near_odd_pi(self):
        return abs(math.cos(self.radians / 2.0)) < self.tau

    @property
    def is_exact_zero(self):
        return self.radians == 0.0

    @property
    def is_exact_pi(self):
        return self.radians == math.pi

    @property
    def is_exact_multiple_of_pi(self):
        return self.is_exact_zero or self.is_exact_pi

    def __neg__(self):
        return Angle(-self.radians, self.tau)

    def __add__(self, other):
        return Angle(self.radians + float(other), self.tau)

    def __sub__(self, other):
        return Angle(self.radians - float(other), self.tau)

    def __float__(self):
        return self.radians

    def __repr__(self):
        return f"Angle({self.radians!r})"


def as_angle(value, tau=None):
    """Coerce radians (or an Angle) to an Angle, optionally overriding tau."""
    if isinstance(value, Angle):
        if tau is None or value.tau == tau:
            return value
        return Angle(value.radians, tau)
    return Angle(value, DEFAULT_SINGULAR_TAU if tau is None else tau)


class ABCDMatrix:
    """4x4 real parameter matrix of a 2D linear canonical transform.

    Partitioned into 2x2 blocks a, b, c, d; the three symplectic block
    conditions are validated on construction.
    """

    __slots__ = ("matrix",)

    def __init__(self, matrix, tol=SYMPLECTIC_TOL):
        m = np.array(matrix, dtype=float)
        if m.shape != (4, 4):
            raise ShapeError(f"parameter matrix must be 4x4, got {m.shape}")
        defect = symplectic_defect(m)
        if defect > tol:
            raise ValidationError(
                f"matrix violates symplectic conditions (defect {defect:.3e} > {tol:.1e})")
        m.setflags(write=False)
        self.matrix = m

    @property
    def a(self):
        return self.matrix[:2, :2]

    @property
    def b(self):
        return self.matrix[:2, 2:]

    @property
    def c(self):
        return self.matrix[2:, :2]

    @property
    def d(self):
        return self.matrix[2:, 2:]

    def __repr__(self):
        return f"ABCDMatrix({self.matrix.tolist()})"


def symplectic_defect(matrix):
    """Max-abs residual of the three symplectic block conditions."""
    m = np.asarray(matrix, dtype=float)
    a, b = m[:2, :2], m[:2, 2:]
    c, d = m[2:, :2], m[2:, 2:]
    r1 = a.T @ c - c.T @ a
    r2 = b.T @ d - d.T @ b
    r3 = a.T @ d - c.T @ b - np.eye(2)
    return float(max(np.abs(r1).max(), np.abs(r2).max(), np.abs(r3).max()))


_EXCHANGE = np.array([[0.0, 1.0], [1.0, 0.0]])


def gyrator_matrix(alpha):
    """Parameter matrix of the gyrator: rotations in the twisted planes.

    Blocks: a = cos(alpha) I, b = sin(alpha) J, c = -sin(alpha) J,
    d = cos(alpha) I, with J the 2x2 exchange matrix.
    """
    a = as_angle(alpha)
    ca, sa = math.cos(a.radians), math.sin(a.radians)
    m = np.zeros((4, 4))
    m[:2, :2] = ca * np.eye(2)
    m[:2, 2:] = sa * _EXCHANGE
    m[2:, :2] = -sa * _EXCHANGE
    m[2:, 2:] = ca * np.eye(2)
    return ABCDMatrix(m)


def compose(m1, m2, tol=COMPOSE_TOL):
    """Matrix product of two parameter matrices, re-validated at ``tol``."""
    product = m1.matrix @ m2.matrix
    return ABCDMatrix(product, tol=tol)


def reflect(field):
    """Point reflection through the grid center: out(m_c, n_c) = in(-m_c, -n_c).

    For even axis lengths the centered index -N/2 has no positive partner and
    maps to itself.
    """
    n1, n2 = field.shape
    ix = (2 * (n1 // 2) - np.arange(n1)) % n1
    iy = (2 * (n2 // 2) - np.arange(n2)) % n2
    return field.with_data(field.data[np.ix_(ix, iy)])
