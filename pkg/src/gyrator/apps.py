"""Applications: mode conversion, gyrator-domain sampling, watermarking, and
bit-plane image encryption.

Watermarking is non-blind: embedding adds payload to a magnitude-ranked slice
of the transform coefficients, and both extraction and detection reuse the
host-derived ranking carried by the key.  Encryption quantizes transform
coefficients componentwise to K bits and XORs each bit plane with a
logistic-map keystream; the transform angle is folded into every plane's seed
so the angle acts as key material, which is what makes decryption collapse
under microscopic angle errors.
"""

import math
import struct
from dataclasses import dataclass, field, replace

import numpy as np

from . import backend
from .core import Angle, ComplexField, as_angle, centered_indices
from .errors import (
    DegenerateKeyError,
    RangeError,
    ShapeError,
    SingularAngleError,
    UsageError,
    WeakKeyError,
)
from .hgf import (
    basis_interval,
    cached_basis,
    cached_shells,
    dfrft2_separable,
    dgt_dhgf_fast,
    hermite_gaussian,
    sample_points,
)
from .spectral import centered_dft2
from .transforms import DgtMethod, as_method, dgt_auto, dgt_ccc, dgt_dft


def psnr(reference, test, peak=255.0):
    """Peak signal-to-noise ratio in dB over the real parts."""
    ref = np.asarray(reference.data if isinstance(reference, ComplexField) else reference)
    tst = np.asarray(test.data if isinstance(test, ComplexField) else test)
    if ref.shape != tst.shape:
        raise ShapeError(f"images differ in shape: {ref.shape} vs {tst.shape}")
    mse = float(np.mean((ref.real - tst.real) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(peak * peak / mse)


def synthetic_image(n):
    """Deterministic photograph-like grayscale test image, values in [0, 255].

    Smooth blobs and a gradient plus a bar, a disk and gentle texture, so the
    spectrum has both concentrated and extended content.
    """
    t = (np.arange(n) + 0.5) / n
    x, y = np.meshgrid(t, t, indexing="ij")
    img = (0.32
           + 0.42 * np.exp(-((x - 0.38) ** 2 + (y - 0.42) ** 2) / (2 * 0.16 ** 2))
           - 0.25 * np.exp(-((x - 0.64) ** 2 + (y - 0.58) ** 2) / (2 * 0.09 ** 2))
           + 0.21 * np.exp(-((x - 0.52) ** 2 + (y - 0.76) ** 2) / (2 * 0.22 ** 2))
           + 0.18 * x)
    img += 0.30 * ((np.abs((x - 0.3) + 0.6 * (y - 0.65)) < 0.05) & (y > 0.2) & (y < 0.85))
    img += 0.25 * (((x - 0.72) ** 2 + (y - 0.3) ** 2) < 0.012)
    img += 0.05 * np.sin(24 * np.pi * x) * np.sin(18 * np.pi * y)
    img -= img.min()
    img *= 255.0 / img.max()
    return np.clip(img, 0.0, 255.0)


# ---------------------------------------------------------------------------
# mode conversion


def sampled_hg_mode(k, l, n, interval=None, half_offset=False):
    """Separable continuous Hermite-Gaussian mode sampled on an n x n grid."""
    step = basis_interval(n) if interval is None else float(interval)
    axis = sample_points(n, step) if half_offset else centered_indices(n) * step
    return ComplexField(np.outer(hermite_gaussian(k, axis), hermite_gaussian(l, axis)),
                        step, step)


def mode_convert(k, l, alpha, n, method=DgtMethod.LCC):
    """Transform a sampled Hermite-Gaussian beam mode by the given angle.

    At quarter-turn angles the output magnitude is a ring (a discrete
    Laguerre-Gaussian mode); intermediate angles give the intermediate stable
    modes.  Intervals are sqrt(2*pi/n) on both sides.
    """
    method = as_method(method)
    mode = sampled_hg_mode(k, l, n, half_offset=(method == DgtMethod.DHGF))
    return dgt_auto(mode, alpha, method)


def ring_uniformity(field, angular_bins=16):
    """Relative spread of ring-averaged magnitude over angular sectors.

    Finds the radius of peak ring-averaged magnitude, takes a +-20% annulus,
    and returns std/mean of per-sector means: near zero for circularly
    symmetric magnitudes.
    """
    mag = np.abs(field.data)
    n1, n2 = field.shape
    xc = centered_indices(n1)[:, None] * np.ones(n2)[None, :]
    yc = np.ones(n1)[:, None] * centered_indices(n2)[None, :]
    r = np.hypot(xc, yc)
    theta = np.arctan2(yc, xc)
    rmax = int(min(n1, n2) // 2)
    profile = np.array([mag[(r >= rb) & (r < rb + 1)].mean() for rb in range(rmax)])
    rpk = max(int(np.argmax(profile)), 1)
    halfwidth = max(0.2 * rpk, 1.5)  # keep every sector populated at small radii
    annulus = (r >= rpk - halfwidth) & (r <= rpk + halfwidth)
    bins = ((theta + np.pi) / (2.0 * np.pi) * angular_bins).astype(int) % angular_bins
    means = np.array([mag[annulus & (bins == i)].mean()
                      for i in range(angular_bins)
                      if np.any(annulus & (bins == i))])
    return float(means.std() / means.mean())


# ---------------------------------------------------------------------------
# gyrator-domain sampling and reconstruction


def gyrator_lowpass_reconstruct(samples, alpha, mask_radius):
    """Forward transform, zero outside a centered disk, inverse transform.

    The mask radius is in the physical units of the transform-domain grid and
    must not exceed the grid's corner radius (at which it covers everything).
    """
    a = as_angle(alpha)
    spectrum = dgt_dft(samples, a)
    uc = centered_indices(spectrum.n1) * spectrum.dx
    vc = centered_indices(spectrum.n2) * spectrum.dy
    corner = math.hypot(np.abs(uc).max(), np.abs(vc).max())
    if mask_radius > corner:
        raise RangeError(
            f"mask radius {mask_radius:g} exceeds the grid corner radius {corner:g}")
    rr = np.hypot(uc[:, None], vc[None, :])
    masked = ComplexField(np.where(rr <= mask_radius, spectrum.data, 0.0),
                          spectrum.dx, spectrum.dy)
    return dgt_dft(masked, -a.radians)


def make_bandlimited_demo_signal(n=100, alpha_deg=15.0, spectrum_radius=30, seed=11):
    """Synthesize a signal band-limited in one gyrator domain.

    A smooth random spectrum on a compact disk is inverse-transformed; the
    produced sample grid is undersampled in the plain Fourier sense, so a
    Fourier low-pass pipeline cannot reconstruct it while the matched-angle
    pipeline can.  Returns (samples, spectrum interval).
    """
    a = Angle.from_degrees(alpha_deg)
    du = 2.0 * math.pi * abs(math.sin(a.radians)) / (n * 0.666)
    rng = np.random.default_rng(seed)
    rr = np.hypot(centered_indices(n)[:, None], centered_indices(n)[None, :])
    disk = rr <= spectrum_radius
    spec = np.zeros((n, n), dtype=complex)
    vals = np.exp(-0.5 * (rr / (0.6 * spectrum_radius)) ** 2) \
        * np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, (n, n)))
    spec[disk] = vals[disk]
    g = dgt_dft(ComplexField(spec, du, du), -a.radians)
    return g, du


def fourier_lowpass_reconstruct(samples, mask_radius_pixels):
    """Plain Fourier low-pass baseline with a pixel-radius mask."""
    f = centered_dft2(samples, -1)
    rr = np.hypot(centered_indices(samples.n1)[:, None],
                  centered_indices(samples.n2)[None, :])
    masked = ComplexField(np.where(rr <= mask_radius_pixels, f.data, 0.0), f.dx, f.dy)
    back = centered_dft2(masked, +1)
    return ComplexField(back.data / (samples.n1 * samples.n2), samples.dx, samples.dy)


# ---------------------------------------------------------------------------
# watermarking


def _coefficient_transform(backend_tag):
    """(forward, inverse) pair for an exactly invertible coefficient domain."""
    if backend_tag == "dfrft":
        def fwd(g, a):
            return dfrft2_separable(g, a.radians, a.radians)

        def inv(g, a):
            return dfrft2_separable(g, -a.radians, -a.radians)

        return fwd, inv
    method = as_method(backend_tag)
    if method == DgtMethod.CCC:
        return (lambda g, a: dgt_ccc(g, a)), (lambda g, a: dgt_ccc(g, -a.radians))
    if method == DgtMethod.DHGF:
        def fwd(g, a):
            return dgt_dhgf_fast(g, a, cached_basis(g.n1), cached_shells(g.n1, a.radians))

        def inv(g, a):
            return dgt_dhgf_fast(g, -a.radians, cached_basis(g.n1),
                                 cached_shells(g.n1, -a.radians))

        return fwd, inv
    raise UsageError(
        f"backend {backend_tag!r} does not provide an exact negated-angle inverse; "
        "use ccc, dhgf, or dfrft")


@dataclass
class WatermarkKey:
    """Parameters of the coefficient-rank embedding.

    The permutation (ascending coefficient magnitude, ties broken by row-major
    index) is derived from the host during embedding and kept with the key;
    extraction and detection reuse it.
    """

    alpha: Angle
    q_offset: int
    length: int
    k1: float
    k2: float
    backend: str = "ccc"
    permutation: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.backend not in ("ccc", "dhgf", "dfrft"):
            raise UsageError(
                f"backend {self.backend!r} does not provide an exact "
                "negated-angle inverse; use ccc, dhgf, or dfrft")

    def validate_for(self, n_total):
        if self.q_offset < 0 or self.length < 1:
            raise RangeError("offset must be nonnegative and length positive")
        if self.q_offset + self.length > n_total:
            raise RangeError(
                f"payload [{self.q_offset}, {self.q_offset + self.length}) exceeds "
                f"the {n_total} available coefficients")


def magnitude_rank_permutation(coefficients):
    """Indices sorted by ascending |coefficient|, ties by row-major index."""
    flat = coefficients.ravel()
    return np.lexsort((np.arange(flat.size), np.abs(flat)))


def watermark_embed(host, w1, w2, key):
    """Embed two real payloads into magnitude-ranked transform coefficients.

    Ranks q+1 .. q+L receive host + k1*w1 + j*k2*w2; everything else passes
    through.  Returns the watermarked image (full complex field; take the
    real part for display) and stores the host ranking on the key.
    """
    w1 = np.asarray(w1, dtype=float).ravel()
    w2 = np.asarray(w2, dtype=float).ravel()
    if w1.size != key.length or w2.size != key.length:
        raise ShapeError(
            f"payloads must have length {key.length}, got {w1.size} and {w2.size}")
    key.validate_for(host.n1 * host.n2)
    fwd, inv = _coefficient_transform(key.backend)
    spectrum = fwd(host, key.alpha)
    flat = spectrum.data.ravel().copy()
    perm = magnitude_rank_permutation(flat)
    key.permutation = perm
    sel = perm[key.q_offset:key.q_offset + key.length]
    flat[sel] = flat[sel] + key.k1 * w1 + 1j * key.k2 * w2
    marked = ComplexField(flat.reshape(host.shape), spectrum.dx, spectrum.dy)
    return inv(marked, key.alpha)


def watermark_extract(watermarked, host, key):
    """Non-blind extraction: difference of ranked coefficients over strengths."""
    if watermarked.shape != host.shape:
        raise ShapeError(
            f"images differ in shape: {watermarked.shape} vs {host.shape}")
    if key.k1 == 0.0 or key.k2 == 0.0:
        raise DegenerateKeyError("embedding strengths must be nonzero to extract")
    fwd, _ = _coefficient_transform(key.backend)
    host_spec = fwd(host, key.alpha).data.ravel()
    perm = key.permutation if key.permutation is not None \
        else magnitude_rank_permutation(host_spec)
    sel = perm[key.q_offset:key.q_offset + key.length]
    suspect_spec = fwd(watermarked, key.alpha).data.ravel()
    diff = suspect_spec[sel] - host_spec[sel]
    return diff.real / key.k1, diff.imag / key.k2


def detector_response(suspect, w1, w2, key):
    """Correlation detector: sum of (w1 - j w2) times ranked coefficients."""
    fwd, _ = _coefficient_transform(key.backend)
    spec = fwd(suspect, key.alpha).data.ravel()
    if key.permutation is None:
        raise UsageError("key carries no ranking; embed first or set permutation")
    sel = key.permutation[key.q_offset:key.q_offset + key.length]
    w1 = np.asarray(w1, dtype=float).ravel()
    w2 = np.asarray(w2, dtype=float).ravel()
    return complex(np.sum((w1 - 1j * w2) * spec[sel]))


def detector_sweep(suspect, candidates1, candidates2, key):
    """Normalized |response| over candidate payload sets (max scaled to 1)."""
    fwd, _ = _coefficient_transform(key.backend)
    spec = fwd(suspect, key.alpha).data.ravel()
    if key.permutation is None:
        raise UsageError("key carries no ranking; embed first or set permutation")
    seg = spec[key.permutation[key.q_offset:key.q_offset + key.length]]
    c1 = np.asarray(candidates1, dtype=float)
    c2 = np.asarray(candidates2, dtype=float)
    responses = np.abs((c1 - 1j * c2) @ seg)
    top = responses.max()
    return responses / top if top > 0 else responses


# ---------------------------------------------------------------------------
# encryption

LOGISTIC_R = 3.99
LOGISTIC_BURN_IN = 1000
_DEGENERATE_SEEDS = (0.0, 0.5, 1.0)


@dataclass
class CryptoKey:
    """Bit-plane encryption key: angle, depth, and per-plane seeds.

    The angle enters every plane's keystream seed, so it is key material in
    its own right: a 1e-4 degree error desynchronizes all planes.
    """

    alpha: Angle
    bits: int
    x0: tuple
    r: float = LOGISTIC_R
    burn_in: int = LOGISTIC_BURN_IN
    region: int | None = None
    backend: str = "dhgf"

    def __post_init__(self):
        if not 1 <= self.bits <= 32:
            raise RangeError(f"bit depth must be in [1, 32], got {self.bits}")
        if len(self.x0) != self.bits:
            raise RangeError(
                f"need one initial condition per plane: {self.bits} planes, "
                f"{len(self.x0)} seeds")
        for x in self.x0:
            if not 0.0 < x < 1.0 or x in _DEGENERATE_SEEDS:
                raise WeakKeyError(
                    f"initial condition {x!r} is outside (0,1) or degenerate")


def _plane_seed(x0, alpha_radians, plane):
    """Fold the angle (and plane index) into the keystream seed.

    Any change to the angle or to x0, however small, lands the orbit on a
    different trajectory; the burn-in then decorrelates it completely.
    """
    s = math.fmod(x0 + alpha_radians / (2.0 * math.pi) + plane * (math.sqrt(5.0) - 1.0) / 2.0, 1.0)
    if s <= 0.0:
        s += 1.0
    if s in _DEGENERATE_SEEDS:  # measure-zero, but keep the orbit alive
        s = 0.5 * (s + 0.25)
    return s


@dataclass
class QuantizationMeta:
    """Per-component quantization ranges plus the encrypted region bounds."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float
    bits: int
    region: int | None = None

    @property
    def re_step(self):
        return _step(self.re_min, self.re_max, self.bits)

    @property
    def im_step(self):
        return _step(self.im_min, self.im_max, self.bits)


def _step(lo, hi, bits):
    width = hi - lo
    return width / (2 ** bits - 1) if width > 0 else 1.0


def _quantize(values, lo, step, bits):
    return np.clip(np.round((values - lo) / step), 0, 2 ** bits - 1).astype(np.uint32)


def _keystream_xor(q_re, q_im, key):
    """XOR every bit plane of both components with its keystream."""
    m = q_re.size
    out_re = q_re.copy()
    out_im = q_im.copy()
    for plane in range(key.bits):
        seed = _plane_seed(key.x0[plane], key.alpha.radians, plane)
        bits = backend.logistic_keystream(seed, key.r, key.burn_in, 2 * m)
        out_re ^= bits[:m].astype(np.uint32) << plane
        out_im ^= bits[m:].astype(np.uint32) << plane
    return out_re, out_im


def _region_slices(n1, n2, region):
    if region is None:
        return slice(0, n1), slice(0, n2)
    if not 1 <= region <= min(n1, n2):
        raise RangeError(f"region {region} outside [1, {min(n1, n2)}]")
    r0 = n1 // 2 - region // 2
    c0 = n2 // 2 - region // 2
    return slice(r0, r0 + region), slice(c0, c0 + region)


def _crypto_transform(key, g, sign):
    method = as_method(key.backend)
    a = sign * key.alpha.radians
    if method == DgtMethod.DHGF:
        return dgt_dhgf_fast(g, a, cached_basis(g.n1), cached_shells(g.n1, a))
    if method == DgtMethod.CCC:
        angle = Angle(a, tau=key.alpha.tau)
        if angle.near_odd_pi:
            raise SingularAngleError(
                "circular-convolution backend is singular at this angle")
        return dgt_ccc(g, angle)
    raise UsageError(
        f"backend {key.backend!r} lacks an exact negated-angle inverse; "
        "use dhgf or ccc")


def encrypt_image(image, key):
    """Transform, quantize the (optionally central) block, XOR bit planes,
    inverse transform.  Returns (encrypted field, quantization metadata)."""
    spectrum = _crypto_transform(key, image, +1)
    rs, cs = _region_slices(spectrum.n1, spectrum.n2, key.region)
    block = spectrum.data[rs, cs]
    re, im = block.real.ravel(), block.imag.ravel()
    meta = QuantizationMeta(float(re.min()), float(re.max()),
                            float(im.min()), float(im.max()),
                            key.bits, key.region)
    q_re = _quantize(re, meta.re_min, meta.re_step, key.bits)
    q_im = _quantize(im, meta.im_min, meta.im_step, key.bits)
    e_re, e_im = _keystream_xor(q_re, q_im, key)
    scrambled = spectrum.data.copy()
    scrambled[rs, cs] = ((meta.re_min + e_re * meta.re_step)
                         + 1j * (meta.im_min + e_im * meta.im_step)).reshape(block.shape)
    out = _crypto_transform(key, ComplexField(scrambled, spectrum.dx, spectrum.dy), -1)
    return out, meta


def decrypt_image(encrypted, key, meta):
    """Exact inverse of encrypt_image given the same key and metadata."""
    if meta.bits != key.bits:
        raise UsageError(f"metadata bit depth {meta.bits} != key depth {key.bits}")
    spectrum = _crypto_transform(key, encrypted, +1)
    rs, cs = _region_slices(spectrum.n1, spectrum.n2, meta.region)
    block = spectrum.data[rs, cs]
    q_re = _quantize(block.real.ravel(), meta.re_min, meta.re_step, key.bits)
    q_im = _quantize(block.imag.ravel(), meta.im_min, meta.im_step, key.bits)
    d_re, d_im = _keystream_xor(q_re, q_im, key)
    restored = spectrum.data.copy()
    restored[rs, cs] = ((meta.re_min + d_re * meta.re_step)
                        + 1j * (meta.im_min + d_im * meta.im_step)).reshape(block.shape)
    return _crypto_transform(key, ComplexField(restored, spectrum.dx, spectrum.dy), -1)


def partial_encrypt(image, key, region):
    """Encrypt only the centered region x region transform coefficients."""
    return encrypt_image(image, replace(key, region=int(region)))


# ---------------------------------------------------------------------------
# key files

_KEY_FIELDS = ("alpha_deg", "q_offset", "length", "k1", "k2",
               "bits", "r", "burn_in")


def _pack_double(x):
    return struct.pack(">d", float(x)).hex()


def _unpack_double(s):
    raw = bytes.fromhex(s.strip())
    if len(raw) != 8:
        raise UsageError(f"expected 16 hex digits for a double, got {s!r}")
    return struct.unpack(">d", raw)[0]


def save_key_file(path, *, alpha_deg, q_offset=0, length=0, k1=0.0, k2=0.0,
                  bits=0, r=LOGISTIC_R, burn_in=LOGISTIC_BURN_IN, x0=()):
    """One value per line: angle (degrees), offset, length, strengths, bit
    depth, map parameter, burn-in, then one big-endian hex double per plane
    seed.  Seeds are hex so keys survive text round-trips bit-exactly."""
    lines = [f"{alpha_deg!r}", str(int(q_offset)), str(int(length)),
             f"{k1!r}", f"{k2!r}", str(int(bits)), f"{r!r}", str(int(burn_in))]
    lines += [_pack_double(x) for x in x0]
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")


def load_key_file(path):
    """Parse the key file into a dict (see save_key_file for the layout)."""
    with open(path, encoding="ascii") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if len(lines) < len(_KEY_FIELDS):
        raise UsageError(f"key file has {len(lines)} lines, needs at least "
                         f"{len(_KEY_FIELDS)}")
    out = {
        "alpha_deg": float(lines[0]),
        "q_offset": int(lines[1]),
        "length": int(lines[2]),
        "k1": float(lines[3]),
        "k2": float(lines[4]),
        "bits": int(lines[5]),
        "r": float(lines[6]),
        "burn_in": int(lines[7]),
        "x0": tuple(_unpack_double(s) for s in lines[8:]),
    }
    return out


def watermark_key_from_file(path, backend_tag="ccc"):
    d = load_key_file(path)
    return WatermarkKey(Angle.from_degrees(d["alpha_deg"]), d["q_offset"],
                        d["length"], d["k1"], d["k2"], backend=backend_tag)


def crypto_key_from_file(path, backend_tag="dhgf", region=None):
    d = load_key_file(path)
    return CryptoKey(Angle.from_degrees(d["alpha_deg"]), d["bits"], d["x0"],
                     r=d["r"], burn_in=d["burn_in"], region=region,
                     backend=backend_tag)
