"""File formats: binary PGM images, the GYRC complex-field container, and
interval sidecars.

GYRC layout (little-endian): magic "GYRC", version u16 = 1, n1 u32, n2 u32,
dx f64, dy f64, then n1*n2 interleaved (re f64, im f64) samples in row-major
order under the package's centered-index convention.  Header is 30 bytes.
"""

import struct

import numpy as np

from .core import ComplexField
from .errors import FormatError, UsageError

GYRC_MAGIC = b"GYRC"
GYRC_VERSION = 1
GYRC_HEADER_BYTES = 30


def write_gyrc(path, field):
    with open(path, "wb") as fh:
        fh.write(GYRC_MAGIC)
        fh.write(struct.pack("<HII", GYRC_VERSION, field.n1, field.n2))
        fh.write(struct.pack("<dd", field.dx, field.dy))
        inter = np.empty(field.n1 * field.n2 * 2)
        inter[0::2] = field.data.real.ravel()
        inter[1::2] = field.data.imag.ravel()
        fh.write(inter.astype("<f8").tobytes())


def read_gyrc(path):
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:4] != GYRC_MAGIC:
        raise FormatError(f"bad magic {blob[:4]!r}, expected {GYRC_MAGIC!r}",
                          byte_offset=0)
    if len(blob) < GYRC_HEADER_BYTES:
        raise FormatError("truncated header", byte_offset=len(blob))
    version, n1, n2 = struct.unpack_from("<HII", blob, 4)
    if version != GYRC_VERSION:
        raise FormatError(f"unsupported version {version}", byte_offset=4)
    dx, dy = struct.unpack_from("<dd", blob, 14)
    need = GYRC_HEADER_BYTES + 16 * n1 * n2
    if len(blob) != need:
        raise FormatError(f"payload length {len(blob)} != expected {need}",
                          byte_offset=min(len(blob), need))
    inter = np.frombuffer(blob, dtype="<f8", offset=GYRC_HEADER_BYTES)
    data = inter[0::2] + 1j * inter[1::2]
    return ComplexField(data.reshape(n1, n2), dx, dy)


# ---------------------------------------------------------------------------
# PGM (binary P5, 8- or 16-bit)


def _read_token(blob, pos):
    """Next whitespace-delimited token, skipping '#' comments."""
    n = len(blob)
    while pos < n:
        c = blob[pos:pos + 1]
        if c.isspace():
            pos += 1
        elif c == b"#":
            while pos < n and blob[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
        else:
            break
    start = pos
    while pos < n and not blob[pos:pos + 1].isspace():
        pos += 1
    if start == pos:
        raise FormatError("unexpected end of header", byte_offset=start)
    return blob[start:pos], pos


def read_pgm(path, dx=1.0, dy=1.0):
    """Binary PGM to a real-valued field: rows map to the first (x) axis."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if blob[:2] != b"P5":
        raise FormatError(f"not a binary PGM (magic {blob[:2]!r})", byte_offset=0)
    pos = 2
    try:
        width_tok, pos = _read_token(blob, pos)
        height_tok, pos = _read_token(blob, pos)
        maxval_tok, pos = _read_token(blob, pos)
        width, height, maxval = int(width_tok), int(height_tok), int(maxval_tok)
    except ValueError as exc:
        raise FormatError(f"malformed header field: {exc}", byte_offset=pos) from exc
    if not 0 < maxval < 65536:
        raise FormatError(f"maxval {maxval} out of range", byte_offset=pos)
    pos += 1  # single whitespace byte after maxval
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    need = width * height * dtype.itemsize
    payload = blob[pos:pos + need]
    if len(payload) != need:
        raise FormatError(
            f"payload has {len(payload)} bytes, expected {need}",
            byte_offset=pos + len(payload))
    data = np.frombuffer(payload, dtype=dtype).reshape(height, width)
    return ComplexField(data.astype(float), dx, dy)


def write_pgm(path, field, emit="mag", maxval=255):
    """Write magnitude or phase of a field as binary PGM, min-max normalized.

    Magnitude maps [min, max] onto [0, maxval] (a constant field becomes
    zeros); phase maps [-pi, pi] linearly, so phase zero lands on the fixed
    mid-gray level floor(maxval/2).
    """
    if maxval not in (255, 65535):
        raise UsageError(f"maxval must be 255 or 65535, got {maxval}")
    if emit == "mag":
        values = np.abs(field.data)
        lo, hi = values.min(), values.max()
        scaled = np.zeros_like(values) if hi == lo \
            else (values - lo) * (maxval / (hi - lo))
    elif emit == "phase":
        values = np.angle(field.data)
        scaled = (values + np.pi) * (maxval / (2.0 * np.pi))
    else:
        raise UsageError(f"emit must be 'mag' or 'phase', got {emit!r}")
    levels = np.round(scaled)
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    with open(path, "wb") as fh:
        fh.write(f"P5\n{field.n2} {field.n1}\n{maxval}\n".encode("ascii"))
        fh.write(levels.astype(dtype).tobytes())


def write_intervals_sidecar(path, field):
    """Record the sampling intervals next to an emitted image."""
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"dx = {field.dx!r}\ndy = {field.dy!r}\n")


def write_quantization_meta(path, meta):
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"re_min = {meta.re_min!r}\nre_max = {meta.re_max!r}\n")
        fh.write(f"im_min = {meta.im_min!r}\nim_max = {meta.im_max!r}\n")
        fh.write(f"bits = {meta.bits}\n")
        fh.write(f"region = {meta.region if meta.region is not None else 'none'}\n")


def read_quantization_meta(path):
    from .apps import QuantizationMeta

    fields = {}
    with open(path, encoding="ascii") as fh:
        for line in fh:
            if "=" in line:
                name, value = line.split("=", 1)
                fields[name.strip()] = value.strip()
    try:
        region = fields["region"]
        return QuantizationMeta(
            float(fields["re_min"]), float(fields["re_max"]),
            float(fields["im_min"]), float(fields["im_max"]),
            int(fields["bits"]),
            None if region == "none" else int(region))
    except (KeyError, ValueError) as exc:
        raise FormatError(f"bad quantization metadata: {exc}") from exc
