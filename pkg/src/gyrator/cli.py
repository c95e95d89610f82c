"""Command-line front end.

Angles are taken in degrees on every flag (and converted exactly at
multiples of 180); files move through the PGM and GYRC formats defined in
gyrator.fileio.  Exit codes: 0 success, 2 usage, 3 format, 4 singular angle,
5 numerical failure.
"""

import argparse
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import backend
from .core import Angle, ComplexField, nrmse
from .errors import GyratorError, UsageError
from .fileio import (
    read_gyrc,
    read_pgm,
    read_quantization_meta,
    write_gyrc,
    write_intervals_sidecar,
    write_pgm,
    write_quantization_meta,
)
from .hgf import basis_interval
from .spectral import zero_pad_center
from .transforms import DgtMethod, as_method, dgt_auto, dgt_dft, dgt_lcc, transform
from . import apps, oracle


def _expand_range(start, stop, step):
    if step <= 0 or stop < start:
        return []
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [start + i * step for i in range(count)]


def _parse_range(text):
    """Colon range (inclusive) or a comma list, as floats.

    Both start:stop:step and start:step:stop orderings are accepted; the
    reading that yields the longer grid wins, so 5:175:5 sweeps in steps of
    five and 0:22.5:180 sweeps in steps of 22.5.
    """
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"range must have three colon-separated fields, got {text!r}")
        a, b, c = (float(p) for p in parts)
        stop_last = _expand_range(a, b, c)
        step_mid = _expand_range(a, c, b)
        if not stop_last and not step_mid:
            raise UsageError(f"range {text!r} is empty under either reading")
        return stop_last if len(stop_last) >= len(step_mid) else step_mid
    values = [float(p) for p in text.split(",") if p.strip()]
    if not values:
        raise UsageError(f"no values in {text!r}")
    return values


def _parse_int_list(text):
    return [int(p) for p in text.split(",") if p.strip()]


def _load_field(path, dx=None, dy=None):
    path = Path(path)
    if path.suffix.lower() == ".gyrc":
        field = read_gyrc(path)
        if dx or dy:
            field = ComplexField(field.data, dx or field.dx, dy or field.dy)
        return field
    return read_pgm(path, dx or 1.0, dy or 1.0)


def _emit_field(path, field, emit):
    path = Path(path)
    if emit == "gyrc" or (emit is None and path.suffix.lower() == ".gyrc"):
        write_gyrc(path, field)
    else:
        write_pgm(path, field, emit or "mag")
        write_intervals_sidecar(str(path) + ".intervals.txt", field)


def _write_csv(path, text):
    Path(path).write_text(text, encoding="ascii")


# ---------------------------------------------------------------------------
# subcommand handlers


def _basis_via_cache(n, cache_path):
    from .hgf import discrete_hgf_basis, load_basis, save_basis

    path = Path(cache_path)
    if path.exists():
        basis = load_basis(path)
        if basis.n != n:
            raise UsageError(f"cached basis is {basis.n}x{basis.n}, grid needs {n}")
        return basis
    basis = discrete_hgf_basis(n)
    save_basis(path, basis)
    return basis


def cmd_transform(args):
    method = as_method(args.method) if args.method != "auto" else None
    if args.method in ("dft", "ccc", "dhgf", "auto") and (args.du or args.dv):
        raise UsageError(
            "--du/--dv apply only to the direct and lcc routes; the dft route "
            "pins dx*dv = 2*pi*|sin a|/N1 and dy*du = 2*pi*|sin a|/N2, ccc "
            "reuses the input intervals, and dhgf fixes sqrt(2*pi/N)")
    g = _load_field(args.infile, args.dx, args.dy)
    if args.pad:
        if args.pad < max(g.n1, g.n2):
            raise UsageError(f"--pad {args.pad} smaller than the input grid")
        g = zero_pad_center(g, args.pad, args.pad)
    alpha = Angle.from_degrees(args.alpha)
    if args.method == "auto":
        out = dgt_auto(g, alpha, as_method(args.base))
    elif method == DgtMethod.LCC and args.full:
        out = dgt_lcc(g, alpha, args.du, args.dv)
    elif method == DgtMethod.DHGF and args.basis_cache:
        from .hgf import cached_shells, dgt_dhgf_fast

        basis = _basis_via_cache(g.n1, args.basis_cache)
        out = dgt_dhgf_fast(g, alpha, basis, cached_shells(g.n1, alpha.radians))
    else:
        out = transform(g, alpha, method, args.du, args.dv, safe=False)
    _emit_field(args.out, out, args.emit)
    print(f"wrote {args.out} ({out.n1}x{out.n2}, du={out.dx:.6g}, dv={out.dy:.6g})")
    return 0


_SWEEP_METHODS = ("lcc", "dft", "ccc", "dhgf")


def cmd_verify(args):
    if args.what == "gaussian" or args.what == "rhgf":
        methods = _SWEEP_METHODS if args.methods == "all" else tuple(args.methods.split(","))
        alphas = [Angle.from_degrees(d) for d in _parse_range(args.alphas)]
        if args.what == "gaussian":
            kind = oracle.GaussianInput(args.s)
        else:
            kind = oracle.RhgfInput(args.k, args.l)
        lines = ["method,alpha_deg,nrmse"]
        for m in methods:
            for deg, err in oracle.accuracy_sweep(m, kind, alphas, args.n):
                lines.append(f"{m},{deg:.10g},{err:.10g}")
        _write_csv(args.out, "\n".join(lines) + "\n")
        print(f"wrote {args.out}")
        return 0
    if args.what == "additivity":
        pair = _parse_range(args.alphas)
        if len(pair) != 2:
            raise UsageError("--alphas must supply exactly two angles, e.g. 25,20")
        sizes = _parse_int_list(args.sizes)
        if args.infile:
            img = _load_field(args.infile, args.dx, args.dy)
        else:
            base = min(sizes)
            img = ComplexField(apps.synthetic_image(base), 0.1567, 0.1567)
        rows = oracle.additivity_error_trend(img, pair[0], pair[1], sizes)
        lines = ["n,nrmse"] + [f"{n},{err:.10g}" for n, err in rows]
        _write_csv(args.out, "\n".join(lines) + "\n")
        print(f"wrote {args.out}")
        return 0
    raise UsageError(f"unknown verify target {args.what!r}")


def cmd_bench(args):
    if args.kernels:
        lines = ["kernel,backend,size,seconds"]
        impls = backend.implementations()
        rng = np.random.default_rng(0)
        for n in (16, 24, 32):
            g = np.ascontiguousarray(rng.standard_normal((n, n))
                                     + 1j * rng.standard_normal((n, n)))
            for name, impl in impls.items():
                t0 = time.perf_counter()
                impl.direct_gyrator_sum(g, 1.0, 1.4142, 0.1, 0.1, 0.1, 0.1, n, n, 1.0)
                lines.append(f"direct_sum,{name},{n},{time.perf_counter() - t0:.6f}")
        for nbits in (1 << 16, 1 << 20):
            for name, impl in impls.items():
                t0 = time.perf_counter()
                impl.logistic_keystream(0.37, 3.99, 1000, nbits)
                lines.append(f"keystream,{name},{nbits},{time.perf_counter() - t0:.6f}")
        _write_csv(args.out, "\n".join(lines) + "\n")
        print(f"wrote {args.out} (kernel backend in use: {backend.kernel_backend()})")
        return 0
    sizes = _parse_int_list(args.sizes)
    report = oracle.complexity_order_check(sizes, with_timings=not args.counts_only)
    text = oracle.complexity_report_to_csv(report)
    if args.methods != "all":
        wanted = set(args.methods.split(","))
        lines = text.splitlines()
        text = "\n".join([lines[0]] + [ln for ln in lines[1:]
                                       if ln.split(",")[1] in wanted]) + "\n"
    _write_csv(args.out, text)
    print(f"wrote {args.out}")
    return 0


def cmd_modes(args):
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    for deg in _parse_range(args.alpha_list):
        out = apps.mode_convert(args.k, args.l, Angle.from_degrees(deg), args.n,
                                as_method(args.method))
        stem = outdir / f"mode_{args.k}_{args.l}_alpha{deg:g}"
        write_pgm(f"{stem}_mag.pgm", out, "mag")
        write_pgm(f"{stem}_phase.pgm", out, "phase")
        write_intervals_sidecar(f"{stem}_mag.pgm.intervals.txt", out)
    print(f"wrote mode panels to {outdir}")
    return 0


def cmd_watermark(args):
    key = apps.watermark_key_from_file(args.key, args.backend)
    if args.action == "embed":
        host = _load_field(args.host, args.dx, args.dy)
        w1 = read_pgm(args.w1).data.real.ravel()
        w2 = read_pgm(args.w2).data.real.ravel()
        marked = apps.watermark_embed(host, w1, w2, key)
        write_gyrc(args.out, marked)
        print(f"wrote {args.out} (psnr vs host "
              f"{apps.psnr(host.data.real, marked.data.real):.2f} dB)")
        return 0
    if args.action == "extract":
        host = _load_field(args.host, args.dx, args.dy)
        suspect = _load_field(args.suspect, args.dx, args.dy)
        w1, w2 = apps.watermark_extract(suspect, host, key)
        side = int(round(math.sqrt(key.length)))
        if side * side != key.length:
            raise UsageError(
                f"payload length {key.length} is not square; use the library "
                "API to reshape extracted payloads")
        for name, w in (("w1", w1), ("w2", w2)):
            out = Path(args.out_dir) / f"extracted_{name}.pgm"
            write_pgm(out, ComplexField(w.reshape(side, side)), "mag")
        print(f"wrote extracted payloads to {args.out_dir}")
        return 0
    if args.action == "detect":
        host = _load_field(args.host, args.dx, args.dy)
        suspect = _load_field(args.suspect, args.dx, args.dy)
        w1 = read_pgm(args.w1).data.real.ravel()
        w2 = read_pgm(args.w2).data.real.ravel()
        apps.watermark_embed(host, w1, w2, key)  # derive the host ranking
        rng = np.random.default_rng(args.seed)
        c1 = rng.integers(0, 256, (args.candidates, key.length)).astype(float)
        c2 = rng.integers(0, 256, (args.candidates, key.length)).astype(float)
        correct = min(args.correct_index, args.candidates - 1)
        c1[correct] = w1
        c2[correct] = w2
        responses = apps.detector_sweep(suspect, c1, c2, key)
        lines = ["candidate,normalized_response"]
        lines += [f"{i},{r:.10g}" for i, r in enumerate(responses)]
        _write_csv(args.out, "\n".join(lines) + "\n")
        peak = int(np.argmax(responses))
        print(f"wrote {args.out}; peak at candidate {peak} "
              f"({'the embedded set' if peak == correct else 'NOT the embedded set'})")
        return 0
    raise UsageError(f"unknown watermark action {args.action!r}")


def cmd_crypt(args):
    region = args.region
    key = apps.crypto_key_from_file(args.key, args.backend, region)
    if args.action == "encrypt":
        g = _load_field(args.infile, args.dx, args.dy)
        if g.dx == 1.0 and g.dy == 1.0:
            step = basis_interval(g.n1)
            g = ComplexField(g.data, step, step)
        encrypted, meta = apps.encrypt_image(g, key)
        write_gyrc(args.out, encrypted)
        write_quantization_meta(str(args.out) + ".meta.txt", meta)
        print(f"wrote {args.out} and {args.out}.meta.txt")
        return 0
    if args.action == "decrypt":
        g = read_gyrc(args.infile)
        meta = read_quantization_meta(args.meta or str(args.infile) + ".meta.txt")
        restored = apps.decrypt_image(g, key, meta)
        out = Path(args.out)
        if out.suffix.lower() == ".gyrc":
            write_gyrc(out, restored)
        else:
            write_pgm(out, restored, "mag")
            write_intervals_sidecar(str(out) + ".intervals.txt", restored)
        print(f"wrote {args.out}")
        return 0
    raise UsageError(f"unknown crypt action {args.action!r}")


def cmd_sample_demo(args):
    outdir = Path(args.out_dir)
    outdir.mkdir(parents=True, exist_ok=True)
    samples, du = apps.make_bandlimited_demo_signal(alpha_deg=args.alpha)
    alpha = Angle.from_degrees(args.alpha)
    spectrum = dgt_dft(samples, alpha)
    mask_radius = 35 * du
    gy = apps.gyrator_lowpass_reconstruct(samples, alpha, mask_radius)
    fo = apps.fourier_lowpass_reconstruct(samples, 35)
    from .spectral import centered_dft2

    pairs = {
        "signal_mag": samples,
        "gyrator_spectrum": spectrum,
        "fourier_spectrum": centered_dft2(samples, -1),
        "gyrator_reconstruction": gy,
        "fourier_reconstruction": fo,
    }
    for name, fieldv in pairs.items():
        write_pgm(outdir / f"{name}.pgm", fieldv, "mag")
        write_intervals_sidecar(str(outdir / f"{name}.pgm.intervals.txt"), fieldv)
    e_gy = nrmse(samples, gy)
    e_fo = nrmse(samples, fo)
    (outdir / "report.txt").write_text(
        f"gyrator_domain_reconstruction_nrmse = {e_gy:.6e}\n"
        f"fourier_lowpass_reconstruction_nrmse = {e_fo:.6e}\n", encoding="ascii")
    print(f"wrote demo panels to {outdir} "
          f"(gyrator nrmse {e_gy:.2e}, fourier nrmse {e_fo:.2e})")
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gyrator",
        description="Discrete gyrator transforms: transforms, verification "
                    "sweeps, benchmarks, and imaging applications.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("transform", help="apply one transform to a field file")
    p.add_argument("--alpha", type=float, required=True, help="angle in degrees")
    p.add_argument("--method", required=True,
                   choices=["direct", "lcc", "dft", "ccc", "dhgf", "auto"])
    p.add_argument("--base", default="ccc", choices=["direct", "lcc", "dft", "ccc", "dhgf"],
                   help="underlying method for --method auto")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--du", type=float)
    p.add_argument("--dv", type=float)
    p.add_argument("--dx", type=float, help="input x interval (PGM inputs)")
    p.add_argument("--dy", type=float, help="input y interval (PGM inputs)")
    p.add_argument("--pad", type=int, help="zero-pad the input to this size")
    p.add_argument("--emit", choices=["mag", "phase", "gyrc"])
    p.add_argument("--full", action="store_true",
                   help="keep the full extended lcc output (needed to invert)")
    p.add_argument("--basis-cache",
                   help="eigenbasis cache file for the dhgf route (created on "
                        "first use, reloaded afterwards)")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("verify", help="accuracy and property sweeps")
    p.add_argument("what", choices=["gaussian", "rhgf", "additivity"])
    p.add_argument("--s", type=float, default=0.4)
    p.add_argument("--k", type=int, default=25)
    p.add_argument("--l", type=int, default=40)
    p.add_argument("--n", type=int, default=101)
    p.add_argument("--alphas", default="5:175:5")
    p.add_argument("--methods", default="all")
    p.add_argument("--sizes", default="128,256,512")
    p.add_argument("--in", dest="infile")
    p.add_argument("--dx", type=float)
    p.add_argument("--dy", type=float)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="operation counts and timings")
    p.add_argument("--sizes", default="64,128,256")
    p.add_argument("--methods", default="all")
    p.add_argument("--counts-only", action="store_true")
    p.add_argument("--kernels", action="store_true",
                   help="benchmark compiled vs fallback hot kernels instead")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("modes", help="beam-mode conversion panels")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--l", type=int, default=5)
    p.add_argument("--alpha-list", default="0:22.5:180")
    p.add_argument("--n", type=int, default=128)
    p.add_argument("--method", default="lcc")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_modes)

    p = sub.add_parser("watermark", help="embed, extract, or detect payloads")
    p.add_argument("action", choices=["embed", "extract", "detect"])
    p.add_argument("--key", required=True)
    p.add_argument("--backend", default="ccc", choices=["ccc", "dhgf", "dfrft"])
    p.add_argument("--host")
    p.add_argument("--suspect")
    p.add_argument("--w1")
    p.add_argument("--w2")
    p.add_argument("--out")
    p.add_argument("--out-dir", default=".")
    p.add_argument("--dx", type=float, default=0.1567)
    p.add_argument("--dy", type=float, default=0.1567)
    p.add_argument("--candidates", type=int, default=1000)
    p.add_argument("--correct-index", type=int, default=199)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_watermark)

    p = sub.add_parser("crypt", help="bit-plane encryption and decryption")
    p.add_argument("action", choices=["encrypt", "decrypt"])
    p.add_argument("--key", required=True)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--meta", help="quantization metadata file "
                                  "(default: <in>.meta.txt)")
    p.add_argument("--region", type=int,
                   help="encrypt only the centered RxR coefficient block")
    p.add_argument("--backend", default="dhgf", choices=["dhgf", "ccc"])
    p.add_argument("--dx", type=float,
                   help="input interval for PGM inputs (default sqrt(2*pi/N))")
    p.add_argument("--dy", type=float)
    p.set_defaults(func=cmd_crypt)

    p = sub.add_parser("sample-demo", help="gyrator-domain sampling comparison")
    p.add_argument("--alpha", type=float, default=15.0)
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_sample_demo)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GyratorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
