"""Command line interface.

Records go to stdout one per line as ``key=value`` pairs (or one JSON
object per record with ``--json``); diagnostics go to stderr.

Exit codes: 0 success, 1 usage, 2 I/O, 3 format or conformance error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from pathlib import Path

from . import metrics
from .astc import EncoderConfig, decode_image, encode_image
from .bench import (
    REFERENCE_LATENCY_LINES,
    REFERENCE_MS_PER_FRAME,
    LatencyModel,
    latency_lines,
    nominal_bpp,
    run_bench,
)
from .errors import AstcError
from .fileio import is_image_path, read_astc, read_image, write_astc, write_image
from .image import BlockSize

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2
EXIT_FORMAT = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fmt(value) -> str:
    if isinstance(value, float):
        if math.isinf(value):
            return "inf"
        return f"{value:.6f}"
    return str(value)


def _jsonable(value):
    if isinstance(value, (BlockSize, Path)):
        return str(value)
    if isinstance(value, float):
        # JSON has no infinity or NaN literal
        if math.isnan(value):
            return None
        if math.isinf(value):
            return "inf"
    return value


def emit(record: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps({k: _jsonable(v) for k, v in record.items()}))
    else:
        print(" ".join(f"{k}={_fmt(v)}" for k, v in record.items()))


def warn(message: str) -> None:
    print(f"prunedastc: warning: {message}", file=sys.stderr)


def _block_arg(text: str) -> BlockSize:
    try:
        return BlockSize.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return value


def cmd_encode(args) -> int:
    img = read_image(args.input)
    enc = encode_image(img, EncoderConfig(args.block), args.threads)
    write_astc(args.output, enc.payload, enc.block, enc.width, enc.height)
    emit(
        {
            "file": args.output,
            "block": enc.block,
            "width": enc.width,
            "height": enc.height,
            "blocks": enc.stats.blocks,
            "payload_bytes": enc.stats.payload_bytes,
            "bpp": enc.stats.bpp,
            "encode_ms": enc.stats.encode_seconds * 1000.0,
        },
        args.json,
    )
    return EXIT_OK


def cmd_decode(args) -> int:
    _check_image_suffix(args.output)
    f = read_astc(args.input)
    start = time.perf_counter()
    img = decode_image(f.payload, f.block, f.width, f.height, args.threads)
    elapsed = time.perf_counter() - start
    write_image(args.output, img)
    emit(
        {
            "file": args.output,
            "block": f.block,
            "width": f.width,
            "height": f.height,
            "decode_ms": elapsed * 1000.0,
        },
        args.json,
    )
    return EXIT_OK


def _roundtrip_file(src, dst, block: BlockSize, threads: int, with_ssim: bool = True) -> dict:
    img = read_image(src)
    enc = encode_image(img, EncoderConfig(block), threads)
    out = decode_image(enc.payload, enc.block, enc.width, enc.height, threads)
    write_image(dst, out)
    record = {
        "file": dst,
        "width": enc.width,
        "height": enc.height,
        "bpp": enc.stats.bpp,
        "psnr_db": metrics.psnr(img, out),
    }
    if with_ssim:
        small = min(img.shape[:2]) < metrics.SSIM_WINDOW
        record["ssim"] = math.nan if small else metrics.ssim(img, out)
    return record


def cmd_roundtrip(args) -> int:
    _check_image_suffix(args.output)
    emit(_roundtrip_file(args.input, args.output, args.block, args.threads), args.json)
    return EXIT_OK


def cmd_transcode(args) -> int:
    src_root = Path(args.input_dir)
    dst_root = Path(args.output_dir)
    if not src_root.is_dir():
        raise FileNotFoundError(f"{src_root} is not a directory")
    rows, failures, skipped = [], [], 0
    for dirpath, dirnames, filenames in os.walk(src_root):
        dirnames.sort()
        for name in sorted(filenames):
            src = Path(dirpath) / name
            rel = src.relative_to(src_root)
            if not is_image_path(name):
                skipped += 1
                continue
            dst = dst_root / rel
            dst.parent.mkdir(parents=True, exist_ok=True)
            try:
                record = _roundtrip_file(src, dst, args.block, args.threads, with_ssim=False)
            except (OSError, AstcError) as exc:
                failures.append((rel, exc))
                warn(f"{rel}: {exc}")
                continue
            record["file"] = str(rel)
            rows.append(record)
            emit(record, args.json)
    if skipped:
        warn(f"skipped {skipped} non-image file(s)")
    if not rows and not failures:
        warn(f"no images found under {src_root}")
    finite = [r["psnr_db"] for r in rows if not math.isinf(r["psnr_db"])]
    summary = {
        "summary": "transcode",
        "files": len(rows),
        "failed": len(failures),
        "skipped": skipped,
        "mean_bpp": sum(r["bpp"] for r in rows) / len(rows) if rows else math.nan,
        "mean_psnr_db": sum(finite) / len(finite) if finite else (math.inf if rows else math.nan),
    }
    emit(summary, args.json)
    if failures:
        return max(EXIT_FORMAT if isinstance(e, AstcError) else EXIT_IO for _, e in failures)
    return EXIT_OK


def cmd_metrics(args) -> int:
    ref = read_image(args.reference)
    dist = read_image(args.distorted)
    report = metrics.compare(ref, dist)
    emit({"psnr_db": report.psnr_db, "ssim": report.ssim}, args.json)
    return EXIT_OK


def _collect_images(path: Path) -> list[Path]:
    if path.is_dir():
        return sorted(p for p in path.rglob("*") if p.is_file() and is_image_path(p))
    if path.exists():
        return [path]
    raise FileNotFoundError(f"{path} does not exist")


def cmd_bench(args) -> int:
    paths = _collect_images(Path(args.path))
    if not paths:
        raise UsageError(f"no images found in {args.path}")
    start = time.perf_counter()
    frames = [read_image(p) for p in paths]
    io_ms = (time.perf_counter() - start) * 1000.0 / len(frames)
    report = run_bench(frames, args.block, args.iters, args.threads)
    if args.io:
        report.io_ms_per_frame = io_ms
    record = report.as_dict()
    record.pop("samples_ms")
    if not args.io:
        record.pop("io_ms_per_frame")
    emit(record, args.json)
    if args.plot:
        from .plotting import plot_bench

        plot_bench(report, args.plot, REFERENCE_MS_PER_FRAME[args.block])
    return EXIT_OK


def cmd_latency(args) -> int:
    bpp = args.bpp if args.bpp is not None else nominal_bpp(args.block)
    model = LatencyModel(args.encode_ms, args.link_mbps, bpp, args.width, args.height, args.budget_ms)
    result = latency_lines(model)
    record = {
        "link_mbps": args.link_mbps,
        "encode_ms_per_frame": args.encode_ms,
        "bpp": bpp,
        "budget_ms": args.budget_ms,
        "lines": result.lines,
        "encode_ms": result.encode_ms,
        "transmit_ms": result.transmit_ms,
    }
    ref_lines = REFERENCE_LATENCY_LINES.get(args.link_mbps)
    if ref_lines is not None:
        record["reference_lines_unverified"] = ref_lines
    emit(record, args.json)
    if not result.reachable:
        warn(f"budget of {args.budget_ms} ms does not fit a single line ({result.lines:.3f} lines)")
    return EXIT_OK


def cmd_report(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for p in args.inputs:
        paths.extend(_collect_images(Path(p)))
    if not paths:
        raise UsageError("no images found")
    rows = []
    for path in paths:
        img = read_image(path)
        for block in BlockSize:
            enc = encode_image(img, EncoderConfig(block), args.threads)
            dec = decode_image(enc.payload, enc.block, enc.width, enc.height, args.threads)
            rep = metrics.compare(img, dec, enc.stats.payload_bytes)
            row = {
                "image": path.name,
                "block": str(block),
                "width": enc.width,
                "height": enc.height,
                "bpp": rep.bpp,
                "psnr_db": rep.psnr_db,
                "ssim": rep.ssim,
            }
            rows.append(row)
            emit(row, args.json)
    csv_path = out_dir / "rd.csv"
    with open(csv_path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)
    from .plotting import plot_rate_distortion

    fig_path = out_dir / "rate_distortion.png"
    plot_rate_distortion(rows, fig_path)
    emit({"csv": csv_path, "figure": fig_path}, args.json)
    return EXIT_OK


def _check_image_suffix(path) -> None:
    if not is_image_path(path):
        raise UsageError(f"output {path} must end in .png or .ppm")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="prunedastc", description="Fixed-rate pruned ASTC encoder and tools.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, block=True, threads=True):
        if block:
            p.add_argument("--block", type=_block_arg, default=BlockSize.B12x12, help="12x12 (default) or 8x8")
        if threads:
            p.add_argument("--threads", type=_positive_int, default=1, help="codec worker threads")
        p.add_argument("--json", action="store_true", help="emit JSON records")

    p = sub.add_parser("encode", help="image -> .astc")
    p.add_argument("input")
    p.add_argument("output")
    common(p)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help=".astc -> PNG/PPM (by extension)")
    p.add_argument("input")
    p.add_argument("output")
    common(p, block=False)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("roundtrip", help="encode+decode in memory, write the degraded image")
    p.add_argument("input")
    p.add_argument("output")
    common(p)
    p.set_defaults(func=cmd_roundtrip)

    p = sub.add_parser("transcode", help="roundtrip every image of a directory tree")
    p.add_argument("input_dir")
    p.add_argument("output_dir")
    common(p)
    p.set_defaults(func=cmd_transcode)

    p = sub.add_parser("metrics", help="PSNR and SSIM of two images")
    p.add_argument("reference")
    p.add_argument("distorted")
    common(p, block=False, threads=False)
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("bench", help="encode throughput on preloaded images")
    p.add_argument("path", help="image file or directory")
    p.add_argument("--iters", type=_positive_int, default=10)
    p.add_argument("--io", action="store_true", help="also report image load time")
    p.add_argument("--plot", metavar="PNG", help="write a timing figure")
    common(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("latency", help="lines of latency for an encode+send budget")
    p.add_argument("--encode-ms", type=float, default=REFERENCE_MS_PER_FRAME[BlockSize.B12x12])
    p.add_argument("--link-mbps", type=float, default=500.0)
    p.add_argument("--bpp", type=float, default=None, help="default: nominal rate of --block")
    p.add_argument("--width", type=int, default=2048)
    p.add_argument("--height", type=int, default=1024)
    p.add_argument("--budget-ms", type=float, default=1.0)
    common(p, threads=False)
    p.set_defaults(func=cmd_latency)

    p = sub.add_parser("report", help="rate-distortion table and figure for both block sizes")
    p.add_argument("inputs", nargs="+", help="image files or directories")
    p.add_argument("--out-dir", required=True)
    common(p, block=False)
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # --help and argument errors; keep main() returning a status code
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"prunedastc: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AstcError as exc:
        print(f"prunedastc: error: {exc}", file=sys.stderr)
        return EXIT_FORMAT
    except (OSError, ValueError) as exc:
        print(f"prunedastc: error: {exc}", file=sys.stderr)
        return EXIT_IO if isinstance(exc, OSError) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
