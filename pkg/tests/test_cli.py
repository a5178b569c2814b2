import json
import math
import subprocess
import sys

import numpy as np
import pytest

from helpers import random_image
from prunedastc.cli import EXIT_FORMAT, EXIT_IO, EXIT_OK, EXIT_USAGE, main
from prunedastc.fileio import read_astc, read_image, write_image, write_ppm
from prunedastc.metrics import psnr


def records(text: str) -> list[dict]:
    out = []
    for line in text.strip().splitlines():
        out.append(dict(kv.split("=", 1) for kv in line.split()))
    return out


@pytest.fixture
def ppm24(tmp_path, rng):
    p = tmp_path / "in.ppm"
    write_ppm(p, random_image(rng, 24, 24, smooth=True))
    return p


def test_encode_24x24(ppm24, tmp_path, capsys):
    out = tmp_path / "x.astc"
    assert main(["encode", str(ppm24), str(out)]) == EXIT_OK
    rec = records(capsys.readouterr().out)[0]
    assert rec["blocks"] == "4" and rec["payload_bytes"] == "64"
    assert rec["bpp"] == "0.888889" and rec["block"] == "12x12"
    assert out.stat().st_size == 16 + 64


def test_encode_8x8_prints_two_bpp(ppm24, tmp_path, capsys):
    assert main(["encode", "--block", "8x8", str(ppm24), str(tmp_path / "x.astc")]) == EXIT_OK
    assert records(capsys.readouterr().out)[0]["bpp"] == "2.000000"


def test_encode_missing_input(tmp_path, capsys):
    out = tmp_path / "x.astc"
    assert main(["encode", str(tmp_path / "missing.png"), str(out)]) == EXIT_IO
    assert not out.exists()
    cap = capsys.readouterr()
    assert cap.out == "" and "error" in cap.err


def test_usage_errors(ppm24, tmp_path, capsys):
    assert main(["encode", "--block", "6x6", str(ppm24), str(tmp_path / "x.astc")]) == EXIT_USAGE
    assert main(["bench", str(ppm24), "--iters", "0"]) == EXIT_USAGE
    assert main(["roundtrip", str(ppm24), str(tmp_path / "out.jpg")]) == EXIT_USAGE


def test_usage_error_from_parser(capsys):
    assert main(["frobnicate"]) == EXIT_USAGE
    assert main([]) == EXIT_USAGE
    assert main(["--help"]) == EXIT_OK


@pytest.mark.parametrize("suffix", [".png", ".ppm"])
def test_decode_dimensions_and_format(ppm24, tmp_path, suffix, capsys):
    src = tmp_path / "odd.png"
    img = random_image(np.random.default_rng(1), 19, 30)
    write_image(src, img)
    astc = tmp_path / "odd.astc"
    assert main(["encode", str(src), str(astc)]) == EXIT_OK
    out = tmp_path / f"odd_out{suffix}"
    assert main(["decode", str(astc), str(out)]) == EXIT_OK
    assert read_image(out).shape == img.shape
    head = out.read_bytes()[:4]
    assert head == (b"\x89PNG" if suffix == ".png" else b"P6\n3")


def test_decode_corrupt_magic(ppm24, tmp_path, capsys):
    astc = tmp_path / "x.astc"
    main(["encode", str(ppm24), str(astc)])
    data = bytearray(astc.read_bytes())
    data[0] ^= 0xFF
    astc.write_bytes(bytes(data))
    out = tmp_path / "y.png"
    assert main(["decode", str(astc), str(out)]) == EXIT_FORMAT
    assert not out.exists()


def test_decode_foreign_block(ppm24, tmp_path, capsys):
    astc = tmp_path / "x.astc"
    main(["encode", str(ppm24), str(astc)])
    data = bytearray(astc.read_bytes())
    data[16 + 1] |= 0x08  # partition count bits of block 0
    astc.write_bytes(bytes(data))
    assert main(["decode", str(astc), str(tmp_path / "y.png")]) == EXIT_FORMAT
    assert "partition" in capsys.readouterr().err


def test_roundtrip_constant_color(tmp_path, capsys):
    src = tmp_path / "c.ppm"
    write_ppm(src, np.full((40, 50, 3), (201, 17, 99), np.uint8))
    out = tmp_path / "c_out.ppm"
    assert main(["roundtrip", str(src), str(out)]) == EXIT_OK
    rec = records(capsys.readouterr().out)[0]
    assert float(rec["psnr_db"]) >= 34.0
    assert read_image(out).shape == (40, 50, 3)


def test_roundtrip_bpp_matches_encode(ppm24, tmp_path, capsys):
    main(["encode", "--block", "8x8", str(ppm24), str(tmp_path / "x.astc")])
    main(["roundtrip", "--block", "8x8", str(ppm24), str(tmp_path / "x.png")])
    a, b = records(capsys.readouterr().out)
    assert a["bpp"] == b["bpp"]


def test_metrics(tmp_path, capsys):
    black = tmp_path / "k.ppm"
    white = tmp_path / "w.ppm"
    small = tmp_path / "s.ppm"
    write_ppm(black, np.zeros((16, 16, 3), np.uint8))
    write_ppm(white, np.full((16, 16, 3), 255, np.uint8))
    write_ppm(small, np.zeros((8, 16, 3), np.uint8))
    assert main(["metrics", str(black), str(black)]) == EXIT_OK
    assert main(["metrics", str(black), str(white)]) == EXIT_OK
    same, opposite = records(capsys.readouterr().out)
    assert same == {"psnr_db": "inf", "ssim": "1.000000"}
    assert opposite["psnr_db"] == "0.000000"
    assert main(["metrics", str(black), str(small)]) != EXIT_OK


def test_json_output(ppm24, tmp_path, capsys):
    assert main(["metrics", "--json", str(ppm24), str(ppm24)]) == EXIT_OK
    obj = json.loads(capsys.readouterr().out)
    assert obj == {"psnr_db": "inf", "ssim": 1.0}
    assert main(["encode", "--json", str(ppm24), str(tmp_path / "x.astc")]) == EXIT_OK
    obj = json.loads(capsys.readouterr().out)
    assert obj["payload_bytes"] == 64 and obj["block"] == "12x12"


def _tree(root, rng):
    (root / "a" / "b").mkdir(parents=True)
    write_image(root / "one.png", random_image(rng, 40, 52, smooth=True))
    write_ppm(root / "a" / "two.ppm", random_image(rng, 33, 25, smooth=True))
    write_image(root / "a" / "b" / "three.png", random_image(rng, 64, 64, smooth=True))
    (root / "a" / "notes.txt").write_text("not an image")


def test_transcode_mirrors_tree(tmp_path, rng, capsys):
    src, dst = tmp_path / "src", tmp_path / "dst"
    _tree(src, rng)
    assert main(["transcode", str(src), str(dst)]) == EXIT_OK
    cap = capsys.readouterr()
    rows = records(cap.out)
    assert len(rows) == 4 and rows[-1]["summary"] == "transcode"
    assert rows[-1]["files"] == "3" and rows[-1]["skipped"] == "1"
    assert "skipped 1" in cap.err
    rels = sorted(p.relative_to(dst).as_posix() for p in dst.rglob("*") if p.is_file())
    assert rels == ["a/b/three.png", "a/two.ppm", "one.png"]
    for rel in rels:
        a, b = read_image(src / rel), read_image(dst / rel)
        assert a.shape == b.shape
        row = next(r for r in rows if r.get("file") == rel)
        assert float(row["psnr_db"]) == pytest.approx(psnr(a, b), abs=1e-6)


def test_transcode_idempotence_bound(tmp_path, rng, capsys):
    src, gen1, gen2 = tmp_path / "src", tmp_path / "g1", tmp_path / "g2"
    _tree(src, rng)
    for block in ("12x12", "8x8"):
        assert main(["transcode", "--block", block, str(src), str(gen1)]) == EXIT_OK
        assert main(["transcode", "--block", block, str(gen1), str(gen2)]) == EXIT_OK
        for p in src.rglob("*"):
            if p.suffix not in (".png", ".ppm"):
                continue
            rel = p.relative_to(src)
            first = psnr(read_image(p), read_image(gen1 / rel))
            second = psnr(read_image(gen1 / rel), read_image(gen2 / rel))
            assert second >= first - 0.5
    capsys.readouterr()


def test_transcode_empty_directory(tmp_path, capsys):
    (tmp_path / "empty").mkdir()
    assert main(["transcode", str(tmp_path / "empty"), str(tmp_path / "out")]) == EXIT_OK
    cap = capsys.readouterr()
    assert "no images" in cap.err
    assert records(cap.out)[0]["files"] == "0"


def test_transcode_continues_past_failures(tmp_path, rng, capsys):
    src = tmp_path / "src"
    _tree(src, rng)
    (src / "broken.png").write_bytes(b"garbage")
    code = main(["transcode", str(src), str(tmp_path / "dst")])
    assert code == EXIT_FORMAT
    summary = records(capsys.readouterr().out)[-1]
    assert summary["files"] == "3" and summary["failed"] == "1"


def test_transcode_missing_directory(tmp_path, capsys):
    assert main(["transcode", str(tmp_path / "nope"), str(tmp_path / "out")]) == EXIT_IO


def test_latency_defaults(capsys):
    assert main(["latency"]) == EXIT_OK
    rec = records(capsys.readouterr().out)[0]
    assert rec["lines"] == "107.469664" and rec["reference_lines_unverified"] == "145.000000"
    assert main(["latency", "--link-mbps", "2"]) == EXIT_OK
    rec = records(capsys.readouterr().out)[0]
    assert rec["lines"] == "1.091839" and rec["reference_lines_unverified"] == "3.200000"


def test_latency_warns_when_unreachable(capsys):
    assert main(["latency", "--link-mbps", "0.5"]) == EXIT_OK
    assert "does not fit" in capsys.readouterr().err


def test_bench_and_plot(ppm24, tmp_path, capsys):
    fig = tmp_path / "bench.png"
    assert main(["bench", str(ppm24), "--iters", "3", "--io", "--plot", str(fig)]) == EXIT_OK
    rec = records(capsys.readouterr().out)[0]
    assert float(rec["ms_per_frame"]) > 0 and "io_ms_per_frame" in rec
    assert rec["reference_ms_per_frame"] == "5.800000"
    assert fig.read_bytes()[:4] == b"\x89PNG"


def test_bench_no_images(tmp_path, capsys):
    (tmp_path / "d").mkdir()
    assert main(["bench", str(tmp_path / "d")]) == EXIT_USAGE


def test_report(tmp_path, rng, capsys):
    src = tmp_path / "src"
    _tree(src, rng)
    out = tmp_path / "rep"
    assert main(["report", str(src), "--out-dir", str(out)]) == EXIT_OK
    lines = (out / "rd.csv").read_text().splitlines()
    assert lines[0] == "image,block,width,height,bpp,psnr_db,ssim"
    assert len(lines) == 1 + 3 * 2
    assert (out / "rate_distortion.png").read_bytes()[:4] == b"\x89PNG"
    capsys.readouterr()


def test_module_entry_point(ppm24, tmp_path):
    out = tmp_path / "x.astc"
    r = subprocess.run(
        [sys.executable, "-m", "prunedastc", "encode", str(ppm24), str(out)],
        capture_output=True,
        text=True,
    )
    assert r.returncode == 0, r.stderr
    assert read_astc(out).width == 24
    assert not math.isnan(float(records(r.stdout)[0]["encode_ms"]))
