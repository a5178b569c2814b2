"""Figures for the ``report`` and ``bench --plot`` commands.

Everything renders off-screen with the Agg backend and is written to a
file; nothing here opens a window.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

RC = {
    "figure.dpi": 120,
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "legend.frameon": False,
}

MARKERS = {"12x12": "o", "8x8": "s"}


def plot_rate_distortion(rows, path) -> None:
    """PSNR and SSIM against bpp, one series per input image.

    ``rows`` are mappings with ``image``, ``block``, ``bpp``, ``psnr_db``
    and ``ssim`` keys, as written to ``rd.csv``.
    """
    with plt.rc_context(RC):
        fig, (ax_psnr, ax_ssim) = plt.subplots(2, 1, figsize=(4.5, 5.5), sharex=True)
        images = sorted({r["image"] for r in rows})
        for name in images:
            pts = sorted((r for r in rows if r["image"] == name), key=lambda r: r["bpp"])
            xs = [r["bpp"] for r in pts]
            line = ax_psnr.plot(xs, [r["psnr_db"] for r in pts], "-", lw=1, label=name)[0]
            ax_ssim.plot(xs, [r["ssim"] for r in pts], "-", lw=1, color=line.get_color())
            for r in pts:
                m = MARKERS.get(r["block"], "x")
                ax_psnr.plot(r["bpp"], r["psnr_db"], m, color=line.get_color(), ms=4)
                ax_ssim.plot(r["bpp"], r["ssim"], m, color=line.get_color(), ms=4)
        ax_psnr.set_ylabel("PSNR (dB)")
        ax_ssim.set_ylabel("SSIM (-)")
        ax_ssim.set_xlabel("bpp")
        if len(images) <= 8:
            ax_psnr.legend(fontsize=7)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)


def plot_bench(report, path, reference_ms: float | None = None) -> None:
    """Per-encode timings with the mean and an optional reference line."""
    samples = report.samples_ms
    with plt.rc_context(RC):
        fig, ax = plt.subplots(figsize=(5, 3))
        ax.plot(range(1, len(samples) + 1), samples, ".", ms=4, label="encode")
        ax.axhline(report.ms_per_frame, color="C1", lw=1, label=f"mean {report.ms_per_frame:.2f} ms")
        if reference_ms is not None:
            ax.axhline(reference_ms, color="C2", lw=1, ls="--", label=f"reference {reference_ms:g} ms")
        ax.set_xlabel("sample")
        ax.set_ylabel("ms / frame")
        ax.set_ylim(bottom=0)
        ax.set_title(f"{report.block}, {report.threads} thread(s)", fontsize=9)
        ax.legend(fontsize=7)
        fig.tight_layout()
        fig.savefig(path)
        plt.close(fig)
