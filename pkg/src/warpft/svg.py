"""Minimal polyline SVG output for diagnostic plots."""
import numpy as np

from warpft.signals import fmt


def polyline_svg(x, y, path, title="", logx=False, logy=False, width=640, height=400):
    x = np.log10(x) if logx else np.asarray(x, dtype=float)
    y = np.log10(y) if logy else np.asarray(y, dtype=float)
    pad = 40
    xr = (x.max() - x.min()) or 1.0
    yr = (y.max() - y.min()) or 1.0
    px = pad + (x - x.min()) / xr * (width - 2 * pad)
    py = height - pad - (y - y.min()) / yr * (height - 2 * pad)
    pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
    text = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">\n'
        f'<rect width="100%" height="100%" fill="white"/>\n'
        f'<text x="{pad}" y="20" font-size="14">{title}</text>\n'
        f'<text x="{pad}" y="{height - 10}" font-size="11">x: {fmt(x.min())} .. {fmt(x.max())}'
        f'{" (log10)" if logx else ""}; y: {fmt(y.min())} .. {fmt(y.max())}{" (log10)" if logy else ""}</text>\n'
        f'<polyline fill="none" stroke="black" stroke-width="1.5" points="{pts}"/>\n'
        "</svg>\n"
    )
    with open(path, "w") as fh:
        fh.write(text)
