"""Grayscale rasterization of cobweb diagrams and phase portraits, plus PGM I/O.

Images are uint8 grids with 0 = ink and 255 = background, serialized as
binary PGM (P5, maxval 255) with the exact header ``P5\\n<w> <h>\\n255\\n``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import EmptyImageError, NonFiniteStateError, ParseError
from .dynamics import Orbit
from .maps import MapInstance, step_lanes

__all__ = [
    "RasterImage",
    "cobweb_window",
    "render_cobweb",
    "render_phase_portrait",
    "write_pgm",
    "read_pgm",
]

INK = 0
BACKGROUND = 255


@dataclass(frozen=True)
class RasterImage:
    width: int
    height: int
    pixels: np.ndarray  # (height, width) uint8, row-major

    def __post_init__(self):
        if self.pixels.shape != (self.height, self.width):
            raise ValueError(f"pixel grid {self.pixels.shape} != {(self.height, self.width)}")


def _blank(resolution: int) -> np.ndarray:
    return np.full((resolution, resolution), BACKGROUND, dtype=np.uint8)


def _to_px(v: float, lo: float, hi: float, resolution: int) -> int:
    return int(round((v - lo) / (hi - lo) * (resolution - 1)))


def _draw_line(canvas: np.ndarray, c0: int, r0: int, c1: int, r1: int) -> None:
    """Bresenham segment; pixels outside the canvas are skipped."""
    h, w = canvas.shape
    bound = 4 * max(h, w)
    c0 = max(-bound, min(bound, c0))
    c1 = max(-bound, min(bound, c1))
    r0 = max(-bound, min(bound, r0))
    r1 = max(-bound, min(bound, r1))
    dc = abs(c1 - c0)
    dr = -abs(r1 - r0)
    sc = 1 if c0 < c1 else -1
    sr = 1 if r0 < r1 else -1
    err = dc + dr
    while True:
        if 0 <= r0 < h and 0 <= c0 < w:
            canvas[r0, c0] = INK
        if c0 == c1 and r0 == r1:
            break
        e2 = 2 * err
        if e2 >= dr:
            err += dr
            c0 += sc
        if e2 <= dc:
            err += dc
            r0 += sr
    return


def cobweb_window(m: MapInstance) -> tuple[float, float]:
    """Fixed plot window: [0, 1] for the tent map with positive slope, else [-1, 1]."""
    if m.kind == "tent" and m.params.mu > 0.0:
        return (0.0, 1.0)
    return (-1.0, 1.0)


def render_cobweb(m: MapInstance, x0: float, n_steps: int,
                  resolution: int = 512) -> RasterImage:
    """Diagonal, map graph, and the cobweb polyline from x0, over a fixed window."""
    if m.dim != 1:
        raise ValueError("cobweb diagrams are defined for 1D maps only")
    if resolution < 16:
        raise ValueError("resolution must be >= 16")
    lo, hi = cobweb_window(m)
    canvas = _blank(resolution)

    def px(v):
        return _to_px(v, lo, hi, resolution)

    def py(v):
        return (resolution - 1) - _to_px(v, lo, hi, resolution)

    _draw_line(canvas, px(lo), py(lo), px(hi), py(hi))

    xs = np.linspace(lo, hi, resolution)
    ys = step_lanes(m, xs)
    if not np.all(np.isfinite(ys)):
        raise NonFiniteStateError("map graph is non-finite over the plot window")
    for k in range(resolution - 1):
        _draw_line(canvas, px(xs[k]), py(ys[k]), px(xs[k + 1]), py(ys[k + 1]))

    cur = float(x0)
    prev_r = py(cur)
    prev_c = px(cur)
    for k in range(n_steps):
        nxt = float(step_lanes(m, np.array([cur]))[0])
        if not np.isfinite(nxt):
            raise NonFiniteStateError(f"cobweb orbit diverged at step {k + 1}", iteration=k + 1)
        # vertical move to the graph, then horizontal move to the diagonal
        _draw_line(canvas, prev_c, prev_r, px(cur), py(nxt))
        _draw_line(canvas, px(cur), py(nxt), px(nxt), py(nxt))
        prev_c, prev_r = px(nxt), py(nxt)
        cur = nxt
    return RasterImage(resolution, resolution, canvas)


def render_phase_portrait(orbit: Orbit, bounds: tuple[float, float, float, float],
                          resolution: int = 512) -> RasterImage:
    """Scatter the orbit's states into a pixel grid; out-of-bounds points are clipped."""
    states = orbit.states
    if states.shape[1] != 2:
        raise ValueError("phase portraits need a 2D orbit")
    canvas = _blank(resolution)
    if len(states) == 0:
        warnings.warn("empty orbit produced an all-background phase portrait")
        return RasterImage(resolution, resolution, canvas)
    xlo, xhi, ylo, yhi = bounds
    cols = np.rint((states[:, 0] - xlo) / (xhi - xlo) * (resolution - 1)).astype(np.int64)
    rows = (resolution - 1) - np.rint((states[:, 1] - ylo) / (yhi - ylo) * (resolution - 1)).astype(np.int64)
    keep = (cols >= 0) & (cols < resolution) & (rows >= 0) & (rows < resolution)
    canvas[rows[keep], cols[keep]] = INK
    return RasterImage(resolution, resolution, canvas)


def write_pgm(img: RasterImage, path) -> None:
    if img.width == 0 or img.height == 0:
        raise EmptyImageError("cannot serialize a zero-dimension image")
    with open(path, "wb") as fh:
        fh.write(f"P5\n{img.width} {img.height}\n255\n".encode("ascii"))
        fh.write(img.pixels.tobytes())


def read_pgm(path) -> RasterImage:
    with open(path, "rb") as fh:
        data = fh.read()
    if not data.startswith(b"P5"):
        raise ParseError("not a binary PGM (missing P5 magic)", line=1)
    fields = []
    pos = 2
    while len(fields) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ParseError("truncated PGM header", line=1)
        fields.append(data[start:pos])
    pos += 1  # single whitespace byte after maxval
    try:
        width, height, maxval = (int(f) for f in fields)
    except ValueError:
        raise ParseError("non-numeric PGM header field", line=1) from None
    if maxval != 255:
        raise ParseError(f"unsupported maxval {maxval}", line=2)
    raw = data[pos : pos + width * height]
    if len(raw) != width * height:
        raise ParseError("pixel payload shorter than width*height", line=3)
    pixels = np.frombuffer(raw, dtype=np.uint8).reshape(height, width).copy()
    return RasterImage(width, height, pixels)
