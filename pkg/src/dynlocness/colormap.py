"""Community colormaps as binary PPM images.

One column per time step, one row per vertex (vertex 0 on the top row).
Each pixel takes the palette colour of the vertex's lowest community id,
so a timeline with a single community renders entirely black.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .evaluation import project_primary

PALETTE = np.array(
    [
        (0, 0, 0),
        (255, 255, 255),
        (255, 127, 0),
        (31, 119, 180),
        (214, 39, 40),
        (44, 160, 44),
        (148, 103, 189),
        (255, 221, 0),
        (140, 86, 75),
        (227, 119, 194),
        (127, 127, 127),
        (23, 190, 207),
        (0, 0, 128),
        (128, 128, 0),
        (0, 128, 128),
        (128, 0, 0),
    ],
    dtype=np.uint8,
)


def label_matrix(timeline: Sequence[Sequence[Sequence[int]]]) -> np.ndarray:
    """``(n, steps + 1)`` array of projected community ids."""
    if not timeline:
        raise ValueError("timeline is empty")
    return np.stack([project_primary(s) for s in timeline], axis=1)


def render(timeline: Sequence[Sequence[Sequence[int]]]) -> np.ndarray:
    """RGB pixels, shape ``(n, steps + 1, 3)``."""
    return PALETTE[label_matrix(timeline) % len(PALETTE)]


def encode_ppm(pixels: np.ndarray) -> bytes:
    height, width, _ = pixels.shape
    return f"P6\n{width} {height}\n255\n".encode("ascii") + pixels.astype(np.uint8).tobytes()


def decode_ppm(data: bytes) -> np.ndarray:
    """Inverse of :func:`encode_ppm` for the header layout it writes."""
    magic, dims, maxval, body = data.split(b"\n", 3)
    if magic != b"P6" or maxval != b"255":
        raise ValueError("not an 8-bit binary PPM")
    width, height = (int(x) for x in dims.split())
    return np.frombuffer(body, dtype=np.uint8).reshape(height, width, 3)


def write_colormap(path, timeline: Sequence[Sequence[Sequence[int]]]) -> None:
    with open(path, "wb") as fh:
        fh.write(encode_ppm(render(timeline)))
