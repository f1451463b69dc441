import numpy as np

from dynlocness.benchmark import BenchmarkConfig, generate
from dynlocness.colormap import PALETTE, decode_ppm, encode_ppm, render, write_colormap


def test_single_community_is_black(tmp_path):
    timeline = [((0,),) * 5] * 4
    path = tmp_path / "c.ppm"
    write_colormap(path, timeline)
    pixels = decode_ppm(path.read_bytes())
    assert pixels.shape == (5, 4, 3)
    assert not pixels.any()


def test_truth_triangle_boundary():
    b = generate(BenchmarkConfig(seed=0))
    pixels = render(b.ground_truth)
    white = np.all(pixels == PALETTE[1], axis=2)
    sizes = [sum(m[0] == 1 for m in snap) for snap in b.ground_truth]
    assert white.sum(axis=0).tolist() == sizes
    assert pixels.shape == (64, 101, 3)


def test_one_step_timeline_and_encoding():
    pixels = render([((0,), (2,), (17,))])
    assert pixels.shape == (3, 1, 3)
    assert pixels[1, 0].tolist() == [255, 127, 0]
    assert pixels[2, 0].tolist() == PALETTE[1].tolist()
    data = encode_ppm(pixels)
    assert data.startswith(b"P6\n1 3\n255\n")
    assert np.array_equal(decode_ppm(data), pixels)
