from __future__ import annotations

import math

import numpy as np
import pytest

from oracles import oracle_project

from autocam360.geometry import Direction, Viewport, direction_to_equirect_pixel
from autocam360.renderer import (
    KERNEL_BACKEND,
    Image,
    ImageFormatError,
    RenderError,
    decode_ppm,
    encode_ppm,
    read_image,
    render_frames_dir,
    render_sequence,
    render_viewport,
    write_image,
)
from autocam360.synth import ScenarioSpec, synth_panorama

VP_ASPECT = 16 / 9
OUT_W, OUT_H = 320, 180


def flat_image(w, h, color) -> Image:
    pixels = np.zeros((h, w, 3), dtype=np.uint8)
    pixels[:] = color
    return Image(w, h, pixels)


# ---------------------------------------------------------------------------
# PPM I/O


def test_decode_1x1_red():
    img = decode_ppm(b"P6\n1 1\n255\n\xff\x00\x00")
    assert (img.width, img.height) == (1, 1)
    assert img.pixels.tolist() == [[[255, 0, 0]]]


def test_decode_handles_comments():
    img = decode_ppm(b"P6\n# a comment\n2 1 # trailing\n255\n" + b"\x01\x02\x03\x04\x05\x06")
    assert img.width == 2
    assert img.pixels[0, 1].tolist() == [4, 5, 6]


def test_bad_magic():
    with pytest.raises(ImageFormatError, match="magic"):
        decode_ppm(b"P5\n1 1\n255\n\x00")


def test_wrong_maxval():
    with pytest.raises(ImageFormatError, match="maxval"):
        decode_ppm(b"P6\n1 1\n65535\n\x00\x00\x00\x00\x00\x00")


def test_truncated_payload_names_offset():
    with pytest.raises(ImageFormatError, match="byte 14"):
        decode_ppm(b"P6\n2 1\n255\n\xff\x00\x00")  # 3 of 6 payload bytes


def test_round_trip_gradient(tmp_path):
    w, h = 64, 32
    pixels = np.zeros((h, w, 3), dtype=np.uint8)
    pixels[:, :, 0] = np.arange(w, dtype=np.uint8)[None, :] * 3
    pixels[:, :, 1] = np.arange(h, dtype=np.uint8)[:, None] * 7
    pixels[:, :, 2] = 99
    img = Image(w, h, pixels)
    data = encode_ppm(img)
    assert encode_ppm(decode_ppm(data)) == data

    path = tmp_path / "grad.ppm"
    write_image(img, path)
    assert read_image(path) == img


def test_image_validation():
    with pytest.raises(ValueError):
        Image(2, 2, np.zeros((2, 2), dtype=np.uint8))
    with pytest.raises(ValueError):
        Image(2, 2, np.zeros((2, 2, 3), dtype=np.float32))


# ---------------------------------------------------------------------------
# render_viewport


def test_uniform_source_renders_uniform_exactly():
    src = flat_image(128, 64, (13, 200, 77))
    vp = Viewport(Direction(1.0, 0.2), math.radians(75), VP_ASPECT)
    out = render_viewport(src, vp, OUT_W, OUT_H)
    assert (out.pixels == np.array([13, 200, 77], dtype=np.uint8)).all()


def test_aspect_mismatch_rejected():
    src = flat_image(128, 64, (0, 0, 0))
    vp = Viewport(Direction(0, 0), math.radians(75), VP_ASPECT)
    with pytest.raises(ValueError, match="aspect"):
        render_viewport(src, vp, 300, 180)


def marker_image(w, h, px, py) -> Image:
    pixels = np.zeros((h, w, 3), dtype=np.uint8)
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            pixels[(py + dy) % h, (px + dx) % w] = 255
    return Image(w, h, pixels)


@pytest.mark.parametrize(
    "center",
    [
        Direction(0.0, 0.0),
        Direction(math.pi, 0.0),  # seam-centered
        Direction(math.radians(120.0), math.radians(20.0)),
        Direction(math.radians(-75.0), math.radians(-30.0)),
        Direction(math.radians(-179.0), math.radians(10.0)),
    ],
)
def test_marker_localization_against_projection_oracle(center):
    w, h = 512, 256
    vp = Viewport(center, math.radians(75), VP_ASPECT)
    # marker slightly off the viewport center, snapped to a pixel center
    d = Direction(center.yaw + math.radians(6.0), center.pitch + math.radians(4.0))
    px, py = direction_to_equirect_pixel(d, w, h)
    px_i, py_i = round(px - 0.5), round(py - 0.5)
    src = marker_image(w, h, px_i, py_i)
    out = render_viewport(src, vp, OUT_W, OUT_H)

    # the direction actually drawn is the snapped pixel's center
    from autocam360.geometry import equirect_pixel_to_direction

    d_marker = equirect_pixel_to_direction(px_i + 0.5, py_i + 0.5, w, h)
    u, v = oracle_project(d_marker, vp)
    want_x, want_y = u * OUT_W - 0.5, v * OUT_H - 0.5

    # intensity centroid of the rendered blob
    brightness = out.pixels.astype(np.float64).sum(axis=2)
    mask = brightness >= 0.5 * brightness.max()
    ys, xs = np.nonzero(mask)
    weights = brightness[mask]
    got_x = float((xs * weights).sum() / weights.sum())
    got_y = float((ys * weights).sum() / weights.sum())
    assert math.hypot(got_x - want_x, got_y - want_y) <= 1.0


def test_rotation_consistency_within_one_level():
    spec = ScenarioSpec(seed=3, duration_s=1.0, fps=1.0, width=256, height=128)
    src = synth_panorama(spec, 0)
    k = 40
    rolled = Image(src.width, src.height, np.roll(src.pixels, k, axis=1))
    vp1 = Viewport(Direction(0.4, 0.1), math.radians(80), VP_ASPECT)
    vp2 = Viewport(
        Direction(0.4 + 2 * math.pi * k / src.width, 0.1), math.radians(80), VP_ASPECT
    )
    out1 = render_viewport(src, vp1, OUT_W, OUT_H)
    out2 = render_viewport(rolled, vp2, OUT_W, OUT_H)
    diff = np.abs(out1.pixels.astype(np.int16) - out2.pixels.astype(np.int16))
    assert diff.max() <= 1


def test_seam_continuity():
    # a seam-centered render of a horizontally smooth panorama shows no
    # column jump beyond what an equator-centered render shows
    spec = ScenarioSpec(seed=5, duration_s=1.0, fps=1.0, width=512, height=256)
    src = synth_panorama(spec, 0)

    def max_column_delta(img: Image) -> int:
        a = img.pixels.astype(np.int16)
        return int(np.abs(a[:, 1:, :] - a[:, :-1, :]).max())

    vp_seam = Viewport(Direction(-math.pi, 0.05), math.radians(80), VP_ASPECT)
    vp_front = Viewport(Direction(0.0, 0.05), math.radians(80), VP_ASPECT)
    seam_delta = max_column_delta(render_viewport(src, vp_seam, OUT_W, OUT_H))
    front_delta = max_column_delta(render_viewport(src, vp_front, OUT_W, OUT_H))
    assert seam_delta <= front_delta + 1


def test_render_deterministic():
    spec = ScenarioSpec(seed=9, duration_s=1.0, fps=1.0, width=256, height=128)
    src = synth_panorama(spec, 0)
    vp = Viewport(Direction(2.0, -0.3), math.radians(95), VP_ASPECT)
    a = render_viewport(src, vp, OUT_W, OUT_H)
    b = render_viewport(src, vp, OUT_W, OUT_H)
    assert encode_ppm(a) == encode_ppm(b)


@pytest.mark.skipif(KERNEL_BACKEND != "cython", reason="compiled kernel unavailable")
def test_backends_bit_identical():
    from autocam360 import _resample, _resample_np

    rng = np.random.default_rng(42)
    src = rng.integers(0, 256, size=(64, 128, 3), dtype=np.uint8)
    xs = rng.uniform(-10.0, 140.0, size=5000)
    ys = rng.uniform(-5.0, 70.0, size=5000)
    a = _resample.bilinear_wrap_sample(src, xs, ys)
    b = _resample_np.bilinear_wrap_sample(src, xs, ys)
    assert np.array_equal(np.asarray(a), b)


# ---------------------------------------------------------------------------
# sequences


def test_render_sequence_counts(tmp_path):
    spec = ScenarioSpec(seed=1, duration_s=1.0, fps=10.0, width=128, height=64)
    frames = [synth_panorama(spec, t) for t in range(10)]
    vp = Viewport(Direction(0.0, 0.0), math.radians(75), VP_ASPECT)
    outs = {}
    count = render_sequence(frames, [vp] * 10, 64, 36, lambda i, img: outs.__setitem__(i, img))
    assert count == 10
    assert sorted(outs) == list(range(10))

    with pytest.raises(RenderError, match="9 .*10|does not match"):
        render_sequence(frames[:9], [vp] * 10, 64, 36, lambda i, img: None)


def test_render_sequence_static_path_identical_outputs():
    spec = ScenarioSpec(seed=2, duration_s=1.0, fps=5.0, width=128, height=64)
    frame = synth_panorama(spec, 0)
    vp = Viewport(Direction(1.0, 0.0), math.radians(75), VP_ASPECT)
    outs = []
    render_sequence([frame] * 5, [vp] * 5, 64, 36, lambda i, img: outs.append(encode_ppm(img)))
    assert all(o == outs[0] for o in outs)


def test_render_frames_dir_missing_frame_reports_index(tmp_path):
    in_dir = tmp_path / "in"
    out_dir = tmp_path / "out"
    in_dir.mkdir()
    spec = ScenarioSpec(seed=1, duration_s=1.0, fps=3.0, width=128, height=64)
    for t in range(2):  # third frame missing
        write_image(synth_panorama(spec, t), in_dir / f"frame_{t:06d}.ppm")
    vp = Viewport(Direction(0.0, 0.0), math.radians(75), VP_ASPECT)
    with pytest.raises(RenderError, match="frame 2"):
        render_frames_dir(in_dir, out_dir, [vp] * 3, 64, 36)
