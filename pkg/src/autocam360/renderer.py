"""Perspective frame rendering from equirectangular sources.

Every output pixel center is unprojected through the viewport onto the
sphere, mapped to continuous equirect coordinates, and bilinearly sampled
with horizontal wrap-around at the seam and vertical clamp at the poles.

The per-pixel gather/blend is the hot kernel: a compiled extension is
used when available, with a pure-NumPy fallback selected at import time.
Both produce byte-identical frames (see ``benchmarks/bench_resample.py``
for the speed comparison), and rendering is deterministic regardless of
pixel iteration order.

Images are PPM "P6" (binary, maxval 255) end to end; video encode/decode
is left to external tools.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .geometry import TWO_PI, Viewport, _camera_basis

try:
    from . import _resample as _kernel

    KERNEL_BACKEND = "cython"
except ImportError:  # compiled extension not built
    from . import _resample_np as _kernel

    KERNEL_BACKEND = "numpy"


class ImageFormatError(ValueError):
    """Raised for malformed PPM documents."""


class RenderError(RuntimeError):
    """Raised when a frame in a sequence cannot be read, rendered or written."""


@dataclass(eq=False)
class Image:
    """8-bit RGB raster; pixels shaped (height, width, 3), row-major."""

    width: int
    height: int
    pixels: np.ndarray

    def __post_init__(self) -> None:
        if self.width <= 0 or self.height <= 0:
            raise ValueError(f"image dimensions must be positive, got {self.width}x{self.height}")
        if self.pixels.shape != (self.height, self.width, 3):
            raise ValueError(
                f"pixel buffer shape {self.pixels.shape} != {(self.height, self.width, 3)}"
            )
        if self.pixels.dtype != np.uint8:
            raise ValueError(f"pixel dtype must be uint8, got {self.pixels.dtype}")
        self.pixels = np.ascontiguousarray(self.pixels)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Image)
            and self.width == other.width
            and self.height == other.height
            and np.array_equal(self.pixels, other.pixels)
        )


# ---------------------------------------------------------------------------
# PPM I/O


def _next_token(buf: bytes, pos: int) -> tuple[bytes, int]:
    n = len(buf)
    while pos < n:
        c = buf[pos : pos + 1]
        if c == b"#":
            while pos < n and buf[pos : pos + 1] not in (b"\n", b"\r"):
                pos += 1
        elif c.isspace():
            pos += 1
        else:
            break
    if pos >= n:
        raise ImageFormatError(f"truncated header at byte {pos}")
    start = pos
    while pos < n and not buf[pos : pos + 1].isspace() and buf[pos : pos + 1] != b"#":
        pos += 1
    return buf[start:pos], pos


def decode_ppm(buf: bytes) -> Image:
    """Parse binary PPM ("P6", maxval 255)."""
    magic, pos = _next_token(buf, 0)
    if magic != b"P6":
        raise ImageFormatError(f"bad magic {magic!r}, expected b'P6'")
    fields = []
    for name in ("width", "height", "maxval"):
        token, pos = _next_token(buf, pos)
        try:
            fields.append(int(token))
        except ValueError:
            raise ImageFormatError(f"non-numeric {name} token {token!r}") from None
    width, height, maxval = fields
    if width <= 0 or height <= 0:
        raise ImageFormatError(f"non-positive dimensions {width}x{height}")
    if maxval != 255:
        raise ImageFormatError(f"unsupported maxval {maxval}, only 255 is handled")
    pos += 1  # exactly one whitespace byte separates header from payload
    need = width * height * 3
    payload = buf[pos : pos + need]
    if len(payload) < need:
        raise ImageFormatError(
            f"truncated pixel data at byte {pos + len(payload)}: "
            f"expected {need} bytes, got {len(payload)}"
        )
    pixels = np.frombuffer(payload, dtype=np.uint8).reshape(height, width, 3).copy()
    return Image(width, height, pixels)


def encode_ppm(img: Image) -> bytes:
    header = f"P6\n{img.width} {img.height}\n255\n".encode("ascii")
    return header + img.pixels.tobytes()


def read_image(source: bytes | str | Path) -> Image:
    """Read a P6 image from raw bytes or from a file path."""
    if isinstance(source, bytes):
        return decode_ppm(source)
    return decode_ppm(Path(source).read_bytes())


def write_image(img: Image, dest: str | Path | None = None) -> bytes:
    """Encode to P6; also writes to `dest` when given.  Lossless:
    ``write_image(read_image(x))`` reproduces a canonical P6 byte for
    byte."""
    data = encode_ppm(img)
    if dest is not None:
        Path(dest).write_bytes(data)
    return data


# ---------------------------------------------------------------------------
# rendering

_ray_grid_cache: dict[tuple[int, int, float, float], tuple[np.ndarray, np.ndarray, np.ndarray]] = {}


def _ray_grid(out_w: int, out_h: int, hfov: float, aspect: float):
    """Normalized camera-frame rays through each output pixel center."""
    key = (out_w, out_h, hfov, aspect)
    cached = _ray_grid_cache.get(key)
    if cached is not None:
        return cached
    half_w = math.tan(0.5 * hfov)
    half_h = half_w / aspect
    u = (np.arange(out_w, dtype=np.float64) + 0.5) / out_w
    v = (np.arange(out_h, dtype=np.float64) + 0.5) / out_h
    x = (u - 0.5) * (2.0 * half_w)
    y = (0.5 - v) * (2.0 * half_h)
    xg, yg = np.meshgrid(x, y)
    norm = np.sqrt(xg * xg + yg * yg + 1.0)
    grid = (xg / norm, yg / norm, 1.0 / norm)
    _ray_grid_cache[key] = grid
    return grid


def _sample_coords(vp: Viewport, out_w: int, out_h: int, src_w: int, src_h: int):
    """Continuous equirect sample coordinates for every output pixel."""
    xn, yn, zn = _ray_grid(out_w, out_h, vp.hfov, vp.aspect)
    right, up, forward = _camera_basis(vp.center)
    wx = xn * right[0] + yn * up[0] + zn * forward[0]
    wy = xn * right[1] + yn * up[1] + zn * forward[1]
    wz = xn * right[2] + yn * up[2] + zn * forward[2]
    yaw = np.arctan2(wx, wz)
    pitch = np.arcsin(np.clip(wy, -1.0, 1.0))
    px = (yaw + math.pi) * (src_w / TWO_PI)
    py = ((0.5 * math.pi) - pitch) * (src_h / math.pi)
    return px.ravel(), py.ravel()


def render_viewport(src: Image, vp: Viewport, out_w: int, out_h: int) -> Image:
    """Extract one perspective view from an equirect frame.

    The output dimensions must match the viewport aspect within 1%.
    """
    if out_w <= 0 or out_h <= 0:
        raise ValueError(f"output dimensions must be positive, got {out_w}x{out_h}")
    if abs(out_w / out_h - vp.aspect) > 0.01 * vp.aspect:
        raise ValueError(
            f"output {out_w}x{out_h} (aspect {out_w / out_h:.4f}) does not match "
            f"viewport aspect {vp.aspect:.4f} within 1%"
        )
    xs, ys = _sample_coords(vp, out_w, out_h, src.width, src.height)
    flat = _kernel.bilinear_wrap_sample(src.pixels, xs, ys)
    return Image(out_w, out_h, np.asarray(flat).reshape(out_h, out_w, 3))


def render_sequence(frames, camera_path, out_w: int, out_h: int, sink) -> int:
    """Render one output frame per (source frame, viewport) pair.

    `frames` is a sequence of Image or PPM file paths; `sink(index,
    image)` receives each result.  The frame count must equal the path
    length; per-frame read/write failures are reported with their index.
    Returns the number of frames written.
    """
    if len(frames) != len(camera_path):
        raise RenderError(
            f"frame count {len(frames)} does not match path length {len(camera_path)}"
        )
    for i, source in enumerate(frames):
        if isinstance(source, Image):
            img = source
        else:
            try:
                img = read_image(source)
            except (OSError, ImageFormatError) as exc:
                raise RenderError(f"frame {i}: {exc}") from exc
        out = render_viewport(img, camera_path[i], out_w, out_h)
        try:
            sink(i, out)
        except OSError as exc:
            raise RenderError(f"frame {i}: {exc}") from exc
    return len(frames)


FRAME_NAME = "frame_{:06d}.ppm"


def render_frames_dir(
    in_dir: str | Path, out_dir: str | Path, camera_path, out_w: int, out_h: int
) -> int:
    """Directory-to-directory rendering with the frame_%06d.ppm naming."""
    in_dir = Path(in_dir)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    sources = [in_dir / FRAME_NAME.format(i) for i in range(len(camera_path))]

    def sink(i: int, img: Image) -> None:
        write_image(img, out_dir / FRAME_NAME.format(i))

    return render_sequence(sources, camera_path, out_w, out_h, sink)
