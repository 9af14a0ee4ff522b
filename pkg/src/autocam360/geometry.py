"""Spherical camera geometry for equirectangular 360-degree video.

Angle conventions used throughout the package:

* yaw is in radians in ``[-pi, pi)``, 0 at the equirect image center,
  increasing rightward (eastward); the left image edge is the seam at
  ``-pi``.
* pitch is in radians in ``[-pi/2, pi/2]``, 0 at the equator, ``+pi/2``
  straight up.  Pitch is never wrapped; out-of-range values are rejected.
* unit-sphere axes: x east, y up, z forward, so a direction maps to
  ``(cos(pitch)*sin(yaw), sin(pitch), cos(pitch)*cos(yaw))``.

The camera has no roll: its up vector is the local meridian, which makes
the world-to-camera rotation a yaw followed by a pitch.

Everything here is a pure function over immutable values and is safe to
call from any number of threads concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

TWO_PI = 2.0 * math.pi
HALF_PI = 0.5 * math.pi


def normalize_yaw(yaw: float) -> float:
    """Wrap an angle in radians into ``[-pi, pi)``."""
    y = math.fmod(yaw + math.pi, TWO_PI)
    if y < 0.0:
        y += TWO_PI
        if y >= TWO_PI:  # rounding of (tiny negative + 2*pi)
            y = 0.0
    return y - math.pi


@dataclass(frozen=True)
class Direction:
    """A point on the unit sphere, stored as (yaw, pitch) in radians.

    The constructor normalizes yaw into ``[-pi, pi)`` and rejects pitch
    outside ``[-pi/2, pi/2]`` (pitch is clamp-checked, never wrapped).
    """

    yaw: float
    pitch: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.yaw):
            raise ValueError(f"yaw must be finite, got {self.yaw!r}")
        if not -HALF_PI <= self.pitch <= HALF_PI:  # also rejects NaN
            raise ValueError(f"pitch {self.pitch!r} outside [-pi/2, pi/2]")
        object.__setattr__(self, "yaw", normalize_yaw(self.yaw))

    def unit(self) -> tuple[float, float, float]:
        """Unit vector (x east, y up, z forward)."""
        cp = math.cos(self.pitch)
        return (cp * math.sin(self.yaw), math.sin(self.pitch), cp * math.cos(self.yaw))


def direction_from_unit(x: float, y: float, z: float) -> Direction:
    """Direction of a nonzero 3-vector (need not be normalized)."""
    norm = math.sqrt(x * x + y * y + z * z)
    if norm == 0.0 or not math.isfinite(norm):
        raise ValueError("cannot take the direction of a zero or non-finite vector")
    s = min(1.0, max(-1.0, y / norm))
    # atan2(0, 0) == 0 keeps the poles well-defined.
    return Direction(math.atan2(x, z), math.asin(s))


@dataclass(frozen=True)
class Viewport:
    """A flat camera framing: center direction, horizontal FOV, aspect.

    Roll is identically zero.  The vertical FOV is derived from the
    horizontal one through the tangent rule
    ``tan(vfov/2) = tan(hfov/2) / aspect`` and always lies in (0, pi).
    """

    center: Direction
    hfov: float
    aspect: float

    def __post_init__(self) -> None:
        if not 0.0 < self.hfov < math.pi:
            raise ValueError(f"hfov {self.hfov!r} outside (0, pi)")
        if not (math.isfinite(self.aspect) and self.aspect > 0.0):
            raise ValueError(f"aspect {self.aspect!r} must be a positive finite ratio")

    @property
    def vfov(self) -> float:
        return 2.0 * math.atan(math.tan(0.5 * self.hfov) / self.aspect)


@dataclass(frozen=True)
class EquirectBBox:
    """Axis-aligned box in equirect pixel coordinates.

    ``x`` may fall outside ``[0, W)`` to express a box crossing the seam;
    there is no vertical wrap, so ``y >= 0`` always.  Width/height limits
    against a concrete image are checked by :func:`validate_bbox` where
    the image dimensions are known.
    """

    x: float
    y: float
    w: float
    h: float

    def __post_init__(self) -> None:
        for name in ("x", "y", "w", "h"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"bbox field {name} must be finite")
        if self.w <= 0.0 or self.h <= 0.0:
            raise ValueError(f"bbox sides must be positive, got w={self.w}, h={self.h}")
        if self.y < 0.0:
            raise ValueError(f"bbox y must be >= 0, got {self.y}")


def _check_dims(width: float, height: float) -> None:
    if width <= 0 or height <= 0:
        raise ValueError(f"image dimensions must be positive, got {width}x{height}")


def validate_bbox(box: EquirectBBox, width: float, height: float) -> None:
    """Check a box against concrete image dimensions."""
    _check_dims(width, height)
    if box.w > width:
        raise ValueError(f"bbox width {box.w} exceeds image width {width}")
    if box.h > height:
        raise ValueError(f"bbox height {box.h} exceeds image height {height}")
    if box.y + box.h > height:
        raise ValueError(f"bbox bottom {box.y + box.h} exceeds image height {height}")


def equirect_pixel_to_direction(px: float, py: float, width: float, height: float) -> Direction:
    """Direction of a continuous equirect pixel position.

    ``px`` may be any real (wrapped mod width); ``py`` must lie in
    ``[0, height]``.
    """
    _check_dims(width, height)
    if not 0.0 <= py <= height:
        raise ValueError(f"py {py} outside [0, {height}]")
    yaw = TWO_PI * (px / width) - math.pi
    pitch = HALF_PI - math.pi * (py / height)
    return Direction(yaw, pitch)


def direction_to_equirect_pixel(d: Direction, width: float, height: float) -> tuple[float, float]:
    """Exact inverse of :func:`equirect_pixel_to_direction` on its range.

    Returns ``px in [0, width)`` and ``py in [0, height]``.
    """
    _check_dims(width, height)
    px = (d.yaw + math.pi) * (width / TWO_PI)
    if px >= width:  # yaw just below pi can round up to the seam
        px -= width
    py = (HALF_PI - d.pitch) * (height / math.pi)
    return px, py


def angular_distance(a: Direction, b: Direction) -> float:
    """Great-circle angle between two directions, in ``[0, pi]``.

    Computed as the arccosine of the clamped dot product of the two unit
    vectors; equal inputs short-circuit to exactly 0 (acos cannot resolve
    angles below ~1e-8).
    """
    if a == b:
        return 0.0
    ax, ay, az = a.unit()
    bx, by, bz = b.unit()
    dot = ax * bx + ay * by + az * bz
    return math.acos(min(1.0, max(-1.0, dot)))


def _camera_basis(
    center: Direction,
) -> tuple[tuple[float, float, float], tuple[float, float, float], tuple[float, float, float]]:
    """Right/up/forward unit vectors of a roll-free camera at `center`."""
    sy, cy = math.sin(center.yaw), math.cos(center.yaw)
    sp, cp = math.sin(center.pitch), math.cos(center.pitch)
    forward = (cp * sy, sp, cp * cy)
    right = (cy, 0.0, -sy)
    up = (-sy * sp, cp, -cy * sp)
    return right, up, forward


def project_to_viewport(d: Direction, vp: Viewport) -> tuple[float, float] | None:
    """Gnomonic (rectilinear) projection of a direction into a viewport.

    Returns normalized image coordinates (u, v) with (0.5, 0.5) on the
    optical axis, u increasing rightward and v increasing downward; the
    frame edges are u, v in {0, 1}.  Coordinates outside [0, 1] are still
    returned (the direction is in front of the camera but off-frame).
    Returns None for directions on or behind the camera plane — absence
    is a value here, not an error.
    """
    vx, vy, vz = d.unit()
    right, up, forward = _camera_basis(vp.center)
    zc = vx * forward[0] + vy * forward[1] + vz * forward[2]
    if zc <= 0.0:
        return None
    xc = vx * right[0] + vy * right[1] + vz * right[2]
    yc = vx * up[0] + vy * up[1] + vz * up[2]
    u = 0.5 + xc / (zc * 2.0 * math.tan(0.5 * vp.hfov))
    v = 0.5 - yc / (zc * 2.0 * math.tan(0.5 * vp.vfov))
    return u, v


def unproject_from_viewport(u: float, v: float, vp: Viewport) -> Direction:
    """Inverse of :func:`project_to_viewport` wherever that is defined."""
    if not (math.isfinite(u) and math.isfinite(v)):
        raise ValueError(f"viewport coordinates must be finite, got ({u!r}, {v!r})")
    xc = (u - 0.5) * 2.0 * math.tan(0.5 * vp.hfov)
    yc = (0.5 - v) * 2.0 * math.tan(0.5 * vp.vfov)
    right, up, forward = _camera_basis(vp.center)
    wx = xc * right[0] + yc * up[0] + forward[0]
    wy = xc * right[1] + yc * up[1] + forward[1]
    wz = xc * right[2] + yc * up[2] + forward[2]
    return direction_from_unit(wx, wy, wz)


def bbox_center_direction(box: EquirectBBox, width: float, height: float) -> Direction:
    """Direction of a box's center pixel (x + w/2 wraps mod width)."""
    validate_bbox(box, width, height)
    return equirect_pixel_to_direction(box.x + 0.5 * box.w, box.y + 0.5 * box.h, width, height)


def bbox_solid_angle(box: EquirectBBox, width: float, height: float) -> float:
    """Solid angle subtended by an equirect box, in steradians.

    ``Omega = dyaw * (sin(pitch_top) - sin(pitch_bottom))`` with
    ``dyaw = 2*pi*w/W``; the result lies in ``[0, 4*pi]``.
    """
    validate_bbox(box, width, height)
    dyaw = TWO_PI * (box.w / width)
    pitch_top = HALF_PI - math.pi * (box.y / height)
    pitch_bottom = HALF_PI - math.pi * ((box.y + box.h) / height)
    return dyaw * (math.sin(pitch_top) - math.sin(pitch_bottom))


def clamp_pitch(d: Direction, limit: float) -> Direction:
    """Clamp a direction's pitch into ``[-limit, limit]``."""
    if -limit <= d.pitch <= limit:
        return d
    return Direction(d.yaw, math.copysign(limit, d.pitch))


def rotate_toward(cur: Direction, target: Direction, angle: float) -> Direction:
    """Move from `cur` toward `target` along their great circle by `angle`.

    `angle` is capped at the separation, so the move never overshoots.
    The antipodal case (where the great circle is ambiguous) heads east,
    or along +x when `cur` sits on a pole, which keeps smoothing
    deterministic.
    """
    if angle <= 0.0:
        return cur
    total = angular_distance(cur, target)
    if angle >= total:
        return target
    ux, uy, uz = cur.unit()
    vx, vy, vz = target.unit()
    dot = min(1.0, max(-1.0, ux * vx + uy * vy + uz * vz))
    tx, ty, tz = vx - ux * dot, vy - uy * dot, vz - uz * dot
    norm = math.sqrt(tx * tx + ty * ty + tz * tz)
    if norm < 1e-12:
        tx, ty, tz = uz, 0.0, -ux  # east tangent
        norm = math.sqrt(tx * tx + tz * tz)
        if norm < 1e-12:
            tx, ty, tz, norm = 1.0, 0.0, 0.0, 1.0
    tx, ty, tz = tx / norm, ty / norm, tz / norm
    c, s = math.cos(angle), math.sin(angle)
    return direction_from_unit(ux * c + tx * s, uy * c + ty * s, uz * c + tz * s)


def smooth_directions(
    raw: list[Direction] | tuple[Direction, ...],
    alpha: float,
    max_step: float,
    pitch_limit: float,
) -> list[Direction]:
    """Exponentially smooth a direction sequence on the sphere.

    Each step moves from the current direction toward the next target
    along the great circle by fraction `alpha` of the remaining angle,
    capped at `max_step` radians per step; pitch is clamped to
    ``[-pitch_limit, pitch_limit]``.  The output has the same length as
    the input and starts at the (pitch-clamped) first input, and a
    constant in-limit input is a fixed point.
    """
    if not raw:
        raise ValueError("cannot smooth an empty path")
    out = [clamp_pitch(raw[0], pitch_limit)]
    for target in raw[1:]:
        cur = out[-1]
        step = min(alpha * angular_distance(cur, target), max_step)
        out.append(clamp_pitch(rotate_toward(cur, target, step), pitch_limit))
    return out


def mean_direction(dirs: list[Direction] | tuple[Direction, ...], weights=None) -> Direction:
    """Weighted spherical mean (normalized sum of unit vectors).

    Falls back to the first entry when the vector sum degenerates
    (antipodal inputs) or when all weights are zero.
    """
    if not dirs:
        raise ValueError("cannot average an empty set of directions")
    if weights is None:
        weights = [1.0] * len(dirs)
    if len(weights) != len(dirs):
        raise ValueError("weights and directions must have equal length")
    sx = sy = sz = 0.0
    for d, w in zip(dirs, weights):
        x, y, z = d.unit()
        sx += w * x
        sy += w * y
        sz += w * z
    norm = math.sqrt(sx * sx + sy * sy + sz * sz)
    if norm < 1e-12:
        return dirs[0]
    return direction_from_unit(sx, sy, sz)
