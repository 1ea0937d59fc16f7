"""Small shared geometry kit: rotations, axis-aligned boxes, ray clipping."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def quat_to_matrix(q: np.ndarray) -> np.ndarray:
    """Unit quaternion (w, x, y, z) to 3x3 rotation matrix."""
    w, x, y, z = np.asarray(q, dtype=np.float64)
    n = w * w + x * x + y * y + z * z
    if n < 1e-12:
        raise ValueError("zero quaternion")
    s = 2.0 / n
    return np.array(
        [
            [1 - s * (y * y + z * z), s * (x * y - w * z), s * (x * z + w * y)],
            [s * (x * y + w * z), 1 - s * (x * x + z * z), s * (y * z - w * x)],
            [s * (x * z - w * y), s * (y * z + w * x), 1 - s * (x * x + y * y)],
        ]
    )


def matrix_to_quat(r: np.ndarray) -> np.ndarray:
    """3x3 rotation matrix to unit quaternion (w, x, y, z), w >= 0."""
    r = np.asarray(r, dtype=np.float64)
    t = np.trace(r)
    if t > 0:
        s = np.sqrt(t + 1.0) * 2
        q = np.array(
            [0.25 * s, (r[2, 1] - r[1, 2]) / s, (r[0, 2] - r[2, 0]) / s, (r[1, 0] - r[0, 1]) / s]
        )
    else:
        i = int(np.argmax(np.diag(r)))
        j, k = (i + 1) % 3, (i + 2) % 3
        s = np.sqrt(max(r[i, i] - r[j, j] - r[k, k] + 1.0, 0.0)) * 2
        q = np.empty(4)
        q[0] = (r[k, j] - r[j, k]) / s
        q[1 + i] = 0.25 * s
        q[1 + j] = (r[j, i] + r[i, j]) / s
        q[1 + k] = (r[k, i] + r[i, k]) / s
    if q[0] < 0:
        q = -q
    return q / np.linalg.norm(q)


def axis_angle_matrix(axis: np.ndarray, angle: float) -> np.ndarray:
    """Rodrigues rotation about a (not necessarily unit) axis."""
    a = np.asarray(axis, dtype=np.float64)
    a = a / np.linalg.norm(a)
    c, s = np.cos(angle), np.sin(angle)
    kx, ky, kz = a
    k = np.array([[0, -kz, ky], [kz, 0, -kx], [-ky, kx, 0]])
    return c * np.eye(3) + s * k + (1 - c) * np.outer(a, a)


def is_rotation(r: np.ndarray, tol: float = 1e-6) -> bool:
    r = np.asarray(r, dtype=np.float64)
    if r.shape != (3, 3):
        return False
    ortho = np.abs(r @ r.T - np.eye(3)).max() <= tol
    return bool(ortho and abs(np.linalg.det(r) - 1.0) <= tol)


@dataclass(frozen=True)
class Aabb:
    """Axis-aligned box, inclusive of both faces."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "lo", np.asarray(self.lo, dtype=np.float64).reshape(3))
        object.__setattr__(self, "hi", np.asarray(self.hi, dtype=np.float64).reshape(3))
        if not np.all(self.hi > self.lo):
            raise ValueError(f"degenerate box: lo={self.lo}, hi={self.hi}")

    @property
    def size(self) -> np.ndarray:
        return self.hi - self.lo

    @property
    def center(self) -> np.ndarray:
        return 0.5 * (self.lo + self.hi)

    @property
    def diagonal(self) -> float:
        return float(np.linalg.norm(self.size))

    def contains(self, p: np.ndarray) -> np.ndarray:
        p = np.atleast_2d(p)
        return np.all((p >= self.lo) & (p <= self.hi), axis=-1)

    def inflated(self, margin) -> "Aabb":
        m = np.broadcast_to(np.asarray(margin, dtype=np.float64), (3,))
        return Aabb(self.lo - m, self.hi + m)

    def clamp(self, p: np.ndarray) -> np.ndarray:
        return np.clip(p, self.lo, self.hi)


def ray_box_interval(origins: np.ndarray, dirs: np.ndarray, box: Aabb):
    """Entry/exit distances of rays against a box (slab method).

    Returns (t0, t1, hit). Rays starting inside get t0 clamped to 0.
    """
    origins = np.atleast_2d(origins).astype(np.float64)
    dirs = np.atleast_2d(dirs).astype(np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = 1.0 / dirs
        ta = (box.lo - origins) * inv
        tb = (box.hi - origins) * inv
    # parallel-to-slab rays: interval is (-inf, inf) if inside the slab, else empty
    para = dirs == 0.0
    inside = (origins >= box.lo) & (origins <= box.hi)
    lo = np.where(para, np.where(inside, -np.inf, np.inf), np.minimum(ta, tb))
    hi = np.where(para, np.where(inside, np.inf, -np.inf), np.maximum(ta, tb))
    t0 = lo.max(axis=-1)
    t1 = hi.min(axis=-1)
    hit = (t1 >= t0) & (t1 > 0)
    t0 = np.maximum(t0, 0.0)
    return t0, t1, hit
