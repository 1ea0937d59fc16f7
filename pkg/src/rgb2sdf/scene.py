"""Analytic tabletop scenes: exact SDF oracle, shaded renderer, camera rigs.

Scenes are unions of rigid primitives (sphere, box, cylinder, table
half-space) with exact signed distances, so every downstream stage can be
checked against closed-form geometry. The renderer produces the posed RGB
dataset the field trainer consumes.

Scene JSON schema (see ``scene_to_json``)::

    {
      "primitives": [{"kind": "...", "pose": {"quat": [w,x,y,z], "t": [x,y,z]},
                      "params": [...], "albedo": [r,g,b]}],
      "bounds": {"lo": [x,y,z], "hi": [x,y,z]},
      "background": [r,g,b]
    }

``params`` per kind: sphere ``[radius]``, box ``[hx, hy, hz]`` (half
extents), cylinder ``[radius, height]`` (axis = local +z), halfspace ``[]``
(solid side = local -z).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from PIL import Image

from . import InputError
from .geometry import Aabb, is_rotation, matrix_to_quat, quat_to_matrix

KINDS = ("sphere", "box", "cylinder", "halfspace")

DEFAULT_SIGMA_INSIDE = 50.0

# fixed directional lights (unit vectors toward the light) + ambient; weights
# sum with ambient to 1 so shading never exceeds the albedo
_LIGHT_DIRS = np.array([[0.4, 0.25, 1.0], [-0.45, -0.6, 0.8]])
_LIGHT_DIRS = _LIGHT_DIRS / np.linalg.norm(_LIGHT_DIRS, axis=1, keepdims=True)
_LIGHT_WEIGHTS = np.array([0.45, 0.30])
_AMBIENT = 0.25


@dataclass(frozen=True)
class Primitive:
    """One rigid solid: ``kind`` + pose (rotation, translation) + size params."""

    kind: str
    rotation: np.ndarray
    translation: np.ndarray
    params: tuple
    albedo: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rotation", np.asarray(self.rotation, dtype=np.float64).reshape(3, 3))
        object.__setattr__(self, "translation", np.asarray(self.translation, dtype=np.float64).reshape(3))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        object.__setattr__(self, "albedo", np.asarray(self.albedo, dtype=np.float64).reshape(3))
        if self.kind not in KINDS:
            raise ValueError(f"unknown primitive kind {self.kind!r}")
        if not is_rotation(self.rotation):
            raise ValueError("pose rotation is not orthonormal with det +1")
        n_expected = {"sphere": 1, "box": 3, "cylinder": 2, "halfspace": 0}[self.kind]
        if len(self.params) != n_expected:
            raise ValueError(f"{self.kind} expects {n_expected} size params, got {len(self.params)}")
        if any(p <= 0 for p in self.params):
            raise ValueError("size parameters must be strictly positive")
        if np.any(self.albedo < 0) or np.any(self.albedo > 1):
            raise ValueError("albedo must lie in [0,1]^3")

    def aabb(self) -> Aabb:
        """World-space bounding box (halfspace gets a large finite slab)."""
        if self.kind == "sphere":
            r = self.params[0]
            local = np.full(3, r)
        elif self.kind == "box":
            local = np.asarray(self.params)
        elif self.kind == "cylinder":
            r, h = self.params
            local = np.array([r, r, 0.5 * h])
        else:  # halfspace: unbounded; report a big slab below the plane
            n = self.rotation[:, 2]
            c = self.translation
            big = 1e3
            lo = c - big
            hi = c + big
            hi = hi - n * big  # pull the +normal side back to the plane (axis-aligned only approx)
            return Aabb(np.minimum(lo, hi), np.maximum(lo, hi) + 1e-9)
        corners = np.array(
            [[sx * local[0], sy * local[1], sz * local[2]] for sx in (-1, 1) for sy in (-1, 1) for sz in (-1, 1)]
        )
        world = corners @ self.rotation.T + self.translation
        return Aabb(world.min(axis=0), world.max(axis=0))


def sphere(center, radius, albedo) -> Primitive:
    return Primitive("sphere", np.eye(3), center, (radius,), albedo)


def box(center, half_extents, albedo, rotation=None) -> Primitive:
    return Primitive("box", np.eye(3) if rotation is None else rotation, center, tuple(half_extents), albedo)


def cylinder(center, radius, height, albedo, rotation=None) -> Primitive:
    return Primitive("cylinder", np.eye(3) if rotation is None else rotation, center, (radius, height), albedo)


def table(z: float = 0.0, albedo=(0.46, 0.46, 0.50)) -> Primitive:
    """Half-space ``z <= z0``: the tabletop."""
    return Primitive("halfspace", np.eye(3), (0.0, 0.0, z), (), albedo)


@dataclass(frozen=True)
class Scene:
    primitives: tuple
    bounds: Aabb
    background: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "primitives", tuple(self.primitives))
        object.__setattr__(self, "background", np.asarray(self.background, dtype=np.float64).reshape(3))
        if len(self.primitives) == 0:
            raise ValueError("scene needs at least one primitive")
        for i, p in enumerate(self.primitives):
            pb = p.aabb()
            if np.any(pb.hi < self.bounds.lo) or np.any(pb.lo > self.bounds.hi):
                raise ValueError(f"primitive {i} ({p.kind}) does not intersect the workspace bounds")


@dataclass(frozen=True)
class CameraPose:
    """Pinhole intrinsics + camera-to-world transform.

    Camera frame: +x right, +y up, -z forward (rays leave along -z).
    Pixel (col i, row j) is sampled at (i + 0.5, j + 0.5).
    """

    fx: float
    fy: float
    cx: float
    cy: float
    width: int
    height: int
    rotation: np.ndarray
    translation: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rotation", np.asarray(self.rotation, dtype=np.float64).reshape(3, 3))
        object.__setattr__(self, "translation", np.asarray(self.translation, dtype=np.float64).reshape(3))
        if self.fx <= 0 or self.fy <= 0:
            raise ValueError("focal lengths must be positive")
        if not (0 <= self.cx < self.width and 0 <= self.cy < self.height):
            raise ValueError("principal point outside the image")
        if not is_rotation(self.rotation):
            raise ValueError("camera rotation is not orthonormal with det +1")

    def c2w(self) -> np.ndarray:
        m = np.eye(4)
        m[:3, :3] = self.rotation
        m[:3, 3] = self.translation
        return m


def camera_rays(camera: CameraPose):
    """World-frame rays through all pixel centers.

    Returns (origins (H*W,3), dirs (H*W,3) unit), row-major pixel order.
    """
    h, w = camera.height, camera.width
    i, j = np.meshgrid(np.arange(w), np.arange(h), indexing="xy")
    d = np.stack(
        [
            (i + 0.5 - camera.cx) / camera.fx,
            -(j + 0.5 - camera.cy) / camera.fy,
            -np.ones_like(i, dtype=np.float64),
        ],
        axis=-1,
    ).reshape(-1, 3)
    d = d @ camera.rotation.T
    d /= np.linalg.norm(d, axis=1, keepdims=True)
    o = np.broadcast_to(camera.translation, d.shape).copy()
    return o, d


# ---------------------------------------------------------------------------
# signed distance oracle
# ---------------------------------------------------------------------------

def primitive_sdf(prim: Primitive, p: np.ndarray) -> np.ndarray:
    """Exact signed distance of one primitive at points ``p`` (..., 3)."""
    p = np.asarray(p, dtype=np.float64)
    local = (p - prim.translation) @ prim.rotation  # R^T (p - t)
    if prim.kind == "sphere":
        return np.linalg.norm(local, axis=-1) - prim.params[0]
    if prim.kind == "box":
        q = np.abs(local) - np.asarray(prim.params)
        outside = np.linalg.norm(np.maximum(q, 0.0), axis=-1)
        inside = np.minimum(q.max(axis=-1), 0.0)
        return outside + inside
    if prim.kind == "cylinder":
        r, h = prim.params
        dr = np.linalg.norm(local[..., :2], axis=-1) - r
        dz = np.abs(local[..., 2]) - 0.5 * h
        d = np.stack([dr, dz], axis=-1)
        outside = np.linalg.norm(np.maximum(d, 0.0), axis=-1)
        inside = np.minimum(d.max(axis=-1), 0.0)
        return outside + inside
    # halfspace: solid below the local z=0 plane
    return local[..., 2]


def analytic_sdf(scene: Scene, p: np.ndarray) -> np.ndarray:
    """Union signed distance: min over primitives.

    Exact outside every primitive; inside overlapping solids the magnitude is
    conservative (the standard min-union property). Points of any shape
    broadcast; scalar in, scalar out.
    """
    p = np.asarray(p, dtype=np.float64)
    scalar = p.ndim == 1
    pts = np.atleast_2d(p)
    d = primitive_sdf(scene.primitives[0], pts)
    for prim in scene.primitives[1:]:
        d = np.minimum(d, primitive_sdf(prim, pts))
    return float(d[0]) if scalar else d.reshape(p.shape[:-1])


def analytic_density(
    scene: Scene,
    p: np.ndarray,
    sigma_inside: float = DEFAULT_SIGMA_INSIDE,
    smooth_band: float = 0.0,
) -> np.ndarray:
    """Synthetic density: ``sigma_inside`` where sdf <= 0, else 0.

    The surface (sdf exactly 0) counts as inside. With ``smooth_band`` > 0
    the step becomes a linear ramp over [-band/2, +band/2].
    """
    d = analytic_sdf(scene, p)
    if smooth_band > 0:
        frac = np.clip(0.5 - np.asarray(d) / smooth_band, 0.0, 1.0)
        return sigma_inside * frac
    return np.where(np.asarray(d) <= 0.0, sigma_inside, 0.0)


# ---------------------------------------------------------------------------
# primary-ray renderer
# ---------------------------------------------------------------------------

def _intersect_primitive(prim: Primitive, o: np.ndarray, d: np.ndarray):
    """First positive hit of rays against one primitive.

    Returns (t, normal) with t = +inf on miss. Normals are outward unit.
    """
    n_rays = o.shape[0]
    ol = (o - prim.translation) @ prim.rotation
    dl = d @ prim.rotation
    t = np.full(n_rays, np.inf)
    nrm = np.zeros((n_rays, 3))

    if prim.kind == "sphere":
        r = prim.params[0]
        b = np.sum(ol * dl, axis=1)
        c = np.sum(ol * ol, axis=1) - r * r
        disc = b * b - c
        ok = disc >= 0
        sq = np.sqrt(np.where(ok, disc, 0.0))
        t0 = -b - sq
        t1 = -b + sq
        th = np.where(t0 > 1e-9, t0, np.where(t1 > 1e-9, t1, np.inf))
        th = np.where(ok, th, np.inf)
        hitp = ol + np.where(np.isfinite(th), th, 0.0)[:, None] * dl
        t = th
        nrm = hitp / r
    elif prim.kind == "box":
        he = np.asarray(prim.params)
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = 1.0 / dl
            ta = (-he - ol) * inv
            tb = (he - ol) * inv
        para = dl == 0.0
        inside = np.abs(ol) <= he
        lo = np.where(para, np.where(inside, -np.inf, np.inf), np.minimum(ta, tb))
        hi = np.where(para, np.where(inside, np.inf, -np.inf), np.maximum(ta, tb))
        axis_in = lo.argmax(axis=1)
        t0 = lo.max(axis=1)
        t1 = hi.min(axis=1)
        th = np.where((t1 >= t0) & (t0 > 1e-9), t0, np.inf)
        t = th
        hitp = ol + np.where(np.isfinite(th), th, 0.0)[:, None] * dl
        idx = np.arange(n_rays)
        nrm = np.zeros((n_rays, 3))
        nrm[idx, axis_in] = np.sign(hitp[idx, axis_in])
    elif prim.kind == "cylinder":
        r, h = prim.params
        hh = 0.5 * h
        a = dl[:, 0] ** 2 + dl[:, 1] ** 2
        b = ol[:, 0] * dl[:, 0] + ol[:, 1] * dl[:, 1]
        c = ol[:, 0] ** 2 + ol[:, 1] ** 2 - r * r
        with np.errstate(divide="ignore", invalid="ignore"):
            disc = b * b - a * c
            sq = np.sqrt(np.where(disc >= 0, disc, 0.0))
            ts0 = (-b - sq) / a
            ts1 = (-b + sq) / a
        for ts in (ts0, ts1):
            ts = np.where(np.isfinite(ts), ts, -1.0)
            z = ol[:, 2] + ts * dl[:, 2]
            ok = (disc >= 0) & (a > 0) & (ts > 1e-9) & (np.abs(z) <= hh) & (ts < t)
            t = np.where(ok, ts, t)
            side = np.concatenate([(ol[:, :2] + ts[:, None] * dl[:, :2]) / r, np.zeros((n_rays, 1))], axis=1)
            nrm = np.where(ok[:, None], side, nrm)
        for zcap, ncap in ((hh, 1.0), (-hh, -1.0)):
            with np.errstate(divide="ignore", invalid="ignore"):
                tc = (zcap - ol[:, 2]) / dl[:, 2]
            tc = np.where(np.isfinite(tc), tc, -1.0)
            xy = ol[:, :2] + tc[:, None] * dl[:, :2]
            ok = (dl[:, 2] != 0) & (tc > 1e-9) & (np.sum(xy * xy, axis=1) <= r * r) & (tc < t)
            t = np.where(ok, tc, t)
            nrm = np.where(ok[:, None], np.array([0.0, 0.0, ncap]), nrm)
    else:  # halfspace z<=0, outward normal +z
        with np.errstate(divide="ignore", invalid="ignore"):
            tp = -ol[:, 2] / dl[:, 2]
        ok = (dl[:, 2] != 0) & (tp > 1e-9)
        t = np.where(ok, tp, np.inf)
        nrm = np.broadcast_to(np.array([0.0, 0.0, 1.0]), (n_rays, 3)).copy()

    # back to world frame
    nrm = nrm @ prim.rotation.T
    return t, nrm


def intersect_scene(scene: Scene, origins: np.ndarray, dirs: np.ndarray):
    """Nearest primary hit over all primitives.

    Returns (t, normals, albedos, hit_mask); t = +inf, albedo = background
    where nothing is hit.
    """
    origins = np.atleast_2d(origins).astype(np.float64)
    dirs = np.atleast_2d(dirs).astype(np.float64)
    n = origins.shape[0]
    best_t = np.full(n, np.inf)
    normals = np.zeros((n, 3))
    albedos = np.broadcast_to(scene.background, (n, 3)).copy()
    for prim in scene.primitives:
        t, nrm = _intersect_primitive(prim, origins, dirs)
        closer = t < best_t
        best_t = np.where(closer, t, best_t)
        normals = np.where(closer[:, None], nrm, normals)
        albedos = np.where(closer[:, None], prim.albedo, albedos)
    return best_t, normals, albedos, np.isfinite(best_t)


def shade(normals: np.ndarray, albedos: np.ndarray) -> np.ndarray:
    """Lambertian shading from the fixed light rig; never exceeds the albedo."""
    lam = _AMBIENT + sum(
        w * np.maximum(normals @ l, 0.0) for w, l in zip(_LIGHT_WEIGHTS, _LIGHT_DIRS)
    )
    return albedos * lam[:, None]


def render_image(
    scene: Scene,
    camera: CameraPose,
    noise_sigma: float = 0.0,
    rng: np.random.Generator | None = None,
    return_depth: bool = False,
):
    """Shaded primary-ray image (H, W, 3) in [0, 1]; optionally depth of first hit."""
    o, d = camera_rays(camera)
    t, normals, albedos, hit = intersect_scene(scene, o, d)
    colors = shade(normals, albedos)
    colors = np.where(hit[:, None], colors, scene.background)
    if noise_sigma > 0:
        if rng is None:
            rng = np.random.default_rng(0)
        colors = colors + rng.normal(0.0, noise_sigma, size=colors.shape)
    img = np.clip(colors, 0.0, 1.0).reshape(camera.height, camera.width, 3)
    if return_depth:
        return img, t.reshape(camera.height, camera.width)
    return img


# ---------------------------------------------------------------------------
# camera rigs
# ---------------------------------------------------------------------------

def look_at_pose(position, lookat, width, height, fov_deg=55.0, up=(0.0, 0.0, 1.0)) -> CameraPose:
    position = np.asarray(position, dtype=np.float64)
    lookat = np.asarray(lookat, dtype=np.float64)
    back = position - lookat
    nb = np.linalg.norm(back)
    if nb < 1e-12:
        raise ValueError("camera position coincides with lookat")
    z = back / nb
    upv = np.asarray(up, dtype=np.float64)
    x = np.cross(upv, z)
    if np.linalg.norm(x) < 1e-9:  # looking straight along up
        x = np.cross(np.array([0.0, 1.0, 0.0]), z)
    x /= np.linalg.norm(x)
    y = np.cross(z, x)
    r = np.column_stack([x, y, z])
    fx = 0.5 * width / np.tan(np.deg2rad(fov_deg) / 2)
    return CameraPose(fx=fx, fy=fx, cx=width / 2, cy=height / 2, width=width, height=height, rotation=r, translation=position)


def camera_ring(
    n: int,
    radius: float,
    heights,
    lookat,
    width: int = 96,
    height: int = 72,
    fov_deg: float = 55.0,
):
    """``n`` poses per height circle, evenly spaced in azimuth, all looking at ``lookat``."""
    if n < 1 or radius <= 0:
        raise ValueError("need n >= 1 and radius > 0")
    lookat = np.asarray(lookat, dtype=np.float64)
    poses = []
    for hz in heights:
        for k in range(n):
            theta = 2 * np.pi * k / n
            pos = np.array([lookat[0] + radius * np.cos(theta), lookat[1] + radius * np.sin(theta), hz])
            poses.append(look_at_pose(pos, lookat, width, height, fov_deg))
    return poses


# ---------------------------------------------------------------------------
# scene / dataset files
# ---------------------------------------------------------------------------

def scene_to_json(scene: Scene) -> dict:
    return {
        "primitives": [
            {
                "kind": p.kind,
                "pose": {"quat": matrix_to_quat(p.rotation).tolist(), "t": p.translation.tolist()},
                "params": list(p.params),
                "albedo": p.albedo.tolist(),
            }
            for p in scene.primitives
        ],
        "bounds": {"lo": scene.bounds.lo.tolist(), "hi": scene.bounds.hi.tolist()},
        "background": scene.background.tolist(),
    }


def scene_from_json(data: dict) -> Scene:
    try:
        prims = [
            Primitive(
                kind=d["kind"],
                rotation=quat_to_matrix(np.asarray(d["pose"]["quat"], dtype=np.float64)),
                translation=d["pose"]["t"],
                params=tuple(d["params"]),
                albedo=d["albedo"],
            )
            for d in data["primitives"]
        ]
        bounds = Aabb(data["bounds"]["lo"], data["bounds"]["hi"])
        return Scene(primitives=tuple(prims), bounds=bounds, background=data["background"])
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"malformed scene description: {e}") from e


def save_scene(scene: Scene, path) -> None:
    Path(path).write_text(json.dumps(scene_to_json(scene), indent=2))


def load_scene(path) -> Scene:
    path = Path(path)
    if not path.exists():
        raise InputError(f"scene file not found: {path}")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise InputError(f"scene file {path} is not valid JSON: {e}") from e
    return scene_from_json(data)


def write_dataset(scene: Scene, cameras, out_dir, noise_sigma: float = 0.0, rng=None) -> None:
    """PNG frames plus a poses.json of intrinsics and 4x4 row-major c2w matrices."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    frames = []
    for idx, cam in enumerate(cameras):
        img = render_image(scene, cam, noise_sigma=noise_sigma, rng=rng)
        name = f"frame_{idx:04d}.png"
        Image.fromarray((img * 255.0 + 0.5).astype(np.uint8)).save(out / name)
        frames.append(
            {
                "file": name,
                "intrinsics": {"fx": cam.fx, "fy": cam.fy, "cx": cam.cx, "cy": cam.cy,
                               "width": cam.width, "height": cam.height},
                "camera_to_world": cam.c2w().reshape(-1).tolist(),
            }
        )
    (out / "poses.json").write_text(json.dumps({"frames": frames}, indent=1))


def read_dataset(dataset_dir):
    """Load (images (N,H,W,3) float in [0,1], cameras list) written by ``write_dataset``."""
    root = Path(dataset_dir)
    poses_file = root / "poses.json"
    if not poses_file.exists():
        raise InputError(f"poses file not found: {poses_file}")
    try:
        meta = json.loads(poses_file.read_text())
        cams, imgs = [], []
        for fr in meta["frames"]:
            intr = fr["intrinsics"]
            m = np.asarray(fr["camera_to_world"], dtype=np.float64).reshape(4, 4)
            cams.append(
                CameraPose(
                    fx=intr["fx"], fy=intr["fy"], cx=intr["cx"], cy=intr["cy"],
                    width=int(intr["width"]), height=int(intr["height"]),
                    rotation=m[:3, :3], translation=m[:3, 3],
                )
            )
            img_path = root / fr["file"]
            if not img_path.exists():
                raise InputError(f"dataset frame missing: {img_path}")
            imgs.append(np.asarray(Image.open(img_path), dtype=np.float64) / 255.0)
    except (KeyError, ValueError, TypeError) as e:
        raise InputError(f"malformed dataset in {root}: {e}") from e
    shapes = {im.shape for im in imgs}
    if len(shapes) > 1:
        raise InputError(f"dataset images disagree on shape: {sorted(shapes)}")
    return np.stack(imgs), cams


# ---------------------------------------------------------------------------
# scene generators
# ---------------------------------------------------------------------------

WORKSPACE = Aabb(lo=(-0.375, -0.30, 0.0), hi=(0.375, 0.30, 0.225))

_PALETTE = np.array(
    [
        [0.85, 0.15, 0.12],
        [0.10, 0.55, 0.85],
        [0.95, 0.75, 0.10],
        [0.15, 0.70, 0.25],
        [0.80, 0.30, 0.70],
        [0.95, 0.45, 0.10],
        [0.20, 0.25, 0.80],
        [0.55, 0.85, 0.80],
        [0.70, 0.60, 0.35],
        [0.90, 0.55, 0.55],
        [0.35, 0.35, 0.35],
        [0.60, 0.20, 0.20],
    ]
)


def generate_scene(
    seed: int,
    n_objects: int | None = None,
    bounds: Aabb = WORKSPACE,
    region=(0.75, 0.60),
    size_range=(0.03, 0.12),
    background=(0.92, 0.94, 0.97),
) -> Scene:
    """Random tabletop: the table plane plus 8-12 non-overlapping solids resting on it.

    Objects never overlap one another (tangency with the table is fine), so
    the min-union oracle is exact everywhere it is evaluated.
    """
    rng = np.random.default_rng(seed)
    if n_objects is None:
        n_objects = int(rng.integers(8, 13))
    prims = [table()]
    placed = []  # (center_xy, clearance_radius)
    attempts = 0
    margin = 0.015
    half_region = (0.5 * region[0] - 0.07, 0.5 * region[1] - 0.07)
    while len(placed) < n_objects and attempts < 4000:
        attempts += 1
        kind = rng.choice(["sphere", "box", "cylinder"], p=[0.35, 0.35, 0.30])
        size = float(rng.uniform(*size_range))
        cx = float(rng.uniform(-half_region[0], half_region[0]))
        cy = float(rng.uniform(-half_region[1], half_region[1]))
        albedo = _PALETTE[len(placed) % len(_PALETTE)]
        if kind == "sphere":
            r = 0.5 * size
            prim = sphere((cx, cy, r), r, albedo)
            clear = r
        elif kind == "box":
            hx, hy = 0.5 * size, 0.5 * float(rng.uniform(*size_range))
            hz = 0.5 * float(rng.uniform(size_range[0], min(size_range[1], 0.11)))
            yaw = float(rng.uniform(0, np.pi))
            rot = np.array([[np.cos(yaw), -np.sin(yaw), 0], [np.sin(yaw), np.cos(yaw), 0], [0, 0, 1.0]])
            prim = box((cx, cy, hz), (hx, hy, hz), albedo, rotation=rot)
            clear = float(np.hypot(hx, hy))
        else:
            r = 0.5 * float(rng.uniform(size_range[0], 0.08))
            h = float(rng.uniform(0.04, min(size_range[1], 0.11)))
            prim = cylinder((cx, cy, 0.5 * h), r, h, albedo)
            clear = r
        if any(np.hypot(cx - px, cy - py) < clear + pc + margin for (px, py), pc in placed):
            continue
        prims.append(prim)
        placed.append(((cx, cy), clear))
    return Scene(primitives=tuple(prims), bounds=bounds, background=background)


def standard_scene(index: int) -> Scene:
    """The three fixed evaluation scenes (index 1..3)."""
    if index not in (1, 2, 3):
        raise ValueError("standard scenes are numbered 1..3")
    return generate_scene(seed=1000 + index, n_objects=(9, 10, 8)[index - 1])


def three_primitive_scene(background=(0.92, 0.94, 0.97)) -> Scene:
    """Small fixed scene (table + sphere + box + cylinder) for training tests."""
    prims = (
        table(),
        sphere((-0.10, 0.02, 0.05), 0.05, _PALETTE[0]),
        box((0.12, -0.08, 0.035), (0.045, 0.045, 0.035), _PALETTE[1]),
        cylinder((0.05, 0.14, 0.045), 0.035, 0.09, _PALETTE[2]),
    )
    return Scene(primitives=prims, bounds=WORKSPACE, background=background)


def default_camera_ring(scene: Scene, n: int = 20, heights=(0.42, 0.55, 0.68), width=96, height=72):
    """Capture rig matched to the tabletop workspace footprint."""
    center = scene.bounds.center.copy()
    center[2] = 0.04
    return camera_ring(n, radius=0.62, heights=heights, lookat=center, width=width, height=height, fov_deg=48.0)
