"""Trainable density/color field: multi-resolution hash-grid encoder + MLP heads.

Positions are encoded by L hashed feature grids (trilinear interpolation of
8 corner entries per level), concatenated and fed to a density head; the
color head additionally sees a sinusoidal encoding of the view direction
(4 frequency bands), so density is view-independent by construction.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch
from torch import nn

from . import InputError, NumericalError
from .geometry import Aabb

HASH_PRIMES = (1, 2654435761, 805459861)
DIR_FREQS = 4  # sinusoidal direction encoding: d plus sin/cos(2^k d), k < 4
DIR_ENC_DIM = 3 + 3 * 2 * DIR_FREQS
GEO_FEATURES = 15  # density head emits sigma plus this many geometry features
SIGMA_CAP = 1.0e4

CHECKPOINT_MAGIC = b"RFLD"
CHECKPOINT_VERSION = 1


@dataclass(frozen=True)
class HashGridConfig:
    levels: int = 8
    base_resolution: int = 16
    growth: float = 1.5
    features: int = 2
    table_size: int = 2**16
    bounds: Aabb = Aabb((-0.5, -0.5, -0.1), (0.5, 0.5, 0.5))
    density_hidden: int = 64
    color_hidden: int = 64

    def __post_init__(self):
        if self.levels < 1 or self.base_resolution < 2 or self.features < 1:
            raise ValueError("levels >= 1, base_resolution >= 2, features >= 1 required")
        if self.growth <= 1.0:
            raise ValueError("per-level growth factor must exceed 1")
        if self.table_size < 2 or (self.table_size & (self.table_size - 1)) != 0:
            raise ValueError("table_size must be a power of two")

    @property
    def encoded_dim(self) -> int:
        return self.levels * self.features

    def level_resolution(self, level: int) -> int:
        return int(np.floor(self.base_resolution * self.growth**level))


def encode_direction(d: torch.Tensor) -> torch.Tensor:
    parts = [d]
    for k in range(DIR_FREQS):
        parts.append(torch.sin(2.0**k * d))
        parts.append(torch.cos(2.0**k * d))
    return torch.cat(parts, dim=-1)


class DensityColorField(nn.Module):
    """f(x, d) -> (rgb in [0,1]^3, sigma >= 0)."""

    def __init__(self, config: HashGridConfig, seed: int = 0, dtype: torch.dtype = torch.float32):
        super().__init__()
        self.config = config
        gen = torch.Generator().manual_seed(seed)
        tables = (torch.rand((config.levels, config.table_size, config.features),
                             generator=gen, dtype=dtype) * 2.0 - 1.0) * 1e-4
        self.tables = nn.Parameter(tables)
        self.density_net = nn.Sequential(
            nn.Linear(config.encoded_dim, config.density_hidden, dtype=dtype),
            nn.ReLU(),
            nn.Linear(config.density_hidden, 1 + GEO_FEATURES, dtype=dtype),
        )
        self.color_net = nn.Sequential(
            nn.Linear(GEO_FEATURES + DIR_ENC_DIM, config.color_hidden, dtype=dtype),
            nn.ReLU(),
            nn.Linear(config.color_hidden, config.color_hidden, dtype=dtype),
            nn.ReLU(),
            nn.Linear(config.color_hidden, 3, dtype=dtype),
        )
        for lin in list(self.density_net) + list(self.color_net):
            if isinstance(lin, nn.Linear):
                bound = 1.0 / np.sqrt(lin.in_features)
                with torch.no_grad():
                    lin.weight.uniform_(-bound, bound, generator=gen)
                    lin.bias.uniform_(-bound, bound, generator=gen)
        lo = torch.as_tensor(config.bounds.lo, dtype=dtype)
        hi = torch.as_tensor(config.bounds.hi, dtype=dtype)
        self.register_buffer("_lo", lo)
        self.register_buffer("_inv_extent", 1.0 / (hi - lo))
        self._corner_offsets = torch.tensor(
            [[i, j, k] for i in (0, 1) for j in (0, 1) for k in (0, 1)], dtype=torch.int64
        )

    @property
    def dtype(self) -> torch.dtype:
        return self.tables.dtype

    def parameter_count(self) -> int:
        return sum(p.numel() for p in self.parameters())

    def assert_finite(self) -> None:
        for name, p in self.named_parameters():
            if not torch.isfinite(p).all():
                raise NumericalError(f"non-finite values in parameter block {name!r}")

    def encode(self, x: torch.Tensor) -> torch.Tensor:
        """Hashed multi-level trilinear features, (N, levels*features).

        Out-of-bounds positions are clamped to the domain box.
        """
        cfg = self.config
        x01 = ((x - self._lo) * self._inv_extent).clamp(0.0, 1.0)
        outs = []
        for level in range(cfg.levels):
            res = cfg.level_resolution(level)
            scaled = x01 * res
            base = torch.floor(scaled).to(torch.int64)
            frac = scaled - base.to(scaled.dtype)
            corners = base.unsqueeze(1) + self._corner_offsets  # (N, 8, 3)
            idx = (
                corners[..., 0] * HASH_PRIMES[0]
                ^ corners[..., 1] * HASH_PRIMES[1]
                ^ corners[..., 2] * HASH_PRIMES[2]
            ) & (cfg.table_size - 1)
            vals = self.tables[level][idx]  # (N, 8, F)
            off = self._corner_offsets.to(scaled.dtype)  # (8, 3)
            w = off * frac.unsqueeze(1) + (1.0 - off) * (1.0 - frac.unsqueeze(1))
            weight = w.prod(dim=-1)  # (N, 8)
            outs.append((weight.unsqueeze(-1) * vals).sum(dim=1))
        return torch.cat(outs, dim=-1)

    def density(self, x: torch.Tensor):
        """(sigma (N,), geometry features (N, GEO_FEATURES))."""
        h = self.density_net(self.encode(x))
        sigma = torch.exp(torch.clamp(h[..., 0], max=float(np.log(SIGMA_CAP))))
        return sigma, h[..., 1:]

    def forward(self, x: torch.Tensor, d: torch.Tensor):
        sigma, geo = self.density(x)
        rgb = torch.sigmoid(self.color_net(torch.cat([geo, encode_direction(d)], dim=-1)))
        return rgb, sigma

    def density_at(self, points: np.ndarray, chunk: int = 262144) -> np.ndarray:
        """Numpy-in/numpy-out density evaluation, chunked (no gradients)."""
        pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
        out = np.empty(pts.shape[0], dtype=np.float64)
        with torch.no_grad():
            for s in range(0, pts.shape[0], chunk):
                t = torch.as_tensor(pts[s : s + chunk], dtype=self.dtype)
                out[s : s + chunk] = self.density(t)[0].to(torch.float64).numpy()
        return out


@dataclass(frozen=True)
class FieldOutput:
    color: np.ndarray
    sigma: float


def field_eval(field: DensityColorField, x: np.ndarray, d: np.ndarray) -> FieldOutput:
    """Evaluate at a single position/unit-direction pair."""
    d = np.asarray(d, dtype=np.float64)
    if abs(np.linalg.norm(d) - 1.0) > 1e-6:
        raise ValueError("view direction must be unit length")
    field.assert_finite()
    with torch.no_grad():
        xt = torch.as_tensor(np.asarray(x, dtype=np.float64).reshape(1, 3), dtype=field.dtype)
        dt = torch.as_tensor(d.reshape(1, 3), dtype=field.dtype)
        rgb, sigma = field(xt, dt)
    return FieldOutput(color=rgb[0].to(torch.float64).numpy(), sigma=float(sigma[0]))


def field_eval_batch(field: DensityColorField, xs: np.ndarray, ds: np.ndarray, chunk: int = 65536):
    """Vectorized evaluation; elementwise equal to ``field_eval``."""
    xs = np.asarray(xs, dtype=np.float64).reshape(-1, 3)
    ds = np.asarray(ds, dtype=np.float64).reshape(-1, 3)
    if xs.shape[0] != ds.shape[0]:
        raise ValueError("xs and ds must pair up")
    if xs.shape[0] == 0:
        return np.empty((0, 3)), np.empty((0,))
    field.assert_finite()
    colors = np.empty((xs.shape[0], 3))
    sigmas = np.empty(xs.shape[0])
    with torch.no_grad():
        for s in range(0, xs.shape[0], chunk):
            xt = torch.as_tensor(xs[s : s + chunk], dtype=field.dtype)
            dt = torch.as_tensor(ds[s : s + chunk], dtype=field.dtype)
            rgb, sigma = field(xt, dt)
            colors[s : s + chunk] = rgb.to(torch.float64).numpy()
            sigmas[s : s + chunk] = sigma.to(torch.float64).numpy()
    return colors, sigmas


# ---------------------------------------------------------------------------
# checkpoints: fixed header + flat little-endian f32 parameter block
# ---------------------------------------------------------------------------

_HEADER = struct.Struct("<4sI iidiq ii 6d")  # magic, version, grid config, net widths, bounds


def _param_order(field: DensityColorField):
    return [p for _, p in sorted(field.named_parameters(), key=lambda kv: kv[0])]


def save_checkpoint(field: DensityColorField, path) -> None:
    cfg = field.config
    header = _HEADER.pack(
        CHECKPOINT_MAGIC,
        CHECKPOINT_VERSION,
        cfg.levels,
        cfg.base_resolution,
        cfg.growth,
        cfg.features,
        cfg.table_size,
        cfg.density_hidden,
        cfg.color_hidden,
        *cfg.bounds.lo.tolist(),
        *cfg.bounds.hi.tolist(),
    )
    flat = torch.cat([p.detach().reshape(-1).to(torch.float32) for p in _param_order(field)])
    blob = flat.numpy().astype("<f4").tobytes()
    Path(path).write_bytes(header + blob)


def load_checkpoint(path) -> DensityColorField:
    path = Path(path)
    if not path.exists():
        raise InputError(f"checkpoint not found: {path}")
    raw = path.read_bytes()
    if len(raw) < _HEADER.size or raw[:4] != CHECKPOINT_MAGIC:
        raise InputError(f"not a field checkpoint: {path}")
    (_, version, levels, base_res, growth, features, table_size, dh, ch, *bounds) = _HEADER.unpack(
        raw[: _HEADER.size]
    )
    if version != CHECKPOINT_VERSION:
        raise InputError(f"unsupported checkpoint version {version} in {path}")
    cfg = HashGridConfig(
        levels=levels,
        base_resolution=base_res,
        growth=growth,
        features=features,
        table_size=table_size,
        bounds=Aabb(bounds[:3], bounds[3:]),
        density_hidden=dh,
        color_hidden=ch,
    )
    field = DensityColorField(cfg)
    params = _param_order(field)
    expected = sum(p.numel() for p in params)
    flat = np.frombuffer(raw[_HEADER.size :], dtype="<f4")
    if flat.size != expected:
        raise InputError(
            f"checkpoint parameter block has {flat.size} floats, expected {expected}: {path}"
        )
    offset = 0
    with torch.no_grad():
        for p in params:
            n = p.numel()
            p.copy_(torch.from_numpy(flat[offset : offset + n].copy()).reshape(p.shape))
            offset += n
    field.assert_finite()
    return field
