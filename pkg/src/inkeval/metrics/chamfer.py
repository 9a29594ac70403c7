"""Point-cloud similarity: Chamfer distance and its offset-optimized form.

The offset search is a grid search over 2D translations only (no scale or
rotation), anchored at the centroid difference of the two clouds so the
search window is data-relative. The zero offset and the exact centroid
difference are always evaluated in addition to grid cells, which guarantees
the optimized distance never exceeds the plain one.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np
from scipy.spatial import cKDTree

from ..errors import EmptyCloudError
from ..ink import PointCloud

# Above this many pairwise terms per offset batch, switch from a dense
# distance tensor to KD-tree nearest-neighbor queries.
_DENSE_ELEMENT_LIMIT = 250_000


class Offset(NamedTuple):
    dx: float
    dy: float


@dataclass(frozen=True)
class GridConfig:
    """Translation grid-search policy.

    range_factor scales the combined bounding-box diagonal into the search
    half-range; the coarse lattice has coarse_steps cells per axis; each
    refinement level re-grids around the incumbent best with the half-range
    multiplied by refine_shrink.
    """

    range_factor: float = 0.5
    coarse_steps: int = 21
    refine_levels: int = 2
    refine_shrink: float = 0.2

    def __post_init__(self):
        if self.coarse_steps < 1:
            raise ValueError(f"coarse_steps must be >= 1, got {self.coarse_steps}")
        if self.refine_levels < 0:
            raise ValueError(f"refine_levels must be >= 0, got {self.refine_levels}")
        if not 0.0 < self.refine_shrink < 1.0:
            raise ValueError(f"refine_shrink must be in (0, 1), got {self.refine_shrink}")
        if self.range_factor <= 0.0:
            raise ValueError(f"range_factor must be > 0, got {self.range_factor}")


CloudLike = Union[PointCloud, np.ndarray]


def as_points(cloud: CloudLike) -> np.ndarray:
    if isinstance(cloud, PointCloud):
        return cloud.points
    return np.asarray(cloud, dtype=np.float64)


def _require_nonempty(p: np.ndarray, q: np.ndarray) -> None:
    if p.shape[0] == 0 or q.shape[0] == 0:
        raise EmptyCloudError("point-cloud metrics need non-empty clouds")


def cd_at_offsets(p: np.ndarray, q: np.ndarray, offsets: np.ndarray) -> np.ndarray:
    """Chamfer distance of (p + offset, q) for a batch of offsets.

    Dense broadcasting for small problems, batched KD-tree nearest-neighbor
    queries for large ones.
    """
    n_off = offsets.shape[0]
    n, m = p.shape[0], q.shape[0]
    if n_off * n * m <= _DENSE_ELEMENT_LIMIT:
        diff = p[None, :, None, :] + offsets[:, None, None, :] - q[None, None, :, :]
        dist = np.sqrt(np.einsum("oijk,oijk->oij", diff, diff))
        return dist.min(axis=2).mean(axis=1) + dist.min(axis=1).mean(axis=1)
    tree_q = cKDTree(q)
    shifted = (p[None, :, :] + offsets[:, None, :]).reshape(-1, 2)
    d_pq = tree_q.query(shifted)[0].reshape(n_off, n)
    tree_p = cKDTree(p)
    pulled = (q[None, :, :] - offsets[:, None, :]).reshape(-1, 2)
    d_qp = tree_p.query(pulled)[0].reshape(n_off, m)
    return d_pq.mean(axis=1) + d_qp.mean(axis=1)


def chamfer(p: CloudLike, q: CloudLike) -> float:
    """Symmetric mean nearest-neighbor distance between two point clouds."""
    pa, qa = as_points(p), as_points(q)
    _require_nonempty(pa, qa)
    return float(cd_at_offsets(pa, qa, np.zeros((1, 2)))[0])


def union_diagonal(p: np.ndarray, q: np.ndarray) -> float:
    """Diagonal of the bounding box of both clouds together."""
    lo = np.minimum(p.min(axis=0), q.min(axis=0))
    hi = np.maximum(p.max(axis=0), q.max(axis=0))
    return float(np.hypot(*(hi - lo)))


def lattice_offsets(center: np.ndarray, half_range: float, steps: int) -> np.ndarray:
    """Square lattice of steps x steps offsets centered on `center`."""
    axis = np.linspace(-half_range, half_range, steps) if steps > 1 else np.zeros(1)
    gx, gy = np.meshgrid(axis, axis, indexing="ij")
    return np.stack([gx.ravel(), gy.ravel()], axis=1) + center[None, :]


def chamfer_offset(
    p: CloudLike, q: CloudLike, cfg: GridConfig = GridConfig()
) -> tuple[float, Offset]:
    """Chamfer distance minimized over a translation grid applied to p.

    Returns the best distance and the translation that achieved it. The
    candidate set always contains the zero offset (so the result is never
    worse than plain chamfer) and the centroid difference of the clouds.
    Ties keep the earliest candidate, so identical clouds report (0, 0).
    """
    pa, qa = as_points(p), as_points(q)
    _require_nonempty(pa, qa)

    center = qa.mean(axis=0) - pa.mean(axis=0)
    half = cfg.range_factor * union_diagonal(pa, qa)

    # Zero offset goes through the same evaluation path as chamfer() so the
    # optimized value compares exactly against it.
    best_val = float(cd_at_offsets(pa, qa, np.zeros((1, 2)))[0])
    best_off = np.zeros(2)

    coarse = np.concatenate(
        [center[None, :], lattice_offsets(center, half, cfg.coarse_steps)], axis=0
    )
    vals = cd_at_offsets(pa, qa, coarse)
    idx = int(np.argmin(vals))
    if vals[idx] < best_val:
        best_val = float(vals[idx])
        best_off = coarse[idx]

    for _ in range(cfg.refine_levels):
        half *= cfg.refine_shrink
        grid = lattice_offsets(best_off, half, cfg.coarse_steps)
        vals = cd_at_offsets(pa, qa, grid)
        idx = int(np.argmin(vals))
        if vals[idx] < best_val:
            best_val = float(vals[idx])
            best_off = grid[idx]

    return best_val, Offset(float(best_off[0]), float(best_off[1]))
