"""Edit-aware chamfer distance: split both clouds into up to K consecutive
groups and sum per-group offset-optimized chamfer distances over the best
split.

Two execution modes share one dynamic program:

* exact mode (small clouds): every point index is a split candidate and the
  DP minimum provably equals brute-force split enumeration. Group scoring
  uses a single shared offset lattice (anchored at the full-cloud centroid
  difference) so the whole segment-pair cost table can be built with
  prefix-min/prefix-sum factorization instead of per-segment rescans.
* pruned mode (large clouds): split candidates are restricted to the largest
  x-gaps, the DP runs on a cheap centroid-aligned surrogate cost over
  subsampled segments, and the winning split's groups are re-scored with the
  full translation grid search.

Splits may use fewer than K groups (the DP carries states across layers), so
the total is non-increasing in K by construction. The single-group candidate
is always scored with the public `chamfer_offset`, which makes the K=1 result
identical to it.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Literal

import numpy as np

from ..errors import EmptyCloudError, InvalidKError
from .chamfer import (
    CloudLike,
    GridConfig,
    Offset,
    as_points,
    chamfer_offset,
    lattice_offsets,
    union_diagonal,
)

# Clouds at or below this size (both sides) are eligible for the exact
# full-index DP; auto mode additionally bounds the cost-table work so large
# offset grids on mid-size clouds fall back to pruned mode.
EXACT_SIZE_LIMIT = 64
EXACT_WORK_LIMIT = 40_000_000  # segment pairs x offsets
# Pruned mode: split candidates per cloud = min(GAP_FACTOR * k, GAP_CAP).
GAP_FACTOR = 4
GAP_CAP = 16
# Pruned mode: segments are subsampled to this many points for the surrogate.
SURROGATE_SAMPLE = 24
# Pruned-mode transition filters: segment sizes must be within ratio/slack of
# each other, and x-centers (relative to each cloud's mean x) must be close.
SIZE_RATIO_LIMIT = 6.0
SIZE_SLACK = 8
X_WINDOW_FACTOR = 0.25

_TABLE_MEMORY_BUDGET = 96 << 20  # bytes of scratch for exact-mode cost tables

Mode = Literal["auto", "exact", "pruned"]


@dataclass(frozen=True)
class Alignment:
    """Result of the segmented alignment.

    p_bounds/q_bounds hold k+1 split positions (point indices into the
    x-sorted clouds, 0 and the cloud size at the ends); group i covers
    p_bounds[i]:p_bounds[i+1] against q_bounds[i]:q_bounds[i+1] shifted by
    offsets[i]. k is the number of groups actually used, which can be below
    the requested count when fewer groups already achieve the minimum.
    """

    k: int
    p_bounds: tuple[int, ...]
    q_bounds: tuple[int, ...]
    offsets: tuple[Offset, ...]
    group_costs: tuple[float, ...]
    total: float
    k_clamped: bool = False

    def __post_init__(self):
        if self.k != len(self.p_bounds) - 1 or self.k != len(self.q_bounds) - 1:
            raise ValueError("bounds must have k+1 entries")
        if self.k != len(self.offsets) or self.k != len(self.group_costs):
            raise ValueError("offsets/group_costs must have k entries")
        for bounds in (self.p_bounds, self.q_bounds):
            if any(b >= e for b, e in zip(bounds, bounds[1:])):
                raise ValueError("split bounds must be strictly increasing")
        if abs(self.total - sum(self.group_costs)) > 1e-9:
            raise ValueError("total does not match sum of group costs")


def shared_group_offsets(p: np.ndarray, q: np.ndarray, cfg: GridConfig) -> np.ndarray:
    """Offset candidates used to score every group of a multi-group split.

    One lattice level anchored at the full-cloud centroid difference, plus
    the zero offset and the anchor itself. Sharing one candidate set across
    all segment pairs is what allows the factorized cost-table build.
    """
    center = q.mean(axis=0) - p.mean(axis=0)
    half = cfg.range_factor * union_diagonal(p, q)
    lattice = lattice_offsets(center, half, cfg.coarse_steps)
    return np.concatenate([np.zeros((1, 2)), center[None, :], lattice], axis=0)


def _pair_index(nb: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Rank-pair indexing for nb boundaries: all (lo, hi) with lo < hi.

    Returns (base, lo_idx, hi_idx): pid(lo, hi) = base[lo] + hi - lo - 1,
    contiguous in hi for fixed lo.
    """
    counts = np.arange(nb - 1, 0, -1)
    base = np.concatenate([[0], np.cumsum(counts)])[:-1]
    lo_idx = np.repeat(np.arange(nb - 1), counts)
    hi_idx = np.concatenate([np.arange(lo + 1, nb) for lo in range(nb - 1)])
    return base.astype(np.int64), lo_idx.astype(np.int64), hi_idx.astype(np.int64)


def _segment_cost_table(
    p: np.ndarray, q: np.ndarray, offsets: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Chamfer cost of every (P segment, Q segment) pair, minimized over the
    shared offsets.

    Returns (table, best_offset_index), both shaped (p_pairs, q_pairs) with
    pairs ordered by _pair_index. For a fixed offset and a fixed segment
    start, prefix minima over the other cloud and prefix sums over points
    yield all segment ends in one pass, so the build is
    O(n_offsets * n^2 * m^2 / 4) elementary operations rather than that
    times the segment sizes.
    """
    n, m = p.shape[0], q.shape[0]
    pbase, p_lo, p_hi = _pair_index(n + 1)
    qbase, q_lo, q_hi = _pair_index(m + 1)
    p_pairs, q_pairs = p_lo.shape[0], q_lo.shape[0]
    inv_len_p = 1.0 / (p_hi - p_lo)
    inv_len_q = 1.0 / (q_hi - q_lo)

    n_off = offsets.shape[0]
    slice_bytes = 2 * p_pairs * q_pairs * 8
    chunk = int(max(1, min(n_off, _TABLE_MEMORY_BUDGET // max(slice_bytes, 1), 64)))

    table = np.full((p_pairs, q_pairs), np.inf)
    best_off = np.zeros((p_pairs, q_pairs), dtype=np.uint32)
    term1 = np.empty((chunk, p_pairs, q_pairs))
    term2 = np.empty((chunk, p_pairs, q_pairs))

    for o0 in range(0, n_off, chunk):
        offs = offsets[o0 : o0 + chunk]
        nc = offs.shape[0]
        diff = p[None, :, None, :] + offs[:, None, None, :] - q[None, None, :, :]
        dist = np.sqrt(np.einsum("oabk,oabk->oab", diff, diff))  # (nc, n, m)

        # Directed term P -> Q: for each Q start mm, prefix-min over Q gives
        # nearest distances for every Q end; cumsum over P rows turns segment
        # sums into differences of prefixes.
        for mm in range(m):
            row_min = np.minimum.accumulate(dist[:nc, :, mm:], axis=2)
            csum = np.concatenate(
                [np.zeros((nc, 1, m - mm)), np.cumsum(row_min, axis=1)], axis=1
            )
            seg = (csum[:, p_hi, :] - csum[:, p_lo, :]) * inv_len_p[None, :, None]
            term1[:nc, :, qbase[mm] : qbase[mm] + (m - mm)] = seg

        # Directed term Q -> P: same with roles swapped, per P start l.
        for l in range(n):
            col_min = np.minimum.accumulate(dist[:nc, l:, :], axis=1)
            csum = np.concatenate(
                [np.zeros((nc, n - l, 1)), np.cumsum(col_min, axis=2)], axis=2
            )
            seg = (csum[:, :, q_hi] - csum[:, :, q_lo]) * inv_len_q[None, None, :]
            term2[:nc, pbase[l] : pbase[l] + (n - l), :] = seg

        total = term1[:nc]
        total += term2[:nc]
        chunk_min = total.min(axis=0)
        chunk_arg = total.argmin(axis=0)
        better = chunk_min < table
        table[better] = chunk_min[better]
        best_off[better] = chunk_arg[better].astype(np.uint32) + o0

    return table, best_off


def _min_plus_dp(
    table: np.ndarray, nb_p: int, nb_q: int, k: int
) -> tuple[float, list[tuple[int, int, int, int]]]:
    """DP over boundary ranks: cover both clouds with at most k group pairs.

    table[pid(lo,hi), qid(mo,ho)] is the cost of pairing those segments
    (+inf = transition disallowed). Returns the optimal total and the chosen
    groups as (p_lo, p_hi, q_lo, q_hi) rank tuples; fewer than k groups are
    used when that already attains the minimum (states carry across layers).
    """
    pbase, _, _ = _pair_index(nb_p)
    qbase, _, _ = _pair_index(nb_q)

    # qid matrix and validity mask for gathering per-destination columns
    qid_mat = np.zeros((nb_q, nb_q), dtype=np.int64)
    invalid = np.full((nb_q, nb_q), np.inf)
    for mo in range(nb_q - 1):
        js = np.arange(mo + 1, nb_q)
        qid_mat[mo, js] = qbase[mo] + js - mo - 1
        invalid[mo, js] = 0.0

    pid_rows = [pbase[np.arange(ri)] + (ri - np.arange(ri) - 1) for ri in range(nb_p)]

    prev = np.full((nb_p, nb_q), np.inf)
    prev[0, 0] = 0.0
    parents: list[tuple[np.ndarray, np.ndarray]] = []

    for _ in range(k):
        cur = prev.copy()  # carrying a state = use fewer groups
        par_l = np.full((nb_p, nb_q), -1, dtype=np.int32)
        par_m = np.full((nb_p, nb_q), -1, dtype=np.int32)
        for ri in range(1, nb_p):
            rows = table[pid_rows[ri]]  # (ri, q_pairs)
            cand = rows[:, qid_mat] + invalid[None, :, :] + prev[:ri, :, None]
            flat = cand.reshape(ri * nb_q, nb_q)
            arg = flat.argmin(axis=0)
            vals = flat[arg, np.arange(nb_q)]
            better = vals < cur[ri]
            cur[ri, better] = vals[better]
            par_l[ri, better] = (arg[better] // nb_q).astype(np.int32)
            par_m[ri, better] = (arg[better] % nb_q).astype(np.int32)
        parents.append((par_l, par_m))
        prev = cur

    total = float(prev[nb_p - 1, nb_q - 1])
    groups: list[tuple[int, int, int, int]] = []
    ri, rj = nb_p - 1, nb_q - 1
    layer = k - 1
    while not (ri == 0 and rj == 0):
        par_l, par_m = parents[layer]
        lo = int(par_l[ri, rj])
        if lo < 0:  # state carried from the previous layer
            layer -= 1
            continue
        mo = int(par_m[ri, rj])
        groups.append((lo, ri, mo, rj))
        ri, rj = lo, mo
        layer -= 1
    groups.reverse()
    return total, groups


def _gap_boundaries(points: np.ndarray, max_candidates: int) -> np.ndarray:
    """Split candidates at the largest x-gaps of an x-sorted cloud."""
    n = points.shape[0]
    if n - 1 <= max_candidates:
        return np.arange(n + 1)
    gaps = np.diff(points[:, 0])
    # stable selection: largest gaps first, earlier index wins ties
    order = np.lexsort((np.arange(gaps.shape[0]), -gaps))
    chosen = np.sort(order[:max_candidates]) + 1
    return np.concatenate([[0], chosen, [n]])


def _subsample_rows(points: np.ndarray, lo: int, hi: int, cap: int) -> np.ndarray:
    length = hi - lo
    if length <= cap:
        return np.arange(lo, hi)
    return lo + np.floor(np.linspace(0, length - 1, cap)).astype(np.int64)


def _surrogate_table(
    p: np.ndarray,
    q: np.ndarray,
    bp: np.ndarray,
    bq: np.ndarray,
    apply_filters: bool,
) -> np.ndarray:
    """Cheap split-guidance costs: chamfer of centroid-aligned, subsampled
    segment pairs. Filtered-out transitions get +inf; the full-pair entry is
    always evaluated so the DP stays feasible."""
    nb_p, nb_q = bp.shape[0], bq.shape[0]
    _, p_lo_r, p_hi_r = _pair_index(nb_p)
    _, q_lo_r, q_hi_r = _pair_index(nb_q)
    p_lo, p_hi = bp[p_lo_r], bp[p_hi_r]
    q_lo, q_hi = bq[q_lo_r], bq[q_hi_r]
    p_pairs, q_pairs = p_lo.shape[0], q_lo.shape[0]

    if apply_filters:
        size_p = (p_hi - p_lo).astype(np.float64)
        size_q = (q_hi - q_lo).astype(np.float64)
        hi = np.maximum(size_p[:, None], size_q[None, :])
        lo = np.minimum(size_p[:, None], size_q[None, :])
        allowed = hi <= SIZE_RATIO_LIMIT * lo + SIZE_SLACK

        cx_p = np.concatenate([[0.0], np.cumsum(p[:, 0])])
        cx_q = np.concatenate([[0.0], np.cumsum(q[:, 0])])
        rel_p = (cx_p[p_hi] - cx_p[p_lo]) / (p_hi - p_lo) - p[:, 0].mean()
        rel_q = (cx_q[q_hi] - cx_q[q_lo]) / (q_hi - q_lo) - q[:, 0].mean()
        span = max(np.ptp(p[:, 0]), np.ptp(q[:, 0]))
        allowed &= np.abs(rel_p[:, None] - rel_q[None, :]) <= X_WINDOW_FACTOR * span
    else:
        allowed = np.ones((p_pairs, q_pairs), dtype=bool)
    allowed[nb_p - 2, nb_q - 2] = True  # pair id of the full segment (0, last)

    cap = SURROGATE_SAMPLE
    sub_p = np.zeros((p_pairs, cap, 2))
    mask_p = np.zeros((p_pairs, cap), dtype=bool)
    for a in range(p_pairs):
        rows = _subsample_rows(p, int(p_lo[a]), int(p_hi[a]), cap)
        sub_p[a, : rows.shape[0]] = p[rows]
        mask_p[a, : rows.shape[0]] = True
    sub_q = np.zeros((q_pairs, cap, 2))
    mask_q = np.zeros((q_pairs, cap), dtype=bool)
    for b in range(q_pairs):
        rows = _subsample_rows(q, int(q_lo[b]), int(q_hi[b]), cap)
        sub_q[b, : rows.shape[0]] = q[rows]
        mask_q[b, : rows.shape[0]] = True

    table = np.full((p_pairs, q_pairs), np.inf)
    ai, bi = np.nonzero(allowed)
    chunk = 512
    for c0 in range(0, ai.shape[0], chunk):
        a_c, b_c = ai[c0 : c0 + chunk], bi[c0 : c0 + chunk]
        pc, qc = sub_p[a_c], sub_q[b_c]
        mp, mq = mask_p[a_c], mask_q[b_c]
        ka = mp.sum(axis=1)
        kb = mq.sum(axis=1)
        cen_p = (pc * mp[:, :, None]).sum(axis=1) / ka[:, None]
        cen_q = (qc * mq[:, :, None]).sum(axis=1) / kb[:, None]
        shift = cen_q - cen_p
        diff = pc[:, :, None, :] + shift[:, None, None, :] - qc[:, None, :, :]
        dist = np.sqrt(np.einsum("bijk,bijk->bij", diff, diff))
        dist_q = np.where(mq[:, None, :], dist, np.inf)
        min_q = dist_q.min(axis=2)
        term1 = (min_q * mp).sum(axis=1) / ka
        dist_p = np.where(mp[:, :, None], dist, np.inf)
        min_p = dist_p.min(axis=1)
        term2 = (min_p * mq).sum(axis=1) / kb
        table[a_c, b_c] = term1 + term2
    return table


def _one_group_alignment(
    n: int, m: int, value: float, offset: Offset, k_clamped: bool
) -> Alignment:
    return Alignment(
        k=1,
        p_bounds=(0, n),
        q_bounds=(0, m),
        offsets=(offset,),
        group_costs=(value,),
        total=value,
        k_clamped=k_clamped,
    )


def cde(
    p: CloudLike,
    q: CloudLike,
    k: int,
    cfg: GridConfig = GridConfig(),
    mode: Mode = "auto",
) -> Alignment:
    """Minimum summed per-group offset-chamfer over splits of both clouds
    into at most k consecutive, non-empty group pairs.

    k above min(|P|, |Q|) is clamped (and flagged) since groups must be
    non-empty on both sides. With k=1 the result equals chamfer_offset.
    """
    pa, qa = as_points(p), as_points(q)
    if pa.shape[0] == 0 or qa.shape[0] == 0:
        raise EmptyCloudError("cde needs non-empty clouds")
    if k < 1:
        raise InvalidKError(f"group count must be >= 1, got {k}")
    n, m = pa.shape[0], qa.shape[0]
    k_eff = min(k, n, m)
    clamped = k_eff < k

    base_val, base_offset = chamfer_offset(pa, qa, cfg)
    if k_eff == 1:
        return _one_group_alignment(n, m, base_val, base_offset, clamped)

    if mode not in ("auto", "exact", "pruned"):
        raise ValueError(f"unknown mode {mode!r}")
    n_inner_off = cfg.coarse_steps * cfg.coarse_steps + 2
    table_work = (n * (n + 1) // 2) * (m * (m + 1) // 2) * n_inner_off
    use_exact = mode == "exact" or (
        mode == "auto"
        and max(n, m) <= EXACT_SIZE_LIMIT
        and table_work <= EXACT_WORK_LIMIT
    )

    if use_exact:
        offsets = shared_group_offsets(pa, qa, cfg)
        table, best_off = _segment_cost_table(pa, qa, offsets)
        total, groups = _min_plus_dp(table, n + 1, m + 1, k_eff)
        if base_val <= total or len(groups) <= 1:
            return _one_group_alignment(n, m, base_val, base_offset, clamped)
        pbase, _, _ = _pair_index(n + 1)
        qbase, _, _ = _pair_index(m + 1)
        costs, offs = [], []
        for lo, hi, mo, ho in groups:
            pid = pbase[lo] + hi - lo - 1
            qid = qbase[mo] + ho - mo - 1
            costs.append(float(table[pid, qid]))
            off = offsets[best_off[pid, qid]]
            offs.append(Offset(float(off[0]), float(off[1])))
        return Alignment(
            k=len(groups),
            p_bounds=tuple(lo for lo, _, _, _ in groups) + (n,),
            q_bounds=tuple(mo for _, _, mo, _ in groups) + (m,),
            offsets=tuple(offs),
            group_costs=tuple(costs),
            total=float(sum(costs)),
            k_clamped=clamped,
        )

    # Pruned mode: gap-restricted boundaries, surrogate-guided DP, rescore.
    max_gaps = min(GAP_FACTOR * k_eff, GAP_CAP)
    bp = _gap_boundaries(pa, max_gaps)
    bq = _gap_boundaries(qa, max_gaps)
    groups = None
    for filtered in (True, False):
        table = _surrogate_table(pa, qa, bp, bq, apply_filters=filtered)
        total, groups = _min_plus_dp(table, bp.shape[0], bq.shape[0], k_eff)
        if np.isfinite(total) and groups:
            break
    rescore_cfg = replace(cfg, refine_levels=max(0, cfg.refine_levels - 1))
    costs, offs = [], []
    for lo, hi, mo, ho in groups:
        val, off = chamfer_offset(pa[bp[lo] : bp[hi]], qa[bq[mo] : bq[ho]], rescore_cfg)
        costs.append(val)
        offs.append(off)
    total = float(sum(costs))
    if base_val <= total or len(groups) <= 1:
        return _one_group_alignment(n, m, base_val, base_offset, clamped)
    return Alignment(
        k=len(groups),
        p_bounds=tuple(int(bp[lo]) for lo, _, _, _ in groups) + (n,),
        q_bounds=tuple(int(bq[mo]) for _, _, mo, _ in groups) + (m,),
        offsets=tuple(offs),
        group_costs=tuple(costs),
        total=total,
        k_clamped=clamped,
    )
