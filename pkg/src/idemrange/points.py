"""Point sets in the unit cube: generators and the well-distribution checker.

A set is well-distributed when every axis-aligned rectangle holding k >= 2
points has volume at least eps*k/n, and dually a rectangle of volume v holds
at most ceil(v*n/eps) points.  The dimension constant eps is never assumed:
the checker measures the binding value over an anchored rectangle family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import TooLarge, Unsupported
from .geometry import Box

__all__ = [
    "WeightedPointSet",
    "WdReport",
    "hammersley_wd",
    "uniform_random",
    "check_well_distributed",
    "radical_inverse",
    "save_point_set",
    "load_point_set",
]

_PRIMES = (2, 3, 5, 7, 11)
_MAX_DIM = 6


@dataclass(frozen=True)
class WeightedPointSet:
    """Points in [0,1]^d with unique ids and semigroup weights (floats)."""

    coords: np.ndarray  # (n, d)
    ids: np.ndarray  # (n,)
    weights: np.ndarray  # (n,)

    def __post_init__(self):
        coords = np.atleast_2d(np.asarray(self.coords, dtype=np.float64))
        ids = np.asarray(self.ids, dtype=np.int64)
        weights = np.asarray(self.weights, dtype=np.float64)
        if coords.shape[0] != ids.shape[0] or ids.shape[0] != weights.shape[0]:
            raise ValueError("coords, ids, weights lengths differ")
        if ids.size and np.unique(ids).size != ids.size:
            raise ValueError("point ids must be unique")
        for arr, name in ((coords, "coords"), (ids, "ids"), (weights, "weights")):
            arr.setflags(write=False)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "ids", ids)
        object.__setattr__(self, "weights", weights)

    def __len__(self) -> int:
        return self.coords.shape[0]

    @property
    def d(self) -> int:
        return self.coords.shape[1]

    def subset(self, index) -> "WeightedPointSet":
        return WeightedPointSet(self.coords[index], self.ids[index], self.weights[index])

    def with_weights(self, weights) -> "WeightedPointSet":
        return WeightedPointSet(self.coords, self.ids, np.asarray(weights, dtype=np.float64))


def radical_inverse(index: int, base: int) -> float:
    """Van der Corput radical inverse of ``index`` in the given base."""
    inv, f = 0.0, 1.0 / base
    while index > 0:
        inv += (index % base) * f
        index //= base
        f /= base
    return inv


def _radical_inverse_array(indices: np.ndarray, base: int) -> np.ndarray:
    idx = indices.astype(np.int64).copy()
    out = np.zeros(idx.shape, dtype=np.float64)
    f = 1.0 / base
    while np.any(idx > 0):
        out += (idx % base) * f
        idx //= base
        f /= base
    return out


def _force_distinct(col: np.ndarray, step: float) -> np.ndarray:
    # vdC columns are injective over indices; this only fires on rounding ties.
    while True:
        _, inverse, counts = np.unique(col, return_inverse=True, return_counts=True)
        if counts.max(initial=1) <= 1:
            return col
        col = col.copy()
        seen: dict[int, int] = {}
        for i, g in enumerate(inverse):
            r = seen.get(g, 0)
            seen[g] = r + 1
            if r:
                col[i] = min(1.0, col[i] + r * step)


def hammersley_wd(n: int, d: int) -> WeightedPointSet:
    """Deterministic Hammersley set: first axis (i+0.5)/n, rest radical inverses.

    Empirically well-distributed; the measured epsilon is whatever the
    checker reports, nothing is assumed.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 1 <= d <= _MAX_DIM:
        raise Unsupported(f"d={d} outside supported range 1..{_MAX_DIM}")
    idx = np.arange(n, dtype=np.int64)
    cols = [(idx + 0.5) / n]
    for j in range(1, d):
        base = _PRIMES[j - 1]
        col = _radical_inverse_array(idx, base)
        cols.append(_force_distinct(col, 0.5 / n / base))
    coords = np.column_stack(cols)
    return WeightedPointSet(coords, idx, np.ones(n))


def uniform_random(n: int, d: int, seed: int) -> WeightedPointSet:
    """Uniform iid points; per-dimension collisions resampled; deterministic."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    coords = rng.random((n, d))
    for j in range(d):
        while True:
            _, counts = np.unique(coords[:, j], return_counts=True)
            if counts.max() <= 1:
                break
            # resample just the colliders
            vals, inverse, counts = np.unique(coords[:, j], return_inverse=True, return_counts=True)
            dup = counts[inverse] > 1
            coords[dup, j] = rng.random(int(dup.sum()))
    return WeightedPointSet(coords, np.arange(n, dtype=np.int64), np.ones(n))


@dataclass(frozen=True)
class WdReport:
    """Outcome of a well-distribution check.

    epsilon_observed is the binding constant of property (ii) over the
    examined rectangles (inf when no rectangle held two points).  Sampled
    mode can only certify failure, never the universal property.
    """

    passed: bool
    epsilon_observed: float
    worst_rectangle: Box | None
    mode: str
    iii_ok: bool


def _ceil_count_bound(vol: float, n: int, eps: float) -> int:
    return int(math.ceil(vol * n / eps - 1e-12))


try:
    from numba import njit as _njit

    _HAVE_NUMBA = True
except Exception:  # pragma: no cover - numba is optional
    _HAVE_NUMBA = False

if _HAVE_NUMBA:

    @_njit(cache=True)
    def _exact_scan_2d_kernel(xs, ys, n, eps):  # pragma: no cover - jitted
        best = np.inf
        bx0 = bx1 = by0 = by1 = 0.0
        iii_bad = 0.0  # worst excess ratio k / bound
        ybuf = np.empty(n, dtype=np.float64)
        for i in range(n):
            m = 0
            for j in range(i, n):
                y = ys[j]
                pos = m
                while pos > 0 and ybuf[pos - 1] > y:
                    ybuf[pos] = ybuf[pos - 1]
                    pos -= 1
                ybuf[pos] = y
                m += 1
                if m < 2:
                    continue
                w = xs[j] - xs[i]
                for a in range(m - 1):
                    for b in range(a + 1, m):
                        vol = w * (ybuf[b] - ybuf[a])
                        k = b - a + 1
                        ratio = vol * n / k
                        if ratio < best:
                            best = ratio
                            bx0, bx1, by0, by1 = xs[i], xs[j], ybuf[a], ybuf[b]
                        bound = math.ceil(vol * n / eps - 1e-12)
                        if k > bound:
                            excess = k - bound
                            if excess > iii_bad:
                                iii_bad = excess
        return best, bx0, bx1, by0, by1, iii_bad


def _exact_scan_2d_numpy(xs, ys, n, eps):
    best = np.inf
    rect = (0.0, 0.0, 0.0, 0.0)
    iii_ok = True
    for i in range(n):
        ybuf: list[float] = []
        for j in range(i, n):
            # keep slab ys sorted as the x-window grows
            y = ys[j]
            lo, hi = 0, len(ybuf)
            while lo < hi:
                mid = (lo + hi) // 2
                if ybuf[mid] < y:
                    lo = mid + 1
                else:
                    hi = mid
            ybuf.insert(lo, y)
            m = len(ybuf)
            if m < 2:
                continue
            arr = np.asarray(ybuf)
            w = xs[j] - xs[i]
            diff = arr[None, :] - arr[:, None]  # diff[a, b] = y_b - y_a
            ks = np.arange(m)[None, :] - np.arange(m)[:, None] + 1
            valid = ks >= 2
            ratios = np.where(valid, w * diff * n / np.maximum(ks, 2), np.inf)
            amin = int(np.argmin(ratios))
            a, b = divmod(amin, m)
            if ratios[a, b] < best:
                best = float(ratios[a, b])
                rect = (float(xs[i]), float(xs[j]), float(arr[a]), float(arr[b]))
            bounds = np.ceil(w * diff * n / eps - 1e-12)
            if np.any(valid & (ks > bounds)):
                iii_ok = False
    return best, rect, iii_ok


def _exact_2d(coords: np.ndarray, eps: float) -> tuple[float, Box | None, bool]:
    order = np.argsort(coords[:, 0], kind="stable")
    xs = coords[order, 0].copy()
    ys = coords[order, 1].copy()
    n = len(xs)
    if _HAVE_NUMBA:
        best, bx0, bx1, by0, by1, iii_bad = _exact_scan_2d_kernel(xs, ys, n, eps)
        rect = (bx0, bx1, by0, by1)
        iii_ok = iii_bad == 0.0
    else:
        best, rect, iii_ok = _exact_scan_2d_numpy(xs, ys, n, eps)
    worst = None
    if np.isfinite(best):
        worst = Box((rect[0], rect[2]), (rect[1], rect[3]))
    return float(best), worst, iii_ok


def _exact_nd(coords: np.ndarray, eps: float) -> tuple[float, Box | None, bool]:
    # generic fallback: anchored pairs in every dimension, exhaustive count
    import itertools

    n, d = coords.shape
    axes = [np.sort(np.unique(coords[:, j])) for j in range(d)]
    pair_lists = [
        [(lo, hi) for ai, lo in enumerate(vals) for hi in vals[ai:]] for vals in axes
    ]
    best = np.inf
    worst = None
    iii_ok = True
    for combo in itertools.product(*pair_lists):
        lo = np.array([c[0] for c in combo])
        hi = np.array([c[1] for c in combo])
        inside = np.all((coords >= lo) & (coords <= hi), axis=1)
        k = int(inside.sum())
        if k < 2:
            continue
        vol = float(np.prod(hi - lo))
        ratio = vol * n / k
        if ratio < best:
            best = ratio
            worst = Box(tuple(lo), tuple(hi))
        if k > _ceil_count_bound(vol, n, eps):
            iii_ok = False
    return float(best), worst, iii_ok


class _RectCounter:
    """Exact closed-box point counts; 2D uses a rank-grid prefix matrix."""

    def __init__(self, coords: np.ndarray):
        self.coords = coords
        n, d = coords.shape
        self.n, self.d = n, d
        self.fast2d = d == 2 and n <= 6000
        if self.fast2d:
            self.xs = np.sort(coords[:, 0])
            self.ys = np.sort(coords[:, 1])
            rx = np.argsort(np.argsort(coords[:, 0], kind="stable"), kind="stable")
            ry = np.argsort(np.argsort(coords[:, 1], kind="stable"), kind="stable")
            grid = np.zeros((n + 1, n + 1), dtype=np.int32)
            np.add.at(grid, (rx + 1, ry + 1), 1)
            self.prefix = grid.cumsum(axis=0).cumsum(axis=1)

    def counts(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        if self.fast2d:
            ix0 = np.searchsorted(self.xs, lo[:, 0], side="left")
            ix1 = np.searchsorted(self.xs, hi[:, 0], side="right")
            iy0 = np.searchsorted(self.ys, lo[:, 1], side="left")
            iy1 = np.searchsorted(self.ys, hi[:, 1], side="right")
            p = self.prefix
            return p[ix1, iy1] - p[ix0, iy1] - p[ix1, iy0] + p[ix0, iy0]
        out = np.empty(len(lo), dtype=np.int64)
        chunk = max(1, int(4e6 // max(1, self.n)))
        for s in range(0, len(lo), chunk):
            e = min(len(lo), s + chunk)
            inside = np.all(
                (self.coords[None, :, :] >= lo[s:e, None, :])
                & (self.coords[None, :, :] <= hi[s:e, None, :]),
                axis=2,
            )
            out[s:e] = inside.sum(axis=1)
        return out


def _sampled(coords: np.ndarray, eps: float, samples: int, seed: int):
    n, d = coords.shape
    rng = np.random.default_rng(seed)
    corners = rng.random((samples, d, 2))
    lo = corners.min(axis=2)
    hi = corners.max(axis=2)
    counts = _RectCounter(coords).counts(lo, hi)
    vols = np.prod(hi - lo, axis=1)
    multi = counts >= 2
    iii_ok = True
    if np.any(multi):
        ratios = vols[multi] * n / counts[multi]
        w = int(np.argmin(ratios))
        best = float(ratios[w])
        widx = np.nonzero(multi)[0][w]
        worst = Box(tuple(lo[widx]), tuple(hi[widx]))
        bounds = np.ceil(vols[multi] * n / eps - 1e-12)
        iii_ok = bool(np.all(counts[multi] <= bounds))
    else:
        best, worst = np.inf, None
    return best, worst, iii_ok


def check_well_distributed(
    points: WeightedPointSet,
    eps: float,
    mode: str = "exact",
    *,
    samples: int = 100_000,
    seed: int = 0,
    max_candidates: int = 10**9,
) -> WdReport:
    """Measure the well-distribution constant of a point set.

    Exact mode enumerates every rectangle whose facets pass through point
    coordinates (any violating rectangle shrinks to an anchored one without
    losing points), so the reported epsilon is the true binding constant.
    Guarded by ``max_candidates`` against n**(2d) blowup.  Sampled mode
    draws ``samples`` uniform-corner rectangles: it can refute, not certify.
    """
    n, d = len(points), points.d
    if n < 2:
        raise ValueError("need at least 2 points")
    mode = mode.lower()
    if mode == "exact":
        if n ** (2 * d) > max_candidates:
            raise TooLarge(f"exact mode needs n^(2d) = {n ** (2 * d)} <= {max_candidates}")
        if d == 2:
            best, worst, iii_ok = _exact_2d(points.coords, eps)
        else:
            best, worst, iii_ok = _exact_nd(points.coords, eps)
    elif mode == "sampled":
        best, worst, iii_ok = _sampled(points.coords, eps, samples, seed)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return WdReport(
        passed=bool(best >= eps and iii_ok),
        epsilon_observed=float(best),
        worst_rectangle=worst,
        mode=mode,
        iii_ok=iii_ok,
    )


def save_point_set(points: WeightedPointSet, path) -> None:
    """Text format: header '# d=<d> n=<n>', then 'c1 .. cd id' per line."""
    with open(path, "w") as fh:
        fh.write(f"# d={points.d} n={len(points)}\n")
        for row, pid in zip(points.coords, points.ids):
            fh.write(" ".join(repr(float(c)) for c in row) + f" {int(pid)}\n")


def load_point_set(path) -> WeightedPointSet:
    with open(path) as fh:
        header = fh.readline().strip()
        if not header.startswith("#"):
            raise ValueError("missing point-set header")
        fields = dict(tok.split("=") for tok in header[1:].split())
        d, n = int(fields["d"]), int(fields["n"])
        coords = np.empty((n, d))
        ids = np.empty(n, dtype=np.int64)
        for i in range(n):
            parts = fh.readline().split()
            coords[i] = [float(x) for x in parts[:d]]
            ids[i] = int(parts[d])
    return WeightedPointSet(coords, ids, np.ones(n))
