"""Linear-storage structure for (d+k)-sided queries over idempotent semigroups.

Queries are two-sided in the first k dimensions and upper-bounded in the
rest.  Each point of a collectively well-distributed family, indexed by a
depth tuple in {1..h}^k, is turned into an anchored box whose j-th side
runs from the left boundary of the depth-i_j tree neighbor to the point
(mirrored per orientation); the stored sum is the input weight inside that
box.  A query splits at tree midpoints into up to 2^k anchored pieces; each
piece is tiled by balanced-prefix-cover intervals, candidate boxes are
picked per cover pair, and the last d-k dimensions reduce to a dominance
cover whose leftovers are singletons.

Every candidate passes an explicit box-within-query filter before use.  The
construction almost guarantees containment, but a candidate whose tree node
is leftmost inside the piece's subtree can anchor one slab too far left;
the filter drops it and singletons pick up the slack.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .cwd import CwdFamily, build_cwd_family
from .dominance import dominance_cover
from .dyadic import DyadicTree, Node, balanced_prefix_cover, build_dyadic_tree, suffix_cover
from .errors import MalformedQuery
from .geometry import NEG_INF, Box, QueryAnswer
from .gridindex import GridIndex
from .points import WeightedPointSet
from .semigroup import Semigroup, canonical_weights, fold_values, singleton_value

__all__ = [
    "IdsConfig",
    "IdsStructure",
    "AnchoredPiece",
    "box_of",
    "build_ids",
    "decompose_query",
    "answer_anchored",
    "query",
]

_R, _L = "R", "L"


@dataclass(frozen=True)
class IdsConfig:
    n: int
    d: int
    k: int
    h: int  # ceil(log2 n)
    N: int  # max(1, n // h**k)

    @staticmethod
    def for_input(n: int, d: int, k: int) -> "IdsConfig":
        if not 1 <= k <= d - 1:
            raise ValueError(f"need 1 <= k <= d-1, got k={k}, d={d}")
        h = max(1, math.ceil(math.log2(n)))
        return IdsConfig(n=n, d=d, k=k, h=h, N=max(1, n // h**k))


class _Block:
    """Stored sums for one (orientation, family index): rows sorted by dim 0."""

    __slots__ = ("coords", "box_lo", "box_hi", "counts", "values", "x0")

    def __init__(self, coords, box_lo, box_hi, counts, values):
        order = np.argsort(coords[:, 0], kind="stable")
        self.coords = coords[order]
        self.box_lo = box_lo[order]
        self.box_hi = box_hi[order]
        self.counts = counts[order]
        self.values = values[order] if isinstance(values, np.ndarray) else [values[i] for i in order]
        self.x0 = self.coords[:, 0]

    def __len__(self):
        return len(self.counts)


def box_of(x, index, orientation, trees: list[DyadicTree]) -> Box | None:
    """Anchored box of a family point; None when the needed neighbor is missing."""
    x = np.asarray(x, dtype=np.float64)
    d = x.shape[0]
    k = len(index)
    lo = [NEG_INF] * d
    hi = list(x)
    for j in range(k):
        node = trees[j].node_containing(float(x[j]), index[j])
        if orientation[j] == _R:
            nb = trees[j].left_neighbor(node)
            if nb is None:
                return None
            lo[j] = trees[j].a(nb)
            hi[j] = float(x[j])
        else:
            nb = trees[j].right_neighbor(node)
            if nb is None:
                return None
            lo[j] = float(x[j])
            hi[j] = trees[j].b(nb)
    return Box(tuple(lo), tuple(hi))


class IdsStructure:
    def __init__(self, points: WeightedPointSet, sg: Semigroup, config: IdsConfig, weights=None):
        self.points = points
        self.sg = sg
        self.config = config
        self._w = canonical_weights(sg, points, weights)
        self.trees = [build_dyadic_tree(0.0, 1.0, config.h) for _ in range(config.k)]
        self.family: CwdFamily = build_cwd_family(config.N, config.h, config.k, config.d)
        self.grid = GridIndex(points.coords)
        self.blocks: dict = {}
        self.num_boxes = 0
        self._build_blocks()

    # -- construction -----------------------------------------------------

    def _build_blocks(self) -> None:
        cfg = self.config
        coords = self.points.coords
        sorted_order = [np.argsort(coords[:, j], kind="stable") for j in range(cfg.k)]
        sorted_vals = [coords[sorted_order[j], j] for j in range(cfg.k)]
        for orient in itertools.product((_R, _L), repeat=cfg.k):
            for index, ps in self.family.sets.items():
                blk = self._build_one_block(orient, index, ps, sorted_order, sorted_vals)
                if blk is not None and len(blk):
                    self.blocks[(orient, index)] = blk
                    self.num_boxes += len(blk)

    def _build_one_block(self, orient, index, ps: WeightedPointSet, sorted_order, sorted_vals):
        if len(ps) == 0:
            return None
        cfg = self.config
        k, d = cfg.k, cfg.d
        pts = ps.coords
        spans = np.asarray([1 << dep for dep in index], dtype=np.int64)
        ranks = np.minimum((pts[:, :k] * spans).astype(np.int64), spans - 1)
        defined = np.ones(len(ps), dtype=bool)
        for j in range(k):
            if orient[j] == _R:
                defined &= ranks[:, j] >= 1
            else:
                defined &= ranks[:, j] <= spans[j] - 2
        if not np.any(defined):
            return None
        pts = pts[defined]
        ranks = ranks[defined]
        m = len(pts)
        anchor = np.empty((m, k))
        cell_lo = np.empty((m, k))
        cell_hi = np.empty((m, k))
        for j in range(k):
            w = 1.0 / spans[j]
            if orient[j] == _R:
                anchor[:, j] = (ranks[:, j] - 1) * w
                cell_lo[:, j] = anchor[:, j]
                cell_hi[:, j] = (ranks[:, j] + 1) * w
            else:
                anchor[:, j] = (ranks[:, j] + 2) * w
                cell_lo[:, j] = ranks[:, j] * w
                cell_hi[:, j] = anchor[:, j]
        box_lo = np.full((m, d), NEG_INF)
        box_hi = pts.copy()
        for j in range(k):
            if orient[j] == _R:
                box_lo[:, j] = anchor[:, j]
            else:
                box_lo[:, j] = pts[:, j]
                box_hi[:, j] = anchor[:, j]
        counts = np.zeros(m, dtype=np.int64)
        if self.sg.name == "max":
            values = np.full(m, np.nan)
        elif self.sg.name == "or":
            values = np.zeros(m, dtype=np.uint64)
        else:
            values = [None] * m
        # member sign trick: every per-row constraint is sgn*coord <= sgn*x
        sgn = np.ones(d)
        for j in range(k):
            if orient[j] == _L:
                sgn[j] = -1.0
        coords = self.points.coords
        coords_s = coords * sgn
        w_all = self._w
        # slice candidates on the narrowest constrained dimension, mask the rest
        jstar = int(np.argmax(index))
        cell_keys = np.ravel_multi_index(tuple(ranks.T), tuple(int(s) for s in spans))
        _, first, inverse = np.unique(cell_keys, return_index=True, return_inverse=True)
        group_order = np.argsort(inverse, kind="stable")
        bounds = np.searchsorted(inverse[group_order], np.arange(len(first) + 1))
        for g in range(len(first)):
            rows = group_order[bounds[g] : bounds[g + 1]]
            r0 = rows[0]
            lo = np.searchsorted(sorted_vals[jstar], cell_lo[r0, jstar], side="left")
            hi = np.searchsorted(sorted_vals[jstar], cell_hi[r0, jstar], side="right")
            cand = sorted_order[jstar][lo:hi]
            for j in range(k):
                if j == jstar or cand.size == 0:
                    continue
                cj = coords[cand, j]
                cand = cand[(cj >= cell_lo[r0, j]) & (cj <= cell_hi[r0, j])]
            if cand.size == 0:
                continue
            cand_s = coords_s[cand]
            w_cand = w_all[cand]
            row_chunk = max(1, int(4e6 // max(1, cand.size)))
            for s in range(0, rows.size, row_chunk):
                sub = rows[s : s + row_chunk]
                mask = np.ones((sub.size, cand.size), dtype=bool)
                x_s = pts[sub] * sgn
                for j in range(d):
                    mask &= cand_s[:, j][None, :] <= x_s[:, j][:, None]
                counts[sub] = mask.sum(axis=1)
                if self.sg.name == "max":
                    values[sub] = np.where(mask, w_cand[None, :], -np.inf).max(axis=1)
                elif self.sg.name == "or":
                    values[sub] = np.bitwise_or.reduce(np.where(mask, w_cand[None, :], 0), axis=1)
                else:
                    for t, r in enumerate(sub):
                        if counts[r]:
                            values[r] = np.sort(w_cand[mask[t]]).astype(np.int64)
        return _Block(pts, box_lo, box_hi, counts, values)

    # -- reporting ---------------------------------------------------------

    @property
    def s_plus(self) -> int:
        """Storage: materialized sums with at least two member points."""
        return int(sum(np.sum(b.counts >= 2) for b in self.blocks.values()))

    @property
    def num_nonempty_boxes(self) -> int:
        return int(sum(np.sum(b.counts >= 1) for b in self.blocks.values()))

    def query(self, q: Box, return_audit: bool = False):
        return query(self, q, return_audit=return_audit)


def build_ids(points: WeightedPointSet, k: int, sg: Semigroup, weights=None) -> IdsStructure:
    if len(points) < 4:
        raise ValueError("need at least 4 points")
    cfg = IdsConfig.for_input(len(points), points.d, k)
    return IdsStructure(points, sg, cfg, weights)


@dataclass(frozen=True)
class AnchoredPiece:
    """One of the 2^k midpoint-split pieces, tagged with its orientation."""

    orientation: tuple[str, ...]
    lo: tuple[float, ...]
    hi: tuple[float, ...]
    vprime: tuple[Node, ...]
    vnodes: tuple[Node, ...]  # child of vprime on the piece's side
    query_lo: tuple[float, ...]
    query_hi: tuple[float, ...]


def _validate_query(struct: IdsStructure, q: Box):
    cfg = struct.config
    if q.dims != cfg.d:
        raise MalformedQuery(f"query has {q.dims} dims, structure has {cfg.d}")
    for i in range(cfg.k):
        if q.lo[i] == NEG_INF:
            raise MalformedQuery(f"dimension {i} must be two-sided")
    for i in range(cfg.k, cfg.d):
        if q.lo[i] != NEG_INF:
            raise MalformedQuery(f"dimension {i} must be upper-bounded only")


def decompose_query(struct: IdsStructure, q: Box):
    """Split q at the highest tree midpoints into anchored pieces.

    Returns (pieces, singleton_only).  When some two-sided interval contains
    no node midpoint the whole query falls back to singleton enumeration.
    """
    _validate_query(struct, q)
    cfg = struct.config
    lo_eff = [max(l, 0.0) if i < cfg.k else l for i, l in enumerate(q.lo)]
    hi_eff = [min(h, 1.0) for h in q.hi]
    if any(lo_eff[i] > hi_eff[i] for i in range(cfg.k)) or any(h < 0.0 for h in hi_eff):
        return [], True  # empty effective range: singleton path finds nothing
    splits: list[tuple[Node, float]] = []
    for i in range(cfg.k):
        tree = struct.trees[i]
        node = Node(0, 0)
        found = None
        while not tree.is_leaf(node):
            mid = tree.m(node)
            if lo_eff[i] <= mid <= hi_eff[i]:
                found = node
                break
            node = tree.left_child(node) if hi_eff[i] < mid else tree.right_child(node)
        if found is None:
            return [], True
        splits.append((found, tree.m(found)))
    pieces = []
    for orient in itertools.product((_L, _R), repeat=cfg.k):
        plo, phi, vprime, vnodes = list(lo_eff), list(hi_eff), [], []
        for i, side in enumerate(orient):
            vp, mid = splits[i]
            vprime.append(vp)
            if side == _L:
                phi[i] = mid
                vnodes.append(struct.trees[i].left_child(vp))
            else:
                plo[i] = mid
                vnodes.append(struct.trees[i].right_child(vp))
        pieces.append(
            AnchoredPiece(
                orientation=orient,
                lo=tuple(plo),
                hi=tuple(phi),
                vprime=tuple(vprime),
                vnodes=tuple(vnodes),
                query_lo=tuple(lo_eff),
                query_hi=tuple(hi_eff),
            )
        )
    return pieces, False


def _inside_any(pts: np.ndarray, lo_arr: np.ndarray, hi_arr: np.ndarray) -> np.ndarray:
    """(boxes, points) closed-containment matrix."""
    inside = np.ones((len(lo_arr), len(pts)), dtype=bool)
    for j in range(pts.shape[1]):
        inside &= (pts[:, j][None, :] >= lo_arr[:, j][:, None]) & (
            pts[:, j][None, :] <= hi_arr[:, j][:, None]
        )
    return inside


def _piece_segments(struct: IdsStructure, piece: AnchoredPiece, i: int):
    """Ascending interval tiling of the piece's i-th side.

    Returns (seg_lo, labels, pairs): cover segments labelled by their pair
    index, the leaf tail labelled -1; labels align with seg_lo bins.
    """
    tree = struct.trees[i]
    if piece.orientation[i] == _R:
        corner = piece.hi[i]
        leaf = tree.locate_leaf(corner)
        pairs = balanced_prefix_cover(tree, leaf, root=piece.vnodes[i])
        seg_lo = [tree.a(p.u) for p in pairs] + [tree.a(leaf)]
        labels = list(range(len(pairs))) + [-1]
    else:
        corner = piece.lo[i]
        leaf = tree.locate_leaf(corner)
        pairs = suffix_cover(tree, leaf, root=piece.vnodes[i])
        # ascending order: tail first, then covers from deepest up
        seg_lo = [corner] + [tree.a(p.u) for p in reversed(pairs)]
        labels = [-1] + list(range(len(pairs) - 1, -1, -1))
    return np.asarray(seg_lo), labels, pairs


def _gather_candidates(struct: IdsStructure, piece: AnchoredPiece, chosen_pairs, qlo, qhi):
    """Usable stored sums for one cover-pair tuple.

    A sum works for the tuple iff its box spans the tuple's interval in
    every two-sided dimension and sits inside the containment box (the full
    query, or just the piece when answering a piece standalone); coverage of
    a target then reduces to dominance in the remaining dimensions.  Family
    indices deeper than depth(u_i)+1 cannot span an interval of u_i's width,
    so only those levels are scanned.
    """
    cfg = struct.config
    spans = []
    zranges = []
    for i, pair in enumerate(chosen_pairs):
        tree = struct.trees[i]
        spans.append(tree.interval(pair.u))
        zranges.append(range(piece.vnodes[i].depth, min(cfg.h, pair.u.depth + 1) + 1))
    rows_coords = []
    rows_refs = []
    for index in itertools.product(*zranges):
        blk = struct.blocks.get((piece.orientation, index))
        if blk is None:
            continue
        a0, b0 = spans[0]
        # dim-0 point coordinate is the box end away from the anchor
        if piece.orientation[0] == _R:
            lo = np.searchsorted(blk.x0, b0, side="left")
            hi = np.searchsorted(blk.x0, qhi[0], side="right")
        else:
            lo = np.searchsorted(blk.x0, qlo[0], side="left")
            hi = np.searchsorted(blk.x0, a0, side="right")
        if hi <= lo:
            continue
        sel = np.arange(lo, hi)
        mask = blk.counts[sel] >= 1
        for i in range(cfg.k):
            ai, bi = spans[i]
            mask &= (blk.box_lo[sel, i] <= ai) & (blk.box_hi[sel, i] >= bi)
        mask &= np.all(blk.box_lo[sel] >= qlo, axis=1) & np.all(blk.box_hi[sel] <= qhi, axis=1)
        sel = sel[mask]
        if sel.size:
            rows_coords.append(blk.coords[sel])
            rows_refs.extend((blk, int(r)) for r in sel)
    if not rows_coords:
        return np.empty((0, cfg.d)), []
    return np.concatenate(rows_coords), rows_refs


class _CoverState:
    """Accumulates one query's cover: sum values, their boxes, leftovers."""

    def __init__(self, qlo, qhi, audit):
        self.qlo = np.asarray(qlo)
        self.qhi = np.asarray(qhi)
        self.audit = audit
        self.parts: list = []
        self.used_lo: list = []
        self.used_hi: list = []
        self.leftover: list = []

    def take(self, blk: _Block, r: int) -> None:
        if self.audit is not None:
            self.audit.append(Box(tuple(blk.box_lo[r]), tuple(blk.box_hi[r])))
        if np.any(blk.box_lo[r] < self.qlo) or np.any(blk.box_hi[r] > self.qhi):
            raise AssertionError("used sum escapes the query box")
        self.parts.append(blk.values[r])
        self.used_lo.append(blk.box_lo[r])
        self.used_hi.append(blk.box_hi[r])


def _process_piece(struct: IdsStructure, piece: AnchoredPiece, state: _CoverState) -> None:
    """Per-tuple dominance covers of one anchored piece (no singletons yet)."""
    k = struct.config.k
    target_idx = struct.grid.points_in_box(piece.lo, piece.hi)
    if target_idx.size == 0:
        return
    tcoords = struct.points.coords[target_idx]
    dim_labels = np.empty((target_idx.size, k), dtype=np.int64)
    dim_pairs = []
    for i in range(k):
        seg_lo, labels, pairs = _piece_segments(struct, piece, i)
        pos = np.clip(np.searchsorted(seg_lo, tcoords[:, i], side="right") - 1, 0, len(labels) - 1)
        dim_labels[:, i] = np.asarray(labels)[pos]
        dim_pairs.append(pairs)
    singles = np.any(dim_labels == -1, axis=1)
    state.leftover.append(target_idx[singles])  # leaf-tail points
    grouped = target_idx[~singles]
    glabels = dim_labels[~singles]
    if not grouped.size:
        return
    stride = max(len(p) for p in dim_pairs) + 1
    keys = np.zeros(grouped.size, dtype=np.int64)
    for i in range(k):
        keys = keys * stride + glabels[:, i]
    for key in np.unique(keys):
        rows = np.nonzero(keys == key)[0]
        chosen = []
        kk = int(key)
        for i in range(k - 1, -1, -1):
            chosen.append(dim_pairs[i][kk % stride])
            kk //= stride
        chosen.reverse()
        cand_coords, refs = _gather_candidates(struct, piece, chosen, state.qlo, state.qhi)
        tproj = struct.points.coords[grouped[rows]][:, k:]
        m_idx, covered, used = dominance_cover(cand_coords[:, k:], tproj)
        for mi, u in zip(m_idx, used):
            if u:
                state.take(*refs[mi])
        state.leftover.append(grouped[rows[~covered]])


def _compress(struct: IdsStructure, state: _CoverState) -> np.ndarray:
    """Resolve leftovers: reuse any stored sum inside the query that absorbs
    two or more of them (greedy), then fall back to singletons.

    Strictly reduces cost; exactness and containment are unaffected because
    absorption is a full-coordinate box test against sums already known to
    sit inside the query.
    """
    if not state.leftover:
        return np.empty(0, dtype=np.int64)
    leftover_idx = np.concatenate(state.leftover)
    if leftover_idx.size == 0:
        return leftover_idx
    if state.used_lo:
        covered = _inside_any(
            struct.points.coords[leftover_idx], np.asarray(state.used_lo), np.asarray(state.used_hi)
        ).any(axis=0)
        leftover_idx = leftover_idx[~covered]
    if leftover_idx.size < 2:
        return leftover_idx
    pts = struct.points.coords[leftover_idx]
    lmin = pts.min(axis=0)
    lmax = pts.max(axis=0)
    refs: list = []
    lo_rows: list = []
    hi_rows: list = []
    for blk in struct.blocks.values():
        lo = np.searchsorted(blk.x0, state.qlo[0], side="left")
        hi = np.searchsorted(blk.x0, state.qhi[0], side="right")
        if hi <= lo:
            continue
        sel = np.arange(lo, hi)
        ok = blk.counts[sel] >= 2
        ok &= np.all(blk.box_lo[sel] >= state.qlo, axis=1) & np.all(blk.box_hi[sel] <= state.qhi, axis=1)
        # must be able to reach some leftover point
        ok &= np.all(blk.box_hi[sel] >= lmin, axis=1) & np.all(blk.box_lo[sel] <= lmax, axis=1)
        sel = sel[ok]
        if sel.size:
            refs.extend((blk, int(r)) for r in sel)
            lo_rows.append(blk.box_lo[sel])
            hi_rows.append(blk.box_hi[sel])
    if refs:
        all_lo = np.concatenate(lo_rows)
        all_hi = np.concatenate(hi_rows)
        alive = np.ones(leftover_idx.size, dtype=bool)
        if len(refs) * leftover_idx.size <= 2 * 10**7:
            inside = _inside_any(pts, all_lo, all_hi)
            while True:
                gains = (inside & alive[None, :]).sum(axis=1)
                best = int(np.argmax(gains))
                if gains[best] < 2:
                    break
                state.take(*refs[best])
                alive &= ~inside[best]
        else:
            # too many rows for one matrix: re-scan per pick in chunks
            chunk = max(1, int(4 * 10**6 // max(1, leftover_idx.size)))
            while True:
                best, best_gain, best_cover = -1, 1, None
                live_pts = pts[alive]
                for s0 in range(0, len(refs), chunk):
                    ins = _inside_any(live_pts, all_lo[s0 : s0 + chunk], all_hi[s0 : s0 + chunk])
                    cnt = ins.sum(axis=1)
                    t = int(np.argmax(cnt))
                    if cnt[t] > best_gain:
                        best, best_gain = s0 + t, int(cnt[t])
                        cover = np.zeros(leftover_idx.size, dtype=bool)
                        cover[alive] = ins[t]
                        best_cover = cover
                if best < 0:
                    break
                state.take(*refs[best])
                alive &= ~best_cover
        leftover_idx = leftover_idx[alive]
    return leftover_idx


def _finish(struct: IdsStructure, state: _CoverState) -> QueryAnswer:
    leftover_idx = _compress(struct, state)
    state.parts.extend(singleton_value(struct.sg, int(i), struct._w) for i in leftover_idx)
    value = fold_values(state.parts, struct.sg) if state.parts else None
    return QueryAnswer(value, sums_used=len(state.used_lo), singletons_used=int(leftover_idx.size))


def answer_anchored(struct: IdsStructure, piece: AnchoredPiece, audit: list | None = None) -> QueryAnswer:
    """Standalone piece answer: covers exactly the piece's points, so the
    containment box is the piece itself (inside query() the shared pass uses
    the whole query box instead, letting sums straddle the split)."""
    state = _CoverState(piece.lo, piece.hi, audit)
    _process_piece(struct, piece, state)
    return _finish(struct, state)


def _singleton_only_answer(struct: IdsStructure, q: Box) -> QueryAnswer:
    lo = [max(l, 0.0) if i < struct.config.k else l for i, l in enumerate(q.lo)]
    hi = [min(h, 1.0) for h in q.hi]
    if any(l > h for l, h in zip(lo, hi)):
        return QueryAnswer(None, 0, 0)
    idx = struct.grid.points_in_box(lo, hi)
    if idx.size == 0:
        return QueryAnswer(None, 0, 0)
    value = fold_values([singleton_value(struct.sg, int(i), struct._w) for i in idx], struct.sg)
    return QueryAnswer(value, sums_used=0, singletons_used=int(idx.size))


def usable_sums(struct: IdsStructure, q: Box, min_members: int = 2):
    """Stored sums whose box sits inside q, as (value, box, count) triples.

    The exact-cover oracle takes these as its available sums; sums covering
    fewer than ``min_members`` points never beat singletons.
    """
    qlo = np.asarray(q.lo)
    qhi = np.asarray(q.hi)
    out = []
    for blk in struct.blocks.values():
        lo = np.searchsorted(blk.x0, qlo[0], side="left")
        hi = np.searchsorted(blk.x0, qhi[0], side="right")
        if hi <= lo:
            continue
        sel = np.arange(lo, hi)
        ok = blk.counts[sel] >= min_members
        ok &= np.all(blk.box_lo[sel] >= qlo, axis=1) & np.all(blk.box_hi[sel] <= qhi, axis=1)
        for r in sel[ok]:
            out.append((blk.values[r], Box(tuple(blk.box_lo[r]), tuple(blk.box_hi[r])), int(blk.counts[r])))
    return out


def query(struct: IdsStructure, q: Box, return_audit: bool = False):
    """Anchored-piece covers plus one shared compression pass (or the
    singleton fallback when no midpoint splits the query)."""
    audit: list | None = [] if return_audit else None
    pieces, singleton_only = decompose_query(struct, q)
    if singleton_only:
        ans = _singleton_only_answer(struct, q)
        return (ans, audit) if return_audit else ans
    state = _CoverState(pieces[0].query_lo, pieces[0].query_hi, audit)
    for piece in pieces:
        _process_piece(struct, piece, state)
    ans = _finish(struct, state)
    return (ans, audit) if return_audit else ans
