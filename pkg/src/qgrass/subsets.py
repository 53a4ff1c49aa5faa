"""Successor-closed vertex subsets of winding domains, as bitmasks.

Bit ``i`` of a mask is the i-th vertex of ``domain.vertices``.  A subset R is
successor-closed when every arrow starting in R ends in R; for tree and band
modules these subsets index the torus-fixed subrepresentations.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Optional, Sequence

from . import _kernels
from .quiver import DimLike, Quiver, Winding


@lru_cache(maxsize=4096)
def reach_masks(q: Quiver) -> tuple:
    """Bitmask of the vertices reachable from each vertex (itself included)."""
    idx = q.index
    n = len(q.vertices)
    succ = [0] * n
    for a in q.arrows:
        succ[idx[a.src]] |= 1 << idx[a.tgt]
    out = []
    for v in range(n):
        seen = 1 << v
        frontier = succ[v] & ~seen
        while frontier:
            seen |= frontier
            nxt = 0
            m = frontier
            while m:
                low = m & -m
                nxt |= succ[low.bit_length() - 1]
                m ^= low
            frontier = nxt & ~seen
        out.append(seen)
    return tuple(out)


def mask_vertices(q: Quiver, mask: int) -> tuple:
    return tuple(v for i, v in enumerate(q.vertices) if mask >> i & 1)


def vertices_mask(q: Quiver, verts) -> int:
    idx = q.index
    m = 0
    for v in verts:
        m |= 1 << idx[v]
    return m


def is_successor_closed(q: Quiver, mask: int) -> bool:
    idx = q.index
    return all(not (mask >> idx[a.src] & 1) or (mask >> idx[a.tgt] & 1) for a in q.arrows)


def mask_dim(w: Winding, mask: int) -> tuple:
    d = [0] * len(w.codomain.vertices)
    for i, q in enumerate(w.vlabel):
        if mask >> i & 1:
            d[q] += 1
    return tuple(d)


def closed_masks(w: Winding, d: Optional[DimLike] = None, *,
                 upper: Optional[Sequence[int]] = None) -> list:
    """Successor-closed subsets of ``w.domain`` with pushforward exactly ``d``
    (or, without ``d``, componentwise at most ``upper``), sorted by mask."""
    sizes = w.fiber_sizes
    if d is not None:
        target = w.codomain.dim(d)
        if any(x < 0 or x > s for x, s in zip(target, sizes)):
            return []
        return _kernels.closed_subsets(reach_masks(w.domain), w.vlabel, target, True)
    bound = sizes if upper is None else tuple(min(u, s) for u, s in zip(upper, sizes))
    if any(x < 0 for x in bound):
        return []
    return _kernels.closed_subsets(reach_masks(w.domain), w.vlabel, bound, False)


def successor_closed_subsets(w: Winding, d: Optional[DimLike] = None) -> list:
    """Listing of successor-closed subsets as sorted vertex-id tuples, in
    lexicographic order."""
    return sorted(mask_vertices(w.domain, m) for m in closed_masks(w, d))
