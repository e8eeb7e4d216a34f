"""Ascending, descending and Morse-Smale segmentation by path compression.

Every vertex first points at its largest (smallest) neighbour in the order
field; extrema point at themselves.  Pointer jumping ``dsc[v] <- dsc[dsc[v]]``
then runs over per-worker active lists until every vertex points at an
extremum.  The fixpoint does not depend on the sweep order or on which
intermediate labels a worker happens to observe, so results are identical
for any worker count.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numba import njit

from ._parallel import resolve_workers, run_workers, split_range
from .complex import ImplicitGrid

ASCENDING = "ascending"
DESCENDING = "descending"
BOTH = "both"


@dataclass
class SegmentationResult:
    """Per-vertex extremum labels.

    ``desc[v]`` is the maximum reached by the forward integral line from
    ``v``, ``asc[v]`` the minimum reached backwards.  Arrays for a direction
    that was not computed are ``None``.
    """

    desc: Optional[np.ndarray]
    asc: Optional[np.ndarray]
    maxima: Optional[np.ndarray]
    minima: Optional[np.ndarray]
    iterations: int = 0
    ms_key: Optional[np.ndarray] = None
    ms_region: Optional[np.ndarray] = None
    ms_pairs: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def n_regions(self):
        return None if self.ms_pairs is None else len(self.ms_pairs)


@njit(nogil=True, cache=True)
def _steepest_grid(order, dims, stencil, stencil_linear, start, stop,
                   desc, asc, want_desc, want_asc, active):
    X, Y, Z = dims[0], dims[1], dims[2]
    n_active = 0
    for v in range(start, stop):
        x = v % X
        y = (v // X) % Y
        z = v // (X * Y)
        ov = order[v]
        hi = v
        o_hi = ov
        lo = v
        o_lo = ov
        for s in range(stencil.shape[0]):
            nx = x + stencil[s, 0]
            ny = y + stencil[s, 1]
            nz = z + stencil[s, 2]
            if nx < 0 or ny < 0 or nz < 0 or nx >= X or ny >= Y or nz >= Z:
                continue
            u = v + stencil_linear[s]
            ou = order[u]
            if ou > o_hi:
                o_hi = ou
                hi = u
            if ou < o_lo:
                o_lo = ou
                lo = u
        pending = False
        if want_desc:
            desc[v] = hi
            pending = pending or hi != v
        if want_asc:
            asc[v] = lo
            pending = pending or lo != v
        if pending:
            active[n_active] = v
            n_active += 1
    return n_active


@njit(nogil=True, cache=True)
def _steepest_csr(order, adj_offsets, adj_indices, start, stop,
                  desc, asc, want_desc, want_asc, active):
    n_active = 0
    for v in range(start, stop):
        ov = order[v]
        hi = v
        o_hi = ov
        lo = v
        o_lo = ov
        for k in range(adj_offsets[v], adj_offsets[v + 1]):
            u = adj_indices[k]
            ou = order[u]
            if ou > o_hi:
                o_hi = ou
                hi = u
            if ou < o_lo:
                o_lo = ou
                lo = u
        pending = False
        if want_desc:
            desc[v] = hi
            pending = pending or hi != v
        if want_asc:
            asc[v] = lo
            pending = pending or lo != v
        if pending:
            active[n_active] = v
            n_active += 1
    return n_active


@njit(nogil=True, cache=True)
def compression_sweep(active, n_active, desc, asc, want_desc, want_asc):
    """One pointer-jumping pass over ``active[:n_active]``, in list order.

    Unconverged vertices are compacted to the front of `active`; returns
    their count.
    """
    m = 0
    for i in range(n_active):
        v = active[i]
        done = True
        if want_desc:
            t = desc[desc[v]]
            desc[v] = t
            if desc[t] != t:
                done = False
        if want_asc:
            t = asc[asc[v]]
            asc[v] = t
            if asc[t] != t:
                done = False
        if not done:
            active[m] = v
            m += 1
    return m


@njit(nogil=True, cache=True)
def _compress(active, n_active, desc, asc, want_desc, want_asc):
    iterations = 0
    while n_active > 0:
        iterations += 1
        n_active = compression_sweep(active, n_active, desc, asc, want_desc, want_asc)
    return iterations


def _directions(directions):
    if directions not in (ASCENDING, DESCENDING, BOTH):
        raise ValueError(f"directions must be one of ascending/descending/both, got {directions!r}")
    return directions in (DESCENDING, BOTH), directions in (ASCENDING, BOTH)


def segment(complex_, order, directions=BOTH, workers=None):
    """Ascending and/or descending segmentation of `complex_`.

    Parameters
    ----------
    complex_ : SimplicialComplex
    order : ndarray of int64
        Injective order field, see :func:`plmss.orderfield.compute_order`.
    directions : {'ascending', 'descending', 'both'}
        ``'both'`` runs one fused pass; a vertex stays active until it has
        converged in both directions.
    workers : int, optional
        Number of worker threads; defaults to ``PLMSS_WORKERS`` or the CPU
        count.

    Returns
    -------
    SegmentationResult
    """
    want_desc, want_asc = _directions(directions)
    workers = resolve_workers(workers)
    order = np.ascontiguousarray(order, dtype=np.int64)
    n = complex_.n_vertices
    if order.shape != (n,):
        raise ValueError(f"order has shape {order.shape}, expected ({n},)")

    # a direction that is not requested still needs a valid buffer for numba
    desc = np.empty(n if want_desc else 1, dtype=np.int64)
    asc = np.empty(n if want_asc else 1, dtype=np.int64)
    bounds = split_range(n, workers)
    actives = [np.empty(bounds[w + 1] - bounds[w], dtype=np.int64) for w in range(workers)]

    if isinstance(complex_, ImplicitGrid):
        dims = np.array(complex_.dims, dtype=np.int64)
        jobs = [(order, dims, complex_.stencil, complex_.stencil_linear, bounds[w], bounds[w + 1],
                 desc, asc, want_desc, want_asc, actives[w]) for w in range(workers)]
        counts = run_workers(_steepest_grid, jobs)
    else:
        jobs = [(order, complex_.adj_offsets, complex_.adj_indices, bounds[w], bounds[w + 1],
                 desc, asc, want_desc, want_asc, actives[w]) for w in range(workers)]
        counts = run_workers(_steepest_csr, jobs)

    # barrier: every first hop must be in place before any worker compresses
    jobs = [(actives[w], counts[w], desc, asc, want_desc, want_asc) for w in range(workers)]
    iterations = max(run_workers(_compress, jobs))

    ids = np.arange(n, dtype=np.int64)
    return SegmentationResult(
        desc=desc if want_desc else None,
        asc=asc if want_asc else None,
        maxima=ids[desc == ids] if want_desc else None,
        minima=ids[asc == ids] if want_asc else None,
        iterations=int(iterations),
    )


def pack_ms_key(asc, desc):
    """Pack (minimum, maximum) pairs into one integer, minimum in the high half."""
    asc = np.asarray(asc, dtype=np.int64)
    desc = np.asarray(desc, dtype=np.int64)
    if len(asc) and max(asc.max(), desc.max()) >= 2**31:
        raise OverflowError("vertex ids do not fit the packed 64-bit key")
    return (asc << 32) | desc


def unpack_ms_key(key):
    key = np.asarray(key, dtype=np.int64)
    return key >> 32, key & 0xFFFFFFFF


def combine_ms(seg):
    """Fill in the Morse-Smale key of every vertex.

    Sets ``ms_key`` (packed (asc, desc) pair), ``ms_region`` (dense region
    index in ``[0, n_regions)``) and ``ms_pairs`` (the (min, max) pair of
    every region, indexed by region).  Returns `seg`.
    """
    if seg.asc is None or seg.desc is None:
        raise ValueError("Morse-Smale combination needs both ascending and descending labels")
    if len(seg.asc) < 2**31:
        key = pack_ms_key(seg.asc, seg.desc)
        uniq, region = np.unique(key, return_inverse=True)
        pairs = np.column_stack(unpack_ms_key(uniq))
    else:
        key = np.column_stack([seg.asc, seg.desc])
        pairs, region = np.unique(key, axis=0, return_inverse=True)
    seg.ms_key = key
    seg.ms_region = region.reshape(-1).astype(np.int64)
    seg.ms_pairs = pairs
    return seg


def oracle_integral_walk(complex_, order, v, direction=DESCENDING):
    """Follow single steepest hops from `v` until an extremum; test reference.

    ``'descending'`` (forward) climbs to the largest neighbour and ends at a
    maximum, ``'ascending'`` (backward) ends at a minimum.
    """
    forward = direction in (DESCENDING, "forward")
    v = complex_._check_vertex(v)
    while True:
        nbrs = complex_.neighbors(v)
        if len(nbrs) == 0:
            return v
        vals = order[nbrs]
        u = int(nbrs[np.argmax(vals)] if forward else nbrs[np.argmin(vals)])
        if (order[u] > order[v]) if forward else (order[u] < order[v]):
            v = u
        else:
            return v
