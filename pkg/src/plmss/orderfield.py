"""Injective order field and critical-point classification."""

from typing import NamedTuple, Optional

import numpy as np


class InvalidFieldError(ValueError):
    """Scalar field contains a non-finite value or has the wrong length."""

    def __init__(self, message, vertex=None):
        super().__init__(message)
        self.vertex = vertex


def compute_order(values, n_vertices=None):
    """Rank of every vertex in the (value, vertex id) sorted order.

    Ties between equal values are broken by vertex id, so the result is a
    permutation of ``0..n-1`` and every vertex has a unique largest and
    smallest neighbour.

    Parameters
    ----------
    values : array_like, shape (n,)
        Per-vertex scalars.
    n_vertices : int, optional
        Expected length; checked when given.

    Returns
    -------
    order : ndarray of int64, shape (n,)
    """
    values = np.asarray(values)
    if values.ndim != 1:
        raise InvalidFieldError(f"scalar field must be 1-D, got shape {values.shape}")
    if n_vertices is not None and len(values) != n_vertices:
        raise InvalidFieldError(
            f"scalar field has {len(values)} values, complex has {n_vertices} vertices"
        )
    if values.dtype.kind == "f":
        bad = ~np.isfinite(values)
        if bad.any():
            v = int(np.argmax(bad))
            raise InvalidFieldError(f"non-finite value {values[v]!r} at vertex {v}", vertex=v)
    elif values.dtype.kind not in "iub":
        raise InvalidFieldError(f"unsupported scalar dtype {values.dtype}")
    rank = np.argsort(values, kind="stable")
    order = np.empty(len(values), dtype=np.int64)
    order[rank] = np.arange(len(values), dtype=np.int64)
    return order


class VertexClass(NamedTuple):
    kind: str  # 'regular', 'minimum', 'maximum', 'saddle' or 'degenerate'
    index: Optional[int]
    lower_components: int
    upper_components: int
    degenerate: bool


def _components(vertices, edges):
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, w in edges:
        ru, rw = find(u), find(w)
        if ru != rw:
            parent[ru] = rw
    return len({find(v) for v in vertices})


def link_components(complex_, order, v):
    """Connected components of the lower and upper link of `v`."""
    v = complex_._check_vertex(v)
    star = complex_.star(v)
    # drop v from every star cell: what remains is a maximal link simplex
    opposite = star[star != v].reshape(len(star), -1)
    lower_mask = order[opposite] < order[v]
    lower = set(opposite[lower_mask].tolist())
    upper = set(opposite[~lower_mask].tolist())
    lower_edges, upper_edges = [], []
    k = opposite.shape[1]
    for i in range(k):
        for j in range(i + 1, k):
            both_lower = lower_mask[:, i] & lower_mask[:, j]
            both_upper = ~lower_mask[:, i] & ~lower_mask[:, j]
            pairs = opposite[:, [i, j]]
            lower_edges.extend(pairs[both_lower].tolist())
            upper_edges.extend(pairs[both_upper].tolist())
    return _components(lower, lower_edges), _components(upper, upper_edges)


def classify_vertex(complex_, order, v):
    """Classify `v` from the connectivity of its lower and upper link.

    No lower link means a minimum, no upper link a maximum, one component
    each a regular vertex; anything else is a saddle.  More than two
    components on either side marks the saddle degenerate.
    """
    n_lower, n_upper = link_components(complex_, order, v)
    d = complex_.dimension
    degenerate = n_lower > 2 or n_upper > 2
    if n_lower == 0:
        return VertexClass("minimum", 0, n_lower, n_upper, False)
    if n_upper == 0:
        return VertexClass("maximum", d, n_lower, n_upper, False)
    if n_lower == 1 and n_upper == 1:
        return VertexClass("regular", None, n_lower, n_upper, False)
    if degenerate:
        return VertexClass("degenerate", None, n_lower, n_upper, True)
    index = 1 if n_lower > 1 else d - 1
    return VertexClass("saddle", index, n_lower, n_upper, False)
