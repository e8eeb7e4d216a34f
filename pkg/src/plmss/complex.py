"""Simplicial complexes: explicit vertex/cell meshes and implicitly
triangulated regular grids.

Both backends keep the vertices of every top-level cell in ascending id
order.  Downstream code relies on that to compute cell codes and split
points identically in every cell sharing a face.
"""

import itertools
from typing import NamedTuple

import numpy as np


class LinkView(NamedTuple):
    """Link of a vertex: its neighbours and the link simplices."""

    vertices: np.ndarray
    simplices: list


class SimplicialComplex:
    """Common interface of the two backends.

    Subclasses provide ``dimension``, ``n_vertices``, ``n_cells``,
    ``positions``, :meth:`neighbors`, :meth:`cell_array`, :meth:`star` and
    :meth:`boundary_vertices`.
    """

    backend = None
    dimension = None

    def _check_vertex(self, v):
        v = int(v)
        if not 0 <= v < self.n_vertices:
            raise IndexError(f"vertex {v} out of range [0, {self.n_vertices})")
        return v

    def cells(self):
        """Yield every top-level cell once, as a tuple of ascending ids."""
        for row in self.cell_array():
            yield tuple(int(x) for x in row)

    def link(self, v):
        v = self._check_vertex(v)
        faces = set()
        for cell in self.star(v):
            opposite = [int(u) for u in cell if u != v]
            for k in range(1, len(opposite) + 1):
                faces.update(itertools.combinations(opposite, k))
        return LinkView(self.neighbors(v), sorted(faces, key=lambda f: (len(f), f)))

    def edges(self):
        """Unique undirected edges as an ``(m, 2)`` array with ``u < v``."""
        cells = self.cell_array()
        pairs = [cells[:, [i, j]] for i, j in itertools.combinations(range(cells.shape[1]), 2)]
        return np.unique(np.concatenate(pairs), axis=0)


class ImplicitGrid(SimplicialComplex):
    """Regular grid with Freudenthal (Kuhn) subdivision.

    Every unit cube is cut into the 6 tetrahedra traced by the monotone
    lattice paths from its minimal to its maximal corner; with a single
    non-trivial axis pair the squares are cut into 2 triangles along the
    min-to-max diagonal.  Vertex ids run x-fastest, then y, then z.  Cells are
    numbered cube-major (x fastest) and then by the local path index.
    """

    backend = "implicit-grid"

    def __init__(self, dims, spacing=(1.0, 1.0, 1.0), origin=(0.0, 0.0, 0.0)):
        dims = tuple(int(d) for d in dims)
        if len(dims) != 3 or any(d < 1 for d in dims):
            raise ValueError(f"grid dims must be 3 positive integers, got {dims}")
        axes = tuple(a for a in range(3) if dims[a] >= 2)
        if len(axes) < 2:
            raise ValueError(f"at least two grid dims must be >= 2, got {dims}")
        spacing = tuple(float(s) for s in spacing)
        if len(spacing) != 3 or any(not s > 0 for s in spacing):
            raise ValueError(f"spacing must be 3 positive reals, got {spacing}")
        origin = tuple(float(o) for o in origin)
        if len(origin) != 3:
            raise ValueError(f"origin must have 3 components, got {origin}")

        self.dims = dims
        self.spacing = spacing
        self.origin = origin
        self.axes = axes
        self.dimension = len(axes)
        self.n_vertices = dims[0] * dims[1] * dims[2]
        self.strides = np.array([1, dims[0], dims[0] * dims[1]], dtype=np.int64)
        self.cube_dims = np.array([d - 1 if d > 1 else 1 for d in dims], dtype=np.int64)
        self.n_cubes = int(np.prod(self.cube_dims))

        units = np.eye(3, dtype=np.int64)
        local = []
        for perm in itertools.permutations(axes):
            corner = np.zeros(3, dtype=np.int64)
            path = [corner.copy()]
            for a in perm:
                corner = corner + units[a]
                path.append(corner.copy())
            local.append(path)
        # (cells per cube, d + 1, 3) coordinate offsets
        self.local_cells = np.array(local, dtype=np.int64)
        self.local_linear = self.local_cells @ self.strides
        self.n_cells = self.n_cubes * len(local)

        steps = []
        for bits in itertools.product((0, 1), repeat=len(axes)):
            if any(bits):
                s = np.zeros(3, dtype=np.int64)
                s[list(axes)] = bits
                steps.extend([s, -s])
        steps.sort(key=lambda s: int(s @ self.strides))
        # neighbour offsets sorted by linear offset, so neighbour ids come out sorted
        self.stencil = np.array(steps, dtype=np.int64)
        self.stencil_linear = self.stencil @ self.strides

    def __repr__(self):
        return f"ImplicitGrid(dims={self.dims}, spacing={self.spacing}, origin={self.origin})"

    def coords(self, v):
        v = np.asarray(v, dtype=np.int64)
        x = v % self.dims[0]
        y = (v // self.dims[0]) % self.dims[1]
        z = v // (self.dims[0] * self.dims[1])
        return np.stack([x, y, z], axis=-1)

    @property
    def positions(self):
        xyz = self.coords(np.arange(self.n_vertices))
        return np.asarray(self.origin) + xyz * np.asarray(self.spacing)

    def neighbors(self, v):
        v = self._check_vertex(v)
        c = self.coords(v)
        nc = c + self.stencil
        ok = np.all((nc >= 0) & (nc < np.asarray(self.dims)), axis=1)
        return v + self.stencil_linear[ok]

    def cube_corners(self):
        q = np.arange(self.n_cubes, dtype=np.int64)
        cx, cy, _ = self.cube_dims
        qx, qy, qz = q % cx, (q // cx) % cy, q // (cx * cy)
        return qx * self.strides[0] + qy * self.strides[1] + qz * self.strides[2]

    def cell_array(self):
        corners = self.cube_corners()
        cells = corners[:, None, None] + self.local_linear[None, :, :]
        return cells.reshape(-1, self.dimension + 1)

    def star(self, v):
        v = self._check_vertex(v)
        if not hasattr(self, "_star_table"):
            # every (position on path, local cell) pair: the cell whose cube
            # corner sits at v - position contains v
            pos, tet = [], []
            for t, path in enumerate(self.local_cells):
                for u in path:
                    pos.append(u)
                    tet.append(t)
            self._star_table = (np.array(pos), np.array(tet))
        pos, tet = self._star_table
        corners = self.coords(v) - pos
        ok = np.all((corners >= 0) & (corners < self.cube_dims), axis=1)
        return (corners[ok] @ self.strides)[:, None] + self.local_linear[tet[ok]]

    def boundary_vertices(self):
        xyz = self.coords(np.arange(self.n_vertices))
        mask = np.zeros(self.n_vertices, dtype=bool)
        for a in self.axes:
            mask |= (xyz[:, a] == 0) | (xyz[:, a] == self.dims[a] - 1)
        return mask


class ExplicitMesh(SimplicialComplex):
    """Mesh given as vertex positions plus a cell list.

    Cells may be edges, triangles or tetrahedra, all of one arity.  No
    manifold repair is attempted.
    """

    backend = "explicit"

    def __init__(self, positions, cells):
        positions = np.asarray(positions, dtype=np.float64)
        if positions.ndim != 2 or positions.shape[1] not in (2, 3):
            raise ValueError(f"positions must have shape (n, 3), got {positions.shape}")
        if positions.shape[1] == 2:
            positions = np.column_stack([positions, np.zeros(len(positions))])
        cells = np.asarray(cells, dtype=np.int64)
        if cells.ndim != 2 or cells.shape[1] not in (2, 3, 4):
            raise ValueError(f"cells must have shape (m, 2..4), got {cells.shape}")
        n = len(positions)
        if cells.size and (cells.min() < 0 or cells.max() >= n):
            bad = int(np.argmax(np.any((cells < 0) | (cells >= n), axis=1)))
            raise ValueError(f"cell {bad} references a vertex outside [0, {n})")
        cells = np.sort(cells, axis=1)
        dup = np.any(cells[:, 1:] == cells[:, :-1], axis=1)
        if dup.any():
            raise ValueError(f"cell {int(np.argmax(dup))} repeats a vertex")

        self._positions = positions
        self._cells = cells
        self.dimension = cells.shape[1] - 1
        self.n_vertices = n
        self.n_cells = len(cells)

        e = self.edges() if len(cells) else np.empty((0, 2), dtype=np.int64)
        both = np.concatenate([e, e[:, ::-1]])
        order = np.lexsort((both[:, 1], both[:, 0]))
        both = both[order]
        self.adj_offsets = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(both[:, 0], minlength=n), out=self.adj_offsets[1:])
        self.adj_indices = np.ascontiguousarray(both[:, 1])
        self._vertex_cells = None

    def __repr__(self):
        return f"ExplicitMesh(n_vertices={self.n_vertices}, n_cells={self.n_cells}, dimension={self.dimension})"

    @property
    def positions(self):
        return self._positions

    def neighbors(self, v):
        v = self._check_vertex(v)
        return self.adj_indices[self.adj_offsets[v]:self.adj_offsets[v + 1]]

    def cell_array(self):
        return self._cells

    def star(self, v):
        v = self._check_vertex(v)
        if self._vertex_cells is None:
            owner = self._cells.ravel()
            cell_ids = np.repeat(np.arange(self.n_cells), self._cells.shape[1])
            order = np.argsort(owner, kind="stable")
            offsets = np.zeros(self.n_vertices + 1, dtype=np.int64)
            np.cumsum(np.bincount(owner, minlength=self.n_vertices), out=offsets[1:])
            self._vertex_cells = (offsets, cell_ids[order])
        offsets, ids = self._vertex_cells
        return self._cells[ids[offsets[v]:offsets[v + 1]]]

    def boundary_vertices(self):
        k = self._cells.shape[1]
        faces = np.concatenate(
            [self._cells[:, list(f)] for f in itertools.combinations(range(k), k - 1)]
        )
        uniq, counts = np.unique(faces, axis=0, return_counts=True)
        mask = np.zeros(self.n_vertices, dtype=bool)
        mask[uniq[counts == 1].ravel()] = True
        return mask


def build_implicit_grid(dims, spacing=(1.0, 1.0, 1.0), origin=(0.0, 0.0, 0.0)):
    """Build a Freudenthal-triangulated grid.

    ``dims`` (X, Y, Z) counts vertices per axis; at least two must be >= 2.
    A grid with ``Z == 1`` is a 2-D triangle mesh.
    """
    return ImplicitGrid(dims, spacing, origin)
