"""Multi-label marching triangles / tetrahedra.

Geometry is produced in two phases.  The index phase computes the code of
every top-level cell and the number of primitives each worker will emit;
an exclusive prefix sum over those counts gives every worker a private,
exactly sized slice of the output.  The emit phase then writes primitives
straight into that slice.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from numba import njit

from . import _tables
from ._parallel import resolve_workers, run_workers, split_range
from .complex import ImplicitGrid

SEPARATORS = "separators"
BOUNDARIES = "boundaries"

MODES = ("ascending", "descending", "morse-smale", "union")
_MODE_ALIASES = {"asc": "ascending", "desc": "descending", "ms": "morse-smale"}


def triangle_code(labels):
    """3-bit code of a labelled triangle (one of 0, 2, 4, 5, 6)."""
    a, b, c = labels
    if a == b:
        return 0 if a == c else 2
    if a == c:
        return 4
    return 5 if b == c else 6


def tetra_code(labels):
    """5-bit code of a labelled tetrahedron.

    Labels are remapped so that ``a`` is 0 and every later vertex reuses the
    local label of the first earlier vertex it matches, or else takes its
    own position index.
    """
    a, b, c, d = labels
    lb = 0 if b == a else 1
    lc = 0 if c == a else (1 if c == b else 2)
    ld = 0 if d == a else (1 if d == b else (2 if d == c else 3))
    return (lb << 4) | (lc << 2) | ld


def local_labels(code, n_vertices):
    """Invert a cell code back to the dense local labels."""
    if n_vertices == 3:
        return (0, code >> 2 & 1, code & 3)
    return (0, code >> 4 & 1, code >> 2 & 3, code & 3)


@njit(nogil=True, cache=True)
def _cell_code(lab, nvc):
    a = lab[0]
    b = lab[1]
    c = lab[2]
    lb = 0 if b == a else 1
    lc = 0 if c == a else (1 if c == b else 2)
    if nvc == 3:
        return (lb << 2) | lc
    d = lab[3]
    ld = 0 if d == a else (1 if d == b else (2 if d == c else 3))
    return (lb << 4) | (lc << 2) | ld


@njit(nogil=True, cache=True)
def _load_cell(cidx, implicit, cells, cube_dims, strides, local_linear, vid):
    nvc = vid.shape[0]
    if implicit:
        nl = local_linear.shape[0]
        t = cidx % nl
        q = cidx // nl
        qx = q % cube_dims[0]
        qy = (q // cube_dims[0]) % cube_dims[1]
        qz = q // (cube_dims[0] * cube_dims[1])
        corner = qx * strides[0] + qy * strides[1] + qz * strides[2]
        for j in range(nvc):
            vid[j] = corner + local_linear[t, j]
    else:
        for j in range(nvc):
            vid[j] = cells[cidx, j]


@njit(nogil=True, cache=True)
def _index_kernel(start, stop, labels, implicit, cells, cube_dims, strides,
                  local_linear, nvc, table_counts, codes):
    vid = np.empty(nvc, dtype=np.int64)
    lab = np.empty(nvc, dtype=np.int64)
    total = 0
    if implicit:
        # ranges are whole cubes here; decode each cube corner once
        nl = local_linear.shape[0]
        for q in range(start // nl, stop // nl):
            qx = q % cube_dims[0]
            qy = (q // cube_dims[0]) % cube_dims[1]
            qz = q // (cube_dims[0] * cube_dims[1])
            corner = qx * strides[0] + qy * strides[1] + qz * strides[2]
            for t in range(nl):
                for j in range(nvc):
                    lab[j] = labels[corner + local_linear[t, j]]
                code = _cell_code(lab, nvc)
                codes[q * nl + t] = code
                total += table_counts[code]
        return total
    for cidx in range(start, stop):
        for j in range(nvc):
            lab[j] = labels[cells[cidx, j]]
        code = _cell_code(lab, nvc)
        codes[cidx] = code
        total += table_counts[code]
    return total


@njit(nogil=True, cache=True)
def _vertex_position(v, implicit, positions, dims, origin, spacing, out):
    if implicit:
        x = v % dims[0]
        y = (v // dims[0]) % dims[1]
        z = v // (dims[0] * dims[1])
        out[0] = origin[0] + x * spacing[0]
        out[1] = origin[1] + y * spacing[1]
        out[2] = origin[2] + z * spacing[2]
    else:
        out[0] = positions[v, 0]
        out[1] = positions[v, 1]
        out[2] = positions[v, 2]


@njit(nogil=True, cache=True)
def _emit_kernel(start, stop, codes, labels, implicit, cells, cube_dims, strides,
                 local_linear, nvc, positions, dims, origin, spacing,
                 table_counts, table_points, table_sides, offset,
                 out_points, out_regions, out_cells, out_support):
    vid = np.empty(nvc, dtype=np.int64)
    pos = np.empty((nvc, 3), dtype=np.float64)
    arity = table_points.shape[2]
    with_support = out_support.shape[0] > 0
    k = offset
    for cidx in range(start, stop):
        code = codes[cidx]
        count = table_counts[code]
        if count == 0:
            continue
        _load_cell(cidx, implicit, cells, cube_dims, strides, local_linear, vid)
        for j in range(nvc):
            _vertex_position(vid[j], implicit, positions, dims, origin, spacing, pos[j])
        for p in range(count):
            for r in range(arity):
                mask = table_points[code, p, r]
                sx = 0.0
                sy = 0.0
                sz = 0.0
                m = 0
                # ascending local order keeps shared points bit-identical across cells
                for j in range(nvc):
                    if (mask >> j) & 1:
                        sx += pos[j, 0]
                        sy += pos[j, 1]
                        sz += pos[j, 2]
                        if with_support:
                            out_support[k * arity + r, m] = vid[j]
                        m += 1
                if with_support:
                    for j in range(m, 4):
                        out_support[k * arity + r, j] = -1
                row = k * arity + r
                out_points[row, 0] = sx / m
                out_points[row, 1] = sy / m
                out_points[row, 2] = sz / m
            la = labels[vid[table_sides[code, p, 0]]]
            lb = labels[vid[table_sides[code, p, 1]]]
            if la <= lb:
                out_regions[k, 0] = la
                out_regions[k, 1] = lb
            else:
                out_regions[k, 0] = lb
                out_regions[k, 1] = la
            out_cells[k] = cidx
            k += 1
    return k - offset


@dataclass
class EmitPlan:
    """Result of the index phase.

    ``counts[w]`` primitives will be written by worker ``w`` into rows
    ``offsets[w]:offsets[w] + counts[w]``.
    """

    kind: str
    workers: int
    bounds: np.ndarray
    counts: np.ndarray
    offsets: np.ndarray
    codes: np.ndarray = field(repr=False)
    labels: np.ndarray = field(repr=False)

    @property
    def total(self):
        return int(self.counts.sum())


@dataclass
class SeparatingMesh:
    """Vertex-soup geometry emitted by the marching scheme.

    ``primitives`` holds segments (2-D) or triangles (3-D) as point index
    tuples.  For separators ``regions[i]`` is the sorted pair of region
    labels primitive ``i`` separates; for boundaries both entries equal the
    tagged region.  ``cells[i]`` is the generating top-level cell.
    ``support``, when requested, lists for each point the vertex ids it
    averages (padded with -1).
    """

    kind: str
    points: np.ndarray
    primitives: np.ndarray
    regions: np.ndarray
    cells: np.ndarray
    support: Optional[np.ndarray] = None
    plan: Optional[EmitPlan] = field(default=None, repr=False)

    @property
    def n_primitives(self):
        return len(self.primitives)

    @property
    def arity(self):
        return self.primitives.shape[1]

    @property
    def tags(self):
        """One region label per boundary primitive."""
        return self.regions[:, 0]

    def weld(self):
        """Merge points with bitwise-equal coordinates; returns a new mesh."""
        if len(self.points) == 0:
            return self
        uniq, first, inverse = np.unique(
            self.points, axis=0, return_index=True, return_inverse=True
        )
        inverse = inverse.reshape(-1)
        support = None if self.support is None else self.support[first]
        return SeparatingMesh(self.kind, uniq, inverse[self.primitives], self.regions,
                              self.cells, support, self.plan)


def empty_mesh(kind, arity):
    return SeparatingMesh(
        kind,
        np.empty((0, 3)),
        np.empty((0, arity), dtype=np.int64),
        np.empty((0, 2), dtype=np.int64),
        np.empty(0, dtype=np.int64),
    )


def concatenate(meshes):
    """Concatenate meshes of one kind into a single vertex soup."""
    meshes = list(meshes)
    offset = 0
    prims = []
    for m in meshes:
        prims.append(m.primitives + offset)
        offset += len(m.points)
    support = None
    if all(m.support is not None for m in meshes):
        support = np.concatenate([m.support for m in meshes])
    return SeparatingMesh(
        meshes[0].kind,
        np.concatenate([m.points for m in meshes]),
        np.concatenate(prims),
        np.concatenate([m.regions for m in meshes]),
        np.concatenate([m.cells for m in meshes]),
        support,
    )


def _tables_for(kind, dimension):
    if kind == SEPARATORS:
        return _tables.TET_SEP if dimension == 3 else _tables.TRI_SEP
    if kind == BOUNDARIES:
        return _tables.TET_BND if dimension == 3 else _tables.TRI_BND
    raise ValueError(f"unknown geometry kind {kind!r}")


def _cell_source(complex_):
    if complex_.dimension not in (2, 3):
        raise ValueError(f"marching needs triangles or tetrahedra, got dimension {complex_.dimension}")
    if isinstance(complex_, ImplicitGrid):
        return dict(
            implicit=True,
            cells=np.empty((0, complex_.dimension + 1), dtype=np.int64),
            cube_dims=complex_.cube_dims,
            strides=complex_.strides,
            local_linear=np.ascontiguousarray(complex_.local_linear),
            positions=np.empty((0, 3)),
            dims=np.array(complex_.dims, dtype=np.int64),
            origin=np.array(complex_.origin),
            spacing=np.array(complex_.spacing),
        )
    return dict(
        implicit=False,
        cells=np.ascontiguousarray(complex_.cell_array()),
        cube_dims=np.ones(3, dtype=np.int64),
        strides=np.ones(3, dtype=np.int64),
        local_linear=np.zeros((1, complex_.dimension + 1), dtype=np.int64),
        positions=np.ascontiguousarray(complex_.positions),
        dims=np.ones(3, dtype=np.int64),
        origin=np.zeros(3),
        spacing=np.ones(3),
    )


def _check_labels(complex_, labels):
    labels = np.ascontiguousarray(labels, dtype=np.int64)
    if labels.shape != (complex_.n_vertices,):
        raise ValueError(
            f"labels have shape {labels.shape}, expected ({complex_.n_vertices},)"
        )
    return labels


def plan_emission(complex_, labels, kind=SEPARATORS, workers=None):
    """Index phase: cell codes plus per-worker primitive counts and offsets."""
    labels = _check_labels(complex_, labels)
    workers = resolve_workers(workers)
    src = _cell_source(complex_)
    counts_table = _tables_for(kind, complex_.dimension)[0]
    nvc = complex_.dimension + 1
    if src["implicit"]:
        nl = len(complex_.local_cells)
        bounds = split_range(complex_.n_cubes, workers) * nl
    else:
        bounds = split_range(complex_.n_cells, workers)
    codes = np.empty(complex_.n_cells, dtype=np.uint8)
    jobs = [(bounds[w], bounds[w + 1], labels, src["implicit"], src["cells"], src["cube_dims"],
             src["strides"], src["local_linear"], nvc, counts_table, codes) for w in range(workers)]
    counts = np.array(run_workers(_index_kernel, jobs), dtype=np.int64)
    offsets = np.zeros(workers, dtype=np.int64)
    np.cumsum(counts[:-1], out=offsets[1:])
    return EmitPlan(kind, workers, bounds, counts, offsets, codes, labels)


def emit(complex_, plan, with_support=False):
    """Emit phase: write every worker's primitives into its reserved slice.

    Raises ``RuntimeError`` if any worker writes a different number of
    primitives than the index phase reserved.
    """
    src = _cell_source(complex_)
    counts_table, points_table, sides_table = _tables_for(plan.kind, complex_.dimension)
    arity = points_table.shape[2]
    nvc = complex_.dimension + 1
    total = plan.total
    out_points = np.empty((total * arity, 3), dtype=np.float64)
    out_regions = np.empty((total, 2), dtype=np.int64)
    out_cells = np.empty(total, dtype=np.int64)
    out_support = np.empty((total * arity if with_support else 0, 4), dtype=np.int64)
    jobs = [(plan.bounds[w], plan.bounds[w + 1], plan.codes, plan.labels, src["implicit"],
             src["cells"], src["cube_dims"], src["strides"], src["local_linear"], nvc,
             src["positions"], src["dims"], src["origin"], src["spacing"],
             counts_table, points_table, sides_table, plan.offsets[w],
             out_points, out_regions, out_cells, out_support) for w in range(plan.workers)]
    written = np.array(run_workers(_emit_kernel, jobs), dtype=np.int64)
    if not np.array_equal(written, plan.counts):
        raise RuntimeError(
            f"emit phase wrote {written.tolist()} primitives, index phase reserved {plan.counts.tolist()}"
        )
    prims = np.arange(total * arity, dtype=np.int64).reshape(total, arity)
    return SeparatingMesh(plan.kind, out_points, prims, out_regions, out_cells,
                          out_support if with_support else None, plan)


def emit_separators(complex_, labels, workers=None, weld=False, with_support=False):
    """Region separators between differently labelled vertices.

    Every cell with at least two labels spawns segments (2-D) or triangles
    (3-D) through its edge midpoints and, where three or more labels meet,
    its face and cell barycenters.
    """
    plan = plan_emission(complex_, labels, SEPARATORS, workers)
    mesh = emit(complex_, plan, with_support)
    return mesh.weld() if weld else mesh


def emit_boundaries(complex_, labels, region=None, workers=None, weld=False, with_support=False):
    """Region boundaries: input faces (edges in 2-D) whose vertices share a
    label while the remaining cell vertex does not.

    A face between two regions appears once per region tag.  With `region`
    only primitives tagged with that label are kept.
    """
    plan = plan_emission(complex_, labels, BOUNDARIES, workers)
    mesh = emit(complex_, plan, with_support)
    if region is not None:
        keep = mesh.regions[:, 0] == region
        mesh = _subset(mesh, keep)
    return mesh.weld() if weld else mesh


def _subset(mesh, keep):
    arity = mesh.arity
    rows = np.flatnonzero(keep)
    point_rows = (rows[:, None] * arity + np.arange(arity)).reshape(-1)
    support = None if mesh.support is None else mesh.support[point_rows]
    prims = np.arange(len(rows) * arity, dtype=np.int64).reshape(len(rows), arity)
    return SeparatingMesh(mesh.kind, mesh.points[point_rows], prims, mesh.regions[rows],
                          mesh.cells[rows], support, mesh.plan)


def normalize_mode(mode):
    mode = _MODE_ALIASES.get(mode, mode)
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    return mode


def select_labels(seg, mode):
    """Per-vertex keys for the requested segmentation.

    ``'union'`` returns the ``(asc, desc)`` pair; the caller emits geometry
    for each and concatenates.
    """
    mode = normalize_mode(mode)
    if mode == "ascending":
        return seg.asc
    if mode == "descending":
        return seg.desc
    if mode == "morse-smale":
        if seg.ms_key is None:
            raise ValueError("segmentation has no Morse-Smale keys; run combine_ms first")
        return seg.ms_key
    return seg.asc, seg.desc


def extract_geometry(complex_, seg, mode, kind=SEPARATORS, workers=None, weld=False, region=None):
    """Select labels for `mode` and emit separators or boundaries.

    In union mode both single-direction meshes are emitted and concatenated,
    so they intersect where ascending and descending geometry meet.
    """
    keys = select_labels(seg, mode)
    runs = keys if isinstance(keys, tuple) else (keys,)
    meshes = []
    for labels in runs:
        if kind == SEPARATORS:
            meshes.append(emit_separators(complex_, labels, workers))
        else:
            meshes.append(emit_boundaries(complex_, labels, region, workers))
    mesh = meshes[0] if len(meshes) == 1 else concatenate(meshes)
    return mesh.weld() if weld else mesh
