import itertools

import numpy as np
import pytest

from plmss import emit_separators

from plmss import build_implicit_grid

# order values of the 4x4 example, rows from y = 0 upwards, x fastest
GRID4_VALUES = np.array(
    [14, 12, 2, 0,
     13, 11, 3, 4,
     5, 6, 7, 8,
     1, 9, 10, 15],
    dtype=np.float64,
)


@pytest.fixture
def grid4():
    return build_implicit_grid((4, 4, 1)), GRID4_VALUES.copy()


def vertex_of_value(value):
    return int(np.flatnonzero(GRID4_VALUES == value)[0])


def brute_edges(cells):
    """Undirected edge set from every vertex pair of every cell."""
    edges = set()
    for cell in cells:
        for u, v in itertools.combinations(sorted(int(x) for x in cell), 2):
            edges.add((u, v))
    return edges


def brute_adjacency(n, cells):
    adj = [set() for _ in range(n)]
    for u, v in brute_edges(cells):
        adj[u].add(v)
        adj[v].add(u)
    return adj


def cell_edges(cells):
    """Unique undirected edges of all cells, vectorised."""
    cells = np.asarray(cells, dtype=np.int64)
    pairs = [cells[:, [i, j]] for i, j in itertools.combinations(range(cells.shape[1]), 2)]
    e = np.sort(np.concatenate(pairs), axis=1)
    n = int(e.max()) + 1 if len(e) else 1
    key = np.unique(e[:, 0] * n + e[:, 1])
    return np.column_stack([key // n, key % n])


def walk_oracle(n, cells, order, forward=True):
    """Extremum reached by single steepest hops from every vertex.

    Next hops come from the cell edge list, not from any stencil, and every
    iteration advances each walker by exactly one edge (no pointer doubling).
    """
    e = cell_edges(cells)
    src = np.concatenate([e[:, 0], e[:, 1]])
    dst = np.concatenate([e[:, 1], e[:, 0]])
    key = order[dst] if forward else -order[dst]
    # last entry per source after sorting by (source, key) is the steepest
    idx = np.lexsort((key, src))
    last = np.r_[src[idx][1:] != src[idx][:-1], True]
    best_src, best_dst = src[idx][last], dst[idx][last]
    own = order if forward else -order
    nxt = np.arange(n, dtype=np.int64)
    up = (key[idx][last] > own[best_src])
    nxt[best_src[up]] = best_dst[up]
    pos = np.arange(n, dtype=np.int64)
    while True:
        step = nxt[pos]
        if np.array_equal(step, pos):
            return pos
        pos = step


def canonical_primitives(mesh, scale=12):
    """Worker-independent multiset of primitives as a sorted integer array.

    On integer grids every split point is an average of 2, 3 or 4 lattice
    points, so multiplying by 12 makes the coordinates exact integers; each
    point is packed into one int64, points are sorted within a primitive and
    the rows (points plus region pair) are sorted lexicographically.
    """
    pts = np.rint(mesh.points * scale).astype(np.int64)
    assert np.all((pts >= 0) & (pts < 1 << 21))
    packed = (pts[:, 0] << 42) | (pts[:, 1] << 21) | pts[:, 2]
    rows = np.column_stack([np.sort(packed[mesh.primitives], axis=1), mesh.regions])
    return rows[np.lexsort(rows.T[::-1])]


def same_primitives(a, b):
    return np.array_equal(canonical_primitives(a), canonical_primitives(b))


def random_grid(dims, seed, kind="noise"):
    from plmss.synth import synth_volume

    grid = build_implicit_grid(dims)
    return grid, synth_volume(kind, dims, seed=seed)


def _face_split_oracle(face, labels):
    """Segments a labelled triangle must be cut by, as support pairs."""
    a, b, c = face
    la, lb, lc = labels[a], labels[b], labels[c]
    mids = [tuple(sorted(e)) for e in ((a, b), (a, c), (b, c)) if labels[e[0]] != labels[e[1]]]
    if not mids:
        return set()
    if la != lb and la != lc and lb != lc:
        centre = tuple(sorted(face))
        return {tuple(sorted((centre, m))) for m in mids}
    return {tuple(sorted(mids))}


def check_separator_properties(complex_, labels, workers=2):
    mesh = emit_separators(complex_, labels, workers=workers, with_support=True)
    cells = complex_.cell_array()
    supports = [tuple(s[s >= 0].tolist()) for s in mesh.support]
    pos = complex_.positions
    # each point is the plain average of its support vertices
    sup = mesh.support
    valid = sup >= 0
    k = valid.sum(axis=1, keepdims=True)
    expected = (pos[np.where(valid, sup, 0)] * valid[..., None]).sum(axis=1) / k
    assert np.allclose(mesh.points, expected, rtol=0, atol=1e-12)
    # and equal supports give bit-identical points, whichever cell emitted them
    _, first, inverse = np.unique(sup, axis=0, return_index=True, return_inverse=True)
    assert np.array_equal(mesh.points, mesh.points[first][inverse.reshape(-1)])

    used = {}
    splits = {}
    for i, prim in enumerate(mesh.primitives):
        cell = tuple(cells[mesh.cells[i]].tolist())
        ra, rb = mesh.regions[i]
        assert ra != rb
        sup = [supports[p] for p in prim]
        for s in sup:
            assert set(s) <= set(cell)  # inside the generating cell's hull
            if len(s) == 2:
                assert labels[s[0]] != labels[s[1]]  # never on a uniform edge
            if len(s) == 3:
                assert len({labels[x] for x in s}) == 3
            used.setdefault(cell, set()).add(s)
        for s, t in itertools.combinations(sup, 2):
            face_verts = set(s) | set(t)
            if len(face_verts) <= complex_.dimension and len(cell) == 4:
                for face in itertools.combinations(cell, 3):
                    if face_verts <= set(face):
                        splits.setdefault((face, cell), set()).add(tuple(sorted((s, t))))

    # every mixed edge of every cell is crossed at its midpoint
    for cell in map(tuple, cells.tolist()):
        for e in itertools.combinations(cell, 2):
            if labels[e[0]] != labels[e[1]]:
                assert e in used.get(cell, set())

    if len(cells[0]) == 4:
        # face-restricted splits follow the triangle cases on both sides
        faces = {}
        for cell in map(tuple, cells.tolist()):
            for face in itertools.combinations(cell, 3):
                faces.setdefault(face, []).append(cell)
        for face, owners in faces.items():
            expected = _face_split_oracle(face, labels)
            for cell in owners:
                assert splits.get((face, cell), set()) == expected
    return mesh


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        r = mod.RESULTS[number]
        if r.get("soft_fail"):
            status = "SOFT-FAIL"
        else:
            status = "PASS" if r.get("ok") else "FAIL"
        terminalreporter.write_line(
            f"criterion {number}: {status:9} {r['title']} [{r.get('detail', '')}] ({r.get('seconds', 0):.1f} s)"
        )
