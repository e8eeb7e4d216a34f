import itertools

import numpy as np
import pytest
from scipy.spatial import Delaunay

from plmss import ExplicitMesh, build_implicit_grid

from .conftest import brute_adjacency


def test_single_cube_has_six_tets():
    g = build_implicit_grid((2, 2, 2))
    assert g.n_vertices == 8
    assert g.n_cells == 6
    assert g.cell_array().shape == (6, 4)


def test_single_square_has_two_triangles():
    g = build_implicit_grid((2, 2, 1))
    assert (g.n_vertices, g.n_cells, g.dimension) == (4, 2, 2)


def test_4x4_grid_diagonals_go_lower_left_to_upper_right():
    g = build_implicit_grid((4, 4, 1))
    assert g.n_cells == 18 and g.n_vertices == 16
    tris = g.cell_array()
    xy = g.coords(tris)[..., :2]
    # each triangle holds exactly one diagonal, and it is the (+1, +1) one
    for t in xy:
        diagonals = [
            (tuple(a), tuple(b))
            for a, b in itertools.combinations(t, 2)
            if abs(a[0] - b[0]) == 1 and abs(a[1] - b[1]) == 1
        ]
        assert len(diagonals) == 1
        (a, b), = diagonals
        assert (b[0] - a[0]) == (b[1] - a[1])


@pytest.mark.parametrize("dims", [(6, 6, 6), (3, 4, 5), (5, 3, 1), (1, 4, 3), (2, 1, 7)])
def test_cell_count_formula(dims):
    g = build_implicit_grid(dims)
    active = [d - 1 for d in dims if d > 1]
    per_cube = 6 if len(active) == 3 else 2
    assert g.n_cells == per_cube * int(np.prod(active))


@pytest.mark.parametrize("dims", [(0, 2, 2), (2, -1, 2), (3, 1, 1), (1, 1, 1)])
def test_invalid_dims_rejected(dims):
    with pytest.raises(ValueError):
        build_implicit_grid(dims)


def test_cells_vertices_ascending_and_distinct():
    g = build_implicit_grid((4, 3, 5))
    cells = g.cell_array()
    assert np.all(np.diff(cells, axis=1) > 0)


def test_corner_neighbors_in_4x4():
    g = build_implicit_grid((4, 4, 1))
    nb = g.neighbors(0)
    assert sorted(map(tuple, g.coords(nb)[:, :2].tolist())) == [(0, 1), (1, 0), (1, 1)]


@pytest.mark.parametrize("dims", [d for d in itertools.product(range(1, 6), repeat=3)
                                  if sum(x >= 2 for x in d) >= 2])
def test_stencil_neighbors_match_brute_force(dims):
    g = build_implicit_grid(dims)
    adj = brute_adjacency(g.n_vertices, g.cell_array())
    for v in range(g.n_vertices):
        nb = g.neighbors(v)
        assert list(nb) == sorted(adj[v])
    # symmetric by construction of the oracle; check the stencil side too
    for v in range(g.n_vertices):
        for u in g.neighbors(v):
            assert v in g.neighbors(u)


def test_neighbor_out_of_range():
    g = build_implicit_grid((3, 3, 1))
    with pytest.raises(IndexError):
        g.neighbors(9)
    with pytest.raises(IndexError):
        g.neighbors(-1)


def test_edge_mesh_neighbors():
    m = ExplicitMesh(np.zeros((2, 3)), [[0, 1]])
    assert list(m.neighbors(0)) == [1]


def test_explicit_mesh_matches_edge_oracle():
    rng = np.random.default_rng(7)
    pts = rng.random((60, 3))
    tets = Delaunay(pts).simplices
    m = ExplicitMesh(pts, tets)
    adj = brute_adjacency(len(pts), tets)
    for v in range(len(pts)):
        assert list(m.neighbors(v)) == sorted(adj[v])


def test_explicit_single_tet_cells():
    m = ExplicitMesh(np.eye(4, 3), [[3, 1, 0, 2]])
    assert list(m.cells()) == [(0, 1, 2, 3)]


@pytest.mark.parametrize("cells", [[[0, 1, 5]], [[0, 0, 1]], [[0, 1, 2, 3, 0]]])
def test_explicit_rejects_bad_cells(cells):
    with pytest.raises(ValueError):
        ExplicitMesh(np.zeros((4, 3)), cells)


def _tet_volume(p):
    return np.linalg.det(np.array([p[1] - p[0], p[2] - p[0], p[3] - p[0]])) / 6.0


def test_cube_partition_volume_and_disjointness():
    spacing = (0.5, 2.0, 1.5)
    g = build_implicit_grid((2, 2, 2), spacing=spacing, origin=(1.0, -2.0, 3.0))
    pos = g.positions
    tets = [pos[c] for c in g.cell_array()]
    vols = [abs(_tet_volume(p)) for p in tets]
    assert sum(vols) == pytest.approx(np.prod(spacing), rel=1e-12)
    assert min(vols) > 0

    # every interior sample point lies strictly inside exactly one tet
    rng = np.random.default_rng(0)
    lo = np.array([1.0, -2.0, 3.0])
    samples = lo + rng.random((2000, 3)) * np.array(spacing)
    for x in samples:
        hits = 0
        for p in tets:
            lam = np.linalg.solve(np.column_stack([p[1] - p[0], p[2] - p[0], p[3] - p[0]]), x - p[0])
            bary = np.append(1 - lam.sum(), lam)
            hits += bool(np.all(bary > -1e-12))
        assert hits == 1


@pytest.mark.parametrize("dims", [(3, 3, 3), (4, 3, 2)])
def test_faces_shared_by_at_most_two_tets(dims):
    g = build_implicit_grid(dims)
    count = {}
    for c in g.cells():
        for f in itertools.combinations(c, 3):
            count[f] = count.get(f, 0) + 1
    xyz = {f: g.coords(np.array(f)) for f in count}
    for f, n in count.items():
        c = xyz[f]
        on_boundary = any(
            np.all(c[:, a] == 0) or np.all(c[:, a] == dims[a] - 1) for a in range(3)
        )
        assert n == (1 if on_boundary else 2)


@pytest.mark.parametrize("dims", [(3, 3, 3), (4, 4, 1)])
def test_star_and_link(dims):
    g = build_implicit_grid(dims)
    cells = g.cell_array()
    for v in range(g.n_vertices):
        expected = {tuple(c) for c in cells.tolist() if v in c}
        assert {tuple(c) for c in g.star(v).tolist()} == expected
        link = g.link(v)
        assert list(link.vertices) == sorted({u for c in expected for u in c if u != v})
        assert all(v not in s for s in link.simplices)


def test_boundary_vertices():
    g = build_implicit_grid((4, 4, 1))
    mask = g.boundary_vertices()
    xy = g.coords(np.arange(16))
    inner = (xy[:, 0] > 0) & (xy[:, 0] < 3) & (xy[:, 1] > 0) & (xy[:, 1] < 3)
    assert np.array_equal(mask, ~inner)
    m = ExplicitMesh(g.positions, g.cell_array())
    assert np.array_equal(m.boundary_vertices(), mask)
