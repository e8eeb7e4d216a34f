# %% [markdown]
# # Grids, stars and the order field
#
# A regular grid is never stored cell by cell.  `build_implicit_grid` keeps
# the dimensions, and every query (neighbours, star, cells) is computed from
# vertex coordinates.  Each cube is cut into six tetrahedra along its main
# diagonal; a grid with one singleton axis becomes a triangulated plane.

# %%
import numpy as np

from plmss import build_implicit_grid, classify_vertex, compute_order

cube = build_implicit_grid((2, 2, 2))
print("vertices:", cube.n_vertices, "tetrahedra:", cube.n_cells)
for tet in cube.cells():
    print("  ", tet, "->", cube.coords(np.array(tet)).tolist())

# %% [markdown]
# The corner at the origin touches all six tetrahedra, so it is adjacent to
# all seven other corners.  The corner at (1, 0, 0) is not on the main
# diagonal and has fewer neighbours.

# %%
print("neighbours of 0:", cube.neighbors(0).tolist())
print("neighbours of 1:", cube.neighbors(1).tolist())

# %% [markdown]
# ## Ties and the order field
#
# Scalars are replaced by their rank.  Equal values are ordered by vertex
# id, so every vertex has one strictly largest and one strictly smallest
# neighbour, even on plateaus.

# %%
values = np.array([0.0, 1.0, 1.0, 0.5, 1.0, 2.0, 2.0, 2.0])
order = compute_order(values)
print("values:", values.tolist())
print("order: ", order.tolist())

# %% [markdown]
# ## Critical points
#
# A vertex is classified by counting connected pieces of its lower and upper
# link.  Here is a plane of 9x9 vertices with a saddle in the middle.

# %%
plane = build_implicit_grid((9, 9, 1))
xy = plane.coords(np.arange(plane.n_vertices))[:, :2] - 4.0
saddle_field = xy[:, 0] ** 2 - xy[:, 1] ** 2 + 1e-3 * xy[:, 0]
order = compute_order(saddle_field)
centre = 4 * 9 + 4
print(classify_vertex(plane, order, centre))
