# %% [markdown]
# # Separators and boundaries
#
# Labels are categorical, so geometry is built from fixed split points:
# edge midpoints, triangle centres and tetrahedron centres.  Each cell is
# looked up by a small code describing which of its vertices share labels.

# %%
import itertools
from collections import Counter

import numpy as np

from plmss import ExplicitMesh, emit_boundaries, emit_separators, tetra_code

tally = Counter(tetra_code(p) for p in itertools.product(range(4), repeat=4))
print("tetrahedron codes seen over all 4-label patterns:", sorted(tally))

tet = ExplicitMesh(np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1.0]]), [[0, 1, 2, 3]])
for labels in ([0, 0, 0, 1], [0, 0, 1, 1], [0, 0, 1, 2], [0, 1, 2, 3]):
    m = emit_separators(tet, np.array(labels), weld=True)
    print(f"labels {labels}: code {tetra_code(labels):>2}, {m.n_primitives:>2} triangles, "
          f"{len(m.points):>2} distinct points")

# %% [markdown]
# Boundaries reuse faces of the input mesh instead: a face whose three
# vertices agree while the fourth vertex differs is a piece of that region's
# hull.

# %%
b = emit_boundaries(tet, np.array([5, 5, 5, 9]))
print("boundary triangle:", b.points[b.primitives[0]].tolist(), "tag", b.tags.tolist())

# %% [markdown]
# ## The 4x4 example
#
# The descending separator is one polyline cutting the square in two.

# %%
from plmss import build_implicit_grid, combine_ms, compute_order, extract_geometry, segment

values = np.array([14, 12, 2, 0, 13, 11, 3, 4, 5, 6, 7, 8, 1, 9, 10, 15], dtype=float)
grid = build_implicit_grid((4, 4, 1))
seg = combine_ms(segment(grid, compute_order(values)))
line = extract_geometry(grid, seg, "descending", weld=True)
print("descending separator:", line.n_primitives, "segments")
for a, c in line.primitives:
    print("  ", line.points[a, :2].tolist(), "->", line.points[c, :2].tolist())
ms = extract_geometry(grid, seg, "morse-smale", weld=True)
print("Morse-Smale separator network:", len(ms.points), "nodes,", ms.n_primitives, "segments")

# %% [markdown]
# ## Writing a surface
#
# `write_surface_obj` groups primitives by the regions they separate.

# %%
import tempfile, os

from plmss.io import write_surface_obj
from plmss.synth import synth_volume

dims = (24, 24, 24)
grid = build_implicit_grid(dims)
seg = combine_ms(segment(grid, compute_order(synth_volume("gaussians", dims, seed=2, n=3))))
surface = extract_geometry(grid, seg, "descending", weld=True)
path = os.path.join(tempfile.mkdtemp(), "descending.obj")
write_surface_obj(surface, path)
print(path, os.path.getsize(path), "bytes,", surface.n_primitives, "triangles")
