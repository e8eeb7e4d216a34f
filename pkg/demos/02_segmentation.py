# %% [markdown]
# # Ascending, descending and Morse-Smale segmentation
#
# Every vertex points at its steepest neighbour.  Pointer jumping then
# shortcuts these chains until each vertex points straight at the extremum
# it flows into.  The 4x4 example below has two minima and two maxima.

# %%
import numpy as np

from plmss import build_implicit_grid, combine_ms, compute_order, segment
from plmss.segmentation import compression_sweep

values = np.array([14, 12, 2, 0, 13, 11, 3, 4, 5, 6, 7, 8, 1, 9, 10, 15], dtype=float)
grid = build_implicit_grid((4, 4, 1))
seg = combine_ms(segment(grid, compute_order(values), workers=2))


def show(labels):
    rows = labels.reshape(4, 4)[::-1]  # top row first
    for row in rows:
        print("   " + " ".join(f"{int(values[v]):>2}" for v in row))


print("maximum reached by each vertex (printed as its value):")
show(seg.desc)
print("minimum reached by each vertex:")
show(seg.asc)
print("Morse-Smale regions:", seg.n_regions)
show(seg.ms_region)

# %% [markdown]
# ## Pointer jumping step by step
#
# On a chain of seven vertices climbing to the right, each sweep doubles the
# distance a pointer covers.

# %%
desc = np.array([1, 2, 3, 4, 5, 6, 6])
active = np.arange(6)
n = 6
while n:
    n = compression_sweep(active, n, desc, np.zeros(1, dtype=np.int64), True, False)
    print(desc.tolist())

# %% [markdown]
# ## A larger volume
#
# Labels do not depend on how many worker threads share the work.

# %%
from plmss.synth import synth_volume

dims = (48, 48, 48)
grid = build_implicit_grid(dims)
order = compute_order(synth_volume("gaussians", dims, seed=3, n=6))
runs = [combine_ms(segment(grid, order, workers=w)) for w in (1, 4)]
print("maxima:", len(runs[0].maxima), "minima:", len(runs[0].minima),
      "regions:", runs[0].n_regions, "sweeps:", runs[0].iterations)
print("identical for 1 and 4 workers:", np.array_equal(runs[0].ms_key, runs[1].ms_key))
