# %% [markdown]
# # Timing the pipeline
#
# `benchmark` repeats the full pipeline per worker count, drops the fastest
# and slowest run and averages the rest.  Speedups compare against the
# one-worker row.  Expect little gain on a machine with few cores.

# %%
import os

from plmss import build_implicit_grid
from plmss.bench import benchmark, format_table, scaling_rows
from plmss.synth import synth_volume

dims = (64, 64, 64)
grid = build_implicit_grid(dims)
values = synth_volume("gaussians", dims, seed=1, n=8)
reports, last = benchmark(grid, values, "morse-smale", "separators", (1, 2, 4), repeats=4)
print("CPUs:", os.cpu_count())
print(format_table(scaling_rows(reports)))
print("primitives:", last.mesh.n_primitives)

# %% [markdown]
# The same sweep is available from the command line:
#
#     plmss --synth gaussians:8 --dims 128,128,128 --benchmark --repeats 10 --workers 1,2,4,8
