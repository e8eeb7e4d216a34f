"""Pipeline runner with per-phase timing and the strong-scaling harness.

Each configuration is run ``repeats`` times; the runs with the best and the
worst total time are dropped and the remaining runs are averaged per phase.
"""

import csv
import io as _io
import time
from dataclasses import dataclass, field

import numpy as np

from . import marching
from .orderfield import compute_order
from .segmentation import BOTH, combine_ms, segment

PHASES = ("order", "segmentation", "ms_combine", "index", "geometry", "total")

CSV_COLUMNS = (
    "dataset", "workers", "repeats", "order", "segmentation", "ms_combine", "index",
    "geometry", "total", "seg_index", "speedup", "efficiency", "seg_index_speedup",
    "seg_index_efficiency", "primitives",
)


@dataclass
class PipelineResult:
    seg: object
    mesh: object
    timings: dict
    plans: list = field(default_factory=list)


def run_pipeline(complex_, values, mode="morse-smale", geometry="separators", workers=1,
                 weld=False, region=None):
    """order -> segment -> combine -> select -> index -> emit, timed per phase."""
    mode = marching.normalize_mode(mode)
    t = {p: 0.0 for p in PHASES}
    start = time.perf_counter()

    t0 = time.perf_counter()
    order = compute_order(values, complex_.n_vertices)
    t["order"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    seg = segment(complex_, order, BOTH, workers)
    t["segmentation"] = time.perf_counter() - t0

    if mode == "morse-smale":
        t0 = time.perf_counter()
        combine_ms(seg)
        t["ms_combine"] = time.perf_counter() - t0

    mesh = None
    plans = []
    if geometry != "none":
        keys = marching.select_labels(seg, mode)
        meshes = []
        for labels in (keys if isinstance(keys, tuple) else (keys,)):
            t0 = time.perf_counter()
            plan = marching.plan_emission(complex_, labels, geometry, workers)
            t["index"] += time.perf_counter() - t0
            t0 = time.perf_counter()
            m = marching.emit(complex_, plan)
            if geometry == marching.BOUNDARIES and region is not None:
                m = marching._subset(m, m.regions[:, 0] == region)
            t["geometry"] += time.perf_counter() - t0
            plans.append(plan)
            meshes.append(m)
        mesh = meshes[0] if len(meshes) == 1 else marching.concatenate(meshes)
        if weld:
            t0 = time.perf_counter()
            mesh = mesh.weld()
            t["geometry"] += time.perf_counter() - t0

    t["total"] = time.perf_counter() - start
    return PipelineResult(seg, mesh, t, plans)


def trimmed_mean(runs):
    """Drop the best and worst run by total time, average the rest per phase."""
    if len(runs) < 3:
        raise ValueError(f"need at least 3 runs to trim best and worst, got {len(runs)}")
    totals = np.array([r["total"] for r in runs])
    best, worst = int(np.argmin(totals)), int(np.argmax(totals))
    if best == worst:
        worst = (best + 1) % len(runs)
    kept = [r for i, r in enumerate(runs) if i not in (best, worst)]
    return {p: float(np.mean([r[p] for r in kept])) for p in PHASES}


@dataclass
class BenchReport:
    workers: int
    repeats: int
    dataset: str
    phases: dict
    primitives: int
    runs: list = field(default_factory=list, repr=False)

    @property
    def seg_index(self):
        return self.phases["segmentation"] + self.phases["index"]


def benchmark(complex_, values, mode="morse-smale", geometry="separators",
              workers_list=(1,), repeats=10, dataset="", weld=False):
    """Strong-scaling sweep; one :class:`BenchReport` per worker count.

    Every run re-checks that the emit phase filled exactly the slices the
    index phase reserved (``marching.emit`` raises otherwise).
    """
    if repeats < 3:
        raise ValueError(f"benchmark needs repeats >= 3, got {repeats}")
    reports = []
    last = None
    for w in workers_list:
        runs = []
        primitives = 0
        for _ in range(repeats):
            last = run_pipeline(complex_, values, mode, geometry, w, weld)
            runs.append(last.timings)
            primitives = 0 if last.mesh is None else last.mesh.n_primitives
        reports.append(BenchReport(w, repeats, dataset, trimmed_mean(runs), primitives, runs))
    return reports, last


def scaling_rows(reports):
    """Rows of the CSV table; speedups are relative to the 1-worker report
    (or the first one when no 1-worker run exists)."""
    base = next((r for r in reports if r.workers == 1), reports[0])
    rows = []
    for r in reports:
        speedup = base.phases["total"] / r.phases["total"] if r.phases["total"] > 0 else float("nan")
        si = base.seg_index / r.seg_index if r.seg_index > 0 else float("nan")
        row = {"dataset": r.dataset, "workers": r.workers, "repeats": r.repeats}
        row.update({p: r.phases[p] for p in PHASES})
        row.update(
            seg_index=r.seg_index,
            speedup=speedup,
            efficiency=speedup * base.workers / r.workers,
            seg_index_speedup=si,
            seg_index_efficiency=si * base.workers / r.workers,
            primitives=r.primitives,
        )
        rows.append(row)
    return rows


def format_csv(rows):
    buf = _io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (f"{v:.9g}" if isinstance(v, float) else v) for k, v in row.items()})
    return buf.getvalue()


def format_table(rows):
    header = f"{'workers':>7} {'order':>9} {'asc/desc':>9} {'ms':>9} {'index':>9} {'geometry':>9} {'total':>9} {'speedup':>8} {'eff.':>6}"
    lines = [header, "-" * len(header)]
    for r in rows:
        lines.append(
            f"{r['workers']:>7} {r['order']:>9.4f} {r['segmentation']:>9.4f} {r['ms_combine']:>9.4f} "
            f"{r['index']:>9.4f} {r['geometry']:>9.4f} {r['total']:>9.4f} "
            f"{r['speedup']:>8.2f} {r['efficiency']:>6.2f}"
        )
    return "\n".join(lines)
