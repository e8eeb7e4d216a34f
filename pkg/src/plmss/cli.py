"""Command-line front end: ``plmss`` / ``python -m plmss``.

Exit codes: 0 success, 2 usage error, 3 malformed input file or field,
4 I/O failure, 5 invalid argument, 6 internal consistency failure.
"""

import argparse
import os
import sys
from dataclasses import dataclass
from typing import Optional, Tuple

from . import bench, io, marching
from ._parallel import default_workers
from .complex import build_implicit_grid
from .orderfield import InvalidFieldError
from .synth import parse_synth, synth_volume

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FORMAT = 3
EXIT_IO = 4
EXIT_ARGUMENT = 5
EXIT_INTERNAL = 6

_MODES = {"asc": "ascending", "desc": "descending", "ms": "morse-smale", "union": "union"}


@dataclass
class RunConfig:
    input: Optional[str] = None
    mesh: Optional[str] = None
    dims: Optional[Tuple[int, int, int]] = None
    dtype: str = "f32le"
    spacing: Tuple[float, float, float] = (1.0, 1.0, 1.0)
    origin: Tuple[float, float, float] = (0.0, 0.0, 0.0)
    mode: str = "ms"
    geometry: str = "separators"
    workers: Tuple[int, ...] = (1,)
    weld: bool = False
    out_labels: Optional[str] = None
    out_surface: Optional[str] = None
    benchmark: bool = False
    repeats: int = 10
    synth: Optional[str] = None
    seed: int = 0

    def validate(self):
        if self.mode not in _MODES:
            raise ValueError(f"mode must be one of {sorted(_MODES)}, got {self.mode!r}")
        if self.geometry not in ("separators", "boundaries", "none"):
            raise ValueError(f"geometry must be separators, boundaries or none, got {self.geometry!r}")
        if not self.workers or any(w < 1 for w in self.workers):
            raise ValueError(f"workers must be positive, got {self.workers}")
        if self.benchmark and self.repeats < 3:
            raise ValueError(f"--benchmark needs --repeats >= 3, got {self.repeats}")
        if self.synth is None and self.input is None and self.mesh is None:
            raise ValueError("one of --input, --mesh or --synth is required")
        if (self.synth or (self.input and not _is_mesh_path(self.input))) and self.dims is None:
            raise ValueError("--dims is required for raw volumes and --synth")


def _is_mesh_path(path):
    return path.endswith((".mesh", ".txt"))


def _load(config):
    """Returns ``(complex, values, dataset descriptor)``."""
    if config.mesh or (config.input and _is_mesh_path(config.input) and not config.synth):
        path = config.mesh or config.input
        mesh, values = io.read_mesh(path)
        return mesh, values, os.path.basename(path)
    if config.synth:
        kind, n = parse_synth(config.synth)
        values = synth_volume(kind, config.dims, seed=config.seed, n=n)
        grid = build_implicit_grid(config.dims, config.spacing, config.origin)
        if config.input:
            io.write_volume(config.input, values, config.dtype)
            grid, values = io.read_volume(config.input, config.dims, config.dtype,
                                          config.origin, config.spacing)
        name = f"{config.synth}-seed{config.seed}-" + "x".join(map(str, config.dims))
        return grid, values, name
    grid, values = io.read_volume(config.input, config.dims, config.dtype,
                                  config.origin, config.spacing)
    return grid, values, os.path.basename(config.input)


def _write_outputs(config, result):
    if config.out_labels:
        io.write_labels(result.seg, config.out_labels)
    if config.out_surface and result.mesh is not None:
        io.write_surface_obj(result.mesh, config.out_surface)


def run(config, out=None, err=None):
    """Execute one configuration; returns the process exit status."""
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        config.validate()
        complex_, values, dataset = _load(config)
        mode = _MODES[config.mode]
        if config.benchmark:
            reports, last = bench.benchmark(complex_, values, mode, config.geometry,
                                            config.workers, config.repeats, dataset, config.weld)
            rows = bench.scaling_rows(reports)
            out.write(bench.format_csv(rows))
            out.write("\n" + bench.format_table(rows) + "\n")
            result = last
        else:
            result = bench.run_pipeline(complex_, values, mode, config.geometry,
                                        config.workers[0], config.weld)
            t = result.timings
            out.write(
                "phases " + " ".join(f"{p}={t[p]:.4f}s" for p in bench.PHASES)
                + f" maxima={len(result.seg.maxima)} minima={len(result.seg.minima)}"
                + (f" primitives={result.mesh.n_primitives}" if result.mesh is not None else "")
                + "\n"
            )
        _write_outputs(config, result)
    except (io.FormatError, InvalidFieldError) as exc:
        err.write(f"plmss: input error: {exc}\n")
        return EXIT_FORMAT
    except OSError as exc:
        err.write(f"plmss: I/O error: {exc}\n")
        return EXIT_IO
    except ValueError as exc:
        err.write(f"plmss: invalid argument: {exc}\n")
        return EXIT_ARGUMENT
    except RuntimeError as exc:
        err.write(f"plmss: internal error: {exc}\n")
        return EXIT_INTERNAL
    return EXIT_OK


def _triple(kind):
    def parse(text):
        parts = text.split(",")
        if len(parts) != 3:
            raise argparse.ArgumentTypeError(f"expected 3 comma-separated values, got {text!r}")
        try:
            return tuple(kind(p) for p in parts)
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad value list {text!r}") from None
    return parse


def _int_list(text):
    try:
        return tuple(int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad worker list {text!r}") from None


def build_parser():
    p = argparse.ArgumentParser(
        prog="plmss",
        description="Piecewise-linear Morse-Smale segmentation with region-separating geometry. "
                    "Inputs should be topologically simplified beforehand.",
    )
    p.add_argument("--input", help="raw volume (needs --dims) or ASCII mesh (*.mesh)")
    p.add_argument("--mesh", help="ASCII mesh input ('v x y z s' / 'c i j k [l]')")
    p.add_argument("--dims", type=_triple(int), help="X,Y,Z vertex counts")
    p.add_argument("--dtype", default="f32le", choices=sorted(io.DTYPES))
    p.add_argument("--spacing", type=_triple(float), default=(1.0, 1.0, 1.0))
    p.add_argument("--origin", type=_triple(float), default=(0.0, 0.0, 0.0))
    p.add_argument("--mode", default="ms", choices=sorted(_MODES))
    p.add_argument("--geometry", default="separators", choices=("separators", "boundaries", "none"))
    p.add_argument("--workers", type=_int_list, default=None,
                   help="worker count, or a comma list for --benchmark sweeps "
                        "(default: $PLMSS_WORKERS or the CPU count)")
    p.add_argument("--weld", action="store_true", help="merge bitwise-identical points")
    p.add_argument("--out-labels", help="binary label file")
    p.add_argument("--out-surface", help="OBJ surface file")
    p.add_argument("--benchmark", action="store_true")
    p.add_argument("--repeats", type=int, default=10)
    p.add_argument("--synth", help="ramp | noise | gaussians[:N]; writes to --input when given")
    p.add_argument("--seed", type=int, default=0)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        workers = args.workers or (default_workers(),)
    except ValueError as exc:
        sys.stderr.write(f"plmss: invalid argument: {exc}\n")
        return EXIT_ARGUMENT
    config = RunConfig(
        input=args.input, mesh=args.mesh, dims=args.dims, dtype=args.dtype,
        spacing=args.spacing, origin=args.origin, mode=args.mode, geometry=args.geometry,
        workers=workers, weld=args.weld, out_labels=args.out_labels,
        out_surface=args.out_surface, benchmark=args.benchmark, repeats=args.repeats,
        synth=args.synth, seed=args.seed,
    )
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
