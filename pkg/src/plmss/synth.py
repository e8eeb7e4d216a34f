"""Deterministic synthetic volumes used as benchmark and test fodder."""

import numpy as np


def synth_volume(kind, dims, seed=0, n=4):
    """Scalar values for a grid of `dims`, flattened x-fastest.

    ``kind`` is ``'ramp'`` (monotone, one minimum and one maximum),
    ``'noise'`` (i.i.d. uniform) or ``'gaussians'`` (`n` random bumps).
    """
    dims = tuple(int(d) for d in dims)
    # meshgrid with 'ij' on (z, y, x) then ravel gives x-fastest order
    z, y, x = np.meshgrid(*(np.arange(d, dtype=np.float64) for d in dims[::-1]), indexing="ij")
    x, y, z = x.ravel(), y.ravel(), z.ravel()
    if kind == "ramp":
        return x / max(dims[0] - 1, 1) + y / max(dims[1] - 1, 1) + z / max(dims[2] - 1, 1)
    rng = np.random.default_rng(seed)
    if kind == "noise":
        return rng.random(len(x))
    if kind == "gaussians":
        extent = np.array([max(d - 1, 1) for d in dims], dtype=np.float64)
        active = [d for d in dims if d > 1]
        sigma = 0.12 * min(active)
        values = np.zeros(len(x))
        for _ in range(int(n)):
            c = rng.random(3) * extent
            amp = rng.uniform(0.5, 1.0)
            r2 = (x - c[0]) ** 2 + (y - c[1]) ** 2 + (z - c[2]) ** 2
            values += amp * np.exp(-r2 / (2.0 * sigma**2))
        return values
    raise ValueError(f"unknown synthetic volume kind {kind!r}")


def parse_synth(text):
    """Parse ``'ramp'``, ``'noise'`` or ``'gaussians[:N]'``."""
    name, _, arg = text.partition(":")
    if name == "gaussians":
        return name, int(arg) if arg else 4
    if arg:
        raise ValueError(f"synthetic kind {name!r} takes no argument")
    return name, 0
