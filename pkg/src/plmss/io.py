"""File formats.

Raw volumes
    Headerless, x-fastest then y then z; dims, dtype, origin and spacing are
    supplied by the caller.  Dtypes: f32le, f64le, u8, u16le, i16le.
ASCII meshes
    ``v x y z s`` vertex lines (s = scalar) and ``c i j k [l]`` cell lines with
    0-based indices; all cells of one file share an arity.  ``#`` starts a
    comment.
Label files
    ``b"PLMSSLBL"``, u32 version (1), u64 vertex count, then one
    (u64 asc, u64 desc) record per vertex.  Little-endian throughout.
Surface files
    OBJ-style ASCII: ``v x y z`` lines, then ``g`` group headers per region
    tag followed by ``f i j k`` (triangles) or ``l i j`` (segments), 1-based.
"""

import os
import struct

import numpy as np

from .complex import ExplicitMesh, build_implicit_grid

DTYPES = {
    "f32le": np.dtype("<f4"),
    "f64le": np.dtype("<f8"),
    "u8": np.dtype("u1"),
    "u16le": np.dtype("<u2"),
    "i16le": np.dtype("<i2"),
}

LABEL_MAGIC = b"PLMSSLBL"
LABEL_VERSION = 1
_LABEL_HEADER = struct.Struct("<8sIQ")
_LABEL_RECORD = np.dtype([("asc", "<u8"), ("desc", "<u8")])


class FormatError(ValueError):
    """Malformed input file."""


def _dtype(name):
    try:
        return DTYPES[name]
    except KeyError:
        raise ValueError(f"unknown dtype {name!r}; expected one of {sorted(DTYPES)}") from None


def read_volume(path, dims, dtype="f32le", origin=(0.0, 0.0, 0.0), spacing=(1.0, 1.0, 1.0)):
    """Read a headerless raw volume.

    Returns the implicit grid and the scalars as float64.
    """
    dt = _dtype(dtype)
    grid = build_implicit_grid(dims, spacing, origin)
    expected = grid.n_vertices * dt.itemsize
    actual = os.path.getsize(path)
    if actual != expected:
        raise FormatError(
            f"{path}: expected {expected} bytes for dims {tuple(dims)} {dtype}, "
            f"got {actual} bytes (first mismatch at byte {min(actual, expected)})"
        )
    values = np.fromfile(path, dtype=dt).astype(np.float64)
    return grid, values


def write_volume(path, values, dtype="f32le"):
    np.asarray(values).astype(_dtype(dtype)).tofile(path)


def read_mesh(path):
    """Read an ASCII mesh; returns ``(ExplicitMesh, scalars)``."""
    verts, scalars, cells = [], [], []
    arity = None
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            tag, *fields = line.split()
            try:
                if tag == "v":
                    if len(fields) != 4:
                        raise FormatError("vertex line needs 'v x y z s'")
                    x, y, z, s = (float(f) for f in fields)
                    verts.append((x, y, z))
                    scalars.append(s)
                elif tag == "c":
                    if len(fields) not in (2, 3, 4):
                        raise FormatError("cell line needs 2 to 4 vertex indices")
                    if arity is None:
                        arity = len(fields)
                    elif len(fields) != arity:
                        raise FormatError(f"cell has {len(fields)} indices, file uses {arity}")
                    cells.append(tuple(int(f) for f in fields))
                else:
                    raise FormatError(f"unknown record type {tag!r}")
            except ValueError as exc:
                raise FormatError(f"{path}:{lineno}: {exc}") from None
    if not cells:
        raise FormatError(f"{path}: no cell lines")
    try:
        mesh = ExplicitMesh(np.array(verts, dtype=np.float64).reshape(-1, 3), np.array(cells))
    except ValueError as exc:
        raise FormatError(f"{path}: {exc}") from None
    return mesh, np.array(scalars, dtype=np.float64)


def write_mesh(path, positions, scalars, cells):
    with open(path, "w", encoding="utf-8") as fh:
        rows = np.column_stack([np.asarray(positions, dtype=np.float64), scalars])
        np.savetxt(fh, rows, fmt="v %.17g %.17g %.17g %.17g")
        for c in np.asarray(cells):
            fh.write("c " + " ".join(str(int(i)) for i in c) + "\n")


def write_labels(seg, path):
    n = len(seg.asc)
    records = np.empty(n, dtype=_LABEL_RECORD)
    records["asc"] = seg.asc
    records["desc"] = seg.desc
    with open(path, "wb") as fh:
        fh.write(_LABEL_HEADER.pack(LABEL_MAGIC, LABEL_VERSION, n))
        records.tofile(fh)


def read_labels(path):
    """Returns ``(asc, desc)`` as int64 arrays."""
    with open(path, "rb") as fh:
        header = fh.read(_LABEL_HEADER.size)
        if len(header) != _LABEL_HEADER.size:
            raise FormatError(f"{path}: truncated header ({len(header)} of {_LABEL_HEADER.size} bytes)")
        magic, version, n = _LABEL_HEADER.unpack(header)
        if magic != LABEL_MAGIC:
            raise FormatError(f"{path}: bad magic {magic!r} at byte 0")
        if version != LABEL_VERSION:
            raise FormatError(f"{path}: unsupported version {version} at byte 8")
        body = fh.read()
    expected = n * _LABEL_RECORD.itemsize
    if len(body) != expected:
        raise FormatError(
            f"{path}: expected {expected} record bytes for {n} vertices, got {len(body)} "
            f"(at byte {_LABEL_HEADER.size + min(len(body), expected)})"
        )
    records = np.frombuffer(body, dtype=_LABEL_RECORD)
    return records["asc"].astype(np.int64), records["desc"].astype(np.int64)


def write_surface_obj(mesh, path):
    """Write a separating mesh as OBJ, one ``g`` group per region tag."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# plmss {mesh.kind}: {len(mesh.points)} points, {mesh.n_primitives} primitives\n")
        if mesh.n_primitives == 0:
            return
        np.savetxt(fh, mesh.points, fmt="v %.17g %.17g %.17g")
        prefix = "f" if mesh.arity == 3 else "l"
        order = np.lexsort((mesh.regions[:, 1], mesh.regions[:, 0]))
        current = None
        for i in order:
            ra, rb = int(mesh.regions[i, 0]), int(mesh.regions[i, 1])
            if (ra, rb) != current:
                current = (ra, rb)
                name = f"r{ra}" if mesh.kind == "boundaries" else f"r{ra}_{rb}"
                fh.write(f"g {name}\n")
            fh.write(prefix + " " + " ".join(str(int(p) + 1) for p in mesh.primitives[i]) + "\n")
