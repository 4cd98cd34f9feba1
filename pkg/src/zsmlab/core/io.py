"""CSV export and the ZSMF binary field dump."""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from zsmlab.core.field import ComplexField, ScalarField, VectorField

FIELD_MAGIC = b"ZSMF"
FIELD_VERSION = 1

_KINDS = {"scalar": 0, "vector": 1, "complex": 2}
_TOPOLOGIES = {"line": 0, "ring": 1, "plane": 2, "disk-polar": 3}

AnyField = ScalarField | VectorField | ComplexField


def _kind(field: AnyField) -> str:
    if isinstance(field, ComplexField):
        return "complex"
    if isinstance(field, VectorField):
        return "vector"
    return "scalar"


def _columns(field: AnyField) -> tuple[list[str], list[np.ndarray]]:
    grid = field.grid
    names = [axis.name for axis in grid.axes]
    cols = [m.ravel() for m in grid.mesh]
    kind = _kind(field)
    if kind == "complex":
        names += ["re", "im"]
        cols += [field.values.real.ravel(), field.values.imag.ravel()]
    elif kind == "vector":
        names += [f"v_{axis.name}" for axis in grid.axes]
        cols += [component.ravel() for component in field.values]
    else:
        names.append("value")
        cols.append(field.values.ravel())
    return names, cols


def write_field_csv(field: AnyField, path: Path) -> Path:
    names, cols = _columns(field)
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(path, np.column_stack(cols), delimiter=",", header=",".join(names), comments="")
    return path


def write_table_csv(path: Path, header: list[str], rows: np.ndarray) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(path, np.atleast_2d(rows), delimiter=",", header=",".join(header), comments="")
    return path


@dataclass(frozen=True)
class FieldHeader:
    version: int
    kind: str
    topology: str
    components: int
    shape: tuple[int, ...]


def dump_field(field: AnyField, path: Path) -> Path:
    """Write `ZSMF | version | kind | topology | ndim | ncomp | dims... | payload`, little endian."""
    kind = _kind(field)
    grid = field.grid
    ncomp = grid.ndim if kind == "vector" else 1
    header = FIELD_MAGIC + struct.pack(
        "<BBBBB",
        FIELD_VERSION,
        _KINDS[kind],
        _TOPOLOGIES[grid.topology],
        grid.ndim,
        ncomp,
    )
    header += struct.pack(f"<{grid.ndim}I", *grid.shape)
    dtype = "<c16" if kind == "complex" else "<f8"
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(field.values, dtype=dtype).tobytes())
    return path


def append_field(field: AnyField, fh) -> None:
    """Append one more payload frame to an open dump (same header)."""
    dtype = "<c16" if _kind(field) == "complex" else "<f8"
    fh.write(np.ascontiguousarray(field.values, dtype=dtype).tobytes())


def read_field_dump(path: Path) -> tuple[FieldHeader, np.ndarray]:
    """Return the header and all frames stacked on a leading axis."""
    data = path.read_bytes()
    if data[:4] != FIELD_MAGIC:
        raise ValueError(f"{path} is not a ZSMF file")
    version, kind_code, topo_code, ndim, ncomp = struct.unpack_from("<BBBBB", data, 4)
    shape = struct.unpack_from(f"<{ndim}I", data, 9)
    offset = 9 + 4 * ndim
    kind = {v: k for k, v in _KINDS.items()}[kind_code]
    topology = {v: k for k, v in _TOPOLOGIES.items()}[topo_code]
    dtype = np.dtype("<c16") if kind == "complex" else np.dtype("<f8")
    frame_shape = (ncomp, *shape) if kind == "vector" else tuple(shape)
    payload = np.frombuffer(data, dtype=dtype, offset=offset)
    frames = payload.reshape((-1, *frame_shape))
    return FieldHeader(version, kind, topology, ncomp, tuple(shape)), frames

