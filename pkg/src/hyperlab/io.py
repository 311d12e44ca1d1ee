"""Result persistence: versioned JSON documents, CSV tables and binary state
checkpoints.

Checkpoint layout::

    b"HLCK" | uint32 version | uint64 header length | JSON header | complex128 data

with little-endian integers and coefficients in C order (space representation).
"""
from __future__ import annotations

import csv
import json
import math
import os
import struct
from pathlib import Path

import numpy as np

from .lattice import SPACE, WaveState, make_grid, transform

SCHEMA_VERSION = 1
CHECKPOINT_MAGIC = b"HLCK"
_PREFIX = struct.Struct("<4sIQ")


class PersistError(ValueError):
    """Unreadable or corrupt file."""


class VersionMismatch(PersistError):
    """File written under a different schema version; no migration is available."""


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return _jsonable(obj.item())
    if isinstance(obj, float) and not math.isfinite(obj):
        return "inf" if obj > 0 else ("-inf" if obj < 0 else "nan")
    if hasattr(obj, "numerator") and hasattr(obj, "denominator") and not isinstance(obj, (int, bool)):
        return float(obj)
    return obj


def dumps(kind: str, payload: dict) -> str:
    doc = {"schema_version": SCHEMA_VERSION, "kind": kind, "payload": _jsonable(payload)}
    return json.dumps(doc, indent=2, sort_keys=True)


def save_json(path, kind: str, payload: dict) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(kind, payload) + "\n")
    return path


def load_json(path, kind: str | None = None) -> dict:
    """Payload of a versioned document; checks version and (optionally) kind."""
    try:
        doc = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise PersistError(f"cannot read {path}: {exc}") from exc
    if not isinstance(doc, dict) or "schema_version" not in doc or "payload" not in doc:
        raise PersistError(f"{path} is not a versioned result document")
    if doc["schema_version"] != SCHEMA_VERSION:
        raise VersionMismatch(
            f"{path} has schema version {doc['schema_version']}, this build reads {SCHEMA_VERSION}; "
            "no migration is defined"
        )
    if kind is not None and doc.get("kind") != kind:
        raise PersistError(f"{path} holds a {doc.get('kind')!r} document, expected {kind!r}")
    return doc["payload"]


def write_csv(path, header, rows) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])
    return path


def read_csv(path) -> tuple[list, list]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise PersistError(f"{path} is empty")
    return rows[0], rows[1:]


def save_checkpoint(path, state: WaveState, **header) -> Path:
    """Bit-exact state dump; extra keyword entries are stored in the header."""
    grid = state.grid
    data = np.ascontiguousarray(transform(state, SPACE).coeffs, dtype="<c16")
    head = {
        "grid": {"d": grid.d, "N": grid.N, "L": grid.L, "n": grid.n},
        "t": state.t,
        "rep": SPACE,
        "nbytes": data.nbytes,
        **_jsonable(header),
    }
    blob = json.dumps(head, sort_keys=True).encode()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(path.suffix + ".tmp")
    with open(tmp, "wb") as fh:
        fh.write(_PREFIX.pack(CHECKPOINT_MAGIC, SCHEMA_VERSION, len(blob)))
        fh.write(blob)
        fh.write(data.tobytes())
    os.replace(tmp, path)
    return path


def load_checkpoint(path) -> tuple[WaveState, dict]:
    raw = Path(path).read_bytes()
    if len(raw) < _PREFIX.size:
        raise PersistError(f"{path}: truncated checkpoint")
    magic, version, hlen = _PREFIX.unpack_from(raw)
    if magic != CHECKPOINT_MAGIC:
        raise PersistError(f"{path}: not a checkpoint file")
    if version != SCHEMA_VERSION:
        raise VersionMismatch(f"{path}: checkpoint version {version}, expected {SCHEMA_VERSION}")
    try:
        head = json.loads(raw[_PREFIX.size:_PREFIX.size + hlen])
    except json.JSONDecodeError as exc:
        raise PersistError(f"{path}: corrupt header") from exc
    body = raw[_PREFIX.size + hlen:]
    if len(body) != head.get("nbytes"):
        raise PersistError(f"{path}: coefficient block has {len(body)} bytes, header says {head.get('nbytes')}")
    g = head["grid"]
    grid = make_grid(g["d"], g["N"], g["L"], g["n"])
    coeffs = np.frombuffer(body, dtype="<c16").reshape(grid.shape).copy()
    return WaveState(grid, coeffs, SPACE, float(head["t"])), head


def persist(result, path) -> Path:
    """Write by suffix: ``.json`` for results with ``to_dict``/``kind``, ``.ckpt`` for states."""
    path = Path(path)
    if path.suffix == ".ckpt":
        return save_checkpoint(path, result)
    if path.suffix == ".json":
        return save_json(path, getattr(result, "kind", type(result).__name__), result.to_dict())
    if path.suffix == ".csv":
        header, rows = result.table()
        return write_csv(path, header, rows)
    raise PersistError(f"unsupported suffix {path.suffix!r}")


def load(path):
    """Inverse of :func:`persist` for JSON results and checkpoints."""
    path = Path(path)
    if path.suffix == ".ckpt":
        return load_checkpoint(path)[0]
    if path.suffix == ".json":
        payload = load_json(path)
        kind = json.loads(path.read_text())["kind"]
        from . import experiments

        cls = experiments.RESULT_TYPES.get(kind)
        return cls.from_dict(payload) if cls is not None else payload
    if path.suffix == ".csv":
        return read_csv(path)
    raise PersistError(f"unsupported suffix {path.suffix!r}")
