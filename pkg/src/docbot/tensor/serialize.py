"""Parameter container files: JSON manifest + raw little-endian arrays.

    magic "DBTC" | u16 version | u64 manifest_len | manifest JSON | arrays

The manifest lists name/dtype/shape per array in storage order and holds
an arbitrary `extra` JSON object (vocabulary, hyperparameters).  Arrays
are written C-order little-endian, so round-trips are bit-exact.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from ..errors import ModelError

MAGIC = b"DBTC"
VERSION = 1


def save_arrays(path: str | Path, arrays: dict[str, np.ndarray], extra: dict | None = None) -> None:
    manifest = {
        "format_version": VERSION,
        "arrays": [
            {"name": name, "dtype": str(arr.dtype), "shape": list(arr.shape)}
            for name, arr in arrays.items()
        ],
        "extra": extra or {},
    }
    blob = json.dumps(manifest, ensure_ascii=False, sort_keys=True).encode("utf-8")
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<H", VERSION))
        f.write(struct.pack("<Q", len(blob)))
        f.write(blob)
        for arr in arrays.values():
            le = arr.astype(arr.dtype.newbyteorder("<"), copy=False)
            f.write(np.ascontiguousarray(le).tobytes())


def load_arrays(path: str | Path) -> tuple[dict[str, np.ndarray], dict]:
    data = Path(path).read_bytes()
    if data[:4] != MAGIC:
        raise ModelError(f"{path}: not a parameter container")
    (version,) = struct.unpack_from("<H", data, 4)
    if version != VERSION:
        raise ModelError(f"{path}: unsupported container version {version}")
    (mlen,) = struct.unpack_from("<Q", data, 6)
    manifest = json.loads(data[14 : 14 + mlen].decode("utf-8"))
    arrays: dict[str, np.ndarray] = {}
    off = 14 + mlen
    for entry in manifest["arrays"]:
        dtype = np.dtype(entry["dtype"]).newbyteorder("<")
        shape = tuple(entry["shape"])
        count = int(np.prod(shape)) if shape else 1
        nbytes = count * dtype.itemsize
        arr = np.frombuffer(data[off : off + nbytes], dtype=dtype).reshape(shape)
        arrays[entry["name"]] = arr.astype(np.dtype(entry["dtype"]), copy=True)
        off += nbytes
    if off != len(data):
        raise ModelError(f"{path}: trailing bytes after arrays")
    return arrays, manifest.get("extra", {})
