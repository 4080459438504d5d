"""Checkpoint container: a JSON header plus a flat list of float64 tensors.

Layout: magic ``NFT1`` | u32 header length | header JSON (utf-8) | raw
little-endian float64 data, tensors concatenated in manifest order.  The
header carries the tensor manifest (name, shape) and an arbitrary ``meta``
dict, so controllers, the supernet, cost models, and final-trained models
all share one format.  Writes are atomic (temp file + rename); any size or
magic mismatch raises CheckpointError and leaves the caller untouched.
"""

import json
import os
import struct
import tempfile

import numpy as np

from ..errors import CheckpointError

MAGIC = b"NFT1"


def save_tensors(path, tensors, meta=None):
    """tensors: ordered dict/list of (name, array); meta: JSON-serializable dict."""
    if isinstance(tensors, dict):
        items = list(tensors.items())
    else:
        items = list(tensors)
    manifest = []
    for name, arr in items:
        arr = np.asarray(arr, dtype=np.float64)
        manifest.append({"name": name, "shape": list(arr.shape)})
    header = json.dumps({"meta": meta or {}, "tensors": manifest}).encode("utf-8")
    dirname = os.path.dirname(os.path.abspath(path))
    os.makedirs(dirname, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=dirname, suffix=".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(MAGIC)
            fh.write(struct.pack("<I", len(header)))
            fh.write(header)
            for _, arr in items:
                fh.write(np.ascontiguousarray(arr, dtype=np.float64).tobytes())
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)


def load_tensors(path):
    """Returns (tensors: dict name->array, meta: dict). Raises CheckpointError."""
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError as exc:
        raise CheckpointError(f"cannot read checkpoint {path}: {exc}") from exc
    if len(blob) < 8 or blob[:4] != MAGIC:
        raise CheckpointError(f"{path}: not a nasforge checkpoint (bad magic)")
    (header_len,) = struct.unpack("<I", blob[4:8])
    if len(blob) < 8 + header_len:
        raise CheckpointError(f"{path}: truncated header")
    try:
        header = json.loads(blob[8 : 8 + header_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CheckpointError(f"{path}: corrupt header: {exc}") from exc
    if "tensors" not in header or "meta" not in header:
        raise CheckpointError(f"{path}: malformed header")
    offset = 8 + header_len
    tensors = {}
    for entry in header["tensors"]:
        shape = tuple(entry["shape"])
        count = int(np.prod(shape)) if shape else 1
        nbytes = count * 8
        if offset + nbytes > len(blob):
            raise CheckpointError(f"{path}: truncated tensor data for {entry['name']}")
        arr = np.frombuffer(blob[offset : offset + nbytes], dtype="<f8").reshape(shape)
        tensors[entry["name"]] = arr.copy()
        offset += nbytes
    if offset != len(blob):
        raise CheckpointError(f"{path}: trailing bytes after tensor data")
    return tensors, header["meta"]
