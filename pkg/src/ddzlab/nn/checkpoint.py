"""Checkpoint file format.

Layout: magic, little-endian uint32 header length, JSON header
(format version, spec hash, feature-layout hash, update counter, tensor
manifest), then the named tensors as raw little-endian blobs in manifest
order.
"""

from __future__ import annotations

import json
import struct

import numpy as np

MAGIC = b"DDZCKPT1"
FORMAT_VERSION = 1


class CheckpointMismatch(RuntimeError):
    """Spec or feature-layout hash does not match the running code."""


def save_checkpoint(path, params: dict, spec_hash: str, layout_hash: str, update_counter: int):
    manifest = []
    blobs = []
    for name in sorted(params):
        arr = np.ascontiguousarray(params[name])
        le = arr.astype(arr.dtype.newbyteorder("<"), copy=False)
        manifest.append({"name": name, "dtype": str(arr.dtype), "shape": list(arr.shape)})
        blobs.append(le.tobytes())
    header = json.dumps(
        {
            "format_version": FORMAT_VERSION,
            "spec_hash": spec_hash,
            "layout_hash": layout_hash,
            "update_counter": int(update_counter),
            "tensors": manifest,
        }
    ).encode()
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(struct.pack("<I", len(header)))
        f.write(header)
        for blob in blobs:
            f.write(blob)


def read_header(path) -> dict:
    with open(path, "rb") as f:
        if f.read(len(MAGIC)) != MAGIC:
            raise CheckpointMismatch(f"{path} is not a checkpoint file")
        (hlen,) = struct.unpack("<I", f.read(4))
        return json.loads(f.read(hlen).decode())


def load_checkpoint(path, expect_spec_hash=None, expect_layout_hash=None):
    """Returns (params dict, header dict)."""
    with open(path, "rb") as f:
        if f.read(len(MAGIC)) != MAGIC:
            raise CheckpointMismatch(f"{path} is not a checkpoint file")
        (hlen,) = struct.unpack("<I", f.read(4))
        header = json.loads(f.read(hlen).decode())
        if header["format_version"] != FORMAT_VERSION:
            raise CheckpointMismatch(f"unsupported format version {header['format_version']}")
        if expect_spec_hash is not None and header["spec_hash"] != expect_spec_hash:
            raise CheckpointMismatch(
                f"spec hash {header['spec_hash']} != expected {expect_spec_hash}"
            )
        if expect_layout_hash is not None and header["layout_hash"] != expect_layout_hash:
            raise CheckpointMismatch(
                f"feature-layout hash {header['layout_hash']} != expected {expect_layout_hash}"
            )
        params = {}
        for entry in header["tensors"]:
            dtype = np.dtype(entry["dtype"]).newbyteorder("<")
            count = int(np.prod(entry["shape"])) if entry["shape"] else 1
            buf = f.read(count * dtype.itemsize)
            arr = np.frombuffer(buf, dtype=dtype).reshape(entry["shape"])
            params[entry["name"]] = arr.astype(np.dtype(entry["dtype"]))
        return params, header
