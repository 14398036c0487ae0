"""Named parameter collections and their on-disk format.

File layout (all numbers little-endian float64)::

    ACWI-PARAMS 1
    <name> <dim0,dim1,...> <byte offset>
    ...
    END
    <raw data>

Offsets are relative to the first byte after the ``END`` line.
"""

from __future__ import annotations

import hashlib
from collections import OrderedDict
from pathlib import Path

import numpy as np

from acwi.errors import ConfigError
from acwi.nn.tensor import Tensor

MAGIC = "ACWI-PARAMS 1"


class ParamSet:
    """Ordered ``name -> Tensor`` map whose tensors keep persistent grads."""

    def __init__(self):
        self._entries = OrderedDict()

    def add(self, name, values):
        if name in self._entries:
            raise ConfigError(f"duplicate parameter name {name!r}")
        values = np.array(values, dtype=np.float64)
        t = Tensor(values, requires_grad=True, name=name)
        t.grad = np.zeros_like(values)
        self._entries[name] = t
        return t

    def __getitem__(self, name):
        return self._entries[name]

    def __contains__(self, name):
        return name in self._entries

    def __iter__(self):
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def items(self):
        return self._entries.items()

    def values(self):
        return self._entries.values()

    def names(self):
        return list(self._entries)

    def num_values(self):
        return sum(t.data.size for t in self._entries.values())

    def zero_grad(self):
        for t in self._entries.values():
            t.grad[...] = 0.0

    def flat_values(self):
        return np.concatenate([t.data.ravel() for t in self._entries.values()])

    def flat_grads(self):
        return np.concatenate([t.grad.ravel() for t in self._entries.values()])

    def set_flat_values(self, flat):
        flat = np.asarray(flat, dtype=np.float64)
        if flat.size != self.num_values():
            raise ConfigError(f"expected {self.num_values()} values, got {flat.size}")
        i = 0
        for t in self._entries.values():
            n = t.data.size
            t.data[...] = flat[i:i + n].reshape(t.data.shape)
            i += n

    def checksum(self):
        h = hashlib.sha1()
        for name, t in self._entries.items():
            h.update(name.encode())
            h.update(np.ascontiguousarray(t.data, dtype="<f8").tobytes())
        return h.hexdigest()

    def state_dict(self):
        return OrderedDict((k, t.data.copy()) for k, t in self._entries.items())

    def load_state_dict(self, arrays):
        missing = set(self._entries) - set(arrays)
        extra = set(arrays) - set(self._entries)
        if missing or extra:
            raise ConfigError(f"parameter mismatch: missing={sorted(missing)} extra={sorted(extra)}")
        for k, t in self._entries.items():
            a = np.asarray(arrays[k], dtype=np.float64)
            if a.shape != t.data.shape:
                raise ConfigError(f"shape mismatch for {k!r}: {a.shape} vs {t.data.shape}")
            t.data[...] = a


def save_arrays(path, arrays):
    """Write an ordered ``name -> array`` mapping in the parameter file format."""
    lines = [MAGIC]
    blobs = []
    offset = 0
    for name, a in arrays.items():
        if any(c.isspace() for c in name):
            raise ConfigError(f"array name may not contain whitespace: {name!r}")
        a = np.ascontiguousarray(a, dtype="<f8")
        dims = ",".join(str(d) for d in a.shape)
        lines.append(f"{name} {dims} {offset}")
        raw = a.tobytes()
        blobs.append(raw)
        offset += len(raw)
    lines.append("END")
    path = Path(path)
    with open(path, "wb") as fh:
        fh.write(("\n".join(lines) + "\n").encode("ascii"))
        for raw in blobs:
            fh.write(raw)
    return path


def load_arrays(path):
    with open(path, "rb") as fh:
        blob = fh.read()
    marker = b"\nEND\n"
    end = blob.find(marker)
    if not blob.startswith(MAGIC.encode()) or end < 0:
        raise ConfigError(f"{path}: not a parameter file")
    header = blob[:end].decode("ascii").splitlines()[1:]
    data = blob[end + len(marker):]
    out = OrderedDict()
    for line in header:
        name, dims, offset = line.split(" ")
        shape = tuple(int(d) for d in dims.split(",")) if dims else ()
        n = int(np.prod(shape, dtype=np.int64))
        start = int(offset)
        stop = start + 8 * n
        if stop > len(data):
            raise ConfigError(f"{path}: truncated data for {name!r}")
        out[name] = np.frombuffer(data[start:stop], dtype="<f8").reshape(shape).astype(np.float64)
    return out


def save_params(path, params):
    return save_arrays(path, params.state_dict())


def load_params(path, params):
    params.load_state_dict(load_arrays(path))
    return params
