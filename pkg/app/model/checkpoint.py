"""Binary checkpoint container.

Layout (all integers little-endian):

    magic        8 bytes   b"FGRMCKPT"
    version      uint16    FORMAT_VERSION
    header_len   uint32    length of the JSON header in bytes
    header       UTF-8 JSON, keys sorted: iteration, config_hash,
                 layer_sizes, activation, adam (t + hyper-parameters),
                 rng_state, sampler_cursor, sampler_length
    parameters   float64 LE: W0, b0, W1, b1, ... (row-major, layer order)
    adam m       float64 LE, same order and shapes as the parameters
    adam v       float64 LE, same order and shapes as the parameters
    sampler      int64 LE epoch permutation, sampler_length entries
"""
import hashlib
import json
import os
import struct
from pathlib import Path
from typing import Any, Dict, List

import numpy as np
from pydantic import BaseModel

from app.common.exceptions import CheckpointError
from app.model.mlp import MlpParams
from app.model.optimizer import AdamState

MAGIC = b"FGRMCKPT"
FORMAT_VERSION = 1
_PREFIX = struct.Struct("<8sHI")
_HEADER_KEYS = (
    "iteration",
    "config_hash",
    "layer_sizes",
    "adam",
    "rng_state",
    "sampler_cursor",
    "sampler_length",
)


def config_digest(payload: str) -> str:
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class Checkpoint(BaseModel):
    """Everything needed to resume a run bit-identically."""

    iteration: int
    params: MlpParams
    adam: AdamState
    rng_state: Dict[str, Any]
    sampler_order: np.ndarray
    sampler_cursor: int
    config_hash: str

    class Config:
        arbitrary_types_allowed = True

    def to_bytes(self) -> bytes:
        header = {
            "iteration": self.iteration,
            "config_hash": self.config_hash,
            "layer_sizes": self.params.layer_sizes,
            "activation": self.params.activation,
            "adam": {"t": self.adam.t, **self.adam.hyper()},
            "rng_state": self.rng_state,
            "sampler_cursor": self.sampler_cursor,
            "sampler_length": int(len(self.sampler_order)),
        }
        header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")
        arrays = self.params.arrays() + self.adam.m + self.adam.v
        body = b"".join(np.ascontiguousarray(a, dtype="<f8").tobytes() for a in arrays)
        order = np.ascontiguousarray(self.sampler_order, dtype="<i8").tobytes()
        return (
            _PREFIX.pack(MAGIC, FORMAT_VERSION, len(header_bytes))
            + header_bytes
            + body
            + order
        )

    @classmethod
    def from_bytes(cls, data: bytes) -> "Checkpoint":
        if len(data) < _PREFIX.size:
            raise CheckpointError("Checkpoint is truncated")
        magic, version, header_len = _PREFIX.unpack_from(data)
        if magic != MAGIC:
            raise CheckpointError("Not a checkpoint file (bad magic)")
        if version != FORMAT_VERSION:
            raise CheckpointError(f"Unsupported checkpoint version {version}")
        offset = _PREFIX.size
        try:
            header = json.loads(data[offset : offset + header_len].decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as e:
            raise CheckpointError(f"Corrupt checkpoint header: {e}") from e
        if not isinstance(header, dict):
            raise CheckpointError("Corrupt checkpoint header: expected a JSON object")
        missing = [key for key in _HEADER_KEYS if key not in header]
        if missing:
            raise CheckpointError(f"Checkpoint header is missing {missing}")
        try:
            return cls._decode_body(header, data, offset + header_len)
        except (KeyError, TypeError, ValueError) as e:
            raise CheckpointError(f"Malformed checkpoint header: {e}") from e

    @classmethod
    def _decode_body(cls, header: Dict[str, Any], data: bytes, offset: int) -> "Checkpoint":
        sizes: List[int] = [int(n) for n in header["layer_sizes"]]
        shapes = []
        for fan_in, fan_out in zip(sizes, sizes[1:]):
            shapes += [(fan_out, fan_in), (fan_out,)]

        def read_arrays() -> List[np.ndarray]:
            nonlocal offset
            out = []
            for shape in shapes:
                count = int(np.prod(shape))
                end = offset + 8 * count
                if end > len(data):
                    raise CheckpointError("Checkpoint is truncated")
                out.append(
                    np.frombuffer(data, dtype="<f8", count=count, offset=offset)
                    .astype(np.float64)
                    .reshape(shape)
                )
                offset = end
            return out

        params = MlpParams.from_arrays(read_arrays())
        m, v = read_arrays(), read_arrays()
        length = int(header["sampler_length"])
        if offset + 8 * length != len(data):
            raise CheckpointError("Checkpoint sampler block has the wrong size")
        order = np.frombuffer(data, dtype="<i8", count=length, offset=offset).astype(np.int64)
        adam_header = dict(header["adam"])
        t = adam_header.pop("t")
        return cls(
            iteration=header["iteration"],
            params=params,
            adam=AdamState(m=m, v=v, t=t, **adam_header),
            rng_state=header["rng_state"],
            sampler_order=order,
            sampler_cursor=header["sampler_cursor"],
            config_hash=header["config_hash"],
        )


def save_checkpoint(checkpoint: Checkpoint, path: Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_bytes(checkpoint.to_bytes())
    os.replace(tmp, path)


def load_checkpoint(path: Path) -> Checkpoint:
    try:
        return Checkpoint.from_bytes(Path(path).read_bytes())
    except FileNotFoundError as e:
        raise CheckpointError(f"Checkpoint not found: {path}") from e
