"""Binary network checkpoints.

Layout: ``b"ADVB"``, version (u32), layer count (u32), layer sizes (u32 each),
then the parameters as little-endian float64, layer by layer, weight
(row-major ``(out, in)``) then bias.
"""

import logging
import struct
from pathlib import Path
from typing import Union

import numpy as np

from advbench.core.errors import CheckpointError, ShapeError
from advbench.rl.mlp import Mlp

log = logging.getLogger(__name__)

MAGIC = b"ADVB"
VERSION = 1


def encode_checkpoint(net: Mlp) -> bytes:
    header = MAGIC + struct.pack("<II", VERSION, len(net.layer_sizes))
    header += struct.pack(f"<{len(net.layer_sizes)}I", *net.layer_sizes)
    return header + net.flat_parameters().astype("<f8").tobytes()


def decode_checkpoint(data: bytes, head=None) -> Mlp:
    if len(data) < 12 or data[:4] != MAGIC:
        raise CheckpointError("not an advbench checkpoint")
    version, count = struct.unpack_from("<II", data, 4)
    if version != VERSION:
        raise CheckpointError(f"unsupported checkpoint version {version}")
    offset = 12 + 4 * count
    if len(data) < offset:
        raise CheckpointError("truncated checkpoint header")
    sizes = list(struct.unpack_from(f"<{count}I", data, 12))
    try:
        net = Mlp(sizes, head)
    except ShapeError as exc:
        raise CheckpointError(f"invalid layer sizes in checkpoint: {exc}") from exc
    if (len(data) - offset) % 8:
        raise CheckpointError("checkpoint payload is not a whole number of float64 values")
    values = np.frombuffer(data, dtype="<f8", offset=offset)
    if values.size != net.parameter_count():
        raise CheckpointError(
            f"checkpoint holds {values.size} parameters, layers need {net.parameter_count()}"
        )
    net.set_flat_parameters(values)
    return net


def save_checkpoint(net: Mlp, path: Union[str, Path]):
    Path(path).write_bytes(encode_checkpoint(net))
    log.debug(f"Wrote checkpoint {path}...")


def load_checkpoint(path: Union[str, Path], head=None) -> Mlp:
    """Load a network; the output head is not stored and must be supplied."""
    path = Path(path)
    if not path.exists():
        raise CheckpointError(f"{path} does not exist...")
    return decode_checkpoint(path.read_bytes(), head)
