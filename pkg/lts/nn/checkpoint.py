"""Binary parameter checkpoints.

Layout (little-endian): magic ``LTSM``, version u32, parameter count u32, then
per parameter: name length u32, UTF-8 name, rank u32, rank x u32 dims and the
f32 payload in C order.
"""

import struct
from pathlib import Path

import numpy as np

from lts.constants import CHECKPOINT_MAGIC, CHECKPOINT_VERSION
from lts.exceptions import CheckpointError
from lts.logging_config import get_logger
from lts.nn.parameter import Module

logger = get_logger(__name__)

_U32 = struct.Struct("<I")


def encode_state(state: dict[str, np.ndarray]) -> bytes:
    chunks = [CHECKPOINT_MAGIC, _U32.pack(CHECKPOINT_VERSION), _U32.pack(len(state))]
    for name, array in state.items():
        encoded = name.encode("utf-8")
        chunks.append(_U32.pack(len(encoded)))
        chunks.append(encoded)
        chunks.append(_U32.pack(array.ndim))
        chunks.extend(_U32.pack(d) for d in array.shape)
        chunks.append(np.ascontiguousarray(array, dtype="<f4").tobytes())
    return b"".join(chunks)


def decode_state(data: bytes, source: str = "<bytes>") -> dict[str, np.ndarray]:
    """
    Parse checkpoint bytes into name -> float32 array, in stored order.

    Raises:
        CheckpointError: On wrong magic, version or a truncated payload
    """
    offset = 0

    def take(size: int) -> bytes:
        nonlocal offset
        if offset + size > len(data):
            raise CheckpointError(f"{source} is truncated")
        chunk = data[offset : offset + size]
        offset += size
        return chunk

    def u32() -> int:
        return int(_U32.unpack(take(_U32.size))[0])

    magic = take(len(CHECKPOINT_MAGIC))
    if magic != CHECKPOINT_MAGIC:
        raise CheckpointError(f"{source} is not a checkpoint (magic {magic!r})")
    version = u32()
    if version != CHECKPOINT_VERSION:
        raise CheckpointError(f"Unsupported checkpoint version {version}")

    state: dict[str, np.ndarray] = {}
    for _ in range(u32()):
        try:
            name = take(u32()).decode("utf-8")
        except UnicodeDecodeError as e:
            raise CheckpointError(f"{source} holds a malformed parameter name") from e
        shape = tuple(u32() for _ in range(u32()))
        count = int(np.prod(shape, dtype=np.int64))
        payload = take(count * 4)
        state[name] = np.frombuffer(payload, dtype="<f4").reshape(shape).astype(np.float32)

    if offset != len(data):
        raise CheckpointError(f"{source} has {len(data) - offset} trailing bytes")
    return state


def save_checkpoint(model: Module, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    try:
        path.write_bytes(encode_state(model.state_dict()))
    except OSError as e:
        raise CheckpointError(f"Cannot write checkpoint {path}: {e}") from e
    logger.info(
        f"Saved checkpoint {path} ({model.num_parameters()} parameters)",
        extra={"parameters": model.num_parameters()},
    )


def load_checkpoint(model: Module, path: Path) -> Module:
    """Load parameters from `path` into `model` and return it."""
    try:
        data = path.read_bytes()
    except OSError as e:
        raise CheckpointError(f"Cannot read checkpoint {path}: {e}") from e
    model.load_state_dict(decode_state(data, str(path)))
    logger.debug(f"Loaded checkpoint {path}")
    return model
