"""
Learnable weights of the encoder, CTC head, AR decoder and AMD decoder.
"""

import logging
from typing import Iterator

import numpy as np

from schemas.model_config import ModelConfig
from tensor_core import Tensor

logger = logging.getLogger(__name__)

ENCODER = "encoder"
CTC_HEAD = "ctc"
AR_DECODER = "ar_decoder"
AMD_DECODER = "amd_decoder"
POSITIONS = "positions"

WEIGHT_GROUPS = (ENCODER, CTC_HEAD, AR_DECODER, AMD_DECODER)


def sinusoidal_table(length: int, d_model: int) -> np.ndarray:
    """Fixed sine/cosine position table of shape (length, d_model)."""
    positions = np.arange(length, dtype=np.float64)[:, None]
    rates = np.exp(-np.log(10000.0) * (np.arange(0, d_model, 2, dtype=np.float64) / d_model))
    table = np.zeros((length, d_model))
    table[:, 0::2] = np.sin(positions * rates)
    table[:, 1::2] = np.cos(positions * rates[: d_model // 2])
    return table


def _attention_shapes(prefix: str, d: int) -> dict[str, tuple[int, ...]]:
    shapes = {}
    for proj in ("q", "k", "v", "o"):
        shapes[f"{prefix}.{proj}.weight"] = (d, d)
        shapes[f"{prefix}.{proj}.bias"] = (d,)
    return shapes


def _norm_shapes(prefix: str, d: int) -> dict[str, tuple[int, ...]]:
    return {f"{prefix}.gamma": (d,), f"{prefix}.beta": (d,)}


def _ffn_shapes(prefix: str, d: int, ff: int) -> dict[str, tuple[int, ...]]:
    return {
        f"{prefix}.w1": (d, ff),
        f"{prefix}.b1": (ff,),
        f"{prefix}.w2": (ff, d),
        f"{prefix}.b2": (d,),
    }


def parameter_shapes(config: ModelConfig) -> dict[str, tuple[int, ...]]:
    """
    Name -> shape for every tensor the config implies, in a fixed order.

    Args:
        config: Architecture descriptor.

    Returns:
        Ordered mapping of tensor names to shapes.
    """
    d, ff, v = config.d_model, config.ff_dim, config.vocab_size
    shapes: dict[str, tuple[int, ...]] = {
        f"{ENCODER}.input.weight": (config.feature_dim * config.subsample_factor, d),
        f"{ENCODER}.input.bias": (d,),
    }
    for i in range(config.n_encoder_layers):
        layer = f"{ENCODER}.layers.{i}"
        shapes.update(_norm_shapes(f"{layer}.ln1", d))
        shapes.update(_attention_shapes(f"{layer}.self_attn", d))
        shapes.update(_norm_shapes(f"{layer}.ln2", d))
        shapes.update(_ffn_shapes(f"{layer}.ffn", d, ff))
    shapes.update(_norm_shapes(f"{ENCODER}.final_ln", d))

    shapes[f"{CTC_HEAD}.out.weight"] = (d, v)
    shapes[f"{CTC_HEAD}.out.bias"] = (v,)

    branches = [AR_DECODER] if config.share_decoder_weights else [AR_DECODER, AMD_DECODER]
    for branch in branches:
        shapes[f"{branch}.embed"] = (v, d)
        for i in range(config.n_decoder_layers):
            layer = f"{branch}.layers.{i}"
            shapes.update(_norm_shapes(f"{layer}.ln1", d))
            shapes.update(_attention_shapes(f"{layer}.self_attn", d))
            shapes.update(_norm_shapes(f"{layer}.ln2", d))
            shapes.update(_attention_shapes(f"{layer}.cross_attn", d))
            shapes.update(_norm_shapes(f"{layer}.ln3", d))
            shapes.update(_ffn_shapes(f"{layer}.ffn", d, ff))
        shapes.update(_norm_shapes(f"{branch}.final_ln", d))
        shapes[f"{branch}.out.weight"] = (d, v)
        shapes[f"{branch}.out.bias"] = (v,)

    shapes[POSITIONS] = (config.max_len, d)
    return shapes


class ModelParams:
    """
    All tensors of the tripartite model, keyed by dotted name.

    Treated as immutable once built or loaded: forwards only read it, and the
    optimizer replaces arrays instead of writing into them.

    Attributes:
        config: The architecture descriptor.
        tensors: Name -> Tensor. Every tensor except the position table is trainable.
    """

    def __init__(self, config: ModelConfig, tensors: dict[str, Tensor]):
        expected = parameter_shapes(config)
        if set(expected) != set(tensors):
            missing = sorted(set(expected) - set(tensors))
            extra = sorted(set(tensors) - set(expected))
            raise ValueError(f"Parameter set mismatch: missing={missing[:5]} extra={extra[:5]}")
        for name, shape in expected.items():
            if tensors[name].shape != shape:
                raise ValueError(
                    f"Parameter {name} has shape {tensors[name].shape}, expected {shape}"
                )
        self.config = config
        self.tensors = {name: tensors[name] for name in expected}

    def __getitem__(self, name: str) -> Tensor:
        return self.tensors[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self.tensors)

    def items(self):
        return self.tensors.items()

    def trainable(self) -> dict[str, Tensor]:
        return {name: t for name, t in self.tensors.items() if t.requires_grad}

    def branch_prefix(self, branch: str) -> str:
        """Resolve the parameter prefix of a decoder branch, honouring weight sharing."""
        if branch == AMD_DECODER and self.config.share_decoder_weights:
            return AR_DECODER
        return branch

    def arrays(self) -> dict[str, np.ndarray]:
        return {name: t.data for name, t in self.tensors.items()}

    @classmethod
    def from_arrays(cls, config: ModelConfig, arrays: dict[str, np.ndarray]) -> "ModelParams":
        tensors = {
            name: Tensor(np.array(value, dtype=np.float64), requires_grad=name != POSITIONS, name=name)
            for name, value in arrays.items()
        }
        return cls(config, tensors)


def weight_group(name: str) -> str:
    """The weight group (encoder, ctc, ar_decoder, amd_decoder) a tensor belongs to."""
    return name.split(".", 1)[0]


def init_params(config: ModelConfig, rng: np.random.Generator) -> ModelParams:
    """
    Draw a fresh set of weights.

    Matrices are normal with std 1/sqrt(fan_in), embeddings are unit normal,
    biases start at zero and layer-norm gains at one.

    Args:
        config: Architecture descriptor.
        rng: Generator for the "init" stream.

    Returns:
        Newly initialised parameters.
    """
    arrays: dict[str, np.ndarray] = {}
    for name, shape in parameter_shapes(config).items():
        if name == POSITIONS:
            arrays[name] = sinusoidal_table(config.max_len, config.d_model)
        elif name.endswith(".gamma"):
            arrays[name] = np.ones(shape)
        elif name.endswith((".beta", ".bias", ".b1", ".b2")):
            arrays[name] = np.zeros(shape)
        elif name.endswith(".embed"):
            arrays[name] = rng.normal(0.0, 1.0, size=shape)
        else:
            arrays[name] = rng.normal(0.0, 1.0 / np.sqrt(shape[0]), size=shape)
    params = ModelParams.from_arrays(config, arrays)
    n_values = sum(t.size for t in params.trainable().values())
    logger.info(f"Initialised {len(arrays)} tensors ({n_values} trainable values)")
    return params
