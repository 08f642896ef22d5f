from .core import Parameter, Tape, Tensor, backward, default_dtype, record, set_default_dtype
from .gru import GruParams, gru_step
from .init import xavier, zeros
from .kernels import USE_NUMBA
from .ops import (
    add,
    attn_scores,
    bce_with_logits,
    concat,
    conv2d,
    embedding_lookup,
    matmul,
    maxpool2d,
    mul,
    narrow,
    neg,
    pad_last2,
    relu,
    reshape,
    sigmoid,
    softmax,
    softmax_xent,
    sub,
    tanh,
    tmean,
    transpose_last2,
    tsum,
)
from .optim import Optimizer, OptimizerConfig, optimizer_step
from .serialize import load_arrays, save_arrays

__all__ = [
    "GruParams", "Optimizer", "OptimizerConfig", "Parameter", "Tape", "Tensor",
    "USE_NUMBA", "add", "attn_scores", "backward", "bce_with_logits", "concat",
    "conv2d", "default_dtype", "embedding_lookup", "gru_step", "load_arrays",
    "matmul", "maxpool2d", "mul", "narrow", "neg", "optimizer_step", "pad_last2",
    "record", "relu", "reshape", "save_arrays", "set_default_dtype", "sigmoid",
    "softmax", "softmax_xent", "sub", "tanh", "tmean", "transpose_last2", "tsum",
    "xavier", "zeros",
]
