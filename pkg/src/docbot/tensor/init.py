"""Parameter initialization. Matrices get uniform Xavier bounds
+-sqrt(6/(fan_in+fan_out)); biases start at zero."""

from __future__ import annotations

import math

import numpy as np

from .core import Parameter, default_dtype


def _fans(shape: tuple[int, ...]) -> tuple[int, int]:
    if len(shape) == 1:
        return shape[0], 1
    if len(shape) == 2:
        return shape[0], shape[1]
    if len(shape) == 4:  # conv filters (F, C, kh, kw)
        receptive = shape[2] * shape[3]
        return shape[1] * receptive, shape[0] * receptive
    raise ValueError(f"no fan convention for shape {shape}")


def xavier(shape: tuple[int, ...], rng: np.random.Generator, name: str, dtype=None) -> Parameter:
    fan_in, fan_out = _fans(shape)
    bound = math.sqrt(6.0 / (fan_in + fan_out))
    data = rng.uniform(-bound, bound, size=shape)
    return Parameter(data, name=name, dtype=dtype or default_dtype())


def zeros(shape: tuple[int, ...], name: str, dtype=None) -> Parameter:
    return Parameter(np.zeros(shape), name=name, dtype=dtype or default_dtype())
