"""Gated recurrent unit built from the primitive op set.

    z = sigmoid(x W_z + h U_z + b_z)
    r = sigmoid(x W_r + h U_r + b_r)
    hbar = tanh(x W_h + (r * h) U_h + b_h)
    h' = (1 - z) * h + z * hbar

With all-zero parameters z = 0.5 and hbar = 0, so h' = 0.5 * h.
"""

from __future__ import annotations

from dataclasses import dataclass, fields

import numpy as np

from .core import Parameter, Tensor
from .init import xavier, zeros
from .ops import add, matmul, mul, reshape, sigmoid, sub, tanh


@dataclass
class GruParams:
    w_z: Parameter
    u_z: Parameter
    b_z: Parameter
    w_r: Parameter
    u_r: Parameter
    b_r: Parameter
    w_h: Parameter
    u_h: Parameter
    b_h: Parameter

    @classmethod
    def create(cls, input_dim: int, hidden_dim: int, rng: np.random.Generator, prefix: str, dtype=None) -> "GruParams":
        def w(name):
            return xavier((input_dim, hidden_dim), rng, f"{prefix}.{name}", dtype)

        def u(name):
            return xavier((hidden_dim, hidden_dim), rng, f"{prefix}.{name}", dtype)

        def b(name):
            return zeros((hidden_dim,), f"{prefix}.{name}", dtype)

        return cls(w("w_z"), u("u_z"), b("b_z"), w("w_r"), u("u_r"), b("b_r"), w("w_h"), u("u_h"), b("b_h"))

    def parameters(self) -> list[Parameter]:
        return [getattr(self, f.name) for f in fields(self)]

    @property
    def hidden_dim(self) -> int:
        return self.u_z.shape[0]


def gru_step_precomputed(xz: Tensor, xr: Tensor, xh: Tensor, h_prev: Tensor, params: GruParams) -> Tensor:
    """Gate math with the input projections x@W_* already computed, so a
    sequence encoder can batch them across time steps."""
    z = sigmoid(add(add(xz, matmul(h_prev, params.u_z)), params.b_z))
    r = sigmoid(add(add(xr, matmul(h_prev, params.u_r)), params.b_r))
    hbar = tanh(add(add(xh, matmul(mul(r, h_prev), params.u_h)), params.b_h))
    return add(mul(sub(1.0, z), h_prev), mul(z, hbar))


def gru_step(x: Tensor, h_prev: Tensor, params: GruParams) -> Tensor:
    """One GRU update; accepts (d,) vectors or (B, d) batches."""
    vector_in = x.ndim == 1
    if vector_in:
        x = reshape(x, (1, x.shape[0]))
        h_prev = reshape(h_prev, (1, h_prev.shape[0]))
    h = gru_step_precomputed(
        matmul(x, params.w_z), matmul(x, params.w_r), matmul(x, params.w_h), h_prev, params
    )
    if vector_in:
        h = reshape(h, (h.shape[1],))
    return h
