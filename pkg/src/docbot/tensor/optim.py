"""SGD and Adam with global-norm gradient clipping."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import TrainingError
from .core import Parameter


@dataclass(frozen=True)
class OptimizerConfig:
    algorithm: str = "adam"  # "sgd" | "adam"
    lr: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    clip_norm: float | None = 5.0

    def __post_init__(self) -> None:
        if self.algorithm not in ("sgd", "adam"):
            raise ValueError(f"unknown optimizer algorithm {self.algorithm!r}")


class Optimizer:
    def __init__(self, params: list[Parameter], config: OptimizerConfig = OptimizerConfig()):
        self.params = list(params)
        self.config = config
        self.t = 0
        if config.algorithm == "adam":
            self._m = [np.zeros_like(p.data) for p in self.params]
            self._v = [np.zeros_like(p.data) for p in self.params]

    def zero_grad(self) -> None:
        for p in self.params:
            p.zero_grad()

    def step(self) -> None:
        """Apply one update from the accumulated gradient buffers."""
        cfg = self.config
        for p in self.params:
            if not np.all(np.isfinite(p.grad)):
                raise TrainingError(f"non-finite gradient for parameter {p.name!r}")
        scale = 1.0
        if cfg.clip_norm is not None:
            total = math.sqrt(sum(float(np.sum(p.grad * p.grad)) for p in self.params))
            if total > cfg.clip_norm and total > 0.0:
                scale = cfg.clip_norm / total
        self.t += 1
        if cfg.algorithm == "sgd":
            for p in self.params:
                p.data -= cfg.lr * scale * p.grad
            return
        bc1 = 1.0 - cfg.beta1**self.t
        bc2 = 1.0 - cfg.beta2**self.t
        for i, p in enumerate(self.params):
            g = p.grad * scale
            self._m[i] = cfg.beta1 * self._m[i] + (1.0 - cfg.beta1) * g
            self._v[i] = cfg.beta2 * self._v[i] + (1.0 - cfg.beta2) * (g * g)
            m_hat = self._m[i] / bc1
            v_hat = self._v[i] / bc2
            p.data -= cfg.lr * m_hat / (np.sqrt(v_hat) + cfg.eps)


def optimizer_step(params: list[Parameter], config: OptimizerConfig, state: Optimizer | None = None) -> Optimizer:
    """One-shot functional form; returns the optimizer so Adam state persists."""
    opt = state if state is not None else Optimizer(params, config)
    opt.step()
    return opt
