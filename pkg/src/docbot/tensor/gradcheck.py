"""Central finite-difference verification of analytic gradients.

For a scalar-valued forward function the analytic gradient of every input
is compared per element against (f(x+eps) - f(x-eps)) / (2 eps) with the
relative error |a - n| / max(1e-8, |a| + |n|).  Runs in float64.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .core import Parameter, Tape, Tensor, backward


@dataclass
class GradCheckResult:
    name: str
    max_rel_err: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_rel_err <= self.tolerance


def check_gradients(
    name: str,
    forward: Callable[[Sequence[Tensor]], Tensor],
    inputs: Sequence[Tensor],
    eps: float = 1e-5,
    tolerance: float = 1e-4,
    stencil5: bool = False,
) -> GradCheckResult:
    """`forward` must map the given tensors to a scalar loss Tensor.

    stencil5 switches to the 5-point central stencil, which tolerates a
    larger step; use it for deep composites whose small gradient
    components would otherwise drown in f-evaluation roundoff.
    """
    for t in inputs:
        t.requires_grad = True
        if isinstance(t, Parameter):
            t.zero_grad()
        else:
            t.grad = None
    with Tape() as tape:
        loss = forward(inputs)
    backward(tape, loss)
    analytic = [np.array(t.grad, copy=True) if t.grad is not None else np.zeros_like(t.data) for t in inputs]

    def numeric_at(flat: np.ndarray, i: int) -> float:
        orig = flat[i]

        def f_at(delta: float) -> float:
            flat[i] = orig + delta
            val = forward(inputs).item()
            flat[i] = orig
            return val

        if not stencil5:
            return (f_at(eps) - f_at(-eps)) / (2.0 * eps)
        return (8.0 * (f_at(eps) - f_at(-eps)) - (f_at(2 * eps) - f_at(-2 * eps))) / (12.0 * eps)

    worst = 0.0
    for t, a in zip(inputs, analytic):
        flat = t.data.reshape(-1)
        for i in range(flat.size):
            numeric = numeric_at(flat, i)
            ai = a.reshape(-1)[i]
            rel = abs(ai - numeric) / max(1e-8, abs(ai) + abs(numeric))
            worst = max(worst, rel)
    return GradCheckResult(name=name, max_rel_err=worst, tolerance=tolerance)
