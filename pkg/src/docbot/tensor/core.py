"""Dense tensors with a reverse-mode tape.

Tensors wrap row-major numpy arrays of rank <= 4.  Inside a `with Tape()`
block every differentiable op appends a node; `backward` replays the tape
in exact reverse, accumulating (+=) into Parameter gradient buffers and
dropping intermediate gradients as soon as their producer is processed.
Ops never mutate their inputs; parameter values change only in the
optimizer.
"""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from ..errors import ShapeError, TrainingError

_DEFAULT_DTYPE = np.float64


def set_default_dtype(dtype) -> None:
    """Global precision mode: float64 for checks, float32 for speed."""
    global _DEFAULT_DTYPE
    dt = np.dtype(dtype)
    if dt not in (np.dtype(np.float32), np.dtype(np.float64)):
        raise ValueError(f"unsupported dtype {dtype}")
    _DEFAULT_DTYPE = dt.type


def default_dtype():
    return _DEFAULT_DTYPE


class Tensor:
    __slots__ = ("data", "requires_grad", "grad")

    def __init__(self, data, requires_grad: bool = False, dtype=None):
        arr = np.asarray(data)
        if arr.dtype.kind != "f" or dtype is not None:
            arr = arr.astype(dtype if dtype is not None else _DEFAULT_DTYPE)
        if arr.ndim > 4:
            raise ShapeError(f"rank {arr.ndim} exceeds the supported maximum of 4")
        self.data = arr
        self.requires_grad = requires_grad
        self.grad: np.ndarray | None = None

    @property
    def shape(self) -> tuple[int, ...]:
        return self.data.shape

    @property
    def ndim(self) -> int:
        return self.data.ndim

    @property
    def dtype(self):
        return self.data.dtype

    def item(self) -> float:
        return float(self.data.reshape(-1)[0])

    def __repr__(self) -> str:
        return f"Tensor(shape={self.shape}, requires_grad={self.requires_grad})"


class Parameter(Tensor):
    """A named learnable tensor with a persistent gradient buffer."""

    __slots__ = ("name",)

    def __init__(self, data, name: str, dtype=None):
        super().__init__(data, requires_grad=True, dtype=dtype)
        self.name = name
        self.grad = np.zeros_like(self.data)

    def zero_grad(self) -> None:
        self.grad[...] = 0.0

    def __repr__(self) -> str:
        return f"Parameter({self.name!r}, shape={self.shape})"


class _Node:
    __slots__ = ("out", "parents", "backward_fn")

    def __init__(self, out: Tensor, parents: tuple[Tensor, ...], backward_fn: Callable):
        self.out = out
        self.parents = parents
        self.backward_fn = backward_fn


_STACK: list["Tape"] = []


class Tape:
    """Ordered record of executed differentiable ops."""

    def __init__(self) -> None:
        self.nodes: list[_Node] = []

    def __enter__(self) -> "Tape":
        _STACK.append(self)
        return self

    def __exit__(self, *exc) -> None:
        _STACK.pop()


def active_tape() -> Tape | None:
    return _STACK[-1] if _STACK else None


def record(out: Tensor, parents: Sequence[Tensor], backward_fn: Callable) -> None:
    tape = active_tape()
    if tape is None:
        return
    if any(p.requires_grad for p in parents):
        out.requires_grad = True
        tape.nodes.append(_Node(out, tuple(parents), backward_fn))


def backward(tape: Tape, loss: Tensor) -> None:
    """Accumulate d(loss)/d(param) into every reachable Parameter.grad."""
    if loss.data.size != 1:
        raise TrainingError(f"loss must be scalar, got shape {loss.shape}")
    if not loss.requires_grad:
        return
    grads: dict[int, np.ndarray] = {id(loss): np.ones_like(loss.data)}
    leaf_refs: dict[int, Tensor] = {}
    for node in reversed(tape.nodes):
        g = grads.pop(id(node.out), None)
        if g is None:
            continue
        parent_grads = node.backward_fn(g)
        for parent, pg in zip(node.parents, parent_grads):
            if pg is None or not parent.requires_grad:
                continue
            if isinstance(parent, Parameter):
                parent.grad += pg
            else:
                key = id(parent)
                if key in grads:
                    grads[key] = grads[key] + pg
                else:
                    grads[key] = pg
                    leaf_refs[key] = parent
    # whatever was never popped belongs to non-parameter leaves
    for key, g in grads.items():
        t = leaf_refs.get(key)
        if t is not None:
            t.grad = g if t.grad is None else t.grad + g
