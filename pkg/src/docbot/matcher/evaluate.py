"""Recall-at-k evaluation over grouped candidate rankings.

An evaluation file carries n consecutive lines per context (same context
field, differing responses); positives are located by label.  R_n@k is
the fraction of contexts whose top-k candidates by score contain at
least one positive, ties broken by candidate input order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from ..errors import EvaluationError
from .data import RawExample

# scorer: (context utterances, candidate responses) -> one score each
Scorer = Callable[[list[str], list[str]], Sequence[float]]


@dataclass
class EvalContext:
    context: list[str]
    responses: list[str]
    labels: list[int]


@dataclass
class EvalReport:
    n: int
    recalls: dict[int, float]
    num_contexts: int

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "num_contexts": self.num_contexts,
            "recalls": {f"R{self.n}@{k}": v for k, v in sorted(self.recalls.items())},
        }


def group_contexts(examples: list[RawExample], n: int | None = None) -> list[EvalContext]:
    """Group consecutive lines sharing a context; enforce size n if given."""
    contexts: list[EvalContext] = []
    current: EvalContext | None = None
    for ex in examples:
        if current is not None and ex.context == current.context:
            current.responses.append(ex.response)
            current.labels.append(ex.label)
        else:
            current = EvalContext(context=list(ex.context), responses=[ex.response], labels=[ex.label])
            contexts.append(current)
    for i, ctx in enumerate(contexts):
        if n is not None and len(ctx.responses) != n:
            raise EvaluationError(f"context {i} has {len(ctx.responses)} candidates, expected {n}")
        if sum(ctx.labels) < 1:
            raise EvaluationError(f"context {i} has no positive candidate")
    return contexts


def evaluate_recall(scorer, contexts: list[EvalContext], ks: Sequence[int], n: int) -> EvalReport:
    """`scorer` is a Scorer callable or an object with score_many()."""
    if hasattr(scorer, "score_many"):
        scorer = scorer.score_many
    if not contexts:
        raise EvaluationError("empty evaluation set")
    ks = sorted(set(int(k) for k in ks))
    if any(k < 1 or k > n for k in ks):
        raise EvaluationError(f"every k must lie in 1..{n}, got {ks}")
    hits = {k: 0 for k in ks}
    for ctx in contexts:
        if len(ctx.responses) != n:
            raise EvaluationError(f"context has {len(ctx.responses)} candidates, expected {n}")
        if sum(ctx.labels) < 1:
            raise EvaluationError("context has no positive candidate")
        scores = np.asarray(scorer(ctx.context, ctx.responses), dtype=np.float64)
        order = np.argsort(-scores, kind="stable")  # ties keep input order
        labels = np.asarray(ctx.labels)[order]
        for k in ks:
            if labels[:k].any():
                hits[k] += 1
    total = len(contexts)
    return EvalReport(n=n, recalls={k: hits[k] / total for k in ks}, num_contexts=total)
