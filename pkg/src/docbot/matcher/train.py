"""Matcher training: minibatch BCE with Adam, validation-based early stop."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import TrainingError
from ..tensor import Optimizer, OptimizerConfig, Tape, backward
from .data import TrainingExample, pad_batch
from .evaluate import EvalContext, evaluate_recall
from .model import HyperParams, MatcherParams, matcher_loss, score_batch
from .vocab import Vocabulary, text_tokens

_PATIENCE = 3  # epochs of no validation R@1 improvement before stopping


@dataclass
class TrainHistory:
    train_loss: list[float] = field(default_factory=list)
    val_r1: list[float] = field(default_factory=list)
    best_epoch: int = -1


class MatcherScorer:
    """Callable scorer over raw texts, backed by trained parameters."""

    def __init__(self, params: MatcherParams, vocab: Vocabulary, batch_size: int | None = None):
        self.params = params
        self.vocab = vocab
        self.batch_size = batch_size or params.hp.batch_size

    def score_many(self, context: list[str], responses: list[str]) -> np.ndarray:
        hp = self.params.hp
        ctx_ids = [self.vocab.encode(text_tokens(u))[-hp.max_tokens :] for u in context]
        examples = [
            TrainingExample(
                context=ctx_ids,
                response=self.vocab.encode(text_tokens(r))[-hp.max_tokens :],
                label=0,
            )
            for r in responses
        ]
        scores = np.empty(len(examples), dtype=np.float64)
        for lo in range(0, len(examples), self.batch_size):
            chunk = examples[lo : lo + self.batch_size]
            ctx, resp, _ = pad_batch(chunk, hp.max_utterances, hp.max_tokens)
            scores[lo : lo + len(chunk)] = score_batch(self.params, ctx, resp)
        return scores

    def __call__(self, context: list[str], responses: list[str]) -> np.ndarray:
        return self.score_many(context, responses)


def _epoch_batches(n: int, batch_size: int, rng: np.random.Generator):
    order = rng.permutation(n)
    for lo in range(0, n, batch_size):
        yield order[lo : lo + batch_size]


def train(
    examples: list[TrainingExample],
    hp: HyperParams,
    vocab: Vocabulary,
    val_contexts: list[EvalContext] | None = None,
    log=None,
) -> tuple[MatcherParams, TrainHistory]:
    """Train from scratch; returns best-validation parameters when a
    validation set is given, else the final parameters."""
    labels = {ex.label for ex in examples}
    if labels != {0, 1}:
        raise TrainingError("training set must contain both labels")
    params = MatcherParams.create(len(vocab), hp)
    opt = Optimizer(params.parameters(), OptimizerConfig(algorithm="adam", lr=hp.learning_rate))
    rng = np.random.default_rng(hp.seed)
    history = TrainHistory()
    best_values: dict[str, np.ndarray] | None = None
    best_r1 = -1.0
    stale = 0
    for epoch in range(hp.epochs):
        loss_sum = 0.0
        for batch_idx in _epoch_batches(len(examples), hp.batch_size, rng):
            batch = [examples[i] for i in batch_idx]
            ctx, resp, y = pad_batch(batch, hp.max_utterances, hp.max_tokens)
            opt.zero_grad()
            with Tape() as tape:
                loss = matcher_loss(params, ctx, resp, y)
            backward(tape, loss)
            opt.step()
            loss_sum += loss.item() * len(batch)
        history.train_loss.append(loss_sum / len(examples))
        if val_contexts:
            scorer = MatcherScorer(params, vocab)
            n = len(val_contexts[0].responses)
            report = evaluate_recall(scorer, val_contexts, ks=[1], n=n)
            r1 = report.recalls[1]
            history.val_r1.append(r1)
            if log:
                log(f"epoch {epoch}: loss {history.train_loss[-1]:.4f} val R@1 {r1:.3f}")
            if r1 > best_r1:
                best_r1 = r1
                best_values = params.copy_values()
                history.best_epoch = epoch
                stale = 0
            else:
                stale += 1
                if stale >= _PATIENCE:
                    break
        elif log:
            log(f"epoch {epoch}: loss {history.train_loss[-1]:.4f}")
    if best_values is not None:
        params.load_values(best_values)
    return params, history
