"""Training loop behaviour, recall evaluation, TF-IDF baseline."""

import math

import numpy as np
import pytest

from docbot.errors import EvaluationError, TrainingError
from docbot.matcher import (
    EvalContext,
    HyperParams,
    MatcherScorer,
    RawExample,
    TfidfScorer,
    TrainingExample,
    Vocabulary,
    corpus_token_seqs,
    encode_example,
    evaluate_recall,
    group_contexts,
    match_score,
    train,
)

HP = HyperParams(
    embed_dim=6, hidden_dim=5, max_utterances=3, max_tokens=5, match_vec_dim=4,
    conv_filters=2, min_token_freq=1, batch_size=8, learning_rate=0.01, epochs=4, seed=0,
)


def synthetic_examples(n=40, seed=0):
    """Order-sensitive toy set: the label is 1 when the response echoes
    the LAST context utterance's topic word."""
    rng = np.random.default_rng(seed)
    topics = ["red", "blue", "green", "gold"]
    raws = []
    for _ in range(n):
        a, b = rng.choice(topics, size=2, replace=False)
        context = [f"i want {a} paint", f"what about {b} paint"]
        pos = f"{b} paint ships today"
        neg = f"{a} paint ships today"
        raws.append(RawExample(context=context, response=pos, label=1))
        raws.append(RawExample(context=context, response=neg, label=0))
    return raws


@pytest.fixture(scope="module")
def tiny_trained():
    raws = synthetic_examples(40)
    vocab = Vocabulary.build(corpus_token_seqs(raws), 1)
    examples = [encode_example(r, vocab, HP.max_utterances, HP.max_tokens) for r in raws]
    hp = HyperParams(**{**HP.__dict__, "epochs": 14, "learning_rate": 0.02, "seed": 3})
    params, history = train(examples, hp, vocab)
    return params, vocab, history


class TestTrain:
    def test_loss_decreases(self, tiny_trained):
        _, _, history = tiny_trained
        assert history.train_loss[-1] < history.train_loss[0]

    def test_lr_zero_leaves_params_unchanged(self):
        raws = synthetic_examples(6)
        vocab = Vocabulary.build(corpus_token_seqs(raws), 1)
        examples = [encode_example(r, vocab, HP.max_utterances, HP.max_tokens) for r in raws]
        hp = HyperParams(**{**HP.__dict__, "learning_rate": 0.0, "epochs": 2})
        params, history = train(examples, hp, vocab)
        fresh = type(params).create(len(vocab), hp)
        for a, b in zip(params.parameters(), fresh.parameters()):
            assert np.array_equal(a.data, b.data), a.name
        assert len(set(round(x, 12) for x in history.train_loss)) == 1

    def test_single_class_rejected(self):
        raws = [RawExample(context=["a"], response="b", label=1)] * 4
        vocab = Vocabulary.build(corpus_token_seqs(raws), 1)
        examples = [encode_example(r, vocab, 2, 4) for r in raws]
        with pytest.raises(TrainingError):
            train(examples, HP, vocab)

    def test_fixed_seed_reproducible(self):
        raws = synthetic_examples(10)
        vocab = Vocabulary.build(corpus_token_seqs(raws), 1)
        examples = [encode_example(r, vocab, HP.max_utterances, HP.max_tokens) for r in raws]
        hp = HyperParams(**{**HP.__dict__, "epochs": 2})
        _, h1 = train(examples, hp, vocab)
        _, h2 = train(examples, hp, vocab)
        assert h1.train_loss == h2.train_loss

    def test_chronology_sensitivity(self, tiny_trained):
        params, vocab, _ = tiny_trained
        ctx = [vocab.encode_text("i want red paint"), vocab.encode_text("what about blue paint")]
        resp = vocab.encode_text("blue paint ships today")
        forward = match_score(ctx, resp, params)
        reversed_ = match_score(list(reversed(ctx)), resp, params)
        assert forward != pytest.approx(reversed_, abs=1e-9)

    def test_trained_model_learned_the_rule(self, tiny_trained):
        params, vocab, _ = tiny_trained
        scorer = MatcherScorer(params, vocab)
        ctx = ["i want gold paint", "what about green paint"]
        scores = scorer.score_many(ctx, ["green paint ships today", "gold paint ships today"])
        assert scores[0] > scores[1]


class TestEvaluateRecall:
    def _contexts(self, n_contexts, n, positive_at, rng=None):
        out = []
        for i in range(n_contexts):
            pos = positive_at if isinstance(positive_at, int) else positive_at(i)
            labels = [1 if j == pos else 0 for j in range(n)]
            out.append(
                EvalContext(
                    context=[f"ctx {i}"],
                    responses=[f"cand {i} {j}" for j in range(n)],
                    labels=labels,
                )
            )
        return out

    def test_oracle_scorer_gives_r1_of_one(self):
        contexts = self._contexts(50, 10, positive_at=7)

        def oracle(ctx, responses):
            return [1.0 if r.endswith(" 7") else 0.0 for r in responses]

        report = evaluate_recall(oracle, contexts, ks=[1, 2, 5], n=10)
        assert report.recalls == {1: 1.0, 2: 1.0, 5: 1.0}

    def test_uniform_random_expectations(self):
        rng = np.random.default_rng(11)
        contexts = self._contexts(2000, 10, positive_at=lambda i: i % 10)

        def uniform(ctx, responses):
            return rng.random(len(responses))

        report = evaluate_recall(uniform, contexts, ks=[1, 5], n=10)
        assert report.recalls[1] == pytest.approx(0.1, abs=0.03)
        assert report.recalls[5] == pytest.approx(0.5, abs=0.05)

    def test_monotone_in_k(self):
        rng = np.random.default_rng(3)
        contexts = self._contexts(200, 10, positive_at=lambda i: i % 10)
        report = evaluate_recall(lambda c, r: rng.random(len(r)), contexts, ks=list(range(1, 11)), n=10)
        values = [report.recalls[k] for k in range(1, 11)]
        assert values == sorted(values)
        assert values[-1] == 1.0

    def test_tie_break_by_input_order(self):
        contexts = [
            EvalContext(context=["c"], responses=["pos", "neg"], labels=[1, 0]),
            EvalContext(context=["c"], responses=["neg", "pos"], labels=[0, 1]),
        ]
        report = evaluate_recall(lambda c, r: [0.5, 0.5], contexts, ks=[1], n=2)
        assert report.recalls[1] == 0.5

    def test_context_without_positive_rejected(self):
        contexts = [EvalContext(context=["c"], responses=["a", "b"], labels=[0, 0])]
        with pytest.raises(EvaluationError):
            evaluate_recall(lambda c, r: [1, 0], contexts, ks=[1], n=2)

    def test_wrong_group_size_rejected(self):
        rows = [
            RawExample(context=["c"], response="a", label=1),
            RawExample(context=["c"], response="b", label=0),
            RawExample(context=["d"], response="a", label=1),
        ]
        with pytest.raises(EvaluationError):
            group_contexts(rows, n=2)

    def test_grouping_by_consecutive_context(self):
        rows = [
            RawExample(context=["c"], response="a", label=1),
            RawExample(context=["c"], response="b", label=0),
            RawExample(context=["d"], response="a", label=0),
            RawExample(context=["d"], response="b", label=1),
        ]
        contexts = group_contexts(rows, n=2)
        assert len(contexts) == 2
        assert contexts[0].responses == ["a", "b"]


class TestTfidf:
    def test_identical_gives_one(self):
        sc = TfidfScorer().fit_texts(["alpha beta", "beta gamma"])
        assert sc.score(["alpha beta"], "alpha beta") == pytest.approx(1.0)

    def test_disjoint_gives_zero(self):
        sc = TfidfScorer().fit_texts(["alpha beta", "gamma delta"])
        assert sc.score(["alpha"], "delta") == 0.0

    def test_hand_computed_three_term_cosine(self):
        sc = TfidfScorer().fit_texts(["a b", "b c", "c"])
        idf_a = math.log(4 / 2) + 1
        idf_b = math.log(4 / 3) + 1
        idf_c = math.log(4 / 3) + 1
        dot = idf_a * idf_a
        nu = math.sqrt(idf_a**2 + idf_b**2)
        nv = math.sqrt(idf_a**2 + idf_c**2)
        assert sc.score(["a b"], "a c") == pytest.approx(dot / (nu * nv), abs=1e-12)

    def test_empty_response_scores_zero(self):
        sc = TfidfScorer().fit_texts(["a b"])
        assert sc.score(["a"], "") == 0.0


class TestDatasetDuplication:
    def test_duplicated_dataset_same_initial_mean_loss(self):
        raws = synthetic_examples(8)
        vocab = Vocabulary.build(corpus_token_seqs(raws), 1)
        hp = HyperParams(**{**HP.__dict__, "learning_rate": 0.0, "epochs": 1})
        once = [encode_example(r, vocab, hp.max_utterances, hp.max_tokens) for r in raws]
        _, h1 = train(once, hp, vocab)
        _, h2 = train(once + once, hp, vocab)
        assert h1.train_loss[0] == pytest.approx(h2.train_loss[0], abs=1e-12)
