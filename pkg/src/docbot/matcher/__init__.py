from .data import RawExample, TrainingExample, corpus_token_seqs, encode_example, pad_batch, read_dialogue_jsonl
from .evaluate import EvalContext, EvalReport, evaluate_recall, group_contexts
from .model import (
    HyperParams,
    MatcherParams,
    encode_utterance,
    forward_logits,
    load_matcher,
    match_score,
    match_utterance,
    matcher_loss,
    save_matcher,
    score_batch,
    self_match,
    similarity_matrices,
)
from .tfidf import TfidfScorer
from .train import MatcherScorer, TrainHistory, train
from .vocab import PAD_ID, UNK_ID, Vocabulary, text_tokens

__all__ = [
    "EvalContext", "EvalReport", "HyperParams", "MatcherParams", "MatcherScorer",
    "PAD_ID", "RawExample", "TfidfScorer", "TrainHistory", "TrainingExample",
    "UNK_ID", "Vocabulary", "corpus_token_seqs", "encode_example", "encode_utterance",
    "evaluate_recall", "forward_logits", "group_contexts", "load_matcher",
    "match_score", "match_utterance", "matcher_loss", "pad_batch",
    "read_dialogue_jsonl", "save_matcher", "score_batch", "self_match",
    "similarity_matrices", "text_tokens", "train",
]
