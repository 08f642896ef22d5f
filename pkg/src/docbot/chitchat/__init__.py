from .canned import CannedResponder, load_canned
from .seq2seq import (
    BOS_ID,
    EOS_ID,
    PAD_ID,
    UNK_ID,
    ChatVocab,
    DecodeConfig,
    Seq2SeqHyperParams,
    Seq2SeqParams,
    beam_decode,
    detokenize,
    generate_reply,
    greedy_decode,
    load_seq2seq,
    read_pairs_jsonl,
    save_seq2seq,
    train_seq2seq,
)

__all__ = [
    "BOS_ID", "CannedResponder", "ChatVocab", "DecodeConfig", "EOS_ID", "PAD_ID",
    "Seq2SeqHyperParams", "Seq2SeqParams", "UNK_ID", "beam_decode", "detokenize",
    "generate_reply", "greedy_decode", "load_canned", "load_seq2seq",
    "read_pairs_jsonl", "save_seq2seq", "train_seq2seq",
]
