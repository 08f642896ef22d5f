"""Operator command line.

Exit codes: 0 success, 1 usage error, 2 data error, 3 model error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import ConfigurationError, DataError, DocbotError, ModelError


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2; we use 1 for usage
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="docbot", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ingest", help="preprocess and index documents")
    p.add_argument("path", help="a UTF-8 text file or a directory of .txt files")
    p.add_argument("--data-dir", default="./data")
    p.add_argument("--title", default=None)

    p = sub.add_parser("index", help="rebuild per-document indexes")
    p.add_argument("--rebuild", action="store_true", required=True)
    p.add_argument("--data-dir", default="./data")

    p = sub.add_parser("train-matcher", help="train the response ranker")
    p.add_argument("--data", required=True, help="training JSONL (context/response/label)")
    p.add_argument("--val", default=None, help="validation JSONL, grouped candidate blocks")
    p.add_argument("--out", required=True)
    p.add_argument("--no-self-match", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epochs", type=int, default=10)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--lr", type=float, default=0.001)
    p.add_argument("--embed-dim", type=int, default=100)
    p.add_argument("--hidden-dim", type=int, default=100)
    p.add_argument("--max-utterances", type=int, default=10)
    p.add_argument("--max-tokens", type=int, default=50)
    p.add_argument("--match-dim", type=int, default=50)
    p.add_argument("--conv-filters", type=int, default=8)
    p.add_argument("--min-freq", type=int, default=2)
    p.add_argument("--dtype", choices=["float32", "float64"], default="float64")

    p = sub.add_parser("train-chitchat", help="train the fallback generator")
    p.add_argument("--pairs", required=True, help="JSONL with query/reply pairs")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--epochs", type=int, default=60)
    p.add_argument("--embed-dim", type=int, default=32)
    p.add_argument("--hidden-dim", type=int, default=48)
    p.add_argument("--lr", type=float, default=0.01)

    p = sub.add_parser("eval", help="recall-at-k over grouped candidates")
    p.add_argument("--model", default=None, help="matcher model file")
    p.add_argument("--tfidf", action="store_true", help="evaluate the TF-IDF baseline instead")
    p.add_argument("--train-data", default=None, help="corpus for TF-IDF idf statistics")
    p.add_argument("--data", required=True)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--k", default="1,2,5")
    p.add_argument("--json", action="store_true", dest="as_json")

    p = sub.add_parser("gen-data", help="emit the synthetic dialogue corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--contexts", type=int, default=5000)
    p.add_argument("--valid-contexts", type=int, default=200)
    p.add_argument("--eval-contexts", type=int, default=500)
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("chat", help="terminal REPL over one document")
    p.add_argument("--doc", required=True, help="UTF-8 document file")
    p.add_argument("--model", default=None, help="matcher model file")
    p.add_argument("--chitchat-model", default=None)
    p.add_argument("--threshold", type=float, default=0.3)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--config", default=None)

    sub.add_parser("gradcheck", help="finite-difference gradient suite")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _dispatch(args)
    except (DataError, ConfigurationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ModelError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except DocbotError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def _dispatch(args) -> int:
    if args.command == "ingest":
        return _cmd_ingest(args)
    if args.command == "index":
        return _cmd_index(args)
    if args.command == "train-matcher":
        return _cmd_train_matcher(args)
    if args.command == "train-chitchat":
        return _cmd_train_chitchat(args)
    if args.command == "eval":
        return _cmd_eval(args)
    if args.command == "gen-data":
        return _cmd_gen_data(args)
    if args.command == "chat":
        return _cmd_chat(args)
    if args.command == "serve":
        return _cmd_serve(args)
    if args.command == "gradcheck":
        return _cmd_gradcheck(args)
    raise AssertionError(f"unhandled command {args.command}")


def _cmd_ingest(args) -> int:
    from .service.storage import DocumentStore

    path = Path(args.path)
    if not path.exists():
        raise DataError(f"no such file or directory: {path}")
    files = sorted(path.glob("*.txt")) if path.is_dir() else [path]
    if not files:
        raise DataError(f"no .txt files under {path}")
    store = DocumentStore(args.data_dir)
    for f in files:
        record = store.ingest(f.read_text(encoding="utf-8"), args.title or f.stem)
        print(f"{record.doc_id}  sentences={len(record.sentences)}  triples={record.n_triples}  {f}")
    return 0


def _cmd_index(args) -> int:
    from .service.storage import DocumentStore

    store = DocumentStore(args.data_dir)
    count = store.rebuild_indexes()
    print(f"rebuilt {count} document index(es) under {args.data_dir}")
    return 0


def _matcher_hp(args):
    from .matcher import HyperParams

    return HyperParams(
        embed_dim=args.embed_dim,
        hidden_dim=args.hidden_dim,
        max_utterances=args.max_utterances,
        max_tokens=args.max_tokens,
        match_vec_dim=args.match_dim,
        conv_filters=args.conv_filters,
        min_token_freq=args.min_freq,
        batch_size=args.batch_size,
        learning_rate=args.lr,
        epochs=args.epochs,
        seed=args.seed,
        self_match_enabled=not args.no_self_match,
        dtype=args.dtype,
    )


def _cmd_train_matcher(args) -> int:
    from .matcher import (
        Vocabulary,
        corpus_token_seqs,
        encode_example,
        group_contexts,
        read_dialogue_jsonl,
        save_matcher,
        train,
    )

    hp = _matcher_hp(args)
    raw = read_dialogue_jsonl(args.data)
    if not raw:
        raise DataError(f"{args.data}: empty training corpus")
    vocab = Vocabulary.build(corpus_token_seqs(raw), hp.min_token_freq)
    examples = [encode_example(r, vocab, hp.max_utterances, hp.max_tokens) for r in raw]
    val_contexts = None
    if args.val:
        val_contexts = group_contexts(read_dialogue_jsonl(args.val))
    params, history = train(examples, hp, vocab, val_contexts, log=print)
    save_matcher(args.out, params, vocab)
    print(f"saved matcher model to {args.out} (vocab {len(vocab)}, best epoch {history.best_epoch})")
    return 0


def _cmd_train_chitchat(args) -> int:
    from .chitchat import Seq2SeqHyperParams, read_pairs_jsonl, save_seq2seq, train_seq2seq

    hp = Seq2SeqHyperParams(
        embed_dim=args.embed_dim,
        hidden_dim=args.hidden_dim,
        learning_rate=args.lr,
        epochs=args.epochs,
        seed=args.seed,
    )
    pairs = read_pairs_jsonl(args.pairs)
    params, history = train_seq2seq(pairs, hp, log=print)
    save_seq2seq(args.out, params)
    print(f"saved chit-chat model to {args.out} (vocab {len(params.vocab)}, final loss {history[-1]:.4f})")
    return 0


def _cmd_eval(args) -> int:
    from .matcher import TfidfScorer, MatcherScorer, evaluate_recall, group_contexts, load_matcher, read_dialogue_jsonl

    ks = [int(k) for k in str(args.k).split(",") if k.strip()]
    contexts = group_contexts(read_dialogue_jsonl(args.data), n=args.n)
    if args.tfidf:
        if not args.train_data:
            raise DataError("--tfidf needs --train-data for idf statistics")
        scorer = TfidfScorer().fit(read_dialogue_jsonl(args.train_data))
        name = "tfidf"
    else:
        if not args.model:
            raise ModelError("eval needs --model (or --tfidf with --train-data)")
        params, vocab = load_matcher(args.model)
        scorer = MatcherScorer(params, vocab)
        name = str(args.model)
    report = evaluate_recall(scorer, contexts, ks=ks, n=args.n)
    if args.as_json:
        print(json.dumps({"model": name, **report.as_dict()}, sort_keys=True))
    else:
        print(f"model: {name}")
        print(f"contexts: {report.num_contexts}  candidates per context: {report.n}")
        for k in sorted(report.recalls):
            print(f"  R{report.n}@{k}  {report.recalls[k]:.3f}")
    return 0


def _cmd_gen_data(args) -> int:
    from .gendata import generate_corpus

    paths = generate_corpus(
        args.out,
        n_train_contexts=args.contexts,
        n_valid_contexts=args.valid_contexts,
        n_test_contexts=args.eval_contexts,
        n_candidates=args.n,
        seed=args.seed,
    )
    for name, path in paths.items():
        print(f"{name}: {path}")
    return 0


def _cmd_chat(args) -> int:
    from .chitchat import CannedResponder, DecodeConfig, generate_reply, load_canned, load_seq2seq
    from .manager import DialogueManager, ManagerConfig
    from .matcher import MatcherScorer, load_matcher
    from .retrieval import build_index
    from .textprep import PosTagger, RawDocument, load_abbreviations, preprocess_document

    doc_path = Path(args.doc)
    if not doc_path.is_file():
        raise DataError(f"no such document: {doc_path}")
    tagger = PosTagger.from_file()
    doc = RawDocument(doc_id=doc_path.stem, text=doc_path.read_text(encoding="utf-8"))
    sentences = preprocess_document(doc, tagger, load_abbreviations())
    index = build_index(sentences)
    scorer = None
    if args.model:
        params, vocab = load_matcher(args.model)
        scorer = MatcherScorer(params, vocab)
    if args.chitchat_model:
        seq2seq = load_seq2seq(args.chitchat_model)

        def chitchat(q: str) -> str:
            return generate_reply(q, seq2seq, DecodeConfig())

    else:
        chitchat = CannedResponder(load_canned()).reply
    manager = DialogueManager(
        index_provider=lambda ids: index,
        scorer=scorer,
        chitchat=chitchat,
        config=ManagerConfig(score_threshold=args.threshold),
    )
    session = manager.create_session((doc.doc_id,))
    print(f"loaded {len(sentences)} sentences from {doc_path.name}; empty line quits")
    while True:
        try:
            line = input("you> ").strip()
        except EOFError:
            break
        if not line:
            break
        decision = manager.handle_message(session.session_id, line)
        score = f" ({decision.score:.2f})" if decision.score is not None else ""
        print(f"bot[{decision.origin}{score}]> {decision.reply}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app, load_config

    config = load_config(args.config)
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    return 0


def _cmd_gradcheck(_args) -> int:
    from .tensor.suite import run_suite

    failed = 0
    for res in run_suite():
        flag = "PASS" if res.passed else "FAIL"
        print(f"{res.name:34s} max_rel_err={res.max_rel_err:.3e}  {flag}")
        failed += 0 if res.passed else 1
    if failed:
        print(f"{failed} gradient check(s) failed")
        return 3
    print("all gradient checks passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
