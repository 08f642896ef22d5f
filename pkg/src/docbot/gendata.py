"""Deterministic synthetic product-QA dialogue corpus.

Each context is a short shopping consultation about one product: a few
question/answer turns over distinct attributes, ending with a user
question (usually elliptical, naming only the attribute) whose answer is
the positive response.  Distractors mix answers about other attributes
of the same product, the same attribute of other products, and random
answers, so plain lexical overlap with the concatenated context favours
the wrong candidates and the multi-turn signal (which attribute came
last) is what separates models.

Everything is a pure function of the seed: identical seeds give
byte-identical output files.
"""

from __future__ import annotations

import json
import zlib
from pathlib import Path

import numpy as np

from .matcher.data import RawExample

BRANDS = ["falcon", "orion", "nimbus", "vertex", "aurora", "zephyr", "titan", "lumen", "quartz", "onyx"]
MODELS = ["x1", "s2", "pro", "air"]
KINDS = ["laptop", "tablet", "phone", "camera"]

FILLERS = ["hi ,", "hello ,", "thanks .", "by the way ,", "one more thing ,", "please tell me ,"]

ATTRIBUTES: dict[str, dict] = {
    "weight": {
        "questions": [
            "how much does the {p} weigh ?",
            "what is the weight of the {p} ?",
            "is the {p} heavy to carry ?",
        ],
        "followups": ["and the weight ?", "what about the weight ?", "and how heavy is it ?"],
        "answer": "the {p} weighs {v} kilograms .",
        "values": lambda rng: f"{rng.uniform(0.9, 3.4):.1f}",
    },
    "price": {
        "questions": [
            "how much does the {p} cost ?",
            "what is the price of the {p} ?",
            "how expensive is the {p} ?",
        ],
        "followups": ["and the price ?", "what about the price ?", "and how much does it cost ?"],
        "answer": "the {p} costs {v} dollars .",
        "values": lambda rng: str(int(rng.integers(299, 2499) // 10 * 10 + 9)),
    },
    "battery": {
        "questions": [
            "how long does the battery of the {p} last ?",
            "what is the battery life of the {p} ?",
        ],
        "followups": ["and the battery ?", "what about the battery life ?", "how long does the battery last ?"],
        "answer": "the {p} has a battery life of {v} hours .",
        "values": lambda rng: str(int(rng.integers(6, 24))),
    },
    "screen": {
        "questions": [
            "how big is the screen of the {p} ?",
            "what is the screen size of the {p} ?",
        ],
        "followups": ["and the screen ?", "what about the screen size ?", "how big is the screen ?"],
        "answer": "the {p} has a {v} inch screen .",
        "values": lambda rng: f"{rng.uniform(10.5, 17.0):.1f}",
    },
    "storage": {
        "questions": [
            "how much storage does the {p} have ?",
            "what is the storage capacity of the {p} ?",
        ],
        "followups": ["and the storage ?", "what about storage ?", "how much storage does it have ?"],
        "answer": "the {p} comes with {v} gigabytes of storage .",
        "values": lambda rng: str(int(rng.choice([128, 256, 512, 1024]))),
    },
    "color": {
        "questions": [
            "what colors does the {p} come in ?",
            "which color options does the {p} offer ?",
        ],
        "followups": ["and the colors ?", "what about color options ?", "which colors does it come in ?"],
        "answer": "the {p} is available in {v} .",
        "values": lambda rng: str(rng.choice(["midnight blue", "silver", "graphite", "rose gold", "forest green"])),
    },
    "warranty": {
        "questions": [
            "how long is the warranty of the {p} ?",
            "what warranty does the {p} include ?",
        ],
        "followups": ["and the warranty ?", "what about the warranty ?", "how long is the warranty ?"],
        "answer": "the {p} includes a {v} year warranty .",
        "values": lambda rng: str(int(rng.integers(1, 4))),
    },
    "charging": {
        "questions": [
            "does the {p} support fast charging ?",
            "how fast does the {p} charge ?",
        ],
        "followups": ["and the charging ?", "what about fast charging ?", "does it support fast charging ?"],
        "answer": "the {p} supports {v} watt fast charging .",
        "values": lambda rng: str(int(rng.integers(3, 13) * 10)),
    },
}

ATTR_NAMES = list(ATTRIBUTES)

# the showcase product keeps fixed values so the sample document can state them
SHOWCASE_PRODUCT = "falcon x1 laptop"
SHOWCASE_VALUES = {
    "weight": "1.4",
    "price": "1299",
    "battery": "11",
    "screen": "14.0",
    "storage": "512",
    "color": "midnight blue",
    "warranty": "3",
    "charging": "65",
}


def all_products() -> list[str]:
    return [f"{b} {m} {k}" for b in BRANDS for m in MODELS for k in KINDS]


def attribute_value(product: str, attribute: str, seed: int) -> str:
    if product == SHOWCASE_PRODUCT:
        return SHOWCASE_VALUES[attribute]
    key = zlib.crc32(f"{product}|{attribute}|{seed}".encode("utf-8"))
    return ATTRIBUTES[attribute]["values"](np.random.default_rng(key))


def answer_sentence(product: str, attribute: str, seed: int) -> str:
    return ATTRIBUTES[attribute]["answer"].format(p=product, v=attribute_value(product, attribute, seed))


def _question(rng: np.random.Generator, product: str, attribute: str, elliptical: bool) -> str:
    spec = ATTRIBUTES[attribute]
    if elliptical:
        text = str(rng.choice(spec["followups"]))
    else:
        text = str(rng.choice(spec["questions"])).format(p=product)
    if rng.random() < 0.3:
        text = str(rng.choice(FILLERS)) + " " + text
    return text


def make_context(rng: np.random.Generator, seed: int) -> tuple[list[str], str, str, str]:
    """Returns (context utterances, product, final attribute, positive answer)."""
    products = all_products()
    product = str(rng.choice(products))
    n_turns = int(rng.integers(1, 5))
    attrs = list(rng.choice(ATTR_NAMES, size=n_turns + 1, replace=False))
    context: list[str] = []
    for i, attr in enumerate(attrs[:-1]):
        elliptical = i > 0 and rng.random() < 0.5
        context.append(_question(rng, product, attr, elliptical))
        context.append(answer_sentence(product, attr, seed))
    final_attr = attrs[-1]
    elliptical = rng.random() < 0.8
    context.append(_question(rng, product, final_attr, elliptical))
    return context, product, final_attr, answer_sentence(product, final_attr, seed)


def make_distractors(
    rng: np.random.Generator, product: str, final_attr: str, positive: str, n: int, seed: int
) -> list[str]:
    products = all_products()
    out: list[str] = []
    seen = {positive}

    def push(text: str) -> None:
        if text not in seen:
            seen.add(text)
            out.append(text)

    other_attrs = [a for a in ATTR_NAMES if a != final_attr]
    rng.shuffle(other_attrs)
    for attr in other_attrs[:4]:
        push(answer_sentence(product, attr, seed))
    while len(out) < min(7, n - 1):
        push(answer_sentence(str(rng.choice(products)), final_attr, seed))
    while len(out) < n - 1:
        push(answer_sentence(str(rng.choice(products)), str(rng.choice(ATTR_NAMES)), seed))
    return out[: n - 1]


def generate_contexts(n_contexts: int, n_candidates: int, seed: int, salt: int) -> list[list[RawExample]]:
    """Blocks of n_candidates labeled examples, positive first in input order
    randomized within the block."""
    rng = np.random.default_rng((seed, salt))
    blocks: list[list[RawExample]] = []
    for _ in range(n_contexts):
        context, product, final_attr, positive = make_context(rng, seed)
        distractors = make_distractors(rng, product, final_attr, positive, n_candidates, seed)
        responses = [(positive, 1)] + [(d, 0) for d in distractors]
        order = rng.permutation(len(responses))
        blocks.append(
            [RawExample(context=context, response=responses[i][0], label=responses[i][1]) for i in order]
        )
    return blocks


def _write_jsonl(path: Path, examples: list[RawExample]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        for ex in examples:
            f.write(
                json.dumps(
                    {"context": ex.context, "response": ex.response, "label": ex.label},
                    ensure_ascii=False,
                )
                + "\n"
            )


def generate_corpus(
    out_dir: str | Path,
    n_train_contexts: int = 5000,
    n_valid_contexts: int = 200,
    n_test_contexts: int = 500,
    n_candidates: int = 10,
    seed: int = 0,
) -> dict[str, Path]:
    """Write train.jsonl (one positive + one sampled negative per context),
    valid.jsonl and test.jsonl (full n-candidate blocks)."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng((seed, 17))
    train_rows: list[RawExample] = []
    for block in generate_contexts(n_train_contexts, n_candidates, seed, salt=1):
        positive = next(ex for ex in block if ex.label == 1)
        negatives = [ex for ex in block if ex.label == 0]
        train_rows.append(positive)
        train_rows.append(negatives[int(rng.integers(len(negatives)))])
    valid_rows = [ex for block in generate_contexts(n_valid_contexts, n_candidates, seed, salt=2) for ex in block]
    test_rows = [ex for block in generate_contexts(n_test_contexts, n_candidates, seed, salt=3) for ex in block]
    paths = {
        "train": out / "train.jsonl",
        "valid": out / "valid.jsonl",
        "test": out / "test.jsonl",
    }
    _write_jsonl(paths["train"], train_rows)
    _write_jsonl(paths["valid"], valid_rows)
    _write_jsonl(paths["test"], test_rows)
    return paths


def _tidy(sentence: str) -> str:
    text = sentence.replace(" .", ".").replace(" ,", ",").replace(" ?", "?")
    return text[0].upper() + text[1:]


def showcase_document() -> tuple[str, str]:
    """The shipped 10-sentence product sheet for the showcase product,
    phrased with the same answer templates the corpus uses."""
    p = SHOWCASE_PRODUCT
    sents = [
        _tidy(f"the {p} is a lightweight laptop for everyday work ."),
        _tidy(answer_sentence(p, "weight", 0)),
        _tidy(answer_sentence(p, "price", 0)),
        _tidy(answer_sentence(p, "battery", 0)),
        _tidy(
            f"the {p} has a {SHOWCASE_VALUES['screen']} inch screen "
            f"and it supports {SHOWCASE_VALUES['charging']} watt fast charging ."
        ),
        _tidy(answer_sentence(p, "storage", 0)),
        _tidy(answer_sentence(p, "color", 0)),
        _tidy(answer_sentence(p, "warranty", 0)),
        "It comes with a stylus in the box.",
        "The keyboard is backlit and quiet.",
    ]
    return "Falcon X1 product introduction", " ".join(sents)


def showcase_dialogues(n_contexts: int, seed: int) -> list[RawExample]:
    """Labeled dialogues whose positives are showcase-document sentences,
    used to augment training for the end-to-end flow."""
    rng = np.random.default_rng((seed, 23))
    product = SHOWCASE_PRODUCT
    rows: list[RawExample] = []
    for _ in range(n_contexts):
        n_turns = int(rng.integers(0, 3))
        attrs = list(rng.choice(ATTR_NAMES, size=n_turns + 1, replace=False))
        context: list[str] = []
        for i, attr in enumerate(attrs[:-1]):
            context.append(_question(rng, product, attr, elliptical=i > 0 and rng.random() < 0.5))
            context.append(answer_sentence(product, attr, seed))
        final_attr = attrs[-1]
        context.append(_question(rng, product, final_attr, elliptical=rng.random() < 0.5))
        positive = answer_sentence(product, final_attr, seed)
        rows.append(RawExample(context=context, response=positive, label=1))
        wrong = str(rng.choice([a for a in ATTR_NAMES if a != final_attr]))
        rows.append(RawExample(context=context, response=answer_sentence(product, wrong, seed), label=0))
    return rows
