"""TF-IDF cosine baseline: concatenated context against each response.

Term weight = tf * idf with idf(t) = ln((1 + N) / (1 + df(t))) + 1, where
N and df come from the training corpus (each utterance and response is
one document).  Unseen terms get df = 0.  The score is the cosine of the
two weighted vectors; either vector being empty scores 0.
"""

from __future__ import annotations

import math
from collections import Counter

from .data import RawExample
from .vocab import text_tokens


class TfidfScorer:
    def __init__(self) -> None:
        self._df: Counter[str] = Counter()
        self._n_docs = 0

    def fit(self, examples: list[RawExample]) -> "TfidfScorer":
        for ex in examples:
            for text in [*ex.context, ex.response]:
                self._df.update(set(text_tokens(text)))
                self._n_docs += 1
        return self

    def fit_texts(self, texts: list[str]) -> "TfidfScorer":
        for text in texts:
            self._df.update(set(text_tokens(text)))
            self._n_docs += 1
        return self

    def idf(self, term: str) -> float:
        return math.log((1.0 + self._n_docs) / (1.0 + self._df.get(term, 0))) + 1.0

    def _vector(self, tokens: list[str]) -> dict[str, float]:
        counts = Counter(tokens)
        return {t: c * self.idf(t) for t, c in counts.items()}

    def score(self, context: list[str], response: str) -> float:
        u = self._vector(text_tokens(" ".join(context)))
        v = self._vector(text_tokens(response))
        if not u or not v:
            return 0.0
        dot = sum(w * v[t] for t, w in u.items() if t in v)
        nu = math.sqrt(sum(w * w for w in u.values()))
        nv = math.sqrt(sum(w * w for w in v.values()))
        if nu == 0.0 or nv == 0.0:
            return 0.0
        return dot / (nu * nv)

    def score_many(self, context: list[str], responses: list[str]) -> list[float]:
        return [self.score(context, r) for r in responses]
