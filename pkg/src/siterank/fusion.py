"""Query answering: weighted fusion of lexical, social, and traffic scores."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

from .errors import SiterankError
from .social import query_page_similarity
from .textindex import tfidf_scores, tokenize

if TYPE_CHECKING:
    from .engine import EngineState


class EngineNotLoaded(SiterankError):
    """A component needed to answer the query is missing from the state."""


class EmptyQuery(SiterankError):
    """Query had no usable terms."""


@dataclass(frozen=True)
class FusionWeights:
    text: float = 0.6
    social: float = 0.2
    static: float = 0.2

    def check(self) -> None:
        if min(self.text, self.social, self.static) < 0:
            raise ValueError("weights must be non-negative")
        if self.text + self.social + self.static <= 0:
            raise ValueError("at least one weight must be positive")

    def normalized(self) -> tuple[float, float, float]:
        total = self.text + self.social + self.static
        return (self.text / total, self.social / total, self.static / total)


@dataclass(frozen=True)
class QueryResult:
    page: str
    score: float
    text: float    # per-query normalized component scores in [0, 1]
    social: float
    static: float
    position: int  # 1-based


def _minmax(values: dict[str, float], candidates: list[str]) -> dict[str, float]:
    # All-equal components carry no ordering information and normalize to 0.
    observed = [values.get(page, 0.0) for page in candidates]
    low, high = min(observed), max(observed)
    if high <= low:
        return {page: 0.0 for page in candidates}
    span = high - low
    return {page: (values.get(page, 0.0) - low) / span for page in candidates}


def search(state: "EngineState", query: str, k: int = 10,
           weights: FusionWeights = FusionWeights(),
           static: str = "lpr") -> list[QueryResult]:
    """Answer a query with the top-k fused ranking.

    Candidates are the pages with a nonzero lexical score plus the pages
    with a nonzero annotation-similarity score, restricted to pages that
    exist in the document corpus.  Each component is min-max normalized
    over the candidates, then combined with the (sum-normalized) weights.
    Ties break by page id so results are reproducible.
    """
    weights.check()
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if state.index is None:
        raise EngineNotLoaded("no text index loaded")
    rank = state.rank_vector(static)
    tokens = tokenize(query)
    if not tokens:
        raise EmptyQuery(f"no usable terms in query {query!r}")

    text_raw = tfidf_scores(tokens, state.index)
    social_raw: dict[str, float] = {}
    if state.store is not None and state.sim is not None:
        for page in state.store.pages:
            value = query_page_similarity(tokens, page, state.store, state.sim)
            if value > 0.0:
                social_raw[page] = value

    candidates = sorted(
        page
        for page in ({p for p, s in text_raw.items() if s > 0.0}
                     | set(social_raw))
        if page in state.index  # pages outside the corpus are not retrievable
    )
    if not candidates:
        return []

    static_raw = {page: rank.score(page) for page in candidates}
    text_n = _minmax(text_raw, candidates)
    social_n = _minmax(social_raw, candidates)
    static_n = _minmax(static_raw, candidates)
    w_text, w_social, w_static = weights.normalized()

    fused = sorted(
        candidates,
        key=lambda page: (-(w_text * text_n[page]
                            + w_social * social_n[page]
                            + w_static * static_n[page]), page),
    )
    results = []
    for position, page in enumerate(fused[:k], start=1):
        score = (w_text * text_n[page] + w_social * social_n[page]
                 + w_static * static_n[page])
        results.append(QueryResult(page=page, score=score, text=text_n[page],
                                   social=social_n[page], static=static_n[page],
                                   position=position))
    return results
