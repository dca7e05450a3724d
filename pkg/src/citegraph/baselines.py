"""Retrieval baselines: BM25, dense cosine scan, and their hybrid blend."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .embed import EmbeddingMatrix, tokenize
from .ranking import RankedItem, RankedList


@dataclass
class Bm25Index:
    """Inverted index with the statistics BM25 needs.

    postings maps a term to (doc index, term frequency) pairs sorted by
    doc index; doc_lengths holds per-document token counts.
    """

    postings: dict[str, list[tuple[int, int]]]
    doc_lengths: list[int]
    avg_doc_length: float
    doc_count: int
    ids: tuple[str, ...]
    k1: float = 1.2
    b: float = 0.75


@dataclass
class HybridConfig:
    alpha: float = 0.5  # weight on BM25; 1 - alpha goes to dense

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must be in [0, 1]")


def bm25_build(texts: Sequence[str], ids: Sequence[str] | None = None,
               k1: float = 1.2, b: float = 0.75) -> Bm25Index:
    """Index a corpus of texts (tokenizer shared with the hash embedder)."""
    if len(texts) == 0:
        raise ValueError("cannot build a BM25 index over an empty corpus")
    if ids is None:
        ids = tuple(str(i) for i in range(len(texts)))
    else:
        ids = tuple(ids)
        if len(ids) != len(texts):
            raise ValueError("ids and texts must have equal length")
    postings: dict[str, list[tuple[int, int]]] = {}
    doc_lengths: list[int] = []
    for d, text in enumerate(texts):
        tokens = tokenize(text)
        doc_lengths.append(len(tokens))
        counts: dict[str, int] = {}
        for tok in tokens:
            counts[tok] = counts.get(tok, 0) + 1
        for term, tf in counts.items():
            postings.setdefault(term, []).append((d, tf))
    return Bm25Index(postings=postings, doc_lengths=doc_lengths,
                     avg_doc_length=sum(doc_lengths) / len(texts),
                     doc_count=len(texts), ids=ids, k1=k1, b=b)


def idf(index: Bm25Index, term: str) -> float:
    """Smoothed IDF, ln((N - df + 0.5)/(df + 0.5) + 1); never negative."""
    df = len(index.postings.get(term, ()))
    return math.log((index.doc_count - df + 0.5) / (df + 0.5) + 1.0)


def bm25_scores(index: Bm25Index, query_text: str) -> np.ndarray:
    """Raw BM25 score of every document for the query.

    Sums over query tokens as given (a repeated token counts each time).
    """
    scores = np.zeros(index.doc_count, dtype=np.float64)
    avg = index.avg_doc_length
    for term in tokenize(query_text):
        posting = index.postings.get(term)
        if not posting:
            continue
        term_idf = idf(index, term)
        for d, tf in posting:
            ratio = index.doc_lengths[d] / avg if avg > 0.0 else 0.0
            denom = tf + index.k1 * (1.0 - index.b + index.b * ratio)
            scores[d] += term_idf * tf / denom
    return scores


def bm25_rank(index: Bm25Index, query_text: str, k: int) -> RankedList:
    """Top-k documents with positive BM25 score, ties by doc index."""
    if k < 1:
        raise ValueError("k must be >= 1")
    scores = bm25_scores(index, query_text)
    order = sorted((d for d in range(index.doc_count) if scores[d] > 0.0),
                   key=lambda d: (-scores[d], d))
    return RankedList(items=[
        RankedItem(id=index.ids[d], score=float(scores[d]), provenance="bm25")
        for d in order[:k]
    ])


def dense_rank(query: np.ndarray, embeddings: EmbeddingMatrix,
               k: int) -> RankedList:
    """Top-k documents by exact cosine scan, ties by doc index."""
    if k < 1:
        raise ValueError("k must be >= 1")
    q = np.asarray(query, dtype=np.float64)
    if np.linalg.norm(q) == 0.0:
        raise ValueError("degenerate query: zero vector")
    scores = embeddings.scores(q)
    order = np.argsort(-scores, kind="stable")[:k]
    return RankedList(items=[
        RankedItem(id=embeddings.ids[int(d)], score=float(scores[int(d)]),
                   provenance="dense")
        for d in order
    ])


def _min_max(values: np.ndarray) -> np.ndarray:
    lo = float(values.min())
    hi = float(values.max())
    if hi == lo:
        return np.zeros_like(values)  # constant lists carry no signal
    return (values - lo) / (hi - lo)


def hybrid_rank(bm25_list: RankedList, dense_list: RankedList,
                config: HybridConfig, k: int,
                universe: Sequence[str] | None = None) -> RankedList:
    """Blend full-corpus BM25 and dense rankings: alpha*bm25 + (1-alpha)*dense.

    Each side is min-max normalized to [0, 1] per query before blending;
    documents missing from a list contribute raw score 0 on that side
    (BM25 omits zero-score docs). `universe` fixes the candidate id order
    used for tie-breaking; it defaults to the dense list's order. Ids
    outside the universe are a mismatch error.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if universe is None:
        universe = [item.id for item in dense_list.items]
    positions = {pid: i for i, pid in enumerate(universe)}
    if len(positions) != len(universe):
        raise ValueError("universe contains duplicate ids")
    for name, lst in (("bm25", bm25_list), ("dense", dense_list)):
        unknown = [it.id for it in lst.items if it.id not in positions]
        if unknown:
            raise ValueError(
                f"mismatched universes: {name} list has ids outside the "
                f"candidate universe, e.g. {unknown[0]!r}")

    raw_b = np.zeros(len(universe), dtype=np.float64)
    raw_d = np.zeros(len(universe), dtype=np.float64)
    for item in bm25_list.items:
        raw_b[positions[item.id]] = item.score
    for item in dense_list.items:
        raw_d[positions[item.id]] = item.score
    combined = config.alpha * _min_max(raw_b) + (1.0 - config.alpha) * _min_max(raw_d)

    order = sorted(range(len(universe)), key=lambda i: (-combined[i], i))
    return RankedList(items=[
        RankedItem(id=universe[i], score=float(combined[i]), provenance="hybrid")
        for i in order[:k]
    ])
