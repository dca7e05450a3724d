"""Ranked candidate lists shared by the retriever, baselines and reranker."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator


@dataclass(frozen=True)
class RankedItem:
    id: str
    score: float
    provenance: str = "graph"


@dataclass
class RankedList:
    """Candidates ordered by non-increasing score with unique ids.

    `fallback` is set when the list is a graceful degradation (for example
    a re-rank that could not be applied); items keep their provenance.
    """

    items: list[RankedItem] = field(default_factory=list)
    fallback: bool = False

    def __post_init__(self) -> None:
        ids = [item.id for item in self.items]
        if len(ids) != len(set(ids)):
            raise ValueError("ranked list contains duplicate ids")
        for prev, cur in zip(self.items, self.items[1:]):
            if cur.score > prev.score:
                raise ValueError("ranked list scores must be non-increasing")

    def ids(self) -> list[str]:
        return [item.id for item in self.items]

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self) -> Iterator[RankedItem]:
        return iter(self.items)

    def to_dicts(self) -> list[dict]:
        return [
            {"id": it.id, "score": it.score, "provenance": it.provenance}
            for it in self.items
        ]
