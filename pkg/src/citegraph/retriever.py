"""Attention-pruned subgraph retrieval around a query-selected seed.

The loop, per hop l = 1..L: take the not-yet-visited undirected neighbors
of the kept set as the frontier, run one attention layer over the induced
subgraph of kept + frontier (layer l, reusing the last layer when l
exceeds the stack), score the frontier against the query, and keep only
frontier nodes scoring at least the pruning threshold. Kept-node states
carry forward between hops, so the seed accumulates as many layers as
hops run. Each node is scored once, at the hop it first appears; the seed
is never pruned. Retrieval is a pure function of its inputs.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .embed import EmbeddingMatrix, cosine
from .gat import GatWeights, ScorerParams, gat_layer_forward, relevance_scores
from .graph import CitationGraph, NodeSet
from .ranking import RankedItem, RankedList


@dataclass
class RetrieverConfig:
    hops: int = 3
    prune_threshold: float = 0.5
    top_k: int = 10
    max_frontier: int = 2048
    fallback_to_dense: bool = True

    def __post_init__(self) -> None:
        if self.hops < 1:
            raise ValueError("hops must be >= 1")
        if not 0.0 <= self.prune_threshold <= 1.0:
            raise ValueError("prune_threshold must be in [0, 1]")
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")
        if self.max_frontier < 1:
            raise ValueError("max_frontier must be >= 1")


@dataclass(frozen=True)
class HopTrace:
    hop: int
    expanded: int
    pruned: int


@dataclass
class RetrievedSubgraph:
    """Kept nodes with scores, hop labels, final states and induced edges.

    `nodes` is in insertion order (seed first, then survivors per hop in
    ascending index order). The seed carries the sentinel score 1.0; every
    other kept node survived the threshold at the hop recorded for it.
    Edges are the induced directed citation edges among kept nodes, as
    graph-level index pairs sorted by (source, target).
    """

    seed: int
    nodes: list[int]
    scores: dict[int, float]
    hops: dict[int, int]
    states: dict[int, np.ndarray]
    edges: list[tuple[int, int]] = field(default_factory=list)
    trace: list[HopTrace] = field(default_factory=list)

    def kept(self) -> NodeSet:
        return NodeSet(self.nodes)


def select_seed(query: np.ndarray, embeddings: EmbeddingMatrix,
                graph: CitationGraph) -> int:
    """Node whose embedding is most cosine-similar to the query.

    Ties break toward the smallest node index. An all-zero query has no
    meaningful similarity and is rejected.
    """
    q = np.asarray(query, dtype=np.float64)
    if np.linalg.norm(q) == 0.0:
        raise ValueError("degenerate query: zero vector")
    if graph.node_count != embeddings.node_count:
        raise ValueError("graph and embeddings disagree on node count")
    if graph.node_count == 0:
        raise ValueError("cannot select a seed in an empty graph")
    return int(np.argmax(embeddings.scores(q)))


def retrieve_subgraph(graph: CitationGraph, embeddings: EmbeddingMatrix,
                      query: np.ndarray, seed: int, weights: GatWeights,
                      scorer: ScorerParams,
                      config: RetrieverConfig) -> RetrievedSubgraph:
    """Expand and prune around the seed for up to `hops` rings."""
    if not 0 <= seed < graph.node_count:
        raise IndexError(f"seed index {seed} out of range")
    query = np.asarray(query, dtype=np.float64)

    kept: list[int] = [seed]
    kept_set: set[int] = {seed}
    visited: set[int] = {seed}
    scores: dict[int, float] = {seed: 1.0}
    hop_of: dict[int, int] = {seed: 0}
    states: dict[int, np.ndarray] = {seed: np.array(embeddings.row(seed))}
    trace: list[HopTrace] = []

    for hop in range(1, config.hops + 1):
        frontier = sorted({
            w
            for u in kept
            for w in graph.neighbors(u, "both")
            if w not in visited
        })
        if not frontier:
            trace.append(HopTrace(hop=hop, expanded=0, pruned=0))
            break
        visited.update(frontier)

        sub_nodes = kept + frontier
        sub, _ = graph.induced_subgraph(sub_nodes)
        H = np.stack([
            states[u] if u in kept_set else embeddings.row(u)
            for u in sub_nodes
        ])
        layer = weights.layers[min(hop, len(weights.layers)) - 1]
        H_next = gat_layer_forward(sub, H, layer)
        frontier_scores = relevance_scores(
            H_next[len(kept):], query, scorer)

        survivors = [
            (frontier[i], float(frontier_scores[i]))
            for i in range(len(frontier))
            if frontier_scores[i] >= config.prune_threshold
        ]
        if len(survivors) > config.max_frontier:
            survivors.sort(key=lambda t: (-t[1], t[0]))
            survivors = sorted(survivors[:config.max_frontier])
        trace.append(HopTrace(hop=hop, expanded=len(frontier),
                              pruned=len(frontier) - len(survivors)))

        survivor_set = {v for v, _ in survivors}
        for pos, u in enumerate(sub_nodes):
            if u in kept_set or u in survivor_set:
                states[u] = H_next[pos]
        for v, score in survivors:  # ascending node index
            kept.append(v)
            kept_set.add(v)
            scores[v] = score
            hop_of[v] = hop

    edges = [(u, v) for u in sorted(kept_set)
             for v in graph.neighbors(u, "out") if v in kept_set]
    return RetrievedSubgraph(seed=seed, nodes=kept, scores=scores,
                             hops=hop_of, states=states, edges=edges,
                             trace=trace)


def decode_and_rank(subgraph: RetrievedSubgraph, query: np.ndarray,
                    embeddings: EmbeddingMatrix, config: RetrieverConfig,
                    decoder: np.ndarray | None = None) -> RankedList:
    """Rank kept nodes (seed excluded) by cosine of decoded state vs query.

    The decoder maps final states back to embedding width; with equal
    widths it is the identity and `decoder` may be omitted. When fewer than
    top_k candidates survive and dense fallback is enabled, the remaining
    slots are filled with the highest raw-cosine nodes not already present
    (never the seed), flagged "dense-fallback"; the combined list is
    ordered by score with index tie-breaks.
    """
    query = np.asarray(query, dtype=np.float64)
    scored: list[tuple[int, float, str]] = []
    for u in subgraph.nodes:
        if u == subgraph.seed:
            continue
        state = subgraph.states[u]
        decoded = state if decoder is None else state @ decoder
        scored.append((u, cosine(decoded, query), "graph"))
    scored.sort(key=lambda t: (-t[1], t[0]))
    scored = scored[:config.top_k]

    if len(scored) < config.top_k and config.fallback_to_dense:
        dense = embeddings.scores(query)
        present = {u for u, _, _ in scored} | {subgraph.seed}
        pool = sorted((i for i in range(embeddings.node_count)
                       if i not in present),
                      key=lambda i: (-dense[i], i))
        for i in pool[:config.top_k - len(scored)]:
            scored.append((i, float(dense[i]), "dense-fallback"))
        scored.sort(key=lambda t: (-t[1], t[0]))

    return RankedList(items=[
        RankedItem(id=embeddings.ids[u], score=s, provenance=prov)
        for u, s, prov in scored
    ])


def retrieval_to_json(query_id: str, subgraph: RetrievedSubgraph,
                      ranked: RankedList, graph: CitationGraph) -> dict:
    """Exportable summary: seed id, candidates and the per-hop trace."""
    return {
        "query_id": query_id,
        "seed": graph.node_ids[subgraph.seed],
        "candidates": ranked.to_dicts(),
        "trace": [
            {"hop": t.hop, "expanded": t.expanded, "pruned": t.pruned}
            for t in subgraph.trace
        ],
    }
