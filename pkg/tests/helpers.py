"""Shared fixtures and independent reference implementations (oracles).

Everything here is deliberately written straight-line, from the raw edge
list and plain numpy, without calling into the package internals it is
used to check.
"""
from __future__ import annotations

import json

import numpy as np


# ---------------------------------------------------------------------------
# corpus fixtures
# ---------------------------------------------------------------------------

def corpus_line(pid, citations=None, **fields) -> str:
    obj = {"publication_ID": pid}
    if citations is not None:
        obj["Citations"] = citations
    obj.update(fields)
    return json.dumps(obj)


def write_jsonl(path, lines) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for line in lines:
            fh.write(line)
            fh.write("\n")


def component_corpus(n_components: int = 20) -> list[str]:
    """Disconnected 3-paper components: a hub citing two leaves.

    Every hub's citations lie inside its own 2-hop ball, texts carry the
    paper id so hash embeddings are distinct, and leaves cite nothing.
    """
    lines = []
    for c in range(n_components):
        hub, leaf_a, leaf_b = f"p{c:02d}h", f"p{c:02d}a", f"p{c:02d}b"
        lines.append(corpus_line(
            hub, [leaf_a, leaf_b],
            title=f"survey {hub} of topic{c} methods",
            abstract=f"overview {hub} connecting strand{c} results"))
        lines.append(corpus_line(
            leaf_a, [],
            title=f"foundation {leaf_a} for topic{c}",
            abstract=f"base result {leaf_a} strand{c}"))
        lines.append(corpus_line(
            leaf_b, [],
            title=f"extension {leaf_b} of topic{c}",
            abstract=f"follow up {leaf_b} strand{c}"))
    return lines


# ---------------------------------------------------------------------------
# numeric primitives, written independently
# ---------------------------------------------------------------------------

def oracle_sigmoid(z):
    z = np.asarray(z, dtype=np.float64)
    pos = 1.0 / (1.0 + np.exp(-np.clip(z, 0.0, None)))
    ez = np.exp(np.clip(z, None, 0.0))
    return np.where(z >= 0.0, pos, ez / (1.0 + ez))


def oracle_elu(x):
    x = np.asarray(x, dtype=np.float64)
    return np.where(x > 0.0, x, np.exp(np.minimum(x, 0.0)) - 1.0)


def oracle_gat_forward(n, edges, H, W, a_src, a_dst, slope):
    """Dense-matrix attention layer over undirected neighbors plus self.

    Returns (alpha, out) where alpha is the full n x n attention matrix
    (zero where no edge) and out the activated aggregation.
    """
    H = np.asarray(H, dtype=np.float64)
    Wh = H @ np.asarray(W, dtype=np.float64)
    src = Wh @ np.asarray(a_src, dtype=np.float64)
    dst = Wh @ np.asarray(a_dst, dtype=np.float64)
    mask = np.zeros((n, n), dtype=bool)
    for u, v in edges:
        mask[u, v] = True
        mask[v, u] = True
    np.fill_diagonal(mask, True)
    E = np.full((n, n), -np.inf)
    for i in range(n):
        for j in range(n):
            if mask[i, j]:
                e = src[i] + dst[j]
                E[i, j] = e if e > 0.0 else slope * e
    alpha = np.zeros((n, n))
    for i in range(n):
        finite = np.isfinite(E[i])
        w = np.zeros(n)
        w[finite] = np.exp(E[i][finite] - E[i][finite].max())
        alpha[i] = w / w.sum()
    return alpha, oracle_elu(alpha @ Wh)


def oracle_retrieve(n, edges, vectors, query, seed, layers, u, b, sigma,
                    hops, max_frontier=10 ** 9):
    """Straight-line expand / attend / score / prune loop.

    `layers` is a list of (W, a_src, a_dst, slope) tuples reused from the
    last entry when hops exceed the stack. Returns kept order, scores,
    hop labels and final states, all keyed by original node index.
    """
    vectors = np.asarray(vectors, dtype=np.float64)
    query = np.asarray(query, dtype=np.float64)
    und = {i: set() for i in range(n)}
    for s, t in edges:
        und[s].add(t)
        und[t].add(s)

    kept = [seed]
    kept_set = {seed}
    visited = {seed}
    states = {seed: np.array(vectors[seed])}
    scores = {seed: 1.0}
    hop_of = {seed: 0}
    for hop in range(1, hops + 1):
        frontier = sorted({w for x in kept for w in und[x]} - visited)
        if not frontier:
            break
        visited |= set(frontier)
        sub_nodes = kept + frontier
        local = {g: i for i, g in enumerate(sub_nodes)}
        sub_edges = [(local[s], local[t]) for s, t in edges
                     if s in local and t in local]
        H = np.stack([states[g] if g in kept_set else vectors[g]
                      for g in sub_nodes])
        W, a_s, a_d, slope = layers[min(hop, len(layers)) - 1]
        _, H2 = oracle_gat_forward(len(sub_nodes), sub_edges, H, W, a_s, a_d,
                                   slope)
        d = H2.shape[1]
        z = H2 @ u[:d] + float(query @ u[d:]) + b
        s = np.clip(oracle_sigmoid(z), np.nextafter(0.0, 1.0),
                    np.nextafter(1.0, 0.0))
        survivors = [(frontier[i], float(s[len(kept) + i]))
                     for i in range(len(frontier))
                     if s[len(kept) + i] >= sigma]
        if len(survivors) > max_frontier:
            by_score = sorted(survivors, key=lambda t: (-t[1], t[0]))
            survivors = sorted(by_score[:max_frontier])
        survivor_set = {v for v, _ in survivors}
        for pos, g in enumerate(sub_nodes):
            if g in kept_set or g in survivor_set:
                states[g] = H2[pos]
        for v, sc in survivors:
            kept.append(v)
            kept_set.add(v)
            scores[v] = sc
            hop_of[v] = hop
    return kept, scores, hop_of, states


def oracle_bfs_ball(n, edges, sources, k):
    """Plain undirected BFS: nodes within distance k of any source."""
    und = {i: set() for i in range(n)}
    for s, t in edges:
        und[s].add(t)
        und[t].add(s)
    seen = set(sources)
    frontier = set(sources)
    for _ in range(k):
        frontier = {w for x in frontier for w in und[x]} - seen
        seen |= frontier
        if not frontier:
            break
    return seen


def random_digraph(rng, max_nodes=20, edge_prob=None):
    """Random simple directed graph (no self-loops, no parallel edges)."""
    n = int(rng.integers(2, max_nodes + 1))
    p = edge_prob if edge_prob is not None else float(rng.uniform(0.1, 0.4))
    edges = [(u, v) for u in range(n) for v in range(n)
             if u != v and rng.random() < p]
    return n, edges


def citation_graph(n, edges):
    """Package graph from an explicit edge list (fixture builder)."""
    from citegraph.corpus import PaperRecord
    from citegraph.graph import build_graph
    adjacency = {f"n{i}": [] for i in range(n)}
    for u, v in edges:
        adjacency[f"n{u}"].append(f"n{v}")
    return build_graph([PaperRecord(id=pid, citations=cited)
                        for pid, cited in adjacency.items()])


def retriever_fixture(fixture_seed, max_nodes=30, state_dim=6):
    """Seeded random retrieval instance shared by tests and their oracle."""
    from citegraph.embed import EmbeddingMatrix
    from citegraph.gat import init_gat_weights, init_scorer

    rng = np.random.default_rng(1000 + fixture_seed)
    n = int(rng.integers(8, max_nodes + 1))
    edges = [(u, v) for u in range(n) for v in range(n)
             if u != v and rng.random() < 2.5 / n]
    graph = citation_graph(n, edges)
    vectors = rng.normal(size=(n, state_dim))
    vectors /= np.linalg.norm(vectors, axis=1, keepdims=True)
    embeddings = EmbeddingMatrix(ids=graph.node_ids, vectors=vectors,
                                 dim=state_dim)
    query = rng.normal(size=state_dim)
    query /= np.linalg.norm(query)
    weights = init_gat_weights(state_dim, seed=int(rng.integers(0, 2 ** 31)))
    scorer = init_scorer(state_dim, state_dim,
                         seed=int(rng.integers(0, 2 ** 31)))
    return {
        "n": n,
        "edges": edges,
        "graph": graph,
        "embeddings": embeddings,
        "query": query,
        "weights": weights,
        "scorer": scorer,
        "seed_node": int(rng.integers(0, n)),
        "hops": int(rng.integers(1, 5)),
        "sigma": float(rng.choice([0.3, 0.45, 0.5, 0.55, 0.7])),
    }


def raw_layers(weights):
    return [(l.W, l.a_src, l.a_dst, l.leaky_slope) for l in weights.layers]
