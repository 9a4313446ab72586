"""Random quantum networks and edge-disjoint path search.

Nodes are the integers ``0 .. n-1``.  Graph distances are hop counts.
With unit edge weights Dijkstra's search reduces to breadth-first search,
so hop distances come from :func:`scipy.sparse.csgraph.breadth_first_order`
(:func:`dijkstra_distances` is a plain reference implementation).  The path
itself is then read back from the destination by always stepping
to the smallest-id neighbour one hop closer to the source, which makes the
chosen shortest path independent of search internals.
"""
from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order

from .stats import UniformEdgeDistribution


@dataclass(frozen=True)
class NetworkPath:
    nodes: tuple[int, ...]

    def __post_init__(self):
        if len(self.nodes) < 2:
            raise ValueError("a path needs at least two nodes")

    @property
    def length(self) -> int:
        return len(self.nodes) - 1

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        """Edges as sorted node pairs, in path order."""
        return tuple(
            (u, v) if u < v else (v, u) for u, v in zip(self.nodes[:-1], self.nodes[1:])
        )

    def __len__(self):
        return self.length


class MadPathSet(list):
    """Pairwise edge-disjoint paths between one node pair, shortest first."""

    def is_edge_disjoint(self) -> bool:
        seen: set[tuple[int, int]] = set()
        for path in self:
            edges = set(path.edges)
            if len(edges) != path.length or seen & edges:
                return False
            seen |= edges
        return True

    @property
    def lengths(self) -> list[int]:
        return [p.length for p in self]


@dataclass
class QuantumNetwork:
    """Simple undirected graph whose edges carry a fidelity and a probability.

    ``edges`` is an ``(m, 2)`` int array with ``u < v`` per row, sorted
    lexicographically.  ``fidelity[i]`` and ``probability[i]`` belong to
    edge ``i``.  Treat instances as immutable.
    """

    num_nodes: int
    edges: np.ndarray
    fidelity: np.ndarray
    probability: np.ndarray
    seed: int | None = None
    _adj: csr_matrix = field(init=False, repr=False)

    def __post_init__(self):
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        n = int(self.num_nodes)
        if n < 1:
            raise ValueError("need at least one node")
        if edges.size:
            if edges.min() < 0 or edges.max() >= n:
                raise ValueError("edge endpoint outside 0..n-1")
            if np.any(edges[:, 0] == edges[:, 1]):
                raise ValueError("self-loops are not allowed")
        edges = np.sort(edges, axis=1)
        order = np.lexsort((edges[:, 1], edges[:, 0]))
        edges = edges[order]
        if len(edges) > 1 and np.any(np.all(edges[1:] == edges[:-1], axis=1)):
            raise ValueError("duplicate edges")
        self.num_nodes = n
        self.edges = edges
        self.fidelity = np.asarray(self.fidelity, dtype=float)[order]
        self.probability = np.asarray(self.probability, dtype=float)[order]
        if self.fidelity.shape != (len(edges),) or self.probability.shape != (len(edges),):
            raise ValueError("need one fidelity and one probability per edge")
        self._adj = _adjacency(n, edges)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def mean_degree(self) -> float:
        return 2.0 * self.num_edges / self.num_nodes

    def degrees(self) -> np.ndarray:
        return np.diff(self._adj.indptr)

    def neighbors(self, v: int) -> np.ndarray:
        a = self._adj
        return a.indices[a.indptr[v] : a.indptr[v + 1]]

    def edge_index(self, u: int, v: int) -> int:
        """Row of edge ``{u, v}`` in :attr:`edges`."""
        a = self._adj
        lo, hi = a.indptr[u], a.indptr[u + 1]
        j = lo + np.searchsorted(a.indices[lo:hi], v)
        if j >= hi or a.indices[j] != v:
            raise KeyError((u, v))
        return int(a.data[j]) - 1

    def path_edge_indices(self, path: NetworkPath) -> np.ndarray:
        return np.array([self.edge_index(u, v) for u, v in path.edges], dtype=np.int64)

    def _check_node(self, v) -> int:
        if int(v) != v or not 0 <= v < self.num_nodes:
            raise ValueError(f"unknown node {v!r}")
        return int(v)


def _adjacency(n: int, edges: np.ndarray, keep: np.ndarray | None = None) -> csr_matrix:
    """Symmetric CSR adjacency; stored values are ``edge index + 1``."""
    idx = np.arange(len(edges))
    if keep is not None:
        idx = idx[keep]
    u, v = edges[idx, 0], edges[idx, 1]
    rows = np.concatenate([u, v])
    cols = np.concatenate([v, u])
    data = np.concatenate([idx, idx]).astype(np.float64) + 1.0
    m = csr_matrix((data, (rows, cols)), shape=(n, n))
    m.sort_indices()
    return m


def _without_edges(adj: csr_matrix, edge_idx: np.ndarray) -> csr_matrix:
    """Copy of ``adj`` with the given edges (by index) dropped."""
    drop = np.isin(adj.data, np.asarray(edge_idx, dtype=np.float64) + 1.0)
    keep = ~drop
    kept_before = np.concatenate([[0], np.cumsum(keep, dtype=np.int64)])
    indptr = kept_before[adj.indptr]
    return csr_matrix((adj.data[keep], adj.indices[keep], indptr), shape=adj.shape)


# --------------------------------------------------------------------------
# generation


def generate_random_network(
    num_nodes: int,
    num_edges: int,
    seed: int,
    fidelity_dist: UniformEdgeDistribution,
    probability_dist: UniformEdgeDistribution,
) -> QuantumNetwork:
    """Uniform ``G(n, m)`` graph with iid edge parameters; deterministic in ``seed``."""
    n, m = int(num_nodes), int(num_edges)
    max_edges = n * (n - 1) // 2
    if n < 1 or m < 0 or m > max_edges:
        raise ValueError(f"cannot place {m} edges on {n} nodes (max {max_edges})")
    rng = np.random.default_rng(seed)
    if m > max_edges // 2:
        # dense: choose directly among all pairs
        flat = rng.choice(max_edges, size=m, replace=False)
        iu = np.triu_indices(n, k=1)
        edges = np.column_stack([iu[0][flat], iu[1][flat]])
    else:
        chosen: set[tuple[int, int]] = set()
        picks = []
        while len(picks) < m:
            batch = rng.integers(0, n, size=(2 * (m - len(picks)) + 16, 2))
            for u, v in batch:
                if u == v:
                    continue
                key = (u, v) if u < v else (v, u)
                if key in chosen:
                    continue
                chosen.add(key)
                picks.append(key)
                if len(picks) == m:
                    break
        edges = np.array(picks, dtype=np.int64).reshape(-1, 2)
    fid = fidelity_dist.sample(rng, m)
    prob = probability_dist.sample(rng, m)
    return QuantumNetwork(n, edges, fid, prob, seed=seed)


# --------------------------------------------------------------------------
# paths


def dijkstra_distances(
    adjacency: dict[int, Iterable[int] | dict[int, float]], source: int
) -> dict[int, float]:
    """Plain binary-heap Dijkstra on an adjacency mapping.

    ``adjacency[u]`` is either an iterable of neighbours (unit weights) or a
    ``{neighbour: weight}`` mapping.  Kept as a dependency-free reference.
    """
    dist = {source: 0.0}
    heap = [(0.0, source)]
    done = set()
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        nbrs = adjacency.get(u, ())
        items = nbrs.items() if isinstance(nbrs, dict) else ((v, 1.0) for v in nbrs)
        for v, w in items:
            nd = d + w
            if nd < dist.get(v, math.inf):
                dist[v] = nd
                heapq.heappush(heap, (nd, v))
    return dist


def _trace_back(adj: csr_matrix, dist: np.ndarray, source: int, dest: int) -> NetworkPath:
    nodes = [dest]
    v = dest
    while v != source:
        nb = adj.indices[adj.indptr[v] : adj.indptr[v + 1]]
        # indices are sorted, so the first hit is the smallest id
        prev = nb[dist[nb] == dist[v] - 1][0]
        nodes.append(int(prev))
        v = int(prev)
    return NetworkPath(tuple(reversed(nodes)))


def hop_distances(adj: csr_matrix, source: int) -> np.ndarray:
    """Hop count from ``source`` to every node; ``-1`` where unreachable."""
    order, pred = breadth_first_order(adj, source, directed=True, return_predecessors=True)
    dist = np.full(adj.shape[0], -1, dtype=np.int64)
    dist[source] = 0
    rest = order[1:]
    parent = pred[rest]
    # one BFS level per pass
    pending = np.ones(rest.size, dtype=bool)
    while pending.any():
        ready = pending & (dist[parent] >= 0)
        dist[rest[ready]] = dist[parent[ready]] + 1
        pending &= ~ready
    return dist


def _shortest_path(adj: csr_matrix, source: int, dest: int) -> NetworkPath | None:
    dist = hop_distances(adj, source)
    if dist[dest] < 0:
        return None
    return _trace_back(adj, dist, source, dest)


def shortest_graph_path(net: QuantumNetwork, s: int, dst: int) -> NetworkPath | None:
    """Minimum-hop path from ``s`` to ``dst``, or ``None`` if disconnected.

    Among equal-length paths the one built from smallest-id predecessors
    (walking back from ``dst``) is returned.
    """
    s, dst = net._check_node(s), net._check_node(dst)
    if s == dst:
        raise ValueError("source and destination must differ")
    return _shortest_path(net._adj, s, dst)


def find_mad_paths(net: QuantumNetwork, s: int, dst: int, k: int) -> MadPathSet:
    """Greedy edge-disjoint paths: shortest path, drop its edges, repeat.

    Returns at most ``k`` paths; fewer when the residual graph disconnects
    ``s`` from ``dst``.  The shared graph is never modified.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    s, dst = net._check_node(s), net._check_node(dst)
    if s == dst:
        raise ValueError("source and destination must differ")
    adj = net._adj
    paths = MadPathSet()
    for _ in range(k):
        path = _shortest_path(adj, s, dst)
        if path is None:
            break
        paths.append(path)
        if len(paths) == k:
            break
        adj = _without_edges(adj, net.path_edge_indices(path))
    return paths


def mad_path_complexity_estimate(net: QuantumNetwork, k: int) -> float:
    """Operation-count estimate ``k * (|E| + |V| log |V|)`` for ``k`` greedy searches."""
    if k < 1:
        raise ValueError("k must be >= 1")
    n = net.num_nodes
    return float(k * (net.num_edges + n * math.log2(max(n, 2))))


# --------------------------------------------------------------------------
# edge-list files


def write_edge_list(net: QuantumNetwork, path: str | Path) -> None:
    """Write ``nodes=<n> edges=<m> seed=<s>`` then one ``u v f p`` line per edge.

    Floats use ``repr`` so a read-back is bit-identical.
    """
    lines = [f"nodes={net.num_nodes} edges={net.num_edges} seed={net.seed if net.seed is not None else ''}"]
    for (u, v), f, p in zip(net.edges, net.fidelity, net.probability):
        lines.append(f"{u} {v} {float(f)!r} {float(p)!r}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_edge_list(path: str | Path) -> QuantumNetwork:
    text = Path(path).read_text().splitlines()
    if not text:
        raise ValueError(f"{path}: empty edge list")
    header = dict(tok.split("=", 1) for tok in text[0].split())
    try:
        n = int(header["nodes"])
        m = int(header["edges"])
    except KeyError as exc:
        raise ValueError(f"{path}: header needs nodes= and edges=") from exc
    seed = int(header["seed"]) if header.get("seed") else None
    rows = [ln.split() for ln in text[1:] if ln.strip()]
    if len(rows) != m:
        raise ValueError(f"{path}: header says {m} edges, found {len(rows)}")
    edges = np.array([[int(r[0]), int(r[1])] for r in rows], dtype=np.int64).reshape(-1, 2)
    fid = np.array([float(r[2]) for r in rows])
    prob = np.array([float(r[3]) for r in rows])
    return QuantumNetwork(n, edges, fid, prob, seed=seed)


def network_from_edges(
    edges: Sequence[tuple[int, int]],
    num_nodes: int | None = None,
    fidelity: float | Sequence[float] = 1.0,
    probability: float | Sequence[float] = 1.0,
) -> QuantumNetwork:
    """Build a network from an explicit edge list (handy for small examples)."""
    edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    if num_nodes is None:
        num_nodes = int(edges.max()) + 1 if edges.size else 1
    m = len(edges)
    fid = np.broadcast_to(np.asarray(fidelity, dtype=float), (m,)).copy()
    prob = np.broadcast_to(np.asarray(probability, dtype=float), (m,)).copy()
    return QuantumNetwork(num_nodes, edges, fid, prob)


# nine-node illustration: three edge-disjoint paths between nodes 1 and 5,
# listed with 1-based labels
FIG6_EDGES_1BASED = [
    (1, 2), (2, 5),
    (1, 8), (8, 9), (9, 5),
    (1, 6), (6, 2), (2, 3), (3, 4), (4, 5),
]


def nine_node_example() -> QuantumNetwork:
    """The 9-node, 10-edge example network; node ``i`` here is label ``i+1``."""
    return network_from_edges([(u - 1, v - 1) for u, v in FIG6_EDGES_1BASED], num_nodes=9)
