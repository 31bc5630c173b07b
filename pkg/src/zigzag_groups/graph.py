"""Regular multigraphs given by rotation maps, and products on them.

A :class:`RotationGraph` stores, for every vertex ``v`` and port ``p``,
the pair ``rot(v, p) = (u, q)``: following port ``p`` out of ``v`` lands
at ``u`` through its port ``q``.  ``rot`` is an involution.  A fixed
point ``rot(v, p) == (v, p)`` is a loop counted once in the adjacency
matrix; two ports of ``v`` swapped by ``rot`` form a loop counted twice.

Product vertices ``(x, v)`` with ``x`` a vertex of the small graph and
``v`` a vertex of the large one are indexed ``x * N + v``.  With vertices
of action graphs listed lexicographically, this is the word ``xv``.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

INF = float("inf")


class GraphError(ValueError):
    pass


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=np.int64, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class RotationGraph:
    nbr: np.ndarray
    port: np.ndarray
    port_names: Optional[tuple[str, ...]] = field(default=None)

    def __post_init__(self):
        nbr = _frozen(self.nbr)
        port = _frozen(self.port)
        if nbr.ndim != 2 or nbr.shape != port.shape:
            raise GraphError("nbr and port must be equal-shape 2-d arrays")
        object.__setattr__(self, "nbr", nbr)
        object.__setattr__(self, "port", port)
        if self.port_names is not None:
            names = tuple(self.port_names)
            if len(names) != nbr.shape[1]:
                raise GraphError("one port name per port required")
            object.__setattr__(self, "port_names", names)

    @property
    def n_vertices(self) -> int:
        return self.nbr.shape[0]

    @property
    def degree(self) -> int:
        return self.nbr.shape[1]

    def rot(self, v: int, p: int) -> tuple[int, int]:
        return int(self.nbr[v, p]), int(self.port[v, p])

    def check(self) -> None:
        """Raise :class:`GraphError` unless ``rot`` is an involution."""
        N, D = self.nbr.shape
        if N == 0 or D == 0:
            return
        if self.nbr.min() < 0 or self.nbr.max() >= N or self.port.min() < 0 or self.port.max() >= D:
            raise GraphError("rotation map leaves the vertex/port range")
        back_v = self.nbr[self.nbr, self.port]
        back_p = self.port[self.nbr, self.port]
        ok = (back_v == np.arange(N)[:, None]) & (back_p == np.arange(D)[None, :])
        if not ok.all():
            v, p = map(int, np.argwhere(~ok)[0])
            raise GraphError(f"rot is not an involution at (vertex {v}, port {p})")

    def adjacency(self) -> np.ndarray:
        """Dense adjacency; one unit per (vertex, port)."""
        N, D = self.nbr.shape
        A = np.zeros((N, N), dtype=np.float64)
        np.add.at(A, (np.repeat(np.arange(N), D), self.nbr.ravel()), 1.0)
        return A

    def sparse_adjacency(self) -> csr_matrix:
        N, D = self.nbr.shape
        rows = np.repeat(np.arange(N), D)
        # csr sums duplicates, so multi-edges and loops follow the same convention
        return csr_matrix((np.ones(N * D), (rows, self.nbr.ravel())), shape=(N, N))

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, RotationGraph)
            and self.nbr.shape == other.nbr.shape
            and np.array_equal(self.nbr, other.nbr)
            and np.array_equal(self.port, other.port)
        )

    __hash__ = None  # type: ignore[assignment]


def from_rotation(rot: dict[tuple[int, int], tuple[int, int]], n_vertices: int, degree: int) -> RotationGraph:
    nbr = np.full((n_vertices, degree), -1, dtype=np.int64)
    port = np.full((n_vertices, degree), -1, dtype=np.int64)
    for (v, p), (u, q) in rot.items():
        nbr[v, p] = u
        port[v, p] = q
    if (nbr < 0).any():
        raise GraphError("rotation map is not total")
    g = RotationGraph(nbr, port)
    g.check()
    return g


def cycle_graph(n: int) -> RotationGraph:
    """C_n with port 0 going forward and port 1 going back."""
    if n < 3:
        raise GraphError("cycle needs at least 3 vertices")
    v = np.arange(n)
    nbr = np.stack([(v + 1) % n, (v - 1) % n], axis=1)
    port = np.tile([1, 0], (n, 1))
    return RotationGraph(nbr, port)


def disjoint_union(g: RotationGraph, h: RotationGraph) -> RotationGraph:
    if g.degree != h.degree:
        raise GraphError("degrees differ")
    return RotationGraph(
        np.vstack([g.nbr, h.nbr + g.n_vertices]), np.vstack([g.port, h.port])
    )


# ----------------------------------------------------------------------------
# operations


def power(g: RotationGraph, k: int) -> RotationGraph:
    """Walks of length ``k``; port ``(p1, ..., pk)`` steps ``p1`` first.

    Ports are indexed lexicographically over tuples.  The back-port is the
    reversed tuple of the back-ports met along the way.
    """
    if k < 1:
        raise GraphError("power exponent must be >= 1")
    if k == 1:
        return g
    N, D = g.nbr.shape
    nbr = np.empty((N, D**k), dtype=np.int64)
    port = np.empty((N, D**k), dtype=np.int64)
    start = np.arange(N)
    # reversed tuple (q_k, ..., q_1) -> sum q_j * D^(j-1)
    weights = D ** np.arange(k)
    for idx, tup in enumerate(itertools.product(range(D), repeat=k)):
        cur = start
        back = np.zeros(N, dtype=np.int64)
        for j, p in enumerate(tup):
            q = g.port[cur, p]
            cur = g.nbr[cur, p]
            back += q * weights[j]
        nbr[:, idx] = cur
        port[:, idx] = back
    return RotationGraph(nbr, port)


def zigzag(g: RotationGraph, h: RotationGraph) -> RotationGraph:
    """Zig-zag product of ``g`` (D-regular, N vertices) with ``h`` (d-regular on D vertices).

    Port ``a * d + b`` at ``(x, v)``: zig along ``a`` in ``h``, cross ``g``
    from ``v`` through the port named by the new ``h``-vertex, zag along
    ``b`` in ``h``.  Back-port is ``(b', a')``.
    """
    if h.n_vertices != g.degree:
        raise GraphError(
            f"zigzag needs h.n_vertices == g.degree, got {h.n_vertices} and {g.degree}"
        )
    N = g.n_vertices
    D, d = h.n_vertices, h.degree
    x = np.arange(D)[:, None, None, None]
    v = np.arange(N)[None, :, None, None]
    a = np.arange(d)[None, None, :, None]
    b = np.arange(d)[None, None, None, :]
    x1 = h.nbr[x, a]
    a1 = h.port[x, a]
    u = g.nbr[v, x1]
    y1 = g.port[v, x1]
    y = h.nbr[y1, b]
    b1 = h.port[y1, b]
    shape = (D, N, d, d)
    nbr = np.broadcast_to(y * N + u, shape).reshape(D * N, d * d)
    port = np.broadcast_to(b1 * d + a1, shape).reshape(D * N, d * d)
    return RotationGraph(nbr, port)


def replacement(g: RotationGraph, h: RotationGraph) -> RotationGraph:
    """Replacement product: a copy of ``h`` at every vertex of ``g``.

    Ports ``0..d-1`` at ``(x, v)`` run inside the copy at ``v``; port ``d``
    follows ``g``: ``rot_g(v, x) = (u, y)`` gives ``(x, v) -- (y, u)``.
    """
    if h.n_vertices != g.degree:
        raise GraphError(
            f"replacement needs h.n_vertices == g.degree, got {h.n_vertices} and {g.degree}"
        )
    N = g.n_vertices
    D, d = h.n_vertices, h.degree
    v = np.arange(N)[None, :]
    nbr = np.empty((D, N, d + 1), dtype=np.int64)
    port = np.empty((D, N, d + 1), dtype=np.int64)
    nbr[:, :, :d] = (h.nbr * N)[:, None, :] + v[:, :, None]
    port[:, :, :d] = h.port[:, None, :]
    nbr[:, :, d] = g.port.T * N + g.nbr.T
    port[:, :, d] = d
    return RotationGraph(nbr.reshape(D * N, d + 1), port.reshape(D * N, d + 1))


def add_loops(g: RotationGraph, c: int) -> RotationGraph:
    """Append ``c`` loop ports (rotation fixed points) at every vertex."""
    if c < 0:
        raise GraphError("loop count must be >= 0")
    if c == 0:
        return g
    N, D = g.nbr.shape
    loops_v = np.repeat(np.arange(N)[:, None], c, axis=1)
    loops_p = np.tile(np.arange(D, D + c), (N, 1))
    return RotationGraph(np.hstack([g.nbr, loops_v]), np.hstack([g.port, loops_p]))


# ----------------------------------------------------------------------------
# metrics


def is_connected(g: RotationGraph) -> bool:
    return connected_components(g.sparse_adjacency(), directed=False, return_labels=False) == 1


def _simple_neighbours(g: RotationGraph) -> list[list[int]]:
    return [sorted(set(row) - {v}) for v, row in enumerate(g.nbr.tolist())]


def _bfs(A: csr_matrix, sources) -> np.ndarray:
    return shortest_path(A, directed=False, unweighted=True, indices=np.atleast_1d(sources))


BITSET_LIMIT = 16384


def diameter(g: RotationGraph) -> float:
    """Largest shortest-path distance; ``inf`` if disconnected."""
    N = g.n_vertices
    if N == 1:
        return 0
    if not is_connected(g):
        return INF
    if N <= BITSET_LIMIT:
        return _diameter_bitset(g)
    return _diameter_ifub(g)


def _diameter_bitset(g: RotationGraph) -> int:
    # row v holds the ball around v as packed bits; each round grows all balls by one
    N = g.n_vertices
    reach = np.packbits(np.eye(N, dtype=bool), axis=1)
    steps = 0
    while True:
        nxt = reach.copy()
        for p in range(g.degree):
            nxt |= reach[g.nbr[:, p]]
        if np.array_equal(nxt, reach):
            return steps
        reach = nxt
        steps += 1


def _diameter_ifub(g: RotationGraph) -> int:
    """Exact iFUB scheme for connected graphs.

    BFS from a central vertex ``u`` splits the graph into distance layers;
    only layers far enough from ``u`` can still raise the lower bound, so
    most sources are never expanded.
    """
    A = g.sparse_adjacency()
    # 4-sweep-like start: midpoint of a long shortest path
    d0 = _bfs(A, 0)[0]
    a = int(np.argmax(d0))
    da, pred = shortest_path(A, directed=False, unweighted=True, indices=[a], return_predecessors=True)
    da, pred = da[0], pred[0]
    b = int(np.argmax(da))
    u = b
    for _ in range(int(da[b]) // 2):
        u = int(pred[u])
    du = _bfs(A, u)[0]
    ecc_u = int(du.max())
    lower = max(ecc_u, int(da[b]))
    i = ecc_u
    while 2 * i > lower and i > 0:
        layer = np.flatnonzero(du == i)
        layer_max = 0
        for lo in range(0, len(layer), 256):
            layer_max = max(layer_max, int(_bfs(A, layer[lo:lo + 256]).max()))
        lower = max(lower, layer_max)
        if lower > 2 * (i - 1):
            return lower
        i -= 1
    return lower


def diameter_all_pairs(g: RotationGraph, chunk: int = 512) -> float:
    """Plain all-sources BFS; reference for :func:`diameter`."""
    N = g.n_vertices
    if N == 1:
        return 0
    if not is_connected(g):
        return INF
    A = g.sparse_adjacency()
    best = 0
    for lo in range(0, N, chunk):
        best = max(best, int(_bfs(A, np.arange(lo, min(N, lo + chunk))).max()))
    return best


def girth(g: RotationGraph) -> float:
    """Shortest cycle length; loops count 1, parallel edges count 2."""
    N, D = g.nbr.shape
    if (g.nbr == np.arange(N)[:, None]).any():
        return 1
    for row in g.nbr.tolist():
        if len(set(row)) < len(row):
            return 2
    adj = _simple_neighbours(g)
    best = INF
    for s in range(N):
        dist = {s: 0}
        parent = {s: -1}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            if 2 * dist[u] + 1 >= best:
                break
            for w in adj[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    queue.append(w)
                elif parent[u] != w:
                    best = min(best, dist[u] + dist[w] + 1)
        if best == 3:
            break
    return best


# ----------------------------------------------------------------------------
# labeled equality


def first_difference(
    g: RotationGraph,
    h: RotationGraph,
    vertex_map: Optional[Sequence[int]] = None,
    port_map: Optional[Sequence[int]] = None,
) -> Optional[tuple[int, int]]:
    """First ``(vertex, port)`` of ``g`` where the relabelled rotation maps differ.

    Maps send ``g``-labels to ``h``-labels; ``None`` means the identity.
    Returns ``None`` when the graphs agree.
    """
    if g.nbr.shape != h.nbr.shape:
        return (0, 0)
    N, D = g.nbr.shape
    vm = np.arange(N) if vertex_map is None else np.asarray(vertex_map, dtype=np.int64)
    pm = np.arange(D) if port_map is None else np.asarray(port_map, dtype=np.int64)
    if sorted(vm.tolist()) != list(range(N)) or sorted(pm.tolist()) != list(range(D)):
        raise GraphError("vertex_map and port_map must be bijections")
    want_v = vm[g.nbr]
    want_p = pm[g.port]
    got_v = h.nbr[vm[:, None], pm[None, :]]
    got_p = h.port[vm[:, None], pm[None, :]]
    bad = (want_v != got_v) | (want_p != got_p)
    if not bad.any():
        return None
    v, p = np.argwhere(bad)[0]
    return int(v), int(p)


def equal_labeled(g, h, vertex_map=None, port_map=None) -> bool:
    return first_difference(g, h, vertex_map, port_map) is None


# ----------------------------------------------------------------------------
# serialisation


def _port_pairs(g: RotationGraph):
    N, D = g.nbr.shape
    for v in range(N):
        for p in range(D):
            u, q = int(g.nbr[v, p]), int(g.port[v, p])
            if (v, p) <= (u, q):
                yield v, u, p, q


def export_edgelist(g: RotationGraph) -> str:
    """Header ``N D`` then one ``u v pu pv`` line per port pair, ``u <= v``."""
    records = []
    for v, u, p, q in _port_pairs(g):
        # (v, p) <= (u, q) already puts the smaller vertex first
        records.append((v, u, p, q))
    records.sort()
    lines = [f"{g.n_vertices} {g.degree}"]
    lines += [f"{a} {b} {c} {d}" for a, b, c, d in records]
    return "\n".join(lines) + "\n"


def import_edgelist(text: str) -> RotationGraph:
    rows = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not rows:
        raise GraphError("empty edge list")
    N, D = map(int, rows[0])
    rot = {}
    for r in rows[1:]:
        u, v, pu, pv = map(int, r)
        if (u, pu) in rot or (v, pv) in rot:
            raise GraphError(f"port used twice in record {' '.join(r)}")
        rot[(u, pu)] = (v, pv)
        rot[(v, pv)] = (u, pu)
    return from_rotation(rot, N, D)


def export_dot(g: RotationGraph, name: str = "G") -> str:
    names = g.port_names or tuple(str(p) for p in range(g.degree))
    lines = [f"graph {name} {{"]
    for v in range(g.n_vertices):
        lines.append(f"  {v};")
    for v, u, p, q in sorted(_port_pairs(g)):
        lines.append(f'  {v} -- {u} [taillabel="{names[p]}", headlabel="{names[q]}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
