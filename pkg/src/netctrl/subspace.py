"""Dimension of the controllable subspace for a chosen driver set.

The network's adjacency structure fixes only the sparsity pattern of the
dynamics; the achievable (generic) rank of the reachability sequence
[B, AB, A^2 B, ...] is what almost every numeric weighting realizes. Two
routes are provided:

* :func:`controllable_dim` assigns independent uniformly random nonzero
  weights over a prime field and computes the Krylov rank by incremental
  elimination, restricted to the subgraph reachable from the drivers.
  Each trial misses the generic rank with probability at most N^2 / p;
  the best of ``trials`` independent weightings is returned.
* :func:`exact_dim_oracle` builds the full reachability matrix for random
  integer weightings and takes its rank in exact arbitrary-precision
  arithmetic. Quadratic in memory and meant for tiny graphs; it exists to
  cross-check the finite-field route.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass

import numpy as np

from .graph import DirectedGraph
from .seeds import child_seeds

_PRIME = 2_147_483_647  # 2^31 - 1: products of two residues stay below 2^62
_ORACLE_MAX_NODES = 12
_ORACLE_WEIGHT_RANGE = 10**6


@dataclass(frozen=True)
class SubspaceResult:
    """Controllable-subspace dimension, absolute and as a fraction of N."""

    n_b_abs: int
    n_b: float
    reachable_count: int
    trials_used: int
    method: str  # "generic-rank" or "exact-oracle"


def _check_drivers(g: DirectedGraph, drivers) -> list[int]:
    ds = sorted(set(int(x) for x in drivers))
    if not ds:
        raise ValueError("driver set must be non-empty")
    if ds[0] < 0 or ds[-1] >= g.node_count:
        raise ValueError(f"driver ids must lie in 0..{g.node_count - 1}")
    return ds


def _check_attachments(g: DirectedGraph, ds: list[int], attachments) -> dict[int, tuple[int, ...]]:
    """Normalize the driver -> extra feed nodes mapping.

    A driver's input signal may additionally connect to nodes of cycles that
    no directed path reaches from any driver (the sharing that makes a
    minimum driver set fully controlling). Keys must be drivers.
    """
    if not attachments:
        return {}
    out: dict[int, tuple[int, ...]] = {}
    dset = set(ds)
    for d in sorted(attachments):
        if d not in dset:
            raise ValueError(f"attachment key {d} is not a driver")
        extra = sorted(set(int(x) for x in attachments[d]))
        if extra and (extra[0] < 0 or extra[-1] >= g.node_count):
            raise ValueError(f"attachment node ids must lie in 0..{g.node_count - 1}")
        if extra:
            out[d] = tuple(extra)
    return out


def reachable_set(g: DirectedGraph, drivers) -> tuple[int, ...]:
    """Nodes reachable from the drivers along directed edges (sorted)."""
    ds = _check_drivers(g, drivers)
    seen = [False] * g.node_count
    queue = deque(ds)
    for d in ds:
        seen[d] = True
    out_adj = g.out_adjacency
    while queue:
        u = queue.popleft()
        for v in out_adj[u]:
            if not seen[v]:
                seen[v] = True
                queue.append(v)
    return tuple(i for i, s in enumerate(seen) if s)


class _ModBasis:
    """Row basis in reduced echelon form over the prime field."""

    def __init__(self, n: int):
        self.n = n
        self.rows = np.zeros((n, n), dtype=np.int64)
        self.pivots: list[int] = []
        self.rank = 0

    def insert(self, vec: np.ndarray) -> np.ndarray | None:
        """Reduce ``vec`` against the basis; adopt and return it if independent."""
        p = _PRIME
        if self.rank:
            basis = self.rows[: self.rank]
            coeffs = vec[self.pivots]
            if coeffs.any():
                vec = (vec - ((coeffs[:, None] * basis) % p).sum(axis=0)) % p
        nz = np.flatnonzero(vec)
        if nz.size == 0:
            return None
        j = int(nz[0])
        inv = pow(int(vec[j]), p - 2, p)
        vec = (vec * inv) % p
        if self.rank:
            col = self.rows[: self.rank, j]
            if col.any():
                self.rows[: self.rank] = (
                    self.rows[: self.rank] - (col[:, None] * vec[None, :]) % p
                ) % p
        self.rows[self.rank] = vec
        self.pivots.append(j)
        self.rank += 1
        return vec.copy()


def controllable_dim(
    g: DirectedGraph, drivers, trials: int = 3, seed: int = 0, attachments=None
) -> SubspaceResult:
    """Generic dimension of the subspace controllable from ``drivers``.

    Edge and input weights are drawn uniformly from the nonzero residues of
    a fixed prime field, independently per trial; the returned dimension is
    the largest Krylov rank across trials. The elimination runs on the
    subgraph reachable from the input connection points only (unreachable
    nodes cannot enter the controllable subspace).

    ``attachments`` optionally maps a driver to extra nodes its signal also
    feeds; the input matrix keeps one column per driver, with one nonzero
    per connected node. By default every column has a single nonzero at the
    driver itself.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    ds = _check_drivers(g, drivers)
    extra = _check_attachments(g, ds, attachments)
    roots = sorted(set(ds).union(*extra.values())) if extra else ds
    reach = reachable_set(g, roots)
    nr = len(reach)
    index = {node: i for i, node in enumerate(reach)}
    srcs = []
    dsts = []
    for u in reach:
        iu = index[u]
        for v in g.out_adjacency[u]:
            srcs.append(iu)
            dsts.append(index[v])
    src = np.array(srcs, dtype=np.int64)
    dst = np.array(dsts, dtype=np.int64)
    feeds = [[index[d]] + [index[x] for x in extra.get(d, ())] for d in ds]

    p = _PRIME
    best = 0
    trials_used = 0
    for trial in range(trials):
        trials_used = trial + 1
        rng = np.random.default_rng(child_seeds(1, seed, trial))
        weights = rng.integers(1, p, size=len(srcs), dtype=np.int64)

        def matvec(vec: np.ndarray) -> np.ndarray:
            out = np.zeros(nr, dtype=np.int64)
            if src.size:
                np.add.at(out, dst, (weights * vec[src]) % p)
            return out % p

        basis = _ModBasis(nr)
        frontier: list[np.ndarray] = []
        for feed in feeds:
            vec = np.zeros(nr, dtype=np.int64)
            for fi in feed:
                vec[fi] = int(rng.integers(1, p))
            added = basis.insert(vec)
            if added is not None:
                frontier.append(added)
        while frontier and basis.rank < nr:
            nxt = []
            for vec in frontier:
                added = basis.insert(matvec(vec))
                if added is not None:
                    nxt.append(added)
            frontier = nxt
        best = max(best, basis.rank)
        if best == nr:
            break
    return SubspaceResult(
        n_b_abs=best,
        n_b=best / g.node_count,
        reachable_count=nr,
        trials_used=trials_used,
        method="generic-rank",
    )


def _exact_rank(rows: list[list[int]]) -> int:
    """Rank of an integer matrix via fraction-free (Bareiss) elimination."""
    mat = [row[:] for row in rows]
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    rank = 0
    prev = 1
    for c in range(ncols):
        piv = next((i for i in range(rank, nrows) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        lead = mat[rank][c]
        for i in range(rank + 1, nrows):
            fi = mat[i][c]
            row_i = mat[i]
            row_r = mat[rank]
            mat[i] = [(lead * row_i[j] - fi * row_r[j]) // prev for j in range(ncols)]
        prev = lead
        rank += 1
        if rank == nrows:
            break
    return rank


def exact_dim_oracle(
    g: DirectedGraph, drivers, assignments: int = 5, seed: int = 0, attachments=None
) -> SubspaceResult:
    """Exact-arithmetic controllable dimension for tiny graphs (N <= 12).

    For each assignment, every edge and input weight is an independent
    random integer; the full N x (N * N_c) reachability matrix is built and
    its rank taken with exact integer arithmetic. The maximum over
    assignments is returned. Independent of :func:`controllable_dim` in
    both arithmetic and construction, which is the point.
    """
    n = g.node_count
    if n > _ORACLE_MAX_NODES:
        raise ValueError(f"oracle supports at most {_ORACLE_MAX_NODES} nodes, got {n}")
    if assignments < 1:
        raise ValueError("assignments must be >= 1")
    ds = _check_drivers(g, drivers)
    extra = _check_attachments(g, ds, attachments)
    roots = sorted(set(ds).union(*extra.values())) if extra else ds
    reach = reachable_set(g, roots)

    best = 0
    used = 0
    for a in range(assignments):
        used = a + 1
        rng = random.Random(child_seeds(1, seed, a)[0])
        amat = [[0] * n for _ in range(n)]
        for u, v in g.edges:
            amat[v][u] = rng.randint(1, _ORACLE_WEIGHT_RANGE)
        cols: list[list[int]] = []
        for d in ds:
            col = [0] * n
            col[d] = rng.randint(1, _ORACLE_WEIGHT_RANGE)
            for x in extra.get(d, ()):
                col[x] = rng.randint(1, _ORACLE_WEIGHT_RANGE)
            cols.append(col)
        krylov = [col[:] for col in cols]
        for _ in range(n - 1):
            nxt = []
            for col in krylov[-len(ds):]:
                nxt.append([sum(amat[i][j] * col[j] for j in range(n)) for i in range(n)])
            krylov.extend(nxt)
        # rank of the matrix whose columns are the krylov vectors
        rows = [[col[i] for col in krylov] for i in range(n)]
        best = max(best, _exact_rank(rows))
        if best == n:
            break
    return SubspaceResult(
        n_b_abs=best,
        n_b=best / n,
        reachable_count=len(reach),
        trials_used=used,
        method="exact-oracle",
    )
