"""Directed effects matrices.

The effect e[i][j] of vertex i on vertex j is delta_ij plus, over every
directed path from i to j that never revisits i (other vertices may repeat),
the product over path steps of 1 / indegree(step target).  Equivalently each
row e[i] is the fixed point of an iteration matrix M built from the network:

  - row i of M is the standard basis row (the source keeps its own value),
  - row k of M, for k reachable from i, averages the parents of k,
  - every other row of M is zero.

The fixed point is computed by power iteration v <- M v / ||M v||, stopped
the first time the L1 change between consecutive iterates drops below
``tol``, then rescaled so entry i is exactly 1.  Iterates are normalized by
the sup norm: starting from the basis vector the entries are partial path
sums, entry i stays the maximum at 1, and the L1 change per step is exactly
the newly added path mass, which is the scale the default tol = 0.01 * p is
calibrated to.  Effects always lie in [0, 1] and the diagonal is exactly 1.

This is not PageRank: normalization is by indegree of the *target* of each
step, there is no damping, and the source row is pinned.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .closure import boolean_closure
from .errors import ConvergenceError, ValidationError
from .graph_core import UnweightedNetwork, _freeze

DEFAULT_MAX_ITER = 10_000


def default_tol(p: int) -> float:
    """Default stopping tolerance for the power iteration: 0.01 * p."""
    return 0.01 * p


def _parent_average_matrix(net: UnweightedNetwork) -> np.ndarray:
    """P[k][m] = 1/indegree(k) if m -> k is an edge, else 0 (zero row if no parents)."""
    adj = net.adj
    indeg = adj.sum(axis=0)
    safe = np.where(indeg > 0, indeg, 1.0)
    return (adj / safe[None, :]).T


def iteration_matrix(net: UnweightedNetwork, i: int,
                     reachable: np.ndarray | None = None) -> np.ndarray:
    """The per-source matrix M whose fixed point is the effects row of i."""
    p = net.p
    if not 0 <= i < p:
        raise ValidationError(f"source vertex {i} out of range for p={p}")
    if reachable is None:
        reachable = boolean_closure(net).z[i]
    m = np.zeros((p, p))
    rows = reachable.astype(bool).copy()
    rows[i] = False
    m[rows] = _parent_average_matrix(net)[rows]
    m[i] = 0.0
    m[i, i] = 1.0
    return m


def _power_iterate(m: np.ndarray, i: int, tol: float,
                   max_iter: int, v0: np.ndarray | None = None) -> tuple[np.ndarray, int]:
    if v0 is None:
        v = np.zeros(m.shape[0])
        v[i] = 1.0
    else:
        v = np.asarray(v0, dtype=float).copy()
    for it in range(1, max_iter + 1):
        u = m @ v
        top = np.abs(u).max()
        if top == 0.0:
            raise ConvergenceError("iterate collapsed to zero")
        u /= top
        diff = np.abs(u - v).sum()
        v = u
        if diff < tol:
            if v[i] == 0.0:
                raise ConvergenceError("source entry vanished during iteration")
            return v / v[i], it
    raise ConvergenceError(
        f"power iteration did not converge within {max_iter} iterations (tol={tol})")


@dataclass(frozen=True)
class EffectsMatrix:
    """Row i holds the effects of source vertex i; diagonal entries are 1."""

    e: np.ndarray
    iterations: tuple[int, ...] = ()

    @property
    def p(self) -> int:
        return self.e.shape[0]


def effects_row(net: UnweightedNetwork, i: int, tol: float | None = None,
                max_iter: int = DEFAULT_MAX_ITER,
                v0: np.ndarray | None = None) -> np.ndarray:
    """Effects of source vertex i on every vertex, as a length-p vector."""
    if tol is None:
        tol = default_tol(net.p)
    m = iteration_matrix(net, i)
    row, _ = _power_iterate(m, i, tol, max_iter, v0=v0)
    return row


def effects_matrix(net: UnweightedNetwork, tol: float | None = None,
                   max_iter: int = DEFAULT_MAX_ITER) -> EffectsMatrix:
    """Effects of every source vertex, one power iteration per row."""
    p = net.p
    if tol is None:
        tol = default_tol(p)
    reach = boolean_closure(net).z
    par = _parent_average_matrix(net)
    e = np.zeros((p, p))
    iters = []
    for i in range(p):
        m = np.zeros((p, p))
        rows = reach[i].astype(bool).copy()
        rows[i] = False
        m[rows] = par[rows]
        m[i, i] = 1.0
        row, it = _power_iterate(m, i, tol, max_iter)
        e[i] = row
        iters.append(it)
    return EffectsMatrix(_freeze(e), tuple(iters))


def effects_oracle(net: UnweightedNetwork, max_len: int,
                   path_cap: int = 2_000_000) -> np.ndarray:
    """Effects by explicit path enumeration, for small test networks only.

    Enumerates every directed path of at most ``max_len`` edges that does not
    revisit its source (other vertices may repeat) and accumulates the product
    of 1/indegree over the traversed targets.  Intended for p <= 8; guarded
    against combinatorial blowup by ``path_cap`` on enumerated arrivals.
    On an acyclic network with max_len >= p this is exact.
    """
    p = net.p
    if p > 8:
        raise ValidationError(f"path enumeration oracle is limited to p <= 8, got {p}")
    adj = net.adj
    indeg = adj.sum(axis=0)
    children = [np.flatnonzero(adj[u]) for u in range(p)]
    acc = np.eye(p)
    arrivals = 0
    for src in range(p):
        stack = [(src, 0, 1.0)]
        while stack:
            u, depth, prod = stack.pop()
            if depth >= max_len:
                continue
            for c in children[u]:
                if c == src:
                    continue
                arrivals += 1
                if arrivals > path_cap:
                    raise ValidationError(
                        f"path enumeration exceeded the cap of {path_cap} arrivals")
                q = prod / indeg[c]
                acc[src, c] += q
                stack.append((c, depth + 1, q))
    return acc
