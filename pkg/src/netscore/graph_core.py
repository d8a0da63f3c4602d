"""Network containers and the elementary operations every score builds on.

A weighted network is a p x p matrix of confidence weights in [0, 1] with a
zero diagonal; an unweighted network is the 0/1 special case.  Cell (i, j)
is the directed edge i -> j, and weight 0 means "no edge".
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

logger = logging.getLogger(__name__)


def _check_square(arr: np.ndarray) -> np.ndarray:
    arr = np.asarray(arr, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValidationError(f"adjacency must be a square matrix, got shape {arr.shape}")
    if arr.shape[0] == 0:
        raise ValidationError("network must have at least one vertex")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("adjacency contains non-finite values")
    return arr


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class UnweightedNetwork:
    """Directed 0/1 adjacency with a zero diagonal."""

    adj: np.ndarray

    @property
    def p(self) -> int:
        return self.adj.shape[0]

    @property
    def edge_count(self) -> int:
        return int(self.adj.sum())

    @classmethod
    def from_array(cls, arr) -> "UnweightedNetwork":
        arr = _check_square(arr)
        if not np.all((arr == 0) | (arr == 1)):
            raise ValidationError("unweighted network values must be 0 or 1")
        if np.any(np.diag(arr) != 0):
            logger.warning("self-edges are not allowed; zeroing %d diagonal entries",
                           int(np.count_nonzero(np.diag(arr))))
            arr = arr.copy()
            np.fill_diagonal(arr, 0.0)
        return cls(_freeze(arr.astype(np.float64)))


@dataclass(frozen=True)
class WeightedNetwork:
    """Directed confidence weights in [0, 1] with a zero diagonal."""

    w: np.ndarray

    @property
    def p(self) -> int:
        return self.w.shape[0]

    @property
    def edge_count(self) -> int:
        return int(np.count_nonzero(self.w))

    @classmethod
    def from_array(cls, arr) -> "WeightedNetwork":
        """Build a network from raw weights.

        Negative weights are rejected.  Weights above 1 are handled by dividing
        the whole matrix by its maximum (rescaled, never clipped).  Nonzero
        diagonal entries are dropped to 0 with a warning.
        """
        arr = _check_square(arr)
        if np.any(arr < 0):
            raise ValidationError("weights must be non-negative")
        arr = arr.copy()
        if np.any(np.diag(arr) != 0):
            logger.warning("self-weights are not allowed; zeroing %d diagonal entries",
                           int(np.count_nonzero(np.diag(arr))))
            np.fill_diagonal(arr, 0.0)
        top = arr.max(initial=0.0)
        if top > 1.0:
            logger.info("weights exceed 1; dividing all weights by the maximum %g", top)
            arr = arr / top
        return cls(_freeze(arr))


@dataclass(frozen=True)
class VertexPermutation:
    """A bijection on vertex indices, stored as the image array pi[i]."""

    pi: np.ndarray

    def __post_init__(self):
        pi = np.asarray(self.pi, dtype=np.intp)
        if pi.ndim != 1:
            raise ValidationError("permutation must be a 1-d index array")
        if not np.array_equal(np.sort(pi), np.arange(pi.size)):
            raise ValidationError("permutation must be a bijection on 0..p-1")
        object.__setattr__(self, "pi", _freeze(pi))

    @property
    def p(self) -> int:
        return self.pi.size

    @classmethod
    def identity(cls, p: int) -> "VertexPermutation":
        return cls(np.arange(p))

    def inverse(self) -> "VertexPermutation":
        inv = np.empty_like(self.pi)
        inv[self.pi] = np.arange(self.pi.size)
        return VertexPermutation(inv)


def threshold(net: WeightedNetwork, tau: float) -> UnweightedNetwork:
    """Keep edges with weight >= tau (inclusive); the diagonal stays empty.

    tau must lie in [0, 1].  tau = 0 keeps every off-diagonal cell, so the
    result is the complete network minus the diagonal.
    """
    if not 0.0 <= tau <= 1.0:
        raise ValidationError(f"threshold must lie in [0, 1], got {tau}")
    keep = net.w >= tau
    np.fill_diagonal(keep, False)
    return UnweightedNetwork(_freeze(keep.astype(np.float64)))


def permute(net, perm: VertexPermutation):
    """Relabel vertices: cell (i, j) moves to (pi[i], pi[j])."""
    if perm.p != net.p:
        raise ValidationError("permutation size does not match the network")
    if isinstance(net, WeightedNetwork):
        out = np.empty_like(net.w)
        out[np.ix_(perm.pi, perm.pi)] = net.w
        return WeightedNetwork(_freeze(out))
    out = np.empty_like(net.adj)
    out[np.ix_(perm.pi, perm.pi)] = net.adj
    return UnweightedNetwork(_freeze(out))


def as_weighted(net) -> WeightedNetwork:
    if isinstance(net, WeightedNetwork):
        return net
    if isinstance(net, UnweightedNetwork):
        return WeightedNetwork(net.adj)
    return WeightedNetwork.from_array(net)


def as_unweighted(net) -> UnweightedNetwork:
    if isinstance(net, UnweightedNetwork):
        return net
    if isinstance(net, WeightedNetwork):
        return UnweightedNetwork.from_array(net.w)
    return UnweightedNetwork.from_array(net)


def validate(est, bench) -> tuple[WeightedNetwork, UnweightedNetwork]:
    """Coerce and validate an (estimate, benchmark) pair for scoring.

    Checks: both square with equal vertex count; estimate weights in [0, 1]
    with zero diagonal; benchmark 0/1 with zero diagonal, at least one edge
    and at least one off-diagonal non-edge.
    """
    est = as_weighted(est)
    bench = as_unweighted(bench)
    if est.p != bench.p:
        raise ValidationError(
            f"estimate has {est.p} vertices but benchmark has {bench.p}")
    p = bench.p
    edges = bench.edge_count
    if edges == 0:
        raise ValidationError("benchmark has no edges")
    if edges == p * (p - 1):
        raise ValidationError("benchmark has no non-edges")
    return est, bench
