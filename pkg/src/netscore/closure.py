"""Transitive closures: boolean reachability and the max-min weight closure.

``weighted_closure`` generalizes Warshall's algorithm to weights: the closed
weight tau[i][j] is the largest threshold at which j is still reachable from
i, i.e. the maximum over directed paths of the minimum edge weight along the
path.  Equivalently, thresholding the closure at any level v gives exactly
the reachability of the network thresholded at v.

Both closures run the same triple loop with intermediate vertex k outermost.
Updating in place is safe because step k never changes row k or column k.
The diagonal entry tau[i][i] (and z[i][i]) refers to paths from i back to
itself, so it ends up as the largest threshold at which i lies on a cycle;
scoring excludes the diagonal unless stated otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph_core import UnweightedNetwork, WeightedNetwork, _freeze


@dataclass(frozen=True)
class TauMatrix:
    """Max-min closure weights; tau[i][j] = 0 when j is unreachable from i."""

    tau: np.ndarray

    @property
    def p(self) -> int:
        return self.tau.shape[0]


@dataclass(frozen=True)
class DescendancyLabels:
    """Boolean reachability; z[i][j] is True iff a directed path i -> j exists."""

    z: np.ndarray

    @property
    def p(self) -> int:
        return self.z.shape[0]


def weighted_closure(net: WeightedNetwork) -> TauMatrix:
    tau = net.w.copy()
    p = tau.shape[0]
    for k in range(p):
        np.maximum(tau, np.minimum(tau[:, k][:, None], tau[k, :][None, :]), out=tau)
    return TauMatrix(_freeze(tau))


def boolean_closure(net: UnweightedNetwork) -> DescendancyLabels:
    z = net.adj != 0
    p = z.shape[0]
    for k in range(p):
        np.logical_or(z, z[:, k][:, None] & z[k, :][None, :], out=z)
    return DescendancyLabels(_freeze(z))
