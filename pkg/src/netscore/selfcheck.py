"""Built-in reference constructions and the self-test suite.

The constructions have closed-form scores that are independent of the
implementation, so they double as a quick installation check:

* two-layer fan: a hub feeds p-2 middle vertices which all feed a sink.
  With the estimate equal to the fan plus a feedback edge sink -> hub, the
  local AUROC is 1 - 1/(2n) for n = p(p-1) - 2(p-2) non-edges, while both
  multi-scale AUROCs sit at 0.5 and both multi-scale AUPRs shrink toward 0.
* ring: a single directed cycle.  Scoring the reversed ring against it makes
  the local scores poor, while the multi-scale scores cannot tell the two
  orientations apart at all.
"""

from __future__ import annotations

import numpy as np

from .closure import boolean_closure
from .effects import effects_matrix, effects_oracle
from .graph_core import UnweightedNetwork, WeightedNetwork, threshold
from .scores import score_local, score_mss1, score_mss2


def fan_benchmark(p: int) -> UnweightedNetwork:
    """Hub 0 -> {1..p-2} -> sink p-1."""
    if p < 4:
        raise ValueError("the fan construction needs p >= 4")
    adj = np.zeros((p, p))
    adj[0, 1:p - 1] = 1.0
    adj[1:p - 1, p - 1] = 1.0
    return UnweightedNetwork.from_array(adj)


def fan_estimate(p: int) -> WeightedNetwork:
    """The fan benchmark plus the feedback edge sink -> hub, as 0/1 weights."""
    adj = fan_benchmark(p).adj.copy()
    adj[p - 1, 0] = 1.0
    return WeightedNetwork.from_array(adj)


def ring_network(p: int) -> UnweightedNetwork:
    adj = np.zeros((p, p))
    for i in range(p):
        adj[i, (i + 1) % p] = 1.0
    return UnweightedNetwork.from_array(adj)


def reversed_ring(p: int) -> UnweightedNetwork:
    return UnweightedNetwork.from_array(ring_network(p).adj.T)


def descendancy_count_by_search(net: UnweightedNetwork) -> int:
    """Number of ordered pairs (i, j), i != j, with a path i -> j, by BFS."""
    p = net.p
    children = [np.flatnonzero(net.adj[u]) for u in range(p)]
    count = 0
    for s in range(p):
        seen = np.zeros(p, dtype=bool)
        frontier = [s]
        while frontier:
            nxt = []
            for u in frontier:
                for c in children[u]:
                    if not seen[c]:
                        seen[c] = True
                        nxt.append(c)
            frontier = nxt
        seen[s] = False
        count += int(seen.sum())
    return count


def _close(a, b, tol=1e-9) -> bool:
    return abs(a - b) <= tol


def run_selftest(verbose: bool = True) -> bool:
    """Run the built-in construction and oracle checks; True when all pass."""
    checks: list[tuple[str, bool]] = []

    def log(name: str, ok: bool):
        checks.append((name, ok))
        if verbose:
            print(f"[{'PASS' if ok else 'FAIL'}] {name}")

    p = 20
    bench = fan_benchmark(p)
    est = fan_estimate(p)
    local = score_local(est, bench)
    # single threshold: TPR = 1, FPR = 1 / (p(p-1) - 2(p-2))
    negatives = p * (p - 1) - 2 * (p - 2)
    log("fan local AUROC closed form",
        _close(local.auroc, 1 - 1 / (2 * negatives), 1e-12))
    m1 = score_mss1(est, bench)
    log("fan mss1 AUROC is one half", m1.auroc == 0.5)
    log("fan mss1 AUPR equals descendancy density",
        _close(m1.aupr, descendancy_count_by_search(bench) / (p * (p - 1))))
    m2 = score_mss2(est, bench, tol=1e-11)
    log("fan mss2 AUROC near one half", _close(m2.auroc, 0.5, 1e-9))
    log("fan mss2 AUPR equals effects density", _close(m2.aupr, 2 / p))

    ring = ring_network(12)
    rev = WeightedNetwork(reversed_ring(12).adj)
    rl = score_local(rev, ring)
    log("ring local AUROC below chance", rl.auroc is not None and rl.auroc < 0.52)
    r1 = score_mss1(rev, ring)
    r2 = score_mss2(rev, ring, tol=1e-11)
    log("ring multi-scale ROC degenerate",
        r1.auroc is None and r2.auroc is None)
    log("ring multi-scale PR saturates",
        _close(r1.aupr, 1.0, 1e-9) and _close(r2.aupr, 1.0, 1e-9))

    fwd3 = WeightedNetwork(ring_network(3).adj)
    rev3 = WeightedNetwork(reversed_ring(3).adj)
    bench3 = ring_network(3)
    log("3-ring orientations tie on mss1",
        score_mss1(fwd3, bench3).aupr == score_mss1(rev3, bench3).aupr)
    log("3-ring orientations tie on mss2",
        score_mss2(fwd3, bench3, tol=1e-11).aupr == score_mss2(rev3, bench3, tol=1e-11).aupr)

    rng = np.random.default_rng(20260822)
    ok = True
    for _ in range(20):
        q = int(rng.integers(2, 9))
        w = rng.random((q, q)) * (rng.random((q, q)) < 0.5)
        np.fill_diagonal(w, 0.0)
        net = WeightedNetwork.from_array(w)
        from .closure import weighted_closure
        tau = weighted_closure(net).tau
        for v in np.unique(w[w > 0]):
            reach = boolean_closure(threshold(net, float(v))).z
            if not np.array_equal(reach, tau >= v):
                ok = False
    log("max-min closure agrees with thresholded reachability", ok)

    ok = True
    for _ in range(20):
        q = int(rng.integers(2, 7))
        order = rng.permutation(q)
        adj = np.zeros((q, q))
        for a in range(q):
            for b in range(a + 1, q):
                if rng.random() < 0.45:
                    adj[order[a], order[b]] = 1.0
        net = UnweightedNetwork.from_array(adj)
        e = effects_matrix(net, tol=1e-12).e
        if np.abs(e - effects_oracle(net, max_len=q)).max() > 1e-9:
            ok = False
    log("effects match path enumeration on random acyclic networks", ok)

    return all(ok for _, ok in checks)
