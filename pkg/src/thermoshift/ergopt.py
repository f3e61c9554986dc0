"""Ergodic optimization: best invariant averages, subactions, ground sets.

For a cylinder potential the sup of -log H over invariant measures is the
maximum mean cycle of the word graph (nodes: words of length d-1, edges:
words of length d), so everything here is exact graph work in doubles.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .shiftspace import (
    CylinderFunction,
    CylinderMeasure,
    ShiftModel,
    ShiftSpaceError,
    admissible_words,
    birkhoff,
    integrate,
    word_index,
)
from .transfer import ConvergenceError, cond_expectation

_TIE_TOL = 1e-12


def _word_graph(model: ShiftModel, f: CylinderFunction):
    """Edge-weighted graph of the depth-d tabulation of f (d >= 2)."""
    d = max(f.depth, 2)
    g = f.refine(d)
    nodes = admissible_words(model, d - 1)
    nidx = {w: i for i, w in enumerate(nodes)}
    edges = []  # (u, v, weight, edge_word)
    for w, val in zip(admissible_words(model, d), g.values):
        edges.append((nidx[w[:-1]], nidx[w[1:]], float(val), w))
    return nodes, edges


def _karp_max_mean(n_nodes: int, edges) -> float:
    """Karp's maximum mean cycle over a strongly-connected-enough digraph."""
    neg_inf = -np.inf
    dp = np.full((n_nodes + 1, n_nodes), neg_inf)
    dp[0, :] = 0.0  # walks may start anywhere; cycles are what survive the minimax
    for k in range(1, n_nodes + 1):
        for u, v, w, _ in edges:
            cand = dp[k - 1, u] + w
            if cand > dp[k, v]:
                dp[k, v] = cand
    best = neg_inf
    for v in range(n_nodes):
        if dp[n_nodes, v] == neg_inf:
            continue
        worst = np.inf
        for k in range(n_nodes):
            if dp[k, v] > neg_inf:
                worst = min(worst, (dp[n_nodes, v] - dp[k, v]) / (n_nodes - k))
        best = max(best, worst)
    return float(best)


def _simple_cycles(n_nodes: int, edges):
    """All simple cycles as edge-index lists, canonical rotation."""
    out_edges = [[] for _ in range(n_nodes)]
    for i, (u, v, _, _) in enumerate(edges):
        out_edges[u].append((v, i))
    cycles = []

    def dfs(start, node, path_nodes, path_edges):
        for nxt, ei in out_edges[node]:
            if nxt == start:
                cycles.append(list(path_edges) + [ei])
            elif nxt > start and nxt not in path_nodes:
                dfs(start, nxt, path_nodes | {nxt}, path_edges + [ei])

    for s in range(n_nodes):
        dfs(s, s, {s}, [])
    return cycles


def brute_force_max_mean(model: ShiftModel, f: CylinderFunction,
                         max_len: int = 12):
    """Independent oracle: enumerate simple cycles up to max_len edges."""
    nodes, edges = _word_graph(model, f)
    best = -np.inf
    best_cycle = None
    for cyc in _simple_cycles(len(nodes), edges):
        if len(cyc) > max_len:
            continue
        mean = sum(edges[i][2] for i in cyc) / len(cyc)
        word = tuple(edges[i][3][0] for i in cyc)
        if mean > best + _TIE_TOL or (abs(mean - best) <= _TIE_TOL
                                      and (best_cycle is None or word < best_cycle)):
            best = max(best, mean)
            best_cycle = word
    return best, best_cycle


@dataclass(frozen=True)
class Optimum:
    """Best invariant average of -log H with a periodic witness."""

    m: float
    witness_cycle: tuple[int, ...]
    all_witnesses: tuple[tuple[int, ...], ...]
    slack: dict = field(repr=False, default_factory=dict)

    @property
    def tie(self) -> bool:
        return len(self.all_witnesses) > 1


def m_value(model: ShiftModel, H: CylinderFunction) -> Optimum:
    """Maximum mean of -log H over cycles of the word graph.

    Karp's recurrence gives the value; witnesses come from enumerating the
    simple cycles whose mean ties with it (lexicographically least first).
    """
    if (np.real(H.values) <= 0).any():
        raise ShiftSpaceError("H must be strictly positive")
    f = -H.log()
    nodes, edges = _word_graph(model, f)
    m = _karp_max_mean(len(nodes), edges)
    witnesses = []
    slack = {}
    for cyc in _simple_cycles(len(nodes), edges):
        mean = sum(edges[i][2] for i in cyc) / len(cyc)
        word = tuple(edges[i][3][0] for i in cyc)
        slack[word] = m - mean
        if abs(mean - m) <= _TIE_TOL:
            witnesses.append(word)
    witnesses.sort(key=lambda w: (len(w), w))
    if not witnesses:
        raise ConvergenceError("no cycle attains the Karp value", residual=None)
    return Optimum(m, witnesses[0], tuple(witnesses), slack)


def subaction(model: ShiftModel, H: CylinderFunction, m: float | None = None,
              tol: float = 1e-12, max_sweeps: int = 10_000) -> CylinderFunction:
    """Max-plus value iteration for V with V(Tx) - V(x) >= -log H(x) - m.

    V(x) is the best total of -log H - m over backward orbits ending at x
    (at least one step); it is attained at finite length because no cycle
    has positive mean once m is subtracted.
    """
    if m is None:
        m = m_value(model, H).m
    fbar = -H.log() - m
    nodes, edges = _word_graph(model, fbar)
    n = len(nodes)
    # one-step seed, then keep extending backward while anything improves
    neg_inf = -np.inf
    v1 = np.full(n, neg_inf)
    for u, v_, w, _ in edges:
        v1[v_] = max(v1[v_], w)
    V = v1.copy()
    stable = 0
    for _ in range(max_sweeps):
        new = v1.copy()
        for u, v_, w, _ in edges:
            if V[u] > neg_inf:
                new[v_] = max(new[v_], V[u] + w)
        new = np.maximum(new, V)
        change = float(np.max(np.abs(new - V)))
        V = new
        stable = stable + 1 if change < tol else 0
        if stable >= 3:
            break
    else:
        raise ConvergenceError(
            "subaction iteration did not settle; a cycle with positive mean "
            "remains (m too small?)", residual=change)
    return CylinderFunction(model, len(nodes[0]), V)


def cohomologous_tilt(model: ShiftModel, H: CylinderFunction,
                      V: CylinderFunction) -> CylinderFunction:
    """The tilted energy H * exp(-V + V o T).

    Shares all invariant averages with H; after the tilt -log of it never
    exceeds the optimal mean, with equality on the witness cycle.
    """
    from .shiftspace import alpha_power

    return H * (-V + alpha_power(V, 1)).exp()


@dataclass(frozen=True)
class GroundSet:
    """Cylinder-level conditional minima of the n-fold product of H."""

    n: int
    word_length: int
    members: frozenset


def conditional_minima(model: ShiftModel, H: CylinderFunction, n: int) -> GroundSet:
    """Words minimizing H^{[n]} within their class.

    Classes fix the trailing H.depth - 1 symbols plus one admissible
    lookahead symbol (so only prefixes with a common continuation compete);
    ties are all kept.
    """
    if n < 1:
        raise ShiftSpaceError("n must be >= 1")
    depth = max(H.depth, 1)
    hn = birkhoff(H, n)
    length = n + depth - 1
    hn = hn.refine(length)
    words = admissible_words(model, length)
    t = model.matrix
    members = set()
    # class key: (suffix after the free prefix, continuation symbol)
    classes: dict = {}
    for w, val in zip(words, hn.values):
        for a in range(model.alphabet_size):
            if t[w[-1], a]:
                classes.setdefault((w[n:], a), []).append((w, float(val)))
    for group in classes.values():
        lo = min(v for _, v in group)
        for w, v in group:
            if v <= lo + _TIE_TOL * max(1.0, abs(lo)):
                members.add(w)
    return GroundSet(n, length, frozenset(members))


def ground_support_test(model: ShiftModel, p: CylinderFunction,
                        H: CylinderFunction, mu: CylinderMeasure, n: int,
                        beta_grid=None, slope_tol: float = 1e-6) -> dict:
    """Probe boundedness of I(beta) = integral of h^beta E_n(h^{-beta}) d mu,
    h = H^{[n]}.

    Bounded I (flat log-slope) certifies that mu lives on the conditional
    minima of h; growth exposes a cylinder where minimality fails.
    """
    if beta_grid is None:
        beta_grid = np.arange(0.0, 55.0, 5.0)
    beta_grid = np.asarray(beta_grid, dtype=float)
    h = birkhoff(H, n)
    vals = []
    for beta in beta_grid:
        eb = (h ** beta) * cond_expectation(model, p, n, h ** (-beta))
        vals.append(float(np.real(integrate(mu, eb))))
    vals = np.array(vals)
    top = slice(len(beta_grid) // 2, None)
    slope = float(np.polyfit(beta_grid[top], np.log(vals[top]), 1)[0])
    bounded = slope <= slope_tol
    witness = None
    if not bounded:
        gs = conditional_minima(model, H, n)
        for w in admissible_words(model, gs.word_length):
            if w not in gs.members and mu.mass_of(w) > 1e-12:
                witness = w
                break
    return {
        "beta_grid": beta_grid.tolist(),
        "I": vals.tolist(),
        "sup_I": float(vals.max()),
        "slope": slope,
        "classification": "BOUNDED" if bounded else "UNBOUNDED",
        "witness": witness,
    }
