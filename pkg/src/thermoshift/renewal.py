"""Renewal shift on two symbols with polynomial cell weights.

The space splits into cells M_0 = [0] and M_k = [1^k 0], k >= 1, with the
shift mapping M_k onto M_{k-1} and M_0 onto everything; the cell energies
are a_0 = -log zeta(gamma) and a_k = -gamma log((k+1)/k), so the partial
sums s_k satisfy exp(s_k) = (k+1)^{-gamma} / zeta(gamma) and the dual
eigenmeasure masses are available in closed form.  The pressure of
beta-scaled energies is flat at zero past beta = 1 and strictly decreasing
before it, with a kink at 1: a first-order transition.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq


def zeta(gamma: float, tol: float = 1e-12) -> float:
    """Partial sums of n^-gamma plus an integral tail estimate.

    The tail sum over n > N lies between the integrals from N+1 and N; the
    midpoint halves the bracket, and N grows until the bracket fits tol.
    """
    if gamma <= 1:
        raise ValueError("gamma must be > 1")
    N = 100
    while True:
        lo = (N + 1) ** (1 - gamma) / (gamma - 1)
        hi = N ** (1 - gamma) / (gamma - 1)
        if hi - lo <= 2 * tol or N > 10 ** 8:
            break
        N *= 4
    n = np.arange(1, N + 1, dtype=float)
    return float(np.sum(n ** -gamma) + 0.5 * (lo + hi))


@dataclass(frozen=True)
class RenewalModel:
    """Cell weights at a fixed exponent gamma > 2, truncated at cell K."""

    gamma: float
    K: int
    zeta_value: float = field(init=False)
    a: np.ndarray = field(init=False, repr=False)
    s: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.gamma <= 2:
            raise ValueError("gamma must be > 2 for probability measures")
        if self.K < 1:
            raise ValueError("K must be >= 1")
        z = zeta(self.gamma)
        k = np.arange(self.K + 1, dtype=float)
        a = np.empty(self.K + 1)
        a[0] = -np.log(z)
        a[1:] = -self.gamma * np.log((k[1:] + 1) / k[1:])
        s = np.cumsum(a)
        object.__setattr__(self, "zeta_value", z)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "s", s)

    def tail_mass(self) -> float:
        """Mass beyond the truncation: sum_{k>K} (k+1)^-gamma / zeta."""
        g = self.gamma
        N = self.K + 1  # first dropped term is (K+2)^-gamma
        lo = (N + 2) ** (1 - g) / (g - 1)
        hi = (N + 1) ** (1 - g) / (g - 1)
        return 0.5 * (lo + hi) / self.zeta_value


def eigenmeasure_masses(m: RenewalModel) -> np.ndarray:
    """Closed-form dual-eigenvector masses nu(M_k) = (k+1)^-gamma / zeta."""
    k = np.arange(m.K + 1, dtype=float)
    return (k + 1) ** -m.gamma / m.zeta_value


def _renewal_equation(m: RenewalModel, beta: float, P: float) -> float:
    """sum_k exp(beta s_k - (k+1) P) - 1."""
    return float(np.exp(beta * m.s - (np.arange(m.K + 1) + 1) * P).sum()) - 1.0


def pressure_at(m: RenewalModel, beta: float, tol: float = 1e-12):
    """Root P >= 0 of the renewal equation, or 0 when no positive root exists.

    Returns (P, residual).  The left side is strictly decreasing in P, so a
    positive root exists iff the P = 0 value exceeds 1.
    """
    at_zero = _renewal_equation(m, beta, 0.0)
    if at_zero <= 0.0:
        return 0.0, 0.0
    hi = 1.0
    while _renewal_equation(m, beta, hi) > 0:
        hi *= 2.0
        if hi > 1e6:
            raise RuntimeError(f"pressure bracket failed at beta={beta}")
    P = brentq(lambda q: _renewal_equation(m, beta, q), 0.0, hi, xtol=tol)
    return float(P), abs(_renewal_equation(m, beta, P))


@dataclass(frozen=True)
class PressureCurve:
    beta: np.ndarray
    P: np.ndarray
    residual: np.ndarray

    def as_rows(self):
        return list(zip(self.beta.tolist(), self.P.tolist(), self.residual.tolist()))


def pressure_curve(m: RenewalModel, beta_grid) -> PressureCurve:
    beta_grid = np.asarray(beta_grid, dtype=float)
    P = np.empty_like(beta_grid)
    res = np.empty_like(beta_grid)
    for i, b in enumerate(beta_grid):
        P[i], res[i] = pressure_at(m, float(b))
    return PressureCurve(beta_grid, P, res)


def tower_matvec(m: RenewalModel, beta: float, phi: np.ndarray) -> np.ndarray:
    """One application of the truncated transfer operator on cell functions.

    Preimages of a point in cell j sit in cell j+1 (one point) and in cell 0
    (the point prepending symbol 0), so
        (L phi)(j) = exp(beta a_{j+1}) phi(j+1) + exp(beta a_0) phi(0).
    The escaping j = K upward branch is dropped.
    """
    w = np.exp(beta * m.a)
    out = np.empty_like(phi)
    out[:-1] = w[1:] * phi[1:]
    out[-1] = 0.0
    out += w[0] * phi[0]
    return out


def tower_pressure_oracle(m: RenewalModel, beta: float, tol: float = 1e-13) -> float:
    """Independent check: log of the leading eigenvalue of the truncated
    cell-to-cell transfer matrix, floored at 0 (past the transition the
    truncated eigenvalue creeps up to 1 from below as K grows).

    Krylov methods stall here: the truncated spectrum fills a near-circle
    with tiny separations.  Instead bisect on t using the M-matrix test —
    for a nonnegative irreducible A, (tI - A)^{-1} maps positive vectors to
    positive vectors exactly when t exceeds the spectral radius.
    """
    from scipy.sparse import csc_matrix
    from scipy.sparse.linalg import splu

    n = m.K + 1
    w = np.exp(beta * m.a)
    rows = np.concatenate([np.arange(n - 1), np.arange(n)])
    cols = np.concatenate([np.arange(1, n), np.zeros(n, dtype=int)])
    vals = np.concatenate([w[1:], np.full(n, w[0])])
    mat = csc_matrix((vals, (rows, cols)), shape=(n, n))
    ones = np.ones(n)
    row_sums = np.asarray(mat.sum(axis=1)).ravel()
    lo, hi = float(row_sums.min()), float(row_sums.max())
    from scipy.sparse import identity

    while hi - lo > tol * max(1.0, hi):
        t = 0.5 * (lo + hi)
        try:
            x = splu((t * identity(n, format="csc") - mat)).solve(ones)
            positive = np.isfinite(x).all() and (x > 0).all()
        except RuntimeError:
            positive = False
        if positive:
            hi = t
        else:
            lo = t
    return max(0.0, float(np.log(0.5 * (lo + hi))))


def equilibrium_density(m: RenewalModel) -> np.ndarray:
    """Fixed function of the beta = 1 operator on the truncated tower.

    The tail-sum ratio phi(j) = sum_{l >= j} e^{s_l} / e^{s_j} satisfies
    phi(j) = e^{a_{j+1}} phi(j+1) + e^{a_0} phi(0) up to the truncated tail
    mass, since the cell masses e^{s_l} sum to one.  Normalized against the
    closed-form eigenmeasure to a probability density.
    """
    es = np.exp(m.s)
    tail = np.cumsum(es[::-1])[::-1]
    phi = tail / es
    nu = eigenmeasure_masses(m)
    return phi / float(np.dot(phi, nu))


def phase_transition_report(m: RenewalModel, deltas=(1e-2, 1e-3)) -> dict:
    """One-sided derivative estimates of the pressure at beta = 1 and the
    two equilibrium measures.

    Central differences are useless at a kink; the left slope uses one-sided
    stencils with a Richardson check, the right slope is read off the flat
    branch.  The invariant equilibrium measure has cell masses proportional
    to density * eigenmeasure, and its mean cell energy reproduces the left
    slope (dP/dbeta = mean of the energy under the equilibrium measure).
    """
    left_estimates = {}
    p1, _ = pressure_at(m, 1.0)
    for d in deltas:
        pm, _ = pressure_at(m, 1.0 - d)
        left_estimates[d] = (p1 - pm) / d
    ds = sorted(deltas)
    richardson = 2 * left_estimates[ds[0]] - left_estimates[ds[1]]
    right, _ = pressure_at(m, 1.0 + ds[0])
    right_derivative = (right - p1) / ds[0]

    f = equilibrium_density(m)
    nu = eigenmeasure_masses(m)
    mu_tilde = f * nu
    mu_tilde = mu_tilde / mu_tilde.sum()
    mean_energy = float(np.dot(m.a, mu_tilde))

    return {
        "P_at_1": p1,
        "left_derivative": left_estimates[ds[0]],
        "left_derivative_richardson": richardson,
        "left_derivative_estimates": {str(d): v for d, v in left_estimates.items()},
        "right_derivative": right_derivative,
        "jump": left_estimates[ds[0]] - right_derivative,
        "mean_energy_equilibrium": mean_energy,
        "equilibrium_masses_head": mu_tilde[:10].tolist(),
        "fixed_point_energy": 0.0,  # the all-ones fixed point of the shift
        "truncation_tail_mass": m.tail_mass(),
        "truncation_flag": m.tail_mass() > ds[0] ** 2,
    }
