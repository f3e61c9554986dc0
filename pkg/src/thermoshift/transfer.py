"""Ruelle transfer operators, conditional expectations and the RPF eigenproblem.

All operators act on depth-d tabulations where the action closes exactly:
cylinder weights are exactly representable, so the analytic statements of
thermodynamic formalism become finite linear algebra here.
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
    alpha_power,
    birkhoff,
    word_index,
)


class ConvergenceError(RuntimeError):
    """Iterative solver did not reach tolerance; carries diagnostics."""

    def __init__(self, message, residual=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


@dataclass(frozen=True)
class TransferOperator:
    """(L f)(x) = sum over preimages z of x of weight(z) * f(z)."""

    model: ShiftModel
    weight: CylinderFunction

    def __post_init__(self):
        if self.weight.model != self.model:
            raise ShiftSpaceError("weight defined on a different model")
        if (np.real(self.weight.values) <= 0).any():
            raise ShiftSpaceError("weight must be strictly positive")

    def is_normalized(self, tol: float = 1e-12) -> bool:
        one = CylinderFunction.constant(self.model, 1.0)
        return apply(self, one).allclose(one, tol)

    def matrix(self, d: int) -> np.ndarray:
        """The exact action on depth-d tabulations (result refined back to d)."""
        if d < max(self.weight.depth - 1, 1):
            raise ShiftSpaceError("depth too small for an exact closed action")
        words = admissible_words(self.model, d)
        idx = word_index(self.model, d)
        w = self.weight.refine(d + 1) if self.weight.depth <= d + 1 else None
        if w is None:
            raise ShiftSpaceError("weight deeper than d+1")
        t = self.model.matrix
        mat = np.zeros((len(words), len(words)),
                       dtype=complex if np.iscomplexobj(w.values) else float)
        widx = word_index(self.model, d + 1)
        for j, y in enumerate(words):
            for a in range(self.model.alphabet_size):
                if t[a, y[0]]:
                    z = (a,) + y
                    mat[j, idx[z[:d]]] += w.values[widx[z]]
        return mat


def apply(L: TransferOperator, f: CylinderFunction) -> CylinderFunction:
    """Sum over the preimage words a.y, tabulated at the exact output depth.

    The output depends on x through the admissibility of a (first symbol of
    x) and the leading max(depths)-1 symbols, hence depth max(D-1, 1).
    """
    if f.model != L.model:
        raise ShiftSpaceError("mixed shift models")
    d_in = max(L.weight.depth, f.depth, 1)
    d_out = max(d_in - 1, 1)
    w = L.weight.refine(d_in)
    g = f.refine(d_in)
    t = L.model.matrix
    idx_in = word_index(L.model, d_in)
    out_words = admissible_words(L.model, d_out)
    vals = np.zeros(len(out_words), dtype=np.result_type(w.values, g.values))
    for j, y in enumerate(out_words):
        acc = 0.0
        for a in range(L.model.alphabet_size):
            if t[a, y[0]]:
                z = ((a,) + y)[:d_in]
                i = idx_in[z]
                acc = acc + w.values[i] * g.values[i]
        vals[j] = acc
    return CylinderFunction(L.model, d_out, vals)


def _check_normalized_p(model: ShiftModel, p: CylinderFunction, tol: float = 1e-10):
    if (np.real(p.values) <= 0).any():
        raise ShiftSpaceError("p must be strictly positive")
    L = TransferOperator(model, p)
    if not L.is_normalized(tol):
        raise ShiftSpaceError("p is not normalized: sum over preimages must be 1")
    return L


def cond_expectation(model: ShiftModel, p: CylinderFunction, n: int,
                     f: CylinderFunction) -> CylinderFunction:
    """Projection onto functions constant where the n-th shift iterates agree.

    Computed as the n-fold normalized transfer operator followed by n
    compositions with the shift; the value at x is the p-weighted average of
    f over the class of x.
    """
    if n < 0:
        raise ShiftSpaceError("n must be >= 0")
    if n == 0:
        return f
    L = _check_normalized_p(model, p)
    out = f
    for _ in range(n):
        out = apply(L, out)
    return alpha_power(out, n)


def quasi_basis(model: ShiftModel, p: CylinderFunction):
    """The family u_a = sqrt(p^{-1} 1_[a]) and the index p^{-1}.

    Satisfies sum_a u_a E_1(u_a f) = f for every f.
    """
    _check_normalized_p(model, p)
    inv_p = 1.0 / p
    basis = []
    for a in range(model.alphabet_size):
        ind = CylinderFunction.indicator(model, (a,))
        basis.append((inv_p * ind) ** 0.5)
    return basis, inv_p


@dataclass(frozen=True)
class RpfSolution:
    """Leading eigendata of a transfer operator at a fixed working depth."""

    eigenvalue: float
    eigenfunction: CylinderFunction
    eigenmeasure: CylinderMeasure
    iterations: int
    residual: float
    dual_residual: float

    @property
    def pressure(self) -> float:
        return float(np.log(self.eigenvalue))


def rpf_solve(L: TransferOperator, depth: int | None = None,
              tol: float = 1e-12, max_iter: int = 10_000) -> RpfSolution:
    """Power iteration for the leading eigentriple (c, k, nu).

    Works on the exact depth-d matrix action; the dual iteration (transposed
    matrix, l1 normalization) produces the eigenmeasure masses.  Primitive
    transition matrices guarantee convergence; otherwise the residuals in the
    raised ConvergenceError tell the story.
    """
    model = L.model
    if depth is None:
        depth = max(L.weight.depth, 1)
    mat = L.matrix(depth).real
    n = mat.shape[0]

    k = np.ones(n)
    nu = np.full(n, 1.0 / n)
    c = 1.0
    iterations = 0
    res = dual_res = np.inf
    for iterations in range(1, max_iter + 1):
        k_new = mat @ k
        c = float(np.abs(k_new).max())
        k_new = k_new / c
        nu_new = mat.T @ nu
        c_dual = float(np.abs(nu_new).sum())
        nu_new = nu_new / c_dual
        res = float(np.abs(k_new - k).max())
        dual_res = float(np.abs(nu_new - nu).sum())
        k, nu = k_new, nu_new
        if res <= tol and dual_res <= tol:
            break
    else:
        raise ConvergenceError(
            f"power iteration did not converge in {max_iter} iterations "
            f"(residual {res:.3e}, dual {dual_res:.3e}); "
            f"transition primitive: {model.is_primitive()}",
            residual=max(res, dual_res), iterations=max_iter)

    # eigenvalue from the converged vector, then normalize: nu(X)=1, nu(k)=1
    c = float((mat @ k).max() / k.max())
    nu = nu / nu.sum()
    k = k / float(np.dot(nu, k))
    kf = CylinderFunction(model, depth, k)
    nu_meas = CylinderMeasure(model, depth, nu)
    final_res = float(np.abs(mat @ k - c * k).max())
    final_dual = float(np.abs(mat.T @ nu - c * nu).sum())
    return RpfSolution(c, kf, nu_meas, iterations, final_res, final_dual)


def pressure(L: TransferOperator, depth: int | None = None,
             tol: float = 1e-12, max_iter: int = 10_000) -> float:
    """log of the leading eigenvalue."""
    return rpf_solve(L, depth=depth, tol=tol, max_iter=max_iter).pressure
