"""Interval averages and A2 functionals, plus the supremum estimator.

Two averaging routes exist on purpose: closed forms for symbolic power
matrices and adaptive quadrature for pointwise-defined weights. The two
functionals are the trace form Tr(<W> <W^-1>) and the norm form
||<W>^(1/2) <W^-1>^(1/2)||^2; the norm form is the A2 characteristic
proper, the trace form sandwiches it within a factor of the dimension.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import linalg, type1, type2
from .quadrature import PointwiseMatrixFunction, adaptive_quad
from .scalar_power import (NotA2Error, NotIntegrableError, ScalarPowerWeight,
                           average_abs_pow)
from .search import (Interval, SearchError, SupSearchConfig, SupSearchResult,
                     coarse_interval_config, default_interval_config,
                     run_interval_search)
from .type1 import SymbolicPowerMatrix
from .type2 import Type2Weight

__all__ = [
    "Interval",
    "SupSearchConfig",
    "SupSearchResult",
    "SearchError",
    "NonPositiveInputError",
    "default_interval_config",
    "coarse_interval_config",
    "average_symbolic",
    "average_numeric",
    "a2_functional_trace",
    "a2_functional_norm",
    "estimate_a2",
]


class NonPositiveInputError(ArithmeticError):
    """A functional received an average that is not positive definite."""


def average_symbolic(w: SymbolicPowerMatrix, iv: Interval) -> np.ndarray:
    """<W>_I computed entrywise from the closed-form power integrals."""
    n = w.n
    eff = w.effective_coeff()
    exps = type1.normalized_exponents(w)
    out = np.zeros((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            if eff[i, j] != 0:
                out[i, j] = eff[i, j] * average_abs_pow(exps[i][j], iv)
    return out


def average_numeric(pmf: PointwiseMatrixFunction, iv: Interval,
                    tol: float = 1e-8, panel_budget: int = 20000) -> np.ndarray:
    """<W>_I by adaptive per-entry quadrature.

    Diagonal entries are positive masses, so their integrals run under
    purely relative control; off-diagonal entries can cancel, so their
    tolerance is anchored to the largest diagonal mass (the natural
    matrix scale) instead of an absolute floor.
    """
    n = pmf.n
    out = np.zeros((n, n), dtype=complex)
    matrix_scale = 0.0
    for i in range(n):
        val = adaptive_quad(pmf.entry(i, i), iv.a, iv.b, tol,
                            singular_exponent=pmf.singular_exponent,
                            panel_budget=panel_budget, scale=0.0)
        out[i, i] = val / iv.length
        matrix_scale = max(matrix_scale, abs(val))
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            val = adaptive_quad(pmf.entry(i, j), iv.a, iv.b, tol,
                                singular_exponent=pmf.singular_exponent,
                                panel_budget=panel_budget, scale=matrix_scale)
            out[i, j] = val / iv.length
    return out


def _check_average_pair(avg_w: np.ndarray, avg_winv: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    a = linalg.as_hermitian(avg_w, tol=1e-8)
    b = linalg.as_hermitian(avg_winv, tol=1e-8)
    if a.shape != b.shape:
        raise ValueError("average matrices must share a shape")
    if np.any(a.diagonal().real <= 0) or np.any(b.diagonal().real <= 0):
        raise NonPositiveInputError("averages must be positive definite")
    return a, b


def a2_functional_trace(avg_w, avg_winv) -> float:
    """Tr(<W> <W^-1>); bounded below by the dimension for true averages."""
    a, b = _check_average_pair(avg_w, avg_winv)
    n = a.shape[0]
    val = float(np.trace(a @ b).real)
    if val < n * (1.0 - 1e-9):
        raise NonPositiveInputError(
            f"trace functional {val} below its floor {n}; inputs are not "
            "averages of a weight and its inverse")
    return val


def a2_functional_norm(avg_w, avg_winv) -> float:
    """||<W>^(1/2) <W^-1>^(1/2)||^2, the matrix A2 product for one interval."""
    a, b = _check_average_pair(avg_w, avg_winv)
    try:
        ra = linalg.sqrt_psd(a)
        rb = linalg.sqrt_psd(b)
    except linalg.NegativeEigenvalueError as exc:
        raise NonPositiveInputError(str(exc)) from exc
    op = linalg.operator_norm(ra @ rb)
    val = op * op
    if val < 1.0 - 1e-9:
        raise NonPositiveInputError(
            f"norm functional {val} below its floor 1")
    return val


_FUNCTIONALS = {
    "trace": a2_functional_trace,
    "norm": a2_functional_norm,
}


def _symbolic_eval_fn(w: SymbolicPowerMatrix, functional: str):
    exps = type1.normalized_exponents(w)
    flat = [e for row in exps for e in row]
    bad = [e for e in flat if not (Fraction(-1) < e < Fraction(1))]
    if bad:
        raise NotIntegrableError(
            "symbolic estimation needs every exponent in (-1, 1); "
            f"got {sorted(set(bad))}")
    winv = type1.symbolic_inverse(w)
    func = _FUNCTIONALS[functional]

    def evaluate(iv: Interval) -> float:
        return func(average_symbolic(w, iv), average_symbolic(winv, iv))

    return evaluate


def _type2_eval_fn(w: Type2Weight, functional: str, tol: float):
    necessary = type2.check_necessary_a2(w)
    if not necessary.verdict == "inconclusive_necessary_passed":
        raise NotA2Error(
            f"type 2 estimation precondition failed: {necessary.verdict}")
    fwd = type2.as_pointwise(w)
    bwd = type2.inverse_pointwise(w)
    func = _FUNCTIONALS[functional]

    def evaluate(iv: Interval) -> float:
        return func(average_numeric(fwd, iv, tol), average_numeric(bwd, iv, tol))

    return evaluate


def estimate_a2(weight, functional: str = "trace",
                config: SupSearchConfig | None = None) -> SupSearchResult:
    """Searched lower bound of the chosen A2 functional's supremum.

    Accepts a symbolic power matrix, a Type 2 weight, or a scalar power
    weight (treated as a 1x1 symbolic matrix). Symbolic weights get the
    full default grid; quadrature-backed weights default to the coarse one.
    """
    if functional not in _FUNCTIONALS:
        raise ValueError(f"unknown functional {functional!r}")
    if isinstance(weight, ScalarPowerWeight):
        weight = SymbolicPowerMatrix(
            np.array([[weight.coeff]]), ((weight.exponent,),))
    if isinstance(weight, SymbolicPowerMatrix):
        cfg = config if config is not None else default_interval_config()
        fn = _symbolic_eval_fn(weight, functional)
    elif isinstance(weight, Type2Weight):
        cfg = config if config is not None else coarse_interval_config()
        fn = _type2_eval_fn(weight, functional, cfg.quadrature_tol)
    else:
        raise TypeError(f"cannot estimate for {type(weight).__name__}")
    return run_interval_search(fn, cfg, functional=functional)
