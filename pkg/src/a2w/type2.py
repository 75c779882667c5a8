"""Weights of the form W(x) = U(x) diag(a_k |x|^(g_k)) U(x)*.

The unitary factor is one of three built-in families: the identity (plain
diagonal weights), a one-parameter planar rotation, and a 3D rotation
assembled as the product of the three basic axis rotations, each at angle
x. Entry values never need the assembled matrix:
w_ij(x) = sum_k a_k |x|^(g_k) u_ik(x) conj(u_jk(x)).

For unequal exponents the planar rotation family is the package's standard
counterexample: the necessary conditions hold but interval products over
I_n = [2 pi n, 2 pi n + pi] grow like n^((g2 - g1)/2), which the
divergence experiment measures.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .quadrature import PointwiseMatrixFunction, adaptive_quad
from .report import (A2Report, Finding, VERDICT_A2, VERDICT_NECESSARY_PASSED,
                     VERDICT_NOT_A2, VERDICT_NOT_INTEGRABLE, VERDICT_NOT_PD_AE,
                     VERDICT_WEIGHT_OK)
from .scalar_power import format_rational
from .search import thread_count
from .type1 import EvaluationAtOriginError

__all__ = [
    "UNITARY_FAMILIES",
    "Type2Weight",
    "rotation2d",
    "rotation3d_euler",
    "unitary_stack",
    "evaluate_type2",
    "entry_function",
    "ScalarProfile",
    "diagonal_entry",
    "as_pointwise",
    "inverse_weight",
    "inverse_pointwise",
    "check_local_integrability",
    "check_necessary_a2",
    "decide_rotation_a2",
    "decide_a2",
    "DivergenceRow",
    "logspaced_ints",
    "divergence_experiment",
    "fit_loglog_slope",
]

UNITARY_FAMILIES = ("identity", "rotation2d", "rotation3d_euler")

_ROTATION3D_NOTE = ("3d rotation rule applied with all three eigenvalue "
                    "exponents required equal")
_UNEQUAL_ALPHA_NOTE = ("equal exponents with unequal positive coefficients: "
                       "still A2 by bounded conjugation (implementation-"
                       "derived extension of the equal-coefficient rule)")


@dataclass(frozen=True)
class Type2Weight:
    """Eigenvalue data (a_k, g_k) plus the unitary family name."""

    alphas: tuple[float, ...]
    gammas: tuple[Fraction, ...]
    unitary: str = "identity"

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        object.__setattr__(self, "gammas", tuple(Fraction(g) for g in self.gammas))
        if len(self.alphas) != len(self.gammas) or not self.alphas:
            raise ValueError("need matching nonempty alpha and gamma tuples")
        if any(not math.isfinite(a) for a in self.alphas):
            raise ValueError("alphas must be finite")
        if self.unitary not in UNITARY_FAMILIES:
            raise ValueError(f"unknown unitary family {self.unitary!r}")
        need = {"rotation2d": 2, "rotation3d_euler": 3}.get(self.unitary)
        if need is not None and len(self.alphas) != need:
            raise ValueError(f"{self.unitary} needs exactly {need} eigenvalues")
        if len(self.alphas) > 8:
            raise ValueError("order limited to 8")

    @property
    def n(self) -> int:
        return len(self.alphas)

    @property
    def is_rotation(self) -> bool:
        return self.unitary != "identity"


def rotation2d(x: float) -> np.ndarray:
    c, s = math.cos(x), math.sin(x)
    return np.array([[c, -s], [s, c]])


def _basic_rotations(x):
    c, s = np.cos(x), np.sin(x)
    one = np.ones_like(c)
    zero = np.zeros_like(c)
    rx = np.array([[one, zero, zero], [zero, c, s], [zero, -s, c]])
    ry = np.array([[c, zero, -s], [zero, one, zero], [s, zero, c]])
    rz = np.array([[c, s, zero], [-s, c, zero], [zero, zero, one]])
    return rx, ry, rz


def rotation3d_euler(x: float) -> np.ndarray:
    """Product of the three basic axis rotations, each at angle x."""
    rx, ry, rz = _basic_rotations(np.asarray(x, dtype=float))
    return rx @ ry @ rz


def unitary_stack(family: str, n: int, xs: np.ndarray) -> np.ndarray:
    """U(x) for every x in xs, shaped (n, n, len(xs))."""
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    if family == "identity":
        out = np.zeros((n, n, xs.size))
        for k in range(n):
            out[k, k, :] = 1.0
        return out
    if family == "rotation2d":
        c, s = np.cos(xs), np.sin(xs)
        return np.array([[c, -s], [s, c]])
    if family == "rotation3d_euler":
        rx, ry, rz = _basic_rotations(xs)
        return np.einsum("ijN,jkN,klN->ilN", rx, ry, rz)
    raise ValueError(f"unknown unitary family {family!r}")


def evaluate_type2(w: Type2Weight, x: float) -> np.ndarray:
    """Pointwise value via the assembled unitary: U diag U*."""
    if x == 0.0 and any(g < 0 for g in w.gammas):
        raise EvaluationAtOriginError("evaluation at the origin")
    u = unitary_stack(w.unitary, w.n, np.array([x]))[:, :, 0]
    diag = np.diag([a * abs(x) ** float(g) for a, g in zip(w.alphas, w.gammas)])
    return u @ diag @ u.conj().T


def entry_function(w: Type2Weight, i: int, j: int) -> Callable:
    """Vectorized x -> w_ij(x) from the eigenvalue expansion."""
    if not (0 <= i < w.n and 0 <= j < w.n):
        raise IndexError(f"entry ({i}, {j}) out of range for order {w.n}")
    alphas = np.array(w.alphas)
    gammas = np.array([float(g) for g in w.gammas])

    def fn(xs):
        xs = np.atleast_1d(np.asarray(xs, dtype=float))
        u = unitary_stack(w.unitary, w.n, xs)
        powers = np.abs(xs)[None, :] ** gammas[:, None]
        return np.sum(alphas[:, None] * powers * u[i, :, :] * u[j, :, :].conj(),
                      axis=0)

    return fn


@dataclass(frozen=True)
class ScalarProfile:
    """Evaluation handle for one scalar entry plus its growth data at 0.

    origin_exponent is the smallest eigenvalue exponent, a lower bound on
    the entry's power behaviour near the origin; singular_exponent exposes
    it in the convention of the quadrature module. It is always declared:
    positive fractional powers are continuous yet non-smooth at 0, and for
    integer powers the declared model is exact with zero correction, so
    there is no case where suppressing it helps.
    """

    evaluate: Callable
    origin_exponent: Fraction

    def __call__(self, xs):
        return self.evaluate(xs)

    @property
    def singular_exponent(self) -> Fraction:
        return self.origin_exponent


def diagonal_entry(w: Type2Weight, i: int) -> ScalarProfile:
    """Descriptor for w_ii, the scalar probe used by the divergence run."""
    return ScalarProfile(evaluate=entry_function(w, i, i),
                         origin_exponent=min(w.gammas))


def as_pointwise(w: Type2Weight) -> PointwiseMatrixFunction:
    return PointwiseMatrixFunction(
        n=w.n,
        entry=lambda i, j: entry_function(w, i, j),
        singular_exponent=min(w.gammas))


def inverse_weight(w: Type2Weight) -> Type2Weight:
    if any(a <= 0 for a in w.alphas):
        raise ValueError("inverse needs positive eigenvalue coefficients")
    return Type2Weight(tuple(1.0 / a for a in w.alphas),
                       tuple(-g for g in w.gammas), w.unitary)


def inverse_pointwise(w: Type2Weight) -> PointwiseMatrixFunction:
    return as_pointwise(inverse_weight(w))


def _alpha_findings(w: Type2Weight) -> list[Finding]:
    return [Finding(kind="alpha-not-positive", where=(k,),
                    detail=f"eigenvalue coefficient alpha_{k} = {a:.6g} "
                           "is not positive")
            for k, a in enumerate(w.alphas) if a <= 0]


def check_local_integrability(w: Type2Weight) -> A2Report:
    """W is a matrix weight iff every alpha is positive and every gamma > -1."""
    findings = _alpha_findings(w)
    gamma_bad = [Finding(kind="eigenvalue-exponent-integrability", where=(k,),
                         detail=f"eigenvalue exponent {format_rational(g)} "
                                "<= -1 is not locally integrable")
                 for k, g in enumerate(w.gammas) if g <= -1]
    if findings:
        return A2Report(VERDICT_NOT_PD_AE, tuple(findings + gamma_bad))
    if gamma_bad:
        return A2Report(VERDICT_NOT_INTEGRABLE, tuple(gamma_bad))
    return A2Report(VERDICT_WEIGHT_OK)


def check_necessary_a2(w: Type2Weight) -> A2Report:
    """Necessary conditions: both W and its inverse must be weights.

    The inverse has eigenvalue data (1/a_k, -g_k), so the combined
    requirement is a_k > 0 and -1 < g_k < 1 for every k. Passing is not
    sufficient, hence the inconclusive verdict.
    """
    findings = _alpha_findings(w)
    if findings:
        return A2Report(VERDICT_NOT_PD_AE, tuple(findings))
    weight_bad = False
    for k, g in enumerate(w.gammas):
        if g <= -1:
            weight_bad = True
            findings.append(Finding(
                kind="eigenvalue-exponent-range", where=(k,),
                detail=f"eigenvalue exponent {format_rational(g)} <= -1: "
                       "the weight is not locally integrable"))
        elif g >= 1:
            findings.append(Finding(
                kind="eigenvalue-exponent-range", where=(k,),
                detail=f"eigenvalue exponent {format_rational(g)} >= 1: "
                       "the inverse weight is not locally integrable"))
    if weight_bad:
        return A2Report(VERDICT_NOT_INTEGRABLE, tuple(findings))
    if findings:
        return A2Report(VERDICT_NOT_A2, tuple(findings))
    return A2Report(VERDICT_NECESSARY_PASSED)


def decide_rotation_a2(w: Type2Weight) -> A2Report:
    """Exact A2 decision for the rotation families.

    A2 holds iff all eigenvalue exponents are equal (exact rational
    equality), the common exponent lies in (-1, 1), and all coefficients
    are positive. With unequal exponents the interval products over
    [2 pi n, 2 pi n + pi] diverge, so the weight is not A2.
    """
    if not w.is_rotation:
        raise ValueError("decide_rotation_a2 needs a rotation unitary family")
    necessary = check_necessary_a2(w)
    notes = (_ROTATION3D_NOTE,) if w.unitary == "rotation3d_euler" else ()
    if necessary.verdict != VERDICT_NECESSARY_PASSED:
        return A2Report(necessary.verdict, necessary.findings, notes=notes)
    if len(set(w.gammas)) == 1:
        if len(set(w.alphas)) > 1:
            notes = notes + (_UNEQUAL_ALPHA_NOTE,)
        return A2Report(VERDICT_A2, notes=notes)
    detail = ("rotation weight is A2 only when all eigenvalue exponents are "
              "equal; got (" +
              ", ".join(format_rational(g) for g in w.gammas) + ")")
    return A2Report(VERDICT_NOT_A2,
                    (Finding(kind="rotation-exponents-unequal", where=(),
                             detail=detail),),
                    notes=notes)


def decide_a2(w: Type2Weight) -> A2Report:
    """Dispatch: rotations get the exact rule, identity is diagonal."""
    if w.is_rotation:
        return decide_rotation_a2(w)
    necessary = check_necessary_a2(w)
    if necessary.verdict != VERDICT_NECESSARY_PASSED:
        return necessary
    return A2Report(VERDICT_A2,
                    notes=("diagonal weight: necessary conditions are also "
                           "sufficient",))


@dataclass(frozen=True)
class DivergenceRow:
    n: int
    a: float
    b: float
    avg_w: float
    avg_winv: float
    product: float


def logspaced_ints(n_min: int, n_max: int, points: int) -> tuple[int, ...]:
    """Strictly increasing integers, log-spaced, duplicates collapsed."""
    if not (1 <= n_min <= n_max) or points < 2:
        raise ValueError("need 1 <= n_min <= n_max and at least 2 points")
    raw = np.logspace(math.log10(n_min), math.log10(n_max), points)
    out: list[int] = []
    for v in raw:
        k = int(round(v))
        if not out or k > out[-1]:
            out.append(k)
    return tuple(out)


def divergence_experiment(gamma1, gamma2, n_values,
                          tol: float = 1e-8) -> list[DivergenceRow]:
    """Scalar products of the planar-rotation diagonal entry over I_n.

    The probe is w_11(x) = |x|^g1 cos^2 x + |x|^g2 sin^2 x with averages
    over I_n = [2 pi n, 2 pi n + pi]. For g1 < g2 the product grows like
    n^((g2 - g1)/2). The degenerate g1 = g2 case is rejected: it is not a
    divergence experiment (the product stays bounded by 1/(1 - g^2)).
    """
    g1, g2 = Fraction(gamma1), Fraction(gamma2)
    if not (Fraction(-1) < g1 < g2 < Fraction(1)):
        raise ValueError("need -1 < gamma1 < gamma2 < 1")
    ns = [int(n) for n in n_values]
    if not ns or any(n <= 0 for n in ns) or any(
            b <= a for a, b in zip(ns, ns[1:])):
        raise ValueError("n values must be positive and strictly increasing")
    w = Type2Weight((1.0, 1.0), (g1, g2), "rotation2d")
    probe = diagonal_entry(w, 0)

    def one_row(n: int) -> DivergenceRow:
        a = 2.0 * math.pi * n
        b = a + math.pi
        # Both integrands are strictly positive (relative control is safe)
        # and 1/w_11 peaks sharply at the window endpoints (cos^2 x = 1
        # there, peak width ~ n^-(g2-g1)/2), so grade panels toward them.
        avg_w = adaptive_quad(probe, a, b, tol, endpoint_grading=24,
                              scale=0.0).real / (b - a)
        avg_winv = adaptive_quad(lambda xs: 1.0 / probe(xs), a, b, tol,
                                 endpoint_grading=24, scale=0.0).real / (b - a)
        return DivergenceRow(n=n, a=a, b=b, avg_w=avg_w, avg_winv=avg_winv,
                             product=avg_w * avg_winv)

    threads = thread_count()
    if threads > 1 and len(ns) >= 4:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(one_row, ns))
    return [one_row(n) for n in ns]


def fit_loglog_slope(rows: list[DivergenceRow]) -> float:
    """Least-squares slope of log(product) against log(n)."""
    if len(rows) < 2:
        raise ValueError("need at least two rows to fit a slope")
    xs = [math.log(r.n) for r in rows]
    ys = [math.log(r.product) for r in rows]
    mx = sum(xs) / len(xs)
    my = sum(ys) / len(ys)
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    return sxy / sxx
