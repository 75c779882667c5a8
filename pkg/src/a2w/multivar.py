"""Multivariable power weights over axis-aligned cubes in R^d, d in {2, 3}.

Two families. Separable weights have entries a_ij prod_c |x_c|^(e_ij,c)
with one exponent matrix per coordinate; their cube averages factor into
1D closed forms. Radial weights have entries a_ij ||x||^(e_ij); their
averages need cube quadrature, done by orthant splitting plus a tensor
Gauss rule with geometric grading toward the origin and an analytic bound
on the innermost origin cell.

The A2 decision rules mirror the one-variable ones coordinate-wise: the
separable family needs every per-coordinate diagonal exponent in (-1, 1),
the radial family needs them in (-d, d).
"""

from __future__ import annotations

import heapq
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg
from .estimator import a2_functional_norm, a2_functional_trace
from .quadrature import QuadratureBudgetError
from .report import (A2Report, Finding, VERDICT_A2, VERDICT_MARGINAL,
                     VERDICT_NOT_A2, VERDICT_NOT_INTEGRABLE, VERDICT_NOT_PD_AE)
from .scalar_power import (NotA2Error, NotIntegrableError, average_abs_pow,
                           format_rational)
from .search import Interval, SearchError, golden_max, thread_count
from .type1 import MidpointConditionError

__all__ = [
    "Cube",
    "Type1aWeight",
    "Type1bWeight",
    "build_type1a",
    "build_type1a_raw",
    "build_type1b",
    "build_type1b_raw",
    "check_a2_type1a",
    "check_a2_type1b",
    "average_type1a",
    "average_type1b",
    "inverse_type1a",
    "inverse_type1b",
    "cube_integral_radial",
    "CubeSearchConfig",
    "CubeSearchResult",
    "default_cube_config",
    "coarse_cube_config",
    "estimate_a2_cubes",
]

_DIMS = (2, 3)
_SPHERE_MEASURE = {2: 2.0 * math.pi, 3: 4.0 * math.pi}
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(8)
_TIE_RTOL = 1e-12


@dataclass(frozen=True)
class Cube:
    """Axis-aligned cube: lower corner plus a single side length.

    Storing one side length makes the equal-sides requirement structural;
    rectangles cannot be expressed.
    """

    lower: tuple[float, ...]
    side: float

    def __post_init__(self):
        object.__setattr__(self, "lower", tuple(float(c) for c in self.lower))
        object.__setattr__(self, "side", float(self.side))
        if len(self.lower) not in _DIMS:
            raise ValueError("cubes are supported in dimensions 2 and 3")
        if not (math.isfinite(self.side) and self.side > 0):
            raise ValueError("cube side must be positive and finite")
        if any(not math.isfinite(c) for c in self.lower):
            raise ValueError("cube corner must be finite")

    @property
    def d(self) -> int:
        return len(self.lower)

    @property
    def upper(self) -> tuple[float, ...]:
        return tuple(c + self.side for c in self.lower)

    @property
    def volume(self) -> float:
        return self.side ** self.d

    def interval(self, c: int) -> Interval:
        return Interval(self.lower[c], self.lower[c] + self.side)

    def contains_origin(self) -> bool:
        return all(lo <= 0.0 <= hi for lo, hi in zip(self.lower, self.upper))

    def nearest_vertex_distance(self) -> float:
        """Distance from the origin to the nearest cube vertex."""
        return math.sqrt(sum(min(lo * lo, hi * hi)
                             for lo, hi in zip(self.lower, self.upper)))


def _exponent_matrix(rows) -> tuple[tuple[Fraction, ...], ...]:
    mat = tuple(tuple(Fraction(e) for e in row) for row in rows)
    n = len(mat)
    if n == 0 or any(len(row) != n for row in mat):
        raise ValueError("exponent matrix must be square and nonempty")
    return mat


@dataclass(frozen=True, eq=False)
class Type1aWeight:
    """Separable power matrix: one exponent matrix per coordinate."""

    coeff: np.ndarray
    exponents_per_coordinate: tuple[tuple[tuple[Fraction, ...], ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "coeff", linalg.as_square(self.coeff))
        mats = tuple(_exponent_matrix(m) for m in self.exponents_per_coordinate)
        object.__setattr__(self, "exponents_per_coordinate", mats)
        if len(mats) not in _DIMS:
            raise ValueError("need one exponent matrix per coordinate, d in {2, 3}")
        if any(len(m) != self.coeff.shape[0] for m in mats):
            raise ValueError("exponent matrices must match the coefficient order")

    @property
    def n(self) -> int:
        return self.coeff.shape[0]

    @property
    def d(self) -> int:
        return len(self.exponents_per_coordinate)


@dataclass(frozen=True, eq=False)
class Type1bWeight:
    """Radial power matrix: entries a_ij ||x||^(e_ij) in R^d."""

    coeff: np.ndarray
    exponents: tuple[tuple[Fraction, ...], ...]
    d: int

    def __post_init__(self):
        object.__setattr__(self, "coeff", linalg.as_square(self.coeff))
        object.__setattr__(self, "exponents", _exponent_matrix(self.exponents))
        object.__setattr__(self, "d", int(self.d))
        if self.d not in _DIMS:
            raise ValueError("radial weights are supported in dimensions 2 and 3")
        if len(self.exponents) != self.coeff.shape[0]:
            raise ValueError("exponent matrix must match the coefficient order")

    @property
    def n(self) -> int:
        return self.coeff.shape[0]


def _midpoint_complete(diag: tuple[Fraction, ...]):
    return tuple(tuple((diag[i] + diag[j]) / 2 for j in range(len(diag)))
                 for i in range(len(diag)))


def build_type1a(coeff, diag_exponents_per_coordinate) -> Type1aWeight:
    """Midpoint-completed separable weight from per-coordinate diagonals."""
    a = linalg.as_hermitian(coeff)
    mats = []
    for diag in diag_exponents_per_coordinate:
        drow = tuple(Fraction(g) for g in diag)
        if len(drow) != a.shape[0]:
            raise ValueError("need one diagonal exponent per row per coordinate")
        mats.append(_midpoint_complete(drow))
    return Type1aWeight(a, tuple(mats))


def build_type1a_raw(coeff, exponents_per_coordinate) -> Type1aWeight:
    """Store the given data verbatim so checkers can see violations."""
    return Type1aWeight(linalg.as_square(coeff),
                        tuple(_exponent_matrix(m)
                              for m in exponents_per_coordinate))


def build_type1b(coeff, diag_exponents, d: int) -> Type1bWeight:
    """Midpoint-completed radial weight from diagonal exponents."""
    a = linalg.as_hermitian(coeff)
    diag = tuple(Fraction(g) for g in diag_exponents)
    if len(diag) != a.shape[0]:
        raise ValueError("need one diagonal exponent per row")
    return Type1bWeight(a, _midpoint_complete(diag), d)


def build_type1b_raw(coeff, exponents, d: int) -> Type1bWeight:
    return Type1bWeight(linalg.as_square(coeff), _exponent_matrix(exponents), d)


def _diag_of(mat) -> tuple[Fraction, ...]:
    return tuple(mat[i][i] for i in range(len(mat)))


def _normalized_matrix(coeff: np.ndarray, mat):
    """Rewrite exponents of zero-coefficient off-diagonal entries to midpoint."""
    diag = _diag_of(mat)
    n = len(mat)
    return tuple(tuple((diag[i] + diag[j]) / 2
                       if i != j and coeff[i, j] == 0 else mat[i][j]
                       for j in range(n)) for i in range(n))


def _midpoint_findings(coeff: np.ndarray, mat, where_prefix: tuple) -> list[Finding]:
    exps = _normalized_matrix(coeff, mat)
    diag = _diag_of(exps)
    found = []
    n = len(exps)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            want = (diag[i] + diag[j]) / 2
            if exps[i][j] != want:
                found.append(Finding(
                    kind="midpoint-violated", where=where_prefix + (i, j),
                    detail=(f"exponent {format_rational(exps[i][j])} at "
                            f"{where_prefix + (i, j)} differs from midpoint "
                            f"{format_rational(want)}")))
    return found


def _structural_findings(coeff: np.ndarray) -> tuple[list[Finding], str | None]:
    """Self-adjointness and positive definiteness of the coefficient matrix."""
    findings: list[Finding] = []
    defect = linalg.hermitian_defect(coeff)
    if defect > 1e-12:
        findings.append(Finding(
            kind="coefficient-not-self-adjoint", where=(),
            detail=f"hermitian defect {defect:.3e} exceeds tolerance"))
        return findings, VERDICT_NOT_PD_AE
    pd = linalg.is_positive_definite(linalg.as_hermitian(coeff, tol=math.inf))
    if pd.verdict == "not_positive":
        findings.append(Finding(
            kind="leading-minor-not-positive", where=(pd.failed_minor,),
            detail=(f"leading principal minor {pd.failed_minor} is "
                    f"{pd.minors[pd.failed_minor]:.6g}")))
        return findings, VERDICT_NOT_PD_AE
    if pd.verdict == "marginal":
        findings.append(Finding(
            kind="coefficient-marginal", where=(),
            detail="a leading principal minor is within tolerance of zero"))
        return findings, VERDICT_MARGINAL
    return findings, None


def _range_findings(diag: tuple[Fraction, ...], bound: int,
                    where_prefix: tuple) -> tuple[list[Finding], list[Finding]]:
    """Diagonal exponents vs (-bound, bound): (not integrable, not A2)."""
    low, high = [], []
    for k, g in enumerate(diag):
        if g <= -bound:
            low.append(Finding(
                kind="diagonal-exponent-range", where=where_prefix + (k,),
                detail=(f"diagonal exponent {format_rational(g)} <= "
                        f"{-bound}: weight not locally integrable")))
        elif g >= bound:
            high.append(Finding(
                kind="diagonal-exponent-range", where=where_prefix + (k,),
                detail=(f"diagonal exponent {format_rational(g)} >= {bound}: "
                        "inverse weight not locally integrable")))
    return low, high


def _decide(structural: list[Finding], structural_verdict: str | None,
            low: list[Finding], high: list[Finding]) -> A2Report:
    if structural_verdict is not None:
        return A2Report(structural_verdict,
                        tuple(structural + low + high))
    if low:
        return A2Report(VERDICT_NOT_INTEGRABLE, tuple(low + high))
    if high:
        return A2Report(VERDICT_NOT_A2, tuple(high))
    return A2Report(VERDICT_A2)


def check_a2_type1a(w: Type1aWeight) -> A2Report:
    """A2 iff coeff is positive definite and every coordinate's exponent
    matrix satisfies the exact midpoint condition with diagonals in (-1, 1)."""
    structural, verdict = _structural_findings(w.coeff)
    if verdict is None:
        for c, mat in enumerate(w.exponents_per_coordinate):
            bad = _midpoint_findings(w.coeff, mat, (c,))
            if bad:
                structural.extend(bad)
                verdict = VERDICT_NOT_PD_AE
    low: list[Finding] = []
    high: list[Finding] = []
    for c, mat in enumerate(w.exponents_per_coordinate):
        lo, hi = _range_findings(_diag_of(mat), 1, (c,))
        low.extend(lo)
        high.extend(hi)
    return _decide(structural, verdict, low, high)


def check_a2_type1b(w: Type1bWeight) -> A2Report:
    """A2 iff coeff is positive definite, midpoint holds exactly, and every
    diagonal exponent lies strictly between -d and d."""
    structural, verdict = _structural_findings(w.coeff)
    if verdict is None:
        bad = _midpoint_findings(w.coeff, w.exponents, ())
        if bad:
            structural.extend(bad)
            verdict = VERDICT_NOT_PD_AE
    low, high = _range_findings(_diag_of(w.exponents), w.d, ())
    return _decide(structural, verdict, low, high)


def average_type1a(w: Type1aWeight, cube: Cube) -> np.ndarray:
    """Entrywise cube average via per-coordinate 1D closed forms."""
    if cube.d != w.d:
        raise ValueError("cube dimension does not match the weight")
    out = np.zeros((w.n, w.n), dtype=complex)
    for i in range(w.n):
        for j in range(w.n):
            a = w.coeff[i, j]
            if a == 0:
                continue
            factor = 1.0
            for c in range(w.d):
                e = w.exponents_per_coordinate[c][i][j]
                try:
                    factor *= average_abs_pow(e, cube.interval(c))
                except NotIntegrableError as exc:
                    raise NotIntegrableError(
                        f"entry ({i}, {j}), coordinate {c}: {exc}") from exc
            out[i, j] = a * factor
    out = 0.5 * (out + out.conj().T)
    return out.real if np.all(out.imag == 0) else out


def _require_multivar_midpoint(coeff, mats) -> None:
    for c, mat in enumerate(mats):
        if _midpoint_findings(coeff, mat, (c,)):
            raise MidpointConditionError(
                "inverse closed form needs the exact midpoint condition")


def _inverse_coeff(coeff: np.ndarray) -> np.ndarray:
    a = linalg.as_hermitian(coeff)
    det = linalg.lu_det(a)
    scale = float(np.abs(a).max()) or 1.0
    if abs(det) <= 1e-12 * scale ** a.shape[0]:
        raise linalg.SingularMatrixError("coefficient matrix is singular")
    n = a.shape[0]
    inv = np.array([[linalg.cofactor(a, j, i) / det for j in range(n)]
                    for i in range(n)])
    return inv


def _negate(mat):
    return tuple(tuple(-e for e in row) for row in mat)


def inverse_type1a(w: Type1aWeight) -> Type1aWeight:
    """Pointwise inverse: adjugate coefficients, negated exponents."""
    mats = tuple(_normalized_matrix(w.coeff, m)
                 for m in w.exponents_per_coordinate)
    _require_multivar_midpoint(w.coeff, mats)
    return Type1aWeight(_inverse_coeff(w.coeff),
                        tuple(_negate(m) for m in mats))


def inverse_type1b(w: Type1bWeight) -> Type1bWeight:
    mat = _normalized_matrix(w.coeff, w.exponents)
    if _midpoint_findings(w.coeff, mat, ()):
        raise MidpointConditionError(
            "inverse closed form needs the exact midpoint condition")
    return Type1bWeight(_inverse_coeff(w.coeff), _negate(mat), w.d)


def _tensor_gl(gamma: float, lo, hi) -> float:
    """Tensor product Gauss rule for ||x||^gamma over an origin-free box."""
    axes, wts = [], []
    for a, b in zip(lo, hi):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        axes.append(mid + half * _GL_NODES)
        wts.append(half * _GL_WEIGHTS)
    grids = np.meshgrid(*axes, indexing="ij")
    r2 = grids[0] * grids[0]
    for g in grids[1:]:
        r2 = r2 + g * g
    vals = r2 ** (0.5 * gamma)
    w = wts[0]
    for extra in wts[1:]:
        w = np.multiply.outer(w, extra)
    return float(np.sum(vals * w))


def _origin_cell_bound(gamma: float, hi, d: int) -> float:
    """Certified bound on the integral over the box [0, hi] at the origin.

    For gamma < 0 the box sits inside the orthant sector of the ball of
    radius ||hi||, whose integral is (surface / 2^d) R^(gamma+d)/(gamma+d).
    For gamma >= 0 the supremum bound volume * ||hi||^gamma is tighter.
    """
    radius = math.sqrt(sum(u * u for u in hi))
    if gamma < 0:
        return (_SPHERE_MEASURE[d] / 2 ** d) * radius ** (gamma + d) / (gamma + d)
    vol = math.prod(hi)
    return vol * radius ** gamma


def _split_signed(lo, hi):
    """Split a box at the coordinate hyperplanes, reflect into x >= 0."""
    pieces = [((), ())]
    for a, b in zip(lo, hi):
        grown = []
        for plo, phi in pieces:
            if a < 0.0 < b:
                grown.append((plo + (0.0,), phi + (-a,)))
                grown.append((plo + (0.0,), phi + (b,)))
            elif b <= 0.0:
                grown.append((plo + (-b,), phi + (-a,)))
            else:
                grown.append((plo + (a,), phi + (b,)))
        pieces = grown
    return [(plo, phi) for plo, phi in pieces
            if all(u > l for l, u in zip(plo, phi))]


def cube_integral_radial(gamma: float, lo, hi, tol: float = 1e-6,
                         budget: int = 50000,
                         scale: float | None = None) -> float:
    """Integral of ||x||^gamma over the box [lo, hi], origin allowed inside.

    Orthant splitting reduces to boxes in the closed positive orthant; the
    box whose corner is the origin is graded geometrically (split ratio
    1/2) with the analytic cell bound closing the recursion. Everything
    else uses the tensor Gauss rule with worst-first split-and-compare
    refinement. Raises when the cell budget (evaluated Gauss cells) runs
    out before the error target tol * (scale + |coarse value|) is met.
    scale defaults to 1, an absolute floor for tiny integrals; passing 0
    requests purely relative control, safe here because the integrand
    never changes sign.
    """
    lo = tuple(float(v) for v in lo)
    hi = tuple(float(v) for v in hi)
    d = len(lo)
    if d not in _DIMS or len(hi) != d:
        raise ValueError("supported box dimensions are 2 and 3")
    if any(b <= a for a, b in zip(lo, hi)):
        raise ValueError("box must have positive extent in every coordinate")
    touches_origin = all(a <= 0.0 <= b for a, b in zip(lo, hi))
    if touches_origin and gamma <= -d:
        raise ValueError(
            f"exponent {gamma} <= {-d} is not integrable at the origin")
    if gamma == 0.0:
        return math.prod(b - a for a, b in zip(lo, hi))

    used = 0
    counter = 0
    heap: list = []
    err_sum = 0.0
    inf_count = 0
    val_sum = 0.0

    def push(kind: str, plo, phi, val: float, err: float):
        nonlocal counter, err_sum, inf_count, val_sum
        heapq.heappush(heap, (-err, counter, kind, plo, phi, val))
        counter += 1
        val_sum += val
        if math.isinf(err):
            inf_count += 1
        else:
            err_sum += err

    def pop():
        nonlocal err_sum, inf_count, val_sum
        neg_err, _, kind, plo, phi, val = heapq.heappop(heap)
        err = -neg_err
        val_sum -= val
        if math.isinf(err):
            inf_count -= 1
        else:
            err_sum -= err
        return kind, plo, phi, val

    def gl_value(plo, phi) -> float:
        nonlocal used
        if used >= budget:
            raise QuadratureBudgetError(
                f"cube quadrature budget of {budget} cells exhausted")
        used += 1
        return _tensor_gl(gamma, plo, phi)

    for plo, phi in _split_signed(lo, hi):
        if all(v == 0.0 for v in plo):
            bound = _origin_cell_bound(gamma, phi, d)
            push("origin", plo, phi, 0.5 * bound, 0.5 * bound)
        else:
            push("gl", plo, phi, gl_value(plo, phi), math.inf)

    floor = 1.0 if scale is None else abs(scale)
    tol_abs = tol * (floor + abs(val_sum))
    if tol_abs == 0.0:
        tol_abs = 1e-290

    def children_boxes(plo, phi):
        mids = tuple(0.5 * (a + b) for a, b in zip(plo, phi))
        boxes = [((), ())]
        for a, m, b in zip(plo, mids, phi):
            boxes = [(clo + (a,), chi + (m,)) for clo, chi in boxes] + \
                    [(clo + (m,), chi + (b,)) for clo, chi in boxes]
        return boxes

    while inf_count > 0 or err_sum > tol_abs:
        kind, plo, phi, val = pop()
        if kind == "origin":
            for clo, chi in children_boxes(plo, phi):
                if all(v == 0.0 for v in clo):
                    bound = _origin_cell_bound(gamma, chi, d)
                    push("origin", clo, chi, 0.5 * bound, 0.5 * bound)
                else:
                    push("gl", clo, chi, gl_value(clo, chi), math.inf)
        else:
            kids = [(clo, chi, gl_value(clo, chi))
                    for clo, chi in children_boxes(plo, phi)]
            spread = abs(sum(v for _, _, v in kids) - val)
            share = spread / len(kids)
            for clo, chi, v in kids:
                push("gl", clo, chi, v, share)
    return val_sum


def average_type1b(w: Type1bWeight, cube: Cube, tol: float = 1e-6,
                   budget: int = 50000) -> np.ndarray:
    """Entrywise cube average by radial-power quadrature, one integral per
    distinct exponent."""
    if cube.d != w.d:
        raise ValueError("cube dimension does not match the weight")
    lo, hi = cube.lower, cube.upper
    cache: dict[Fraction, float] = {}
    out = np.zeros((w.n, w.n), dtype=complex)
    for i in range(w.n):
        for j in range(w.n):
            a = w.coeff[i, j]
            if a == 0:
                continue
            e = w.exponents[i][j]
            if e not in cache:
                try:
                    cache[e] = (cube_integral_radial(float(e), lo, hi, tol,
                                                     budget) / cube.volume)
                except ValueError as exc:
                    raise NotIntegrableError(
                        f"entry ({i}, {j}): {exc}") from exc
            out[i, j] = a * cache[e]
    out = 0.5 * (out + out.conj().T)
    return out.real if np.all(out.imag == 0) else out


_FAMILIES = ("cornered", "centered", "shifted")


@dataclass(frozen=True)
class CubeSearchConfig:
    """Candidate cubes: families x log-spaced side lengths."""

    sides: tuple[float, ...]
    families: tuple[str, ...] = _FAMILIES
    shifts: tuple[int, ...] = (1, 2)
    refine_rounds: int = 8
    quadrature_tol: float = 1e-6
    budget: int = 50000

    def __post_init__(self):
        object.__setattr__(self, "sides", tuple(float(s) for s in self.sides))
        object.__setattr__(self, "families", tuple(self.families))
        object.__setattr__(self, "shifts", tuple(int(k) for k in self.shifts))
        if not self.sides or any(s <= 0 or not math.isfinite(s)
                                 for s in self.sides):
            raise ValueError("side grid must be positive and finite")
        if any(f not in _FAMILIES for f in self.families) or not self.families:
            raise ValueError(f"families must come from {_FAMILIES}")
        if any(k < 1 for k in self.shifts):
            raise ValueError("shift multiples must be >= 1")
        if self.refine_rounds < 0 or self.quadrature_tol <= 0 or self.budget < 1:
            raise ValueError("invalid refinement or quadrature settings")


def default_cube_config() -> CubeSearchConfig:
    return CubeSearchConfig(sides=tuple(np.logspace(-3.0, 3.0, 13)))


def coarse_cube_config() -> CubeSearchConfig:
    """Smaller grid for quadrature-bound radial weights."""
    return CubeSearchConfig(sides=tuple(np.logspace(-2.0, 2.0, 9)),
                            refine_rounds=6)


@dataclass(frozen=True)
class CubeSearchResult:
    estimate: float
    argmax: Cube
    evaluations: int
    functional: str


def _family_cube(family: str, shift: int, d: int, side: float) -> Cube:
    if family == "cornered":
        return Cube((0.0,) * d, side)
    if family == "centered":
        return Cube((-0.5 * side,) * d, side)
    return Cube((shift * side,) * d, side)


def estimate_a2_cubes(weight, functional: str = "trace",
                      config: CubeSearchConfig | None = None) -> CubeSearchResult:
    """Searched lower bound of the A2 functional supremum over cubes.

    Same architecture as the interval search: grid scan over the family
    grid, golden refinement in log side length through the incumbent, and
    the canonical tie-break preferring origin-adjacent cubes.
    """
    cfg = config if config is not None else default_cube_config()
    func = {"trace": a2_functional_trace, "norm": a2_functional_norm}.get(functional)
    if func is None:
        raise ValueError(f"unknown functional {functional!r}")

    if isinstance(weight, Type1aWeight):
        report = check_a2_type1a(weight)
        if report.verdict != VERDICT_A2:
            raise NotA2Error(
                f"cube estimation precondition failed: {report.verdict}")
        inverse = inverse_type1a(weight)

        def averages(cube: Cube):
            return average_type1a(weight, cube), average_type1a(inverse, cube)
    elif isinstance(weight, Type1bWeight):
        report = check_a2_type1b(weight)
        if report.verdict != VERDICT_A2:
            raise NotA2Error(
                f"cube estimation precondition failed: {report.verdict}")
        inverse = inverse_type1b(weight)

        def averages(cube: Cube):
            return (average_type1b(weight, cube, cfg.quadrature_tol, cfg.budget),
                    average_type1b(inverse, cube, cfg.quadrature_tol, cfg.budget))
    else:
        raise TypeError(f"cannot estimate for {type(weight).__name__}")

    d = weight.d

    def evaluate(cube: Cube) -> float:
        avg_w, avg_winv = averages(cube)
        val = float(func(avg_w, avg_winv))
        if not math.isfinite(val):
            raise SearchError(f"functional returned non-finite value on {cube}")
        return val

    grid: list[tuple[str, int, Cube]] = []
    for family in cfg.families:
        shifts = cfg.shifts if family == "shifted" else (0,)
        for shift in shifts:
            for side in cfg.sides:
                grid.append((family, shift, _family_cube(family, shift, d, side)))

    record: list[tuple[float, int, Cube]] = []
    threads = thread_count()
    cubes = [c for _, _, c in grid]
    if threads > 1 and len(cubes) >= 8:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(evaluate, cubes))
    else:
        values = [evaluate(c) for c in cubes]
    for cube, val in zip(cubes, values):
        record.append((val, len(record), cube))

    best_idx = max(range(len(record)), key=lambda k: (record[k][0], -k))
    best_family, best_shift, best_cube = grid[best_idx]

    if cfg.refine_rounds > 0:
        span = math.log(4.0)
        s0 = math.log(best_cube.side)

        def along(logs: float) -> float:
            cube = _family_cube(best_family, best_shift, d, math.exp(logs))
            val = evaluate(cube)
            record.append((val, len(record), cube))
            return val

        golden_max(along, s0 - span, s0 + span, cfg.refine_rounds)

    best_val = max(v for v, _, _ in record)
    floor = best_val * (1.0 - _TIE_RTOL) if best_val > 0 else best_val
    tied = [(v, k, c) for v, k, c in record if v >= floor]
    tied.sort(key=lambda t: (t[2].nearest_vertex_distance() / t[2].side, t[1]))
    val, _, argmax = tied[0]
    return CubeSearchResult(estimate=val, argmax=argmax,
                            evaluations=len(record), functional=functional)
