"""Hermite tensor-product discretization used as the independent oracle.

Everything here is deliberately different from the closed-form modules: the
generator and the weight operators are assembled from ladder matrices in the
Hermite basis of L^2(R^2), exponentiated densely, and measured through power
iteration on singular values.  Agreement between these numbers and the
closed forms is the main cross-check of the package.

Truncation is the dominant error source.  Algebraic identities are therefore
asserted only on interior blocks (indices whose ladder images stay below the
truncation level), every curve carries a two-level convergence check, and
the repelling model's exact spurious corner mode (see
``corner_mode_vector``) is deflated before norms are taken.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

from .bargmann import remainder_bound
from .degenerate import fiber_exponent, sup_weighted
from .exactnorms import semigroup_norm
from .positivity import position_weight_decay_bound
from .symbols import ModelParams, PotentialSpec, constants

__all__ = [
    "UnknownLabel",
    "ExpNotConverged",
    "PowerIterationStalled",
    "TruncationNotConverged",
    "IndefinitePencil",
    "HermiteOperator",
    "CurveSample",
    "ConvergenceMeta",
    "DecayCurve",
    "OPERATOR_LABELS",
    "CURVE_QUANTITIES",
    "ladder",
    "build",
    "interior_indices",
    "corner_mode_vector",
    "semigroup_matrix",
    "operator_norm",
    "decay_curve",
    "subelliptic_constant",
]


class UnknownLabel(ValueError):
    """Operator or curve label not in the supported table."""


class ExpNotConverged(ArithmeticError):
    """Matrix exponential returned non-finite entries."""


class PowerIterationStalled(ArithmeticError):
    """Singular-value power iteration hit its iteration cap."""


class TruncationNotConverged(ArithmeticError):
    """Dimension refinement moved a curve sample by more than the tolerance."""


class IndefinitePencil(np.linalg.LinAlgError):
    """Right-hand Gram of the subelliptic pencil lost positive definiteness."""


OPERATOR_LABELS = (
    "O_p", "O_q", "X", "Y", "K", "K_degenerate",
    "a_q", "a_q_star", "D_q", "grad_V", "weight_q",
)

CURVE_QUANTITIES = (
    "evolution_norm",
    "derivative_weight",
    "gradient_weight",
    "position_weight",
    "creation_weight",
    "degenerate_fiber",
)


@dataclass(frozen=True, eq=False)
class HermiteOperator:
    """Dense matrix of one model operator on the truncated Hermite basis.

    The flattened index is m * dim_p + n with m the q-level and n the
    p-level.
    """

    dim_q: int
    dim_p: int
    matrix: np.ndarray
    label: str


def ladder(dim: int) -> np.ndarray:
    """Annihilation matrix: a[n-1, n] = sqrt(n)."""
    m = np.zeros((dim, dim))
    for n in range(1, dim):
        m[n - 1, n] = np.sqrt(n)
    return m


def _ops_1d(dim: int):
    """Position, derivative, and shifted number matrices in one variable."""
    a = ladder(dim)
    position = (a + a.T) / np.sqrt(2.0)
    derivative = (a - a.T) / np.sqrt(2.0)
    number = np.diag(np.arange(dim) + 0.5)
    return position, derivative, number


def interior_indices(dim_q: int, dim_p: int, margin: int) -> np.ndarray:
    """Flattened indices whose ladder images stay below truncation.

    Identities involving operators that move at most ``margin`` levels hold
    exactly on this block; outside it they are truncation artifacts.
    """
    keep = []
    for m in range(dim_q - margin):
        base = m * dim_p
        keep.extend(range(base, base + dim_p - margin))
    return np.asarray(keep, dtype=int)


def build(label: str, params: ModelParams, dim_q: int, dim_p: int) -> HermiteOperator:
    """Assemble one operator matrix from ladder actions.

    Supported labels: O_p, O_q (oscillators), X (transport at unit
    curvature scale, multiplied by sqrt(nu) inside K), Y (commutator partner
    of O_p and X), K (full quadratic generator), K_degenerate (linear
    potential, includes the -1/2 shift), a_q / a_q_star (q-ladder), D_q
    (the q-derivative; its matrix is the skew form of i D_q, which has the
    same norms), grad_V (multiplication by the potential gradient), and
    weight_q (the diagonal square root of nu O_q).
    """
    if dim_q < 2 or dim_p < 2:
        raise ValueError("need at least two Hermite levels per variable")
    if label not in OPERATOR_LABELS:
        raise UnknownLabel("no operator labelled %r" % (label,))
    qq, dq1, num_q = _ops_1d(dim_q)
    pp, dp1, num_p = _ops_1d(dim_p)
    eye_q, eye_p = np.eye(dim_q), np.eye(dim_p)
    attracting = params.alpha > 0
    root_nu = np.sqrt(params.nu)

    if label == "O_p":
        mat = np.kron(eye_q, num_p)
    elif label == "O_q":
        mat = np.kron(num_q, eye_p)
    elif label in ("X", "Y", "K"):
        p_mult = np.kron(eye_q, pp)
        q_mult = np.kron(qq, eye_p)
        d_q = np.kron(dq1, eye_p)
        d_p = np.kron(eye_q, dp1)
        if attracting:
            transport = p_mult @ d_q - q_mult @ d_p
            partner = -d_q @ d_p + q_mult @ p_mult
        else:
            transport = p_mult @ d_q + q_mult @ d_p
            partner = -(d_q @ d_p + q_mult @ p_mult)
        if label == "X":
            mat = transport
        elif label == "Y":
            mat = partner
        else:
            mat = np.kron(eye_q, num_p) + root_nu * transport
    elif label == "K_degenerate":
        mat = (np.kron(eye_q, pp) @ np.kron(dq1, eye_p)
               - params.lambda1 * np.kron(eye_q, dp1)
               + np.kron(eye_q, num_p)
               - 0.5 * np.eye(dim_q * dim_p))
    elif label == "a_q":
        mat = np.kron(ladder(dim_q), eye_p)
    elif label == "a_q_star":
        mat = np.kron(ladder(dim_q).T, eye_p)
    elif label == "D_q":
        mat = np.kron(dq1, eye_p)
    elif label == "grad_V":
        sign = 1.0 if attracting else -1.0
        mat = sign * root_nu * np.kron(qq, eye_p)
    else:  # weight_q
        diag = np.sqrt(params.nu * (np.arange(dim_q) + 0.5))
        mat = np.kron(np.diag(diag), eye_p)
    return HermiteOperator(dim_q=dim_q, dim_p=dim_p, matrix=mat, label=label)


def corner_mode_vector(dim_q: int, dim_p: int) -> np.ndarray:
    """Unit vector of the truncated repelling generator's spurious mode.

    Truncation deletes the raising part of the transport term on the state
    with top q-level and bottom p-level, leaving an exact eigenvector with
    eigenvalue 1/2 that the continuous operator does not have.  Subtracting
    e^{-t/2} times its projector from the exponential removes the dominant
    truncation artifact of every alpha = 0 norm.
    """
    v = np.zeros(dim_q * dim_p)
    v[(dim_q - 1) * dim_p] = 1.0
    return v


def semigroup_matrix(op: HermiteOperator, t: float) -> np.ndarray:
    """e^{-t M} by scaling-and-squaring; raises if non-finite."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    result = scipy.linalg.expm(-t * op.matrix)
    if not np.all(np.isfinite(result)):
        raise ExpNotConverged("exponential of %s at t=%g overflowed"
                              % (op.label, t))
    return result


def operator_norm(m: np.ndarray, tol: float = 1e-10,
                  max_iter: int = 20000) -> float:
    """Largest singular value by power iteration on m* m.

    The start vector is deterministic (flat with a bumped first entry) so
    repeated runs agree bit for bit.
    """
    n = m.shape[1]
    v = np.ones(n) / np.sqrt(n)
    v[0] += 0.5
    v /= np.linalg.norm(v)
    mh = m.conj().T
    s_old = 0.0
    for _ in range(max_iter):
        w = mh @ (m @ v)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        s = float(np.sqrt(nw))
        v = w / nw
        if abs(s - s_old) <= tol * max(1.0, s):
            return s
        s_old = s
    raise PowerIterationStalled("no convergence in %d iterations" % max_iter)


# ---------------------------------------------------------------------------
# decay curves


@dataclass(frozen=True)
class CurveSample:
    t: float
    analytic: Optional[float]
    bound: Optional[float]
    oracle: float
    rel_discrepancy: float
    converged: bool


@dataclass(frozen=True)
class ConvergenceMeta:
    """Two-level refinement data backing the per-sample flags."""

    levels: tuple
    drift_tol: float
    drifts: tuple


@dataclass(frozen=True)
class DecayCurve:
    quantity_label: str
    samples: tuple
    convergence_meta: ConvergenceMeta


def _potential_constants(params: ModelParams):
    signed = params.nu if params.alpha > 0 else -params.nu
    return constants(PotentialSpec(kind="quadratic", nus=(signed,)))


def _chained_exponentials(op: HermiteOperator, ts: Sequence[float]) -> dict:
    """Exponentials on a grid, squaring E(t/2) whenever it is available."""
    cache: dict = {}
    for t in sorted(ts):
        half = t / 2.0
        if half in cache:
            cache[t] = cache[half] @ cache[half]
            if not np.all(np.isfinite(cache[t])):
                raise ExpNotConverged("squaring chain overflowed at t=%g" % t)
        else:
            cache[t] = semigroup_matrix(op, t)
    return cache


def _weighted_norm_values(quantity: str, params: ModelParams,
                          ts: Sequence[float], dim: int) -> list:
    """Shifted oracle values e^{-t shift} ||W e^{-t K}|| at one truncation."""
    root_nu = np.sqrt(params.nu)
    gen = build("K", params, dim, dim)
    if quantity == "evolution_norm":
        weight = None
        shift = 0.0
    elif quantity == "derivative_weight":
        weight = root_nu * build("D_q", params, dim, dim).matrix
        shift = np.sqrt(_potential_constants(params).a)
    elif quantity == "gradient_weight":
        weight = build("grad_V", params, dim, dim).matrix
        shift = np.sqrt(_potential_constants(params).a)
    elif quantity == "position_weight":
        weight = build("weight_q", params, dim, dim).matrix
        shift = root_nu
    elif quantity == "creation_weight":
        weight = root_nu * build("a_q_star", params, dim, dim).matrix
        shift = params.nu ** (1.0 / 3.0)
    else:
        raise UnknownLabel("no matrix curve for %r" % (quantity,))
    exps = _chained_exponentials(gen, ts)
    corner = corner_mode_vector(dim, dim) if params.alpha == 0 else None
    values = []
    for t in ts:
        et = exps[t]
        if corner is not None:
            et = et - np.exp(-t / 2.0) * np.outer(corner, corner)
        m = et if weight is None else weight @ et
        values.append(operator_norm(m) * np.exp(-t * shift))
    return values


def _curve_bound(quantity: str, params: ModelParams, t: float) -> Optional[float]:
    if quantity == "evolution_norm":
        return 1.0
    if quantity == "position_weight":
        return position_weight_decay_bound(t, params)
    if quantity == "creation_weight":
        return remainder_bound(t, params)
    if quantity in ("derivative_weight", "gradient_weight"):
        big_a = _potential_constants(params).a
        root_a = np.sqrt(big_a)
        root_nu = np.sqrt(params.nu)
        routes = [np.sqrt(2.0) * position_weight_decay_bound(t, params)
                  * np.exp(t * (root_nu - root_a))]
        if params.alpha > 0 and params.nu > 1:
            routes.append(np.sqrt(2.0) * remainder_bound(t, params)
                          * np.exp(t * (params.nu ** (1.0 / 3.0) - root_a)))
        return float(min(routes))
    return None


def _curve_analytic(quantity: str, params: ModelParams, t: float) -> Optional[float]:
    if quantity == "evolution_norm" and params.alpha == 0:
        return semigroup_norm(t, params.nu).norm
    return None


def _fiber_matrix_sup(t: float, lambda1: float, dim: int,
                      xi_grid: np.ndarray) -> float:
    """sup over a xi_q grid of |xi_q| ||e^{-t (fiber of K_degenerate + 1)}||.

    Each fiber is the 1D non-normal matrix diag(0..dim-1) + 1 + i b x with
    b = sqrt(xi^2 + lambda1^2); its true norm is e^{-t} e^{u(t) b^2}, so
    this doubles as a matrix-exponential validation of that formula.
    """
    x1, _, _ = _ops_1d(dim)
    base = np.diag(np.arange(dim, dtype=float)) + np.eye(dim)
    best = 0.0
    for xi in xi_grid:
        if xi == 0.0:
            continue
        b = np.hypot(xi, lambda1)
        fiber = base + 1j * b * x1
        val = abs(xi) * operator_norm(scipy.linalg.expm(-t * fiber))
        if val > best:
            best = val
    return best


def _degenerate_curve(params: ModelParams, ts: Sequence[float],
                      drift_tol: float, strict: bool) -> DecayCurve:
    lam = params.lambda1
    # the |xi| profile peaks at xi^2 = -1/(2u); keep the peak well inside
    xi_peak = np.sqrt(-0.5 / fiber_exponent(min(ts)))
    extent = max(12.0, 1.6 * xi_peak)
    xi_grid = np.linspace(0.0, extent, int(10 * extent) + 1)
    samples = []
    drifts = []
    failed = []
    for t in ts:
        oracle = _fiber_matrix_sup(t, lam, 28, xi_grid)
        check = _fiber_matrix_sup(t, lam, 20, xi_grid)
        drift = abs(oracle / check - 1.0) if check else 0.0
        converged = drift <= drift_tol
        if not converged:
            failed.append(t)
        u = fiber_exponent(t)
        # continuous sup of |xi| e^{-t} e^{u (xi^2 + lam^2)} at xi^2 = -1/(2u)
        analytic = float(np.exp(-t) * np.exp(u * lam * lam)
                         * np.sqrt(-0.5 / u) * np.exp(-0.5))
        bound = float(np.sqrt(sup_weighted(t, lam)) * np.exp(-t))
        samples.append(CurveSample(t=float(t), analytic=analytic, bound=bound,
                                   oracle=oracle, rel_discrepancy=float(drift),
                                   converged=converged))
        drifts.append(float(drift))
    if failed and strict:
        raise TruncationNotConverged(
            "fiber truncation drift above %g at t=%s" % (drift_tol, failed))
    meta = ConvergenceMeta(levels=(28, 20), drift_tol=drift_tol,
                           drifts=tuple(drifts))
    return DecayCurve(quantity_label="degenerate_fiber", samples=tuple(samples),
                      convergence_meta=meta)


def decay_curve(quantity_label: str, params: ModelParams,
                t_grid: Sequence[float], dims: int = 64,
                drift_tol: float = 0.01, strict: bool = True) -> DecayCurve:
    """Oracle decay curve with per-sample two-level convergence flags.

    Each sample pairs the Galerkin value e^{-t shift} ||W e^{-t K}|| with the
    closed-form value (when one exists) and the analytic bound from the
    other modules.  The whole grid is recomputed at three quarters of the
    requested truncation; a relative change above ``drift_tol`` marks the
    sample unconverged and, when ``strict``, raises TruncationNotConverged.
    Flagged samples are still reported, never dropped.
    """
    if quantity_label not in CURVE_QUANTITIES:
        raise UnknownLabel("no curve quantity %r" % (quantity_label,))
    ts = sorted(float(t) for t in t_grid)
    if not ts or ts[0] <= 0:
        raise ValueError("t grid must be positive")
    if quantity_label == "degenerate_fiber":
        return _degenerate_curve(params, ts, drift_tol, strict)
    low = max(8, (3 * dims) // 4)
    main_vals = _weighted_norm_values(quantity_label, params, ts, dims)
    check_vals = _weighted_norm_values(quantity_label, params, ts, low)
    samples = []
    drifts = []
    failed = []
    for t, val, ref in zip(ts, main_vals, check_vals):
        drift = abs(val / ref - 1.0) if ref != 0.0 else (0.0 if val == 0.0 else np.inf)
        converged = drift <= drift_tol
        if not converged:
            failed.append(t)
        samples.append(CurveSample(t=float(t),
                                   analytic=_curve_analytic(quantity_label, params, t),
                                   bound=_curve_bound(quantity_label, params, t),
                                   oracle=float(val),
                                   rel_discrepancy=float(drift),
                                   converged=converged))
        drifts.append(float(drift))
    if failed and strict:
        raise TruncationNotConverged(
            "truncation drift above %g at t=%s (dims %d vs %d)"
            % (drift_tol, failed, dims, low))
    meta = ConvergenceMeta(levels=(dims, low), drift_tol=drift_tol,
                           drifts=tuple(drifts))
    return DecayCurve(quantity_label=quantity_label, samples=tuple(samples),
                      convergence_meta=meta)


# ---------------------------------------------------------------------------
# subelliptic pencil


def _bracket_weight(base: np.ndarray, scale: float) -> np.ndarray:
    """(1 + scale * x^2)^{2/3} of a symmetric matrix, by diagonalization."""
    w, vecs = np.linalg.eigh(base)
    return (vecs * (1.0 + scale * w * w) ** (2.0 / 3.0)) @ vecs.T


def subelliptic_constant(params: ModelParams, dims: int = 16) -> float:
    """Largest c in the truncated subelliptic inequality, via a pencil.

    On the dims x dims interior of a (dims+2)-level assembly, computes the
    smallest generalized eigenvalue of

        ||K u||^2 + A ||u||^2  >=  c ( ||O_p u||^2 + ||X u||^2
                                      + ||<grad V>^{2/3} u||^2
                                      + ||<D_q>^{2/3} u||^2 ).

    Fractional powers are taken on eigenvalues of the (normal) weight
    operators.  The assembly margin keeps ladder spill-over of the quadratic
    forms out of the restricted block.
    """
    if dims < 8:
        raise ValueError("pencil needs at least 8 levels per direction")
    big = dims + 2
    qq, dq1, _ = _ops_1d(big)
    eye_p = np.eye(big)

    gen = build("K", params, big, big).matrix
    osc_p = build("O_p", params, big, big).matrix
    transport = np.sqrt(params.nu) * build("X", params, big, big).matrix
    big_a = _potential_constants(params).a

    grad_sq = _bracket_weight(qq, params.nu)      # <grad V>^{4/3} on the q factor
    # D_q^2 = -(skew derivative)^2 is symmetric PSD; weight it on eigenvalues
    w, vecs = np.linalg.eigh(-dq1 @ dq1)
    deriv_sq = (vecs * (1.0 + np.maximum(w, 0.0)) ** (2.0 / 3.0)) @ vecs.T

    left = gen.T @ gen + big_a * np.eye(big * big)
    right = (osc_p.T @ osc_p + transport.T @ transport
             + np.kron(grad_sq, eye_p) + np.kron(deriv_sq, eye_p))

    idx = interior_indices(big, big, 2)
    left = left[np.ix_(idx, idx)]
    right = right[np.ix_(idx, idx)]
    left = 0.5 * (left + left.T)
    right = 0.5 * (right + right.T)
    try:
        np.linalg.cholesky(right)
    except np.linalg.LinAlgError as exc:
        raise IndefinitePencil("weight Gram not positive definite") from exc
    eigenvalues = scipy.linalg.eigh(left, right, eigvals_only=True)
    return float(eigenvalues[0])
