"""Positivity window for the conjugated position weight.

Conjugating the model semigroup by the twisted position-weight flow stays
bounded exactly as long as the difference of two sesquilinear forms on the
invariant 2x2 blocks is positive semidefinite.  Both forms are closed
expressions in the tilde representation {Id, I~, J~, K~} of the
biquaternions on a block:

* ``position_flow_form``   the weight side, depending on delta only,
* ``evolved_flow_form``    the evolved model side, depending on t only.

Their difference is Hermitian for admissible angles; its determinant
vanishes at an explicit threshold delta0(t) > 0, and positivity holds for
0 <= delta < delta0(t).  For small t the threshold behaves like
nu t^3 / 12, which is what makes the weight useful: ``delta0`` evaluates
the closed logarithm with a series-protected bracket so the cubic regime
survives in floating point, and ``position_weight_decay_bound`` turns the
threshold into the decay envelope of the weighted semigroup.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from kfpq.symbols import ModelParams, _flow_factors, basis_coordinates

__all__ = [
    "NonRealDelta0",
    "PositivityReport",
    "Delta0Curve",
    "delta0_curve",
    "tilde_basis",
    "position_flow_form",
    "evolved_flow_form",
    "hermitian_difference",
    "positivity_report",
    "delta0",
    "delta0_lower_bound_check",
    "position_weight_decay_bound",
]


class NonRealDelta0(ArithmeticError):
    """The closed threshold came out with a non-negligible imaginary part."""


@dataclass(frozen=True)
class PositivityReport:
    """Decomposition of the form difference at one (t, delta) pair.

    coeffs holds (a, b, c, d) of the normalized representation
    e^{-sign*t} (a Id + b I~ + c J~ + d K~); det_value is the multiplicative
    determinant a^2 + b^2 + c^2 + d^2 of that normalized matrix, which
    vanishes at delta = delta0(t).  min_eigenvalue is the smallest eigenvalue
    of the Hermitian part of the normalized difference.
    """

    t: float
    delta: float
    coeffs: np.ndarray
    det_value: complex
    min_eigenvalue: float
    is_positive: bool


def _check_sign(sign: int) -> int:
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1, got %r" % (sign,))
    return sign


def tilde_basis(alpha: float, sign: int):
    """2x2 tilde representation (Id, I~, J~, K~) on the sign-labelled block."""
    s = _check_sign(sign)
    ep = np.exp(1j * alpha)
    idm = np.eye(2, dtype=complex)
    it = np.array([[1j * s, 0], [0, -1j * s]], dtype=complex)
    jt = np.array([[0, -1j / ep], [-1j * ep, 0]], dtype=complex)
    kt = np.array([[0, s / ep], [-s * ep, 0]], dtype=complex)
    return idm, it, jt, kt


def position_flow_form(delta: float, params: ModelParams, sign: int) -> np.ndarray:
    """Weight-side form: closed in cosh and sinh of delta e^{2 i alpha}."""
    s = _check_sign(sign)
    alpha = params.alpha
    idm, it, _, _ = tilde_basis(alpha, s)
    w = delta * np.exp(2j * alpha)
    ch, sh = np.cosh(w), np.sinh(w)
    sa, ca = np.sin(alpha), np.cos(alpha)
    pref = np.exp(s * w)
    return pref * ((s * sa * ch - sh * ca) * idm
                   + 1j * (ca * ch - s * sa * sh) * it)


def evolved_flow_form(t: float, params: ModelParams, sign: int) -> np.ndarray:
    """Evolved-side form: closed in the flow factors C, S at time t."""
    s = _check_sign(sign)
    alpha = params.alpha
    z = params.z
    idm, it, jt, kt = tilde_basis(alpha, s)
    c, sf = _flow_factors(t, params.n1sq)
    p = 1 + 2 * sf * sf
    cs = c * sf
    sa, ca = np.sin(alpha), np.cos(alpha)
    mat = ((s * sa * p - 2 * ca * cs) * idm
           + 1j * ca * p * it
           - 2j * s * sa * cs * it
           + 4j * z * ca * sf * sf * jt
           - 4 * z * s * sa * sf * sf * kt)
    return np.exp(-s * t) * mat


def hermitian_difference(t: float, delta: float, params: ModelParams,
                         sign: int) -> np.ndarray:
    """Weight-side form minus evolved-side form (Hermitian for real inputs)."""
    return (position_flow_form(delta, params, sign)
            - evolved_flow_form(t, params, sign))


def positivity_report(t: float, delta: float, params: ModelParams,
                      sign: int) -> PositivityReport:
    s = _check_sign(sign)
    diff = hermitian_difference(t, delta, params, s)
    scaled = np.exp(s * t) * diff
    coeffs = basis_coordinates(scaled, tilde_basis(params.alpha, s))
    det_value = complex(np.sum(coeffs * coeffs))
    herm = (scaled + scaled.conj().T) / 2
    min_eig = float(np.linalg.eigvalsh(herm)[0])
    return PositivityReport(t=float(t), delta=float(delta), coeffs=coeffs,
                            det_value=det_value, min_eigenvalue=min_eig,
                            is_positive=bool(min_eig > 0.0))


# ---------------------------------------------------------------------------
# the closed threshold


def _bracket(t: float, n1sq: float) -> complex:
    """2 S^2 - (cosh t - 1), series-protected against cancellation.

    The two terms agree through order t^2, so for |t n1| < 1/2 the closed
    difference is evaluated as the tail series
    sum_{k>=2} t^{2k} (n1sq^{k-1} - 1) / (2k)! instead.
    """
    if abs(t) * np.sqrt(abs(n1sq)) < 0.5:
        total = 0j
        fact = 24.0
        pw = complex(n1sq)
        k = 2
        while True:
            total += t ** (2 * k) * (pw - 1.0) / fact
            # individual terms can vanish (n1sq^{k-1} = 1), so terminate on
            # the sign-insensitive envelope instead of the term itself
            envelope = t ** (2 * k) * (abs(pw) + 1.0) / fact
            if envelope < 1e-30 * (1.0 + abs(total)) or k > 60:
                break
            k += 1
            fact *= (2 * k - 1) * (2 * k)
            pw *= n1sq
        return total
    c, s = _flow_factors(t, n1sq)
    return 2 * s * s - (np.cosh(t) - 1.0)


def delta0(t: float, params: ModelParams, imag_tol: float = 1e-10) -> float:
    """Positivity threshold: the positive root of the determinant in delta.

    delta0(t) = (e^{-2 i alpha} / 2) log(1 + 2 A / (X - A)) with
    A = 2 S^2 - (cosh t - 1) and X = 2 C S + sinh t.  The log1p form together
    with the series bracket keeps the small-t cubic regime
    delta0 ~ nu t^3 / 12 accurate for curvatures up to at least 1e4.

    Raises NonRealDelta0 if the imaginary part of the closed expression
    exceeds imag_tol relative to the real part.
    """
    if t <= 0:
        raise ValueError("the threshold is defined for t > 0")
    n1sq = params.n1sq
    c, s = _flow_factors(t, n1sq)
    a = _bracket(t, n1sq)
    x = 2 * c * s + np.sinh(t)
    val = np.exp(-2j * params.alpha) / 2 * np.log1p(2 * a / (x - a))
    scale = max(1.0, abs(val.real))
    if abs(val.imag) > imag_tol * scale:
        raise NonRealDelta0(
            "threshold has imaginary part %g at t=%g" % (val.imag, t))
    return float(val.real)


@dataclass(frozen=True)
class Delta0Curve:
    """Sampled positivity threshold: (t, delta0(t)) pairs for one model."""

    samples: tuple
    params: ModelParams


def delta0_curve(params: ModelParams, ts) -> Delta0Curve:
    """Evaluate the threshold on a time grid, sorted ascending."""
    pairs = tuple((float(t), delta0(float(t), params)) for t in sorted(ts))
    return Delta0Curve(samples=pairs, params=params)


def delta0_lower_bound_check(params: ModelParams, epsilon0: float = 0.5,
                             n_grid: int = 60):
    """Fit the cubic lower-bound constant on a small-time window.

    Scans t on a log grid below t0 = epsilon0 / (1 + sqrt(nu)) and returns
    (c_fit, passed) where c_fit = min delta0 / (nu t^3).  The exact small-t
    constant is 1/12; passed requires c_fit in (0.05, 1/12 + slack], i.e.
    the threshold is genuinely cubic with a constant close to the limit.
    """
    if params.nu <= 0:
        raise ValueError("cubic window needs nu > 0")
    if not 0.0 < epsilon0 < 1.0:
        raise ValueError("epsilon0 must lie in (0, 1)")
    t0 = epsilon0 / (1.0 + np.sqrt(params.nu))
    ts = np.logspace(np.log10(t0) - 3.0, np.log10(t0), n_grid)
    ratios = [delta0(float(t), params) / (params.nu * t ** 3) for t in ts]
    c_fit = float(min(ratios))
    passed = bool(0.05 < c_fit <= 1.0 / 12.0 * (1.0 + 1e-9))
    return c_fit, passed


def position_weight_decay_bound(t: float, params: ModelParams,
                                epsilon0: float = 0.5) -> float:
    """Decay envelope of the position-weighted semigroup.

    With delta(t) = delta0(t) / 2 and t0 = epsilon0 / (1 + sqrt(nu)):

        t <= t0:  sqrt(nu / delta(t))  c1 e^{-t sqrt(nu)}
        t >  t0:  sqrt(nu / delta(t0)) c1 e^{-t sqrt(nu)} e^{-(t - t0)/2}

    where c1 = sqrt(1/2) e^{-1/2}.  The two branches agree at t = t0.
    """
    if params.nu <= 0:
        raise ValueError("decay envelope needs nu > 0")
    if t <= 0:
        raise ValueError("decay envelope is defined for t > 0")
    if not 0.0 < epsilon0 < 1.0:
        raise ValueError("epsilon0 must lie in (0, 1)")
    c1 = np.sqrt(0.5) * np.exp(-0.5)
    rnu = np.sqrt(params.nu)
    t0 = epsilon0 / (1.0 + rnu)
    if t <= t0:
        d = delta0(t, params) / 2.0
        return float(np.sqrt(params.nu / d) * c1 * np.exp(-t * rnu))
    d0 = delta0(t0, params) / 2.0
    return float(np.sqrt(params.nu / d0) * c1
                 * np.exp(-t * rnu) * np.exp(-(t - t0) / 2.0))
