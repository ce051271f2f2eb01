"""Quadrature ground truth for the Bessel-product integrals.

A_mu,nu(k)     = int_{-1}^{1} J_mu(ku) J_nu(ku) du
B_mu,nu(k)     = int_{-1}^{1} J_mu(ku)(ku)^-mu J_nu(ku)(ku)^-nu (1-u^2)^-1/2 du
H^lam_mu,nu(k) = int_{-1}^{1} J_mu(ku)(ku)^-mu J_nu(ku)(ku)^-nu (1-u^2)^(lam-1/2) du

Endpoint singularities are removed by substitution (u = cos t, u = sin t,
power-law maps) so one adaptive Gauss-Kronrod engine handles all of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from hypersum.hyper_core import (
    DomainError,
    HypParams,
    NoConvergence,
    SeriesConfig,
    bessel_j_scaled_array,
    gamma_signed,
    pfq,
    pfq_array,
    power_signed,
    rgamma_signed,
)

# Gauss-Kronrod 7/15 nodes on [-1, 1] (nonnegative half)
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
_gauss_half = np.zeros(8)
_gauss_half[1::2] = _WG
GAUSS_WEIGHTS = np.concatenate([_gauss_half[:-1], _gauss_half[::-1]])

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class QuadResult:
    value: float
    est_abs_error: float
    evaluations: int
    converged: bool


def _panel_rules(f, left: np.ndarray, right: np.ndarray):
    half = 0.5 * (right - left)
    mid = 0.5 * (right + left)
    x = mid[:, None] + half[:, None] * NODES[None, :]
    fx = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    kron = half * (fx @ KRONROD_WEIGHTS)
    gauss = half * (fx @ GAUSS_WEIGHTS)
    resabs = np.abs(half) * (np.abs(fx) @ KRONROD_WEIGHTS)
    err = np.maximum(np.abs(kron - gauss), 50.0 * _EPS * resabs)
    return kron, err


def adaptive_quad(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    tol: float = 1e-12,
    initial_panels: int = 4,
    max_panels: int = 4000,
) -> QuadResult:
    """Globally adaptive Gauss-Kronrod quadrature of a vectorized integrand.

    The target is ``tol * max(1, |I|)``.  Each round bisects every panel
    whose error exceeds its width-share of the target, evaluating all new
    panels in one call, so the result is deterministic for fixed input.
    The reported error is the sum of |K15 - G7| over panels, an upper bound
    on the error of the Kronrod value in practice.
    """
    edges = np.linspace(a, b, initial_panels + 1)
    left, right = edges[:-1], edges[1:]
    vals, errs = _panel_rules(f, left, right)
    evaluations = len(left) * len(NODES)
    width = abs(b - a)
    while True:
        total = math.fsum(vals)
        err = float(np.sum(errs))
        target = tol * max(1.0, abs(total))
        if err <= target:
            return QuadResult(total, err, evaluations, True)
        if len(left) >= max_panels:
            result = QuadResult(total, err, evaluations, False)
            raise NoConvergence(f"quadrature error {err:.3g} above target {target:.3g}", result)
        share = target * np.abs(right - left) / width
        bad = errs > share
        if not np.any(bad):
            bad = errs == errs.max()
        mid = 0.5 * (left[bad] + right[bad])
        new_left = np.concatenate([left[bad], mid])
        new_right = np.concatenate([mid, right[bad]])
        nv, ne = _panel_rules(f, new_left, new_right)
        evaluations += len(new_left) * len(NODES)
        keep = ~bad
        order = np.argsort(np.concatenate([left[keep], new_left]), kind="stable")
        left = np.concatenate([left[keep], new_left])[order]
        right = np.concatenate([right[keep], new_right])[order]
        vals = np.concatenate([vals[keep], nv])[order]
        errs = np.concatenate([errs[keep], ne])[order]


# ---------------------------------------------------------------------------
# the three Bessel-product integrals


def _scaled_pair(mu: float, nu: float, k: float, cfg):
    def g(u):
        ku = k * u
        return bessel_j_scaled_array(mu, ku, cfg) * bessel_j_scaled_array(nu, ku, cfg)
    return g


def _check_orders(mu: float, nu: float) -> None:
    if mu + nu <= -1:
        raise DomainError("mu + nu must exceed -1 for the integrand to be integrable at u = 0")


def integral_A(mu: float, nu: float, k: float, tol: float = 1e-12, cfg: SeriesConfig | None = None) -> QuadResult:
    """A_mu,nu(k) for integer orders; zero by parity when mu + nu is odd."""
    if not (float(mu).is_integer() and float(nu).is_integer()):
        raise DomainError("integral_A needs integer orders (the integrand is complex on u < 0 otherwise)")
    _check_orders(mu, nu)
    if int(mu + nu) % 2:
        return QuadResult(0.0, 0.0, 0, True)
    s = mu + nu
    # J_mu(ku) J_nu(ku) = (ku)^(mu+nu) * scaled pair; integer negative orders
    # are fine because the scaled form is regularized
    pair = _scaled_pair(mu, nu, k, cfg)

    def f(u):
        return (k * u) ** s * pair(u)

    res = adaptive_quad(f, 0.0, 1.0, tol=tol / 2)
    return QuadResult(2.0 * res.value, 2.0 * res.est_abs_error, res.evaluations, res.converged)


def integral_B(mu: float, nu: float, k: float, tol: float = 1e-12, cfg: SeriesConfig | None = None) -> QuadResult:
    """B_mu,nu(k) with u = cos(t) removing the Chebyshev weight."""
    _check_orders(mu, nu)
    pair = _scaled_pair(mu, nu, k, cfg)

    def f(t):
        return pair(np.cos(t))

    res = adaptive_quad(f, 0.0, 0.5 * math.pi, tol=tol / 2)
    return QuadResult(2.0 * res.value, 2.0 * res.est_abs_error, res.evaluations, res.converged)


def integral_H(
    mu: float, nu: float, lam: float, k: float, tol: float = 1e-12, cfg: SeriesConfig | None = None
) -> QuadResult:
    """H^lam_mu,nu(k) with u = sin(t); the weight becomes cos(t)^(2 lam)."""
    if lam == 0:
        raise DomainError("lambda must be nonzero")
    if lam <= -0.5:
        raise DomainError("the Gegenbauer weight is not integrable for lambda <= -1/2")
    _check_orders(mu, nu)
    pair = _scaled_pair(mu, nu, k, cfg)

    def f(t):
        return pair(np.sin(t)) * np.cos(t) ** (2.0 * lam)

    res = adaptive_quad(f, 0.0, 0.5 * math.pi, tol=tol / 2)
    return QuadResult(2.0 * res.value, 2.0 * res.est_abs_error, res.evaluations, res.converged)


def integral_pfq_lemma(
    alpha: float,
    beta: float,
    params: HypParams,
    a: float = 1.0,
    tol: float = 1e-12,
    cfg: SeriesConfig | None = None,
) -> QuadResult:
    """int_0^a y^(alpha-1) (a-y)^(beta-1) pFq(upper; lower; params.argument * y) dy.

    ``params.argument`` is the coefficient (-omega) multiplying y.  The interval is split
    at a/2 and each half is mapped with a power law (y = s^(1/alpha) on the
    left, a - y = s^(1/beta) on the right) that absorbs the endpoint factor.
    """
    if alpha <= 0 or beta <= 0 or a <= 0:
        raise DomainError("need alpha > 0, beta > 0, a > 0")
    if params.pole_lowers():
        raise DomainError("a nonpositive-integer lower parameter makes the integrand undefined")
    coeff = params.argument

    def F(y):
        # p = q = 0 sums to exp(coeff * y)
        return pfq_array(params.upper, params.lower, coeff * y, cfg)

    h = 0.5 * a

    def left(s):
        y = s ** (1.0 / alpha)
        return (a - y) ** (beta - 1.0) * F(y) / alpha

    def right(s):
        w = s ** (1.0 / beta)
        y = a - w
        return y ** (alpha - 1.0) * F(y) / beta

    r1 = adaptive_quad(left, 0.0, h**alpha, tol=tol / 2)
    r2 = adaptive_quad(right, 0.0, h**beta, tol=tol / 2)
    return QuadResult(
        r1.value + r2.value,
        r1.est_abs_error + r2.est_abs_error,
        r1.evaluations + r2.evaluations,
        r1.converged and r2.converged,
    )


def pfq_lemma_closed_form(alpha: float, beta: float, params: HypParams, a: float = 1.0,
                          cfg: SeriesConfig | None = None) -> float:
    """Closed form of the same integral: B(alpha, beta) a^(alpha+beta-1) times a raised-order series."""
    pre = (
        gamma_signed(alpha)
        * gamma_signed(beta)
        * rgamma_signed(alpha + beta)
        * power_signed(a, alpha + beta - 1.0)
    )
    raised = HypParams(params.upper + (alpha,), params.lower + (alpha + beta,), params.argument * a)
    return float(pre) * pfq(raised, cfg).value
