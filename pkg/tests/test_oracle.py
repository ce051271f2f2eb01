import math

import numpy as np
import pytest

from hypersum.acceptance import t1_cases, t2_cases, t3_cases
from hypersum.hyper_core import DomainError, HypParams, NoConvergence, bessel_j
from hypersum.oracle import (
    GAUSS_WEIGHTS,
    KRONROD_WEIGHTS,
    NODES,
    adaptive_quad,
    integral_A,
    integral_B,
    integral_H,
    integral_pfq_lemma,
    pfq_lemma_closed_form,
)
from hypersum.theorems import evaluate, oracle_lhs, t2_lhs, t3_lhs


def rel(a, b):
    return abs(a - b) / abs(b)


# --- rule and engine ----------------------------------------------------------------


@pytest.mark.parametrize("degree", range(0, 24))
def test_kronrod_rule_exact_through_degree_23(degree):
    exact = 0.0 if degree % 2 else 2.0 / (degree + 1)
    assert KRONROD_WEIGHTS @ NODES**degree == pytest.approx(exact, abs=1e-15)


@pytest.mark.parametrize("degree", range(0, 14))
def test_gauss_rule_exact_through_degree_13(degree):
    exact = 0.0 if degree % 2 else 2.0 / (degree + 1)
    assert GAUSS_WEIGHTS @ NODES**degree == pytest.approx(exact, abs=1e-15)


def test_adaptive_quad_known_integrals():
    assert adaptive_quad(np.sin, 0.0, math.pi).value == pytest.approx(2.0, rel=1e-14)
    res = adaptive_quad(np.sqrt, 0.0, 1.0, tol=1e-12)
    assert res.converged and res.value == pytest.approx(2.0 / 3.0, abs=1e-12)


def test_adaptive_quad_reports_failure():
    with pytest.raises(NoConvergence) as info:
        adaptive_quad(lambda x: np.abs(x - 0.3) ** -0.5, 0.0, 1.0, tol=1e-14, max_panels=16)
    assert not info.value.result.converged


def test_adaptive_quad_converged_means_error_within_target():
    res = adaptive_quad(lambda x: np.exp(-x * x), -3.0, 3.0, tol=1e-11)
    assert res.converged and res.est_abs_error <= 1e-11 * max(1.0, abs(res.value))


# --- the three integrals -----------------------------------------------------------


def test_A_examples():
    assert integral_A(0, 0, 0.0).value == pytest.approx(2.0, rel=1e-15)
    assert integral_A(1, 2, 3.0).value == 0.0
    assert integral_A(0, 0, 1.0).converged


def test_A_odd_parity_integrand_is_negligible():
    # direct quadrature of the full odd integrand on [-1, 1]
    res = adaptive_quad(lambda u: np.array([bessel_j(1, 3.0 * x) * bessel_j(2, 3.0 * x) for x in u]), -1.0, 1.0)
    assert abs(res.value) < 1e-14


def test_A_needs_integer_orders():
    with pytest.raises(DomainError):
        integral_A(0.5, 0.5, 1.0)


def test_B_examples():
    assert integral_B(0, 0, 0.0).value == pytest.approx(math.pi, rel=1e-15)
    assert rel(integral_B(0, 0, 1.0).value, math.pi * t2_lhs(0, 0, 1.0)) <= 1e-12
    assert integral_B(0.5, 0.5, 2.0).converged


def test_B_needs_integrable_orders():
    with pytest.raises(DomainError):
        integral_B(-0.5, -0.5, 1.0)


@pytest.mark.parametrize("lam", [0.25, 0.75, 1.0, 2.0, 5.0])
def test_H_beta_integral(lam):
    want = math.sqrt(math.pi) * math.gamma(lam + 0.5) / math.gamma(lam + 1.0)
    assert integral_H(0, 0, lam, 0.0).value == pytest.approx(want, rel=1e-13)


def test_H_against_t3_lhs():
    want = math.sqrt(math.pi) * math.gamma(1.5) / math.gamma(2.0) * t3_lhs(0.0, 0.0, 1.0, 1.0)
    assert rel(integral_H(0, 0, 1.0, 1.0).value, want) <= 1e-12


def test_H_half_lambda_is_flat_weight():
    k = 2.0

    def f(u):
        return np.array([bessel_j(1, k * x) ** 2 for x in u]) / (k * u) ** 2

    # the integrand is even and finite at 0; nodes never hit u = 0 exactly
    direct = 2.0 * adaptive_quad(f, 0.0, 1.0, tol=1e-13).value
    assert rel(integral_H(1, 1, 0.5, k).value, direct) <= 1e-12


@pytest.mark.parametrize("lam", [0.0, -0.5, -1.5])
def test_H_rejects_bad_lambda(lam):
    with pytest.raises(DomainError):
        integral_H(0, 0, lam, 1.0)


# --- grid properties ----------------------------------------------------------------


def _grid():
    return t1_cases() + t2_cases() + t3_cases()


@pytest.mark.parametrize("case", _grid(), ids=lambda c: f"{c.id}-{c.mu}-{c.nu}-{c.lam}-k{c.k}")
def test_tolerance_halving_is_honest(case):
    coarse = oracle_lhs(case, tol=1e-10)
    fine = oracle_lhs(case, tol=5e-11)
    assert abs(fine[0] - coarse[0]) <= coarse[1] + 1e-15 * abs(coarse[0])


@pytest.mark.parametrize("case", _grid(), ids=lambda c: f"{c.id}-{c.mu}-{c.nu}-{c.lam}-k{c.k}")
def test_relation_closure(case):
    value, _ = oracle_lhs(case)
    lhs, _, _, _ = evaluate(case)
    assert abs(value - lhs) <= 1e-8 * max(1.0, abs(lhs))


def test_oracle_is_deterministic():
    assert integral_H(1.0, 0.5, 0.75, 9.0) == integral_H(1.0, 0.5, 0.75, 9.0)


# --- the weighted pFq integral -------------------------------------------------------


def test_lemma_constant_integrand():
    params = HypParams((), (), 0.0)
    assert integral_pfq_lemma(1.0, 1.0, params).value == pytest.approx(1.0, rel=1e-15)


def test_lemma_2f3_at_half_half():
    # J_0(u)^2 = 2F3(1/2, 1; 1, 1, 1; -u^2); with y = u^2 the Chebyshev weight becomes y^-1/2 (1-y)^-1/2
    params = HypParams((0.5, 1.0), (1.0, 1.0, 1.0), -1.0)
    quad = integral_pfq_lemma(0.5, 0.5, params, tol=1e-13).value
    assert rel(quad, pfq_lemma_closed_form(0.5, 0.5, params)) <= 1e-10
    # the raised series is the Chebyshev 3F4 times B(1/2, 1/2) = pi
    assert rel(quad, math.pi * t2_lhs(0.0, 0.0, 1.0)) <= 1e-10


def test_lemma_gegenbauer_weight():
    lam = 2.0
    params = HypParams((0.5, 1.0), (1.0, 1.0, 1.0), -1.0)
    quad = integral_pfq_lemma(0.5, lam + 0.5, params, tol=1e-13).value
    beta = math.gamma(0.5) * math.gamma(lam + 0.5) / math.gamma(lam + 1.0)
    assert rel(quad, beta * t3_lhs(0.0, 0.0, lam, 1.0)) <= 1e-10


@pytest.mark.parametrize("alpha,beta,a", [(0.3, 1.7, 1.0), (2.0, 0.6, 2.5), (1.0, 1.0, 0.4)])
def test_lemma_matches_closed_form(alpha, beta, a):
    params = HypParams((0.75,), (1.5, 2.0), -3.0)
    quad = integral_pfq_lemma(alpha, beta, params, a=a, tol=1e-13).value
    assert rel(quad, pfq_lemma_closed_form(alpha, beta, params, a=a)) <= 1e-11


def test_lemma_rejects_bad_exponents():
    with pytest.raises(DomainError):
        integral_pfq_lemma(0.0, 1.0, HypParams((), (), 0.0))
    with pytest.raises(DomainError):
        integral_pfq_lemma(1.0, 1.0, HypParams((0.5,), (-1.0,), -1.0))
