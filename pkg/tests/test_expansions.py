import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hypersum.hyper_core import DomainError, bessel_j, bessel_j_scaled_array
from hypersum.expansions import (
    CHEBYSHEV,
    LEGENDRE,
    ExpansionKind,
    _basis,
    chebyshev_coeff,
    coeff_table,
    coefficient,
    eval_chebyshev_t,
    eval_gegenbauer,
    eval_jacobi,
    eval_legendre,
    gegenbauer_coeff,
    gegenbauer_kind,
    legendre_coeff,
    legendre_coeff_series,
    reconstruct,
    target,
)
from hypersum.oracle import adaptive_quad


# --- polynomials ----------------------------------------------------------------


def test_legendre_examples():
    assert eval_legendre(0, -0.37) == 1.0
    assert eval_legendre(2, 0.5) == -0.125


def test_p5_against_exact_quintic():
    x = Fraction(3, 10)
    exact = (63 * x**5 - 70 * x**3 + 15 * x) / 8
    assert eval_legendre(5, 0.3) == pytest.approx(float(exact), rel=1e-15)


def test_chebyshev_examples():
    assert eval_chebyshev_t(0, 0.9) == 1.0
    assert eval_chebyshev_t(4, 0.5) == pytest.approx(-0.5, abs=1e-15)
    assert eval_chebyshev_t(6, -0.2) == pytest.approx(math.cos(6 * math.acos(-0.2)), abs=1e-14)


@given(st.integers(0, 40), st.floats(-1, 1))
def test_chebyshev_trig_form(n, x):
    assert eval_chebyshev_t(n, x) == pytest.approx(math.cos(n * math.acos(x)), abs=1e-12)


def test_gegenbauer_examples():
    assert eval_gegenbauer(0, 1.7, 0.2) == 1.0
    assert eval_gegenbauer(1, 0.75, 0.4) == pytest.approx(0.6, rel=1e-15)
    assert eval_gegenbauer(4, 0.5, 0.3) == pytest.approx(eval_legendre(4, 0.3), rel=1e-14)


def test_jacobi_examples():
    assert eval_jacobi(0, 0.3, -0.4, 0.1) == 1.0
    assert eval_jacobi(2, 0.0, 0.0, 0.5) == pytest.approx(-0.125, rel=1e-15)


def _poch(a, n):
    return math.prod(a + i for i in range(n))


@pytest.mark.parametrize("n", range(0, 11))
@pytest.mark.parametrize("lam", [0.3, 0.8, 1.5, 3.0])
@pytest.mark.parametrize("z", [-0.9, 0.0, 0.47, 1.0])
def test_jacobi_gegenbauer_relation(n, lam, z):
    # only even degrees appear in the expansions; the relation holds for all n
    lhs = eval_jacobi(n, lam - 0.5, lam - 0.5, z)
    rhs = _poch(lam + 0.5, n) * eval_gegenbauer(n, lam, z) / _poch(2 * lam, n)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-12)


def test_polynomials_reject_x_outside_interval():
    with pytest.raises(DomainError):
        eval_legendre(2, 1.5)
    with pytest.raises(DomainError):
        eval_gegenbauer(2, 0.0, 0.5)
    with pytest.raises(DomainError):
        eval_jacobi(2, -1.0, 0.0, 0.5)


# --- kinds ------------------------------------------------------------------------


def test_expansion_kind_validation():
    with pytest.raises(DomainError):
        gegenbauer_kind(0.0)
    with pytest.raises(DomainError):
        ExpansionKind("Chebyshev", 0.5)
    with pytest.raises(DomainError):
        ExpansionKind("Hermite")


# --- coefficients -----------------------------------------------------------------


@pytest.mark.parametrize("L,N", [(1, 0), (0, 3), (4, 1), (7, 2)])
def test_legendre_parity_is_exact_zero(L, N):
    assert legendre_coeff(L, N, 2.3) == 0.0


def test_a00_at_small_k():
    assert legendre_coeff(0, 0, 1e-8) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("L,N,k", [(2, 0, 1.0), (0, 2, 3.0), (3, 5, 4.0), (6, 2, 7.5)])
def test_legendre_coeff_matches_binomial_sum(L, N, k):
    assert legendre_coeff(L, N, k) == pytest.approx(legendre_coeff_series(L, N, k, M_max=60), rel=1e-12)


def test_legendre_coeff_finite_when_order_exceeds_degree():
    # the binomial form is 0 * infinity here; the regularized form is not
    value = legendre_coeff(1, 3, 2.0)
    assert math.isfinite(value) and value != 0.0


def test_chebyshev_coeff_examples():
    assert chebyshev_coeff(0, 0.0, 0.0) == 1.0
    assert chebyshev_coeff(1, 0.7, 0.0) == 0.0
    assert chebyshev_coeff(3, 2.5, 0.0) == 0.0


def test_chebyshev_projection_oracle():
    # (2/pi) int_0^pi f(cos t) T_2(cos t) dt
    def f(t):
        x = np.cos(t)
        return bessel_j_scaled_array(0.5, 2.0 * x) * np.cos(2.0 * t)

    proj = 2.0 / math.pi * adaptive_quad(f, 0.0, math.pi, tol=1e-13).value
    assert chebyshev_coeff(1, 0.5, 2.0) == pytest.approx(proj, rel=1e-12)


def test_gegenbauer_coeff_examples():
    assert gegenbauer_coeff(0, 0.0, 1.0, 1e-9) == pytest.approx(1.0, abs=1e-15)
    assert gegenbauer_coeff(2, 1.5, 0.3, 0.0) == 0.0


@pytest.mark.parametrize("kind", [CHEBYSHEV, gegenbauer_kind(0.25), gegenbauer_kind(2.0)])
@pytest.mark.parametrize("L", [1, 2, 4])
def test_leading_power_k_2L(kind, L):
    # c_L(k) / k^(2L) is constant to first order as k -> 0
    r1 = coefficient(kind, L, 0.5, 1e-3) / 1e-3 ** (2 * L)
    r2 = coefficient(kind, L, 0.5, 2e-3) / 2e-3 ** (2 * L)
    assert r1 == pytest.approx(r2, rel=1e-5)


def test_coeff_table_shape():
    table = coeff_table(LEGENDRE, 2, 3.0, 12)
    assert table.L_max == 12
    assert all(table.coeffs[L] == 0.0 for L in range(1, 13, 2))


# --- reconstruction ---------------------------------------------------------------


def test_reconstruct_examples():
    assert reconstruct(CHEBYSHEV, 0.0, 0.0, 0.3, 0) == 1.0
    assert reconstruct(LEGENDRE, 1, 2.0, 0.5, 25) == pytest.approx(bessel_j(1, 1.0), abs=1e-11)
    want = target(gegenbauer_kind(2.0), 0.5, 5.0, 0.9)
    assert reconstruct(gegenbauer_kind(2.0), 0.5, 5.0, -0.9, 30) == pytest.approx(want, abs=1e-10)


def test_half_lambda_matches_legendre_family():
    x, k, nu = 0.7, 3.0, 1
    geg = reconstruct(gegenbauer_kind(0.5), nu, k, x, 30)
    leg = reconstruct(LEGENDRE, nu, k, x, 30) / (k * x) ** nu
    assert geg == pytest.approx(leg, rel=1e-12)


XS = np.linspace(-1.0, 1.0, 41)


@pytest.mark.parametrize(
    "kind,orders",
    [
        (LEGENDRE, (0, 1, 2, 3)),
        (CHEBYSHEV, (0.0, 0.5, 1.0, 2.5)),
        (gegenbauer_kind(0.25), (0.0, 0.5, 1.0, 2.5)),
        (gegenbauer_kind(2.0), (0.0, 0.5, 1.0, 2.5)),
    ],
    ids=["legendre", "chebyshev", "gegenbauer-0.25", "gegenbauer-2"],
)
@pytest.mark.parametrize("k", [1.0, 5.0, 10.0])
def test_reconstruction_sup_norm(kind, orders, k):
    for nu in orders:
        table = coeff_table(kind, nu, k, 30)
        worst = 0.0
        for x in XS:
            approx = math.fsum(c * _basis(kind, L, float(x)) for L, c in enumerate(table.coeffs))
            worst = max(worst, abs(approx - target(kind, nu, k, float(x))))
        assert worst <= 1e-10, (nu, worst)


def test_legendre_rejects_fractional_order():
    with pytest.raises(DomainError):
        reconstruct(LEGENDRE, 0.5, 1.0, 0.2, 5)
