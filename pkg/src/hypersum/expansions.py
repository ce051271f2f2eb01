"""Orthogonal-polynomial expansions of Bessel functions on [-1, 1].

Three families are covered:

* Legendre:   J_N(kx)            = sum_L a_LN(k) P_L(x)
* Chebyshev:  J_nu(kx)(kx)^-nu   = sum_L C_Lnu(k) T_2L(x)
* Gegenbauer: J_nu(kx)(kx)^-nu   = sum_L b_Lnu(k) C^lambda_2L(x)

Coefficients are evaluated independently for each L from closed forms in
regularized 2F3 / 1F2 functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from hypersum.hyper_core import (
    DomainError,
    HypParams,
    SeriesConfig,
    SignedLog,
    bessel_j,
    bessel_j_scaled,
    gamma_signed,
    pochhammer_signed,
    power_signed,
    regularized_parts,
    rgamma_signed,
)

SQRT_PI = math.sqrt(math.pi)

Tag = Literal["Legendre", "Chebyshev", "Gegenbauer"]


@dataclass(frozen=True)
class ExpansionKind:
    tag: Tag
    lam: float | None = None

    def __post_init__(self):
        if self.tag not in ("Legendre", "Chebyshev", "Gegenbauer"):
            raise DomainError(f"unknown expansion family {self.tag!r}")
        if self.tag == "Gegenbauer":
            if self.lam is None or self.lam == 0:
                raise DomainError("Gegenbauer expansion requires lambda != 0")
        elif self.lam is not None:
            raise DomainError(f"{self.tag} expansion takes no lambda")


LEGENDRE = ExpansionKind("Legendre")
CHEBYSHEV = ExpansionKind("Chebyshev")


def gegenbauer_kind(lam: float) -> ExpansionKind:
    return ExpansionKind("Gegenbauer", lam)


@dataclass(frozen=True)
class CoeffTable:
    kind: ExpansionKind
    order: float
    k: float
    coeffs: tuple[float, ...]

    @property
    def L_max(self) -> int:
        return len(self.coeffs) - 1


# ---------------------------------------------------------------------------
# polynomial recurrences


def _check_x(x: float) -> None:
    if abs(x) > 1:
        raise DomainError(f"x={x!r} outside [-1, 1]")


def eval_legendre(L: int, x: float) -> float:
    _check_x(x)
    p_prev, p = 1.0, x
    if L == 0:
        return 1.0
    for n in range(1, L):
        p_prev, p = p, ((2 * n + 1) * x * p - n * p_prev) / (n + 1)
    return p


def eval_chebyshev_t(n: int, x: float) -> float:
    _check_x(x)
    t_prev, t = 1.0, x
    if n == 0:
        return 1.0
    for _ in range(1, n):
        t_prev, t = t, 2.0 * x * t - t_prev
    return t


def eval_gegenbauer(n: int, lam: float, x: float) -> float:
    """C_n^lambda(x) by the three-term recurrence (lambda != 0)."""
    _check_x(x)
    if lam == 0:
        raise DomainError("Gegenbauer polynomials need lambda != 0")
    c_prev, c = 1.0, 2.0 * lam * x
    if n == 0:
        return 1.0
    for m in range(1, n):
        c_prev, c = c, (2.0 * (m + lam) * x * c - (m + 2.0 * lam - 1.0) * c_prev) / (m + 1)
    return c


def eval_jacobi(n: int, alpha: float, beta: float, x: float) -> float:
    """Jacobi polynomial P_n^(alpha, beta)(x) for alpha, beta > -1."""
    if alpha <= -1 or beta <= -1:
        raise DomainError("Jacobi polynomials need alpha, beta > -1")
    if n == 0:
        return 1.0
    p_prev = 1.0
    p = 0.5 * (alpha - beta) + 0.5 * (alpha + beta + 2.0) * x
    ab = alpha + beta
    for m in range(2, n + 1):
        c = 2 * m + ab
        a1 = 2.0 * m * (m + ab) * (c - 2.0)
        a2 = (c - 1.0) * (c * (c - 2.0) * x + alpha * alpha - beta * beta)
        a3 = 2.0 * (m + alpha - 1.0) * (m + beta - 1.0) * c
        p_prev, p = p, (a2 * p - a3 * p_prev) / a1
    return p


# ---------------------------------------------------------------------------
# coefficients


def _even_sign(m: int) -> int:
    return -1 if m % 2 else 1


def legendre_coeff(L: int, N: int, k: float, cfg: SeriesConfig | None = None) -> float:
    """a_LN(k), the Fourier-Legendre coefficient of J_N(kx).

    Uses the form with Gamma(L+1) times a regularized 2F3, which stays
    finite when N > L; the binomial form is 0 * infinity there.
    """
    if (L + N) % 2:
        return 0.0
    # i^(L-N) is real once L+N is even
    phase = _even_sign((L - N) // 2)
    half = 0.5 * L
    params = HypParams(
        (half + 0.5, half + 1.0),
        (L + 1.5, half - 0.5 * N + 1.0, half + 0.5 * N + 1.0),
        -k * k / 4.0,
    )
    scale, series = regularized_parts(params, cfg)
    pre = (
        SignedLog.from_float(2.0 * SQRT_PI * (2 * L + 1) * phase)
        * power_signed(2.0, -2 * L - 2)
        * power_signed(k, L)
        * gamma_signed(L + 1.0)
        * scale
    )
    return float(pre) * series.value


def _ln_binomial(top: float, bottom: float) -> SignedLog:
    return gamma_signed(top + 1.0) * rgamma_signed(bottom + 1.0) * rgamma_signed(top - bottom + 1.0)


def legendre_coeff_series(L: int, N: int, k: float, M_max: int = 200) -> float:
    """a_LN(k) from the explicit M-sum with binomials.

    Independent of the hypergeometric kernels; kept as a cross-check.
    """
    if M_max > 200:
        raise DomainError("M-sum cap is 200")
    if (L + N) % 2:
        return 0.0
    terms = []
    for M in range(M_max + 1):
        top = L + 2 * M
        binom = _ln_binomial(float(top), 0.5 * (top - N))
        if binom.sign == 0:
            continue
        t = (
            power_signed(-0.25, M)
            * power_signed(k, top)
            * power_signed(2.0, -(top + 1))
            * rgamma_signed(M + 1.0)
            * rgamma_signed(L + M + 1.5)
            * binom
        )
        terms.append(float(t))
    phase = _even_sign((L - N) // 2)
    return SQRT_PI * (2 * L + 1) * 2.0 ** (-L - 1) * phase * 2.0 * math.fsum(terms)


def chebyshev_coeff(L: int, nu: float, k: float, cfg: SeriesConfig | None = None) -> float:
    """C_Lnu(k), the coefficient of T_2L(x) in J_nu(kx)(kx)^-nu."""
    params = HypParams((L + 0.5,), (L + nu + 1.0, 2.0 * L + 1.0), -k * k / 4.0)
    scale, series = regularized_parts(params, cfg)
    # 1F2 / Gamma(L+nu+1) = Gamma(2L+1) * regularized 1F2
    pre = (
        SignedLog.from_float(_even_sign(L) * (1.0 if L == 0 else 2.0))
        * power_signed(k, 2 * L)
        * power_signed(2.0, -4 * L - nu)
        * rgamma_signed(L + 1.0)
        * gamma_signed(2.0 * L + 1.0)
        * scale
    )
    return float(pre) * series.value


def gegenbauer_coeff(L: int, nu: float, lam: float, k: float, cfg: SeriesConfig | None = None) -> float:
    """b_Lnu(k), the coefficient of C^lambda_2L(x) in J_nu(kx)(kx)^-nu."""
    if lam == 0:
        raise DomainError("Gegenbauer coefficients need lambda != 0")
    params = HypParams((L + 0.5,), (2.0 * L + lam + 1.0, L + nu + 1.0), -k * k / 4.0)
    scale, series = regularized_parts(params, cfg)
    # 1 / (L+1/2)_(nu+1/2) = Gamma(L+1/2) / Gamma(L+nu+1); the 1/Gamma(L+nu+1)
    # and 1/Gamma(2L+lam+1) live inside the regularized series
    pre = (
        SignedLog.from_float(_even_sign(L) / SQRT_PI)
        * power_signed(k, 2 * L)
        * power_signed(2.0, 2 * L - nu)
        * pochhammer_signed(lam + 0.5, 2 * L)
        / pochhammer_signed(2.0 * lam, 2 * L)
        / pochhammer_signed(2.0 * L + 2.0 * lam, 2 * L)
        * gamma_signed(L + 0.5)
        * gamma_signed(2.0 * L + lam + 1.0)
        * scale
    )
    return float(pre) * series.value


def coefficient(kind: ExpansionKind, L: int, order: float, k: float, cfg: SeriesConfig | None = None) -> float:
    if kind.tag == "Legendre":
        if not float(order).is_integer() or order < 0:
            raise DomainError("the Legendre family expands J_N for integer N >= 0")
        return legendre_coeff(L, int(order), k, cfg)
    if kind.tag == "Chebyshev":
        return chebyshev_coeff(L, order, k, cfg)
    return gegenbauer_coeff(L, order, kind.lam, k, cfg)


def coeff_table(kind: ExpansionKind, order: float, k: float, L_max: int, cfg: SeriesConfig | None = None) -> CoeffTable:
    coeffs = tuple(coefficient(kind, L, order, k, cfg) for L in range(L_max + 1))
    return CoeffTable(kind, float(order), float(k), coeffs)


def _basis(kind: ExpansionKind, L: int, x: float) -> float:
    if kind.tag == "Legendre":
        return eval_legendre(L, x)
    if kind.tag == "Chebyshev":
        return eval_chebyshev_t(2 * L, x)
    return eval_gegenbauer(2 * L, kind.lam, x)


def reconstruct(kind: ExpansionKind, nu: float, k: float, x: float, L_max: int, cfg: SeriesConfig | None = None) -> float:
    """Truncated expansion at x.

    Legendre reproduces J_N(kx) with N = nu; the other two families
    reproduce J_nu(kx)(kx)^-nu.
    """
    _check_x(x)
    table = coeff_table(kind, nu, k, L_max, cfg)
    return math.fsum(c * _basis(kind, L, x) for L, c in enumerate(table.coeffs) if c != 0.0)


def target(kind: ExpansionKind, nu: float, k: float, x: float, cfg: SeriesConfig | None = None) -> float:
    """The function a family's expansion represents, evaluated directly."""
    if kind.tag == "Legendre":
        return bessel_j(nu, k * x, cfg)
    return bessel_j_scaled(nu, k * x, cfg)
