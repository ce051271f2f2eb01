"""Scalar special-function kernels.

Generalized hypergeometric series pFq (p <= q), their regularized versions,
Bessel functions of real order built on 0F1, and the log-space gamma and
Pochhammer helpers used to assemble large prefactors without overflow.

Series terms are generated by the term-ratio recurrence and, by default,
carried in double-double arithmetic so that the cancellation of an
alternating series at large negative argument does not eat the result.
"""

from __future__ import annotations

import functools
import math
import os
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from hypersum import _dd

__all__ = [
    "HypersumError",
    "DomainError",
    "NoConvergence",
    "SignedLog",
    "SeriesConfig",
    "SeriesResult",
    "HypParams",
    "ln_gamma_signed",
    "rgamma_signed",
    "gamma_signed",
    "pochhammer",
    "pochhammer_signed",
    "power_signed",
    "is_nonpositive_integer",
    "pfq",
    "pfq_regularized",
    "regularized_parts",
    "pfq_array",
    "bessel_j",
    "bessel_j_scaled",
    "bessel_j_scaled_array",
    "product_jj_2f3",
]


class HypersumError(Exception):
    """Base class for errors raised by this package."""


class DomainError(HypersumError, ValueError):
    """Arguments outside the domain where an operation is defined."""


class NoConvergence(HypersumError, ArithmeticError):
    """A series or quadrature hit its work cap before meeting tolerance."""

    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result


def is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and float(x).is_integer()


# ---------------------------------------------------------------------------
# signed logarithms


@dataclass(frozen=True)
class SignedLog:
    """A real number stored as ``sign * exp(log_abs)``.

    ``sign == 0`` means the value is exactly zero and ``log_abs`` is ignored.
    """

    log_abs: float
    sign: int

    @classmethod
    def from_float(cls, x: float) -> "SignedLog":
        if x == 0:
            return cls(-math.inf, 0)
        return cls(math.log(abs(x)), 1 if x > 0 else -1)

    def _coerce(self, other) -> "SignedLog":
        if isinstance(other, SignedLog):
            return other
        return SignedLog.from_float(float(other))

    def __mul__(self, other) -> "SignedLog":
        other = self._coerce(other)
        if self.sign == 0 or other.sign == 0:
            return ZERO
        return SignedLog(self.log_abs + other.log_abs, self.sign * other.sign)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "SignedLog":
        other = self._coerce(other)
        if other.sign == 0:
            raise ZeroDivisionError("division by an exact zero SignedLog")
        if self.sign == 0:
            return ZERO
        return SignedLog(self.log_abs - other.log_abs, self.sign * other.sign)

    def __rtruediv__(self, other) -> "SignedLog":
        return self._coerce(other) / self

    def __pow__(self, n: int) -> "SignedLog":
        if not isinstance(n, int):
            raise TypeError("SignedLog only supports integer powers")
        if n == 0:
            return ONE
        if self.sign == 0:
            if n < 0:
                raise ZeroDivisionError("zero to a negative power")
            return ZERO
        sign = -1 if (self.sign < 0 and n % 2) else 1
        return SignedLog(self.log_abs * n, sign)

    def __neg__(self) -> "SignedLog":
        return SignedLog(self.log_abs, -self.sign)

    def __float__(self) -> float:
        if self.sign == 0:
            return 0.0
        try:
            return self.sign * math.exp(self.log_abs)
        except OverflowError:
            return math.copysign(math.inf, self.sign)

    @property
    def value(self) -> float:
        return float(self)


ZERO = SignedLog(-math.inf, 0)
ONE = SignedLog(0.0, 1)


def ln_gamma_signed(x: float) -> SignedLog:
    """Return log|Gamma(x)| and the sign of Gamma(x).

    At the poles (x a nonpositive integer) the sign is 0; callers treat
    1/Gamma there as exactly zero.
    """
    if is_nonpositive_integer(x):
        return SignedLog(math.inf, 0)
    if x > 0:
        return SignedLog(math.lgamma(x), 1)
    # Gamma alternates sign between consecutive negative integers
    sign = -1 if math.floor(-x) % 2 == 0 else 1
    return SignedLog(math.lgamma(x), sign)


def gamma_signed(x: float) -> SignedLog:
    g = ln_gamma_signed(x)
    if g.sign == 0:
        raise DomainError(f"Gamma has a pole at {x!r}")
    return g


def rgamma_signed(x: float) -> SignedLog:
    """1/Gamma(x) as a SignedLog, exactly zero at the poles."""
    g = ln_gamma_signed(x)
    if g.sign == 0:
        return ZERO
    return SignedLog(-g.log_abs, g.sign)


def pochhammer(c: float, g: int) -> float:
    """Rising factorial (c)_g as a direct product."""
    if g < 0:
        raise DomainError("pochhammer needs a nonnegative integer count")
    out = 1.0
    for i in range(g):
        out *= c + i
    return out


def pochhammer_signed(c: float, g: float) -> SignedLog:
    """(c)_g for real g, in log space.

    Integer counts use the direct product so that zeros are exact; other
    counts go through Gamma(c + g) / Gamma(c).
    """
    if float(g).is_integer() and g >= 0:
        log_abs = 0.0
        sign = 1
        for i in range(int(g)):
            f = c + i
            if f == 0:
                return ZERO
            log_abs += math.log(abs(f))
            if f < 0:
                sign = -sign
        return SignedLog(log_abs, sign)
    num = ln_gamma_signed(c + g)
    if num.sign == 0:
        if is_nonpositive_integer(c):
            raise DomainError(f"({c})_{g}: both gammas sit on poles")
        raise DomainError(f"({c})_{g} is infinite")
    return num * rgamma_signed(c)


def power_signed(base: float, exponent: float) -> SignedLog:
    """base**exponent in log space; 0**0 is 1."""
    if exponent == 0:
        return ONE
    if base == 0:
        if exponent < 0:
            raise DomainError("zero raised to a negative power")
        return ZERO
    if base < 0:
        if not float(exponent).is_integer():
            raise DomainError("negative base with non-integer exponent")
        sign = -1 if int(exponent) % 2 else 1
        return SignedLog(exponent * math.log(-base), sign)
    return SignedLog(exponent * math.log(base), 1)


# ---------------------------------------------------------------------------
# series configuration and results


def _default_max_terms() -> int:
    raw = os.environ.get("HYPERSUM_MAX_TERMS")
    if raw is None:
        return 10_000
    value = int(raw)
    if value < 1:
        raise ValueError("HYPERSUM_MAX_TERMS must be a positive integer")
    return value


@dataclass(frozen=True)
class SeriesConfig:
    """Stopping rule for the series kernels.

    Summation stops once ``n_consec`` successive terms satisfy
    ``|term| <= tol * max(1, |partial|)`` past the point where the terms
    have started to shrink.  ``extended`` selects double-double term
    recurrence and accumulation; with it off, terms are plain floats and
    only the accumulation is compensated.
    """

    tol: float = 1e-16
    max_terms: int = field(default_factory=_default_max_terms)
    n_consec: int = 3
    extended: bool = True

    def with_precision(self, extended: bool) -> "SeriesConfig":
        return replace(self, extended=extended)


DEFAULT_CONFIG = SeriesConfig()
DOUBLE_CONFIG = SeriesConfig(extended=False)


@dataclass(frozen=True)
class SeriesResult:
    value: float
    terms_used: int
    est_abs_error: float
    converged: bool
    regularized: bool
    max_abs_partial: float

    @property
    def digits_lost(self) -> float:
        """log10 of peak partial sum over final magnitude (0 when no cancellation)."""
        if self.max_abs_partial == 0:
            return 0.0
        if self.value == 0:
            return math.inf
        return max(0.0, math.log10(self.max_abs_partial / abs(self.value)))

    def scaled(self, factor: float, regularized: bool | None = None) -> "SeriesResult":
        return SeriesResult(
            value=self.value * factor,
            terms_used=self.terms_used,
            est_abs_error=self.est_abs_error * abs(factor),
            converged=self.converged,
            regularized=self.regularized if regularized is None else regularized,
            max_abs_partial=self.max_abs_partial * abs(factor),
        )


@dataclass(frozen=True)
class HypParams:
    """Upper and lower parameters and the argument of a pFq instance."""

    upper: tuple[float, ...]
    lower: tuple[float, ...]
    argument: float

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(float(a) for a in self.upper))
        object.__setattr__(self, "lower", tuple(float(b) for b in self.lower))
        object.__setattr__(self, "argument", float(self.argument))
        if len(self.upper) > len(self.lower):
            raise DomainError(
                f"p={len(self.upper)} > q={len(self.lower)}: only convergent p <= q series are supported"
            )

    @property
    def p(self) -> int:
        return len(self.upper)

    @property
    def q(self) -> int:
        return len(self.lower)

    def pole_lowers(self) -> list[float]:
        return [b for b in self.lower if is_nonpositive_integer(b)]


# ---------------------------------------------------------------------------
# series kernels


def _sum_normalized(upper, lower, z, n0, cfg: SeriesConfig) -> SeriesResult:
    """Sum t_n / t_{n0} for n >= n0 by the term-ratio recurrence."""
    tol, cap, need = cfg.tol, cfg.max_terms, cfg.n_consec
    sh, sl = 1.0, 0.0
    th, tl = 1.0, 0.0
    comp = 0.0  # running compensation for the plain-float branch
    peak = 1.0
    recent: list[float] = []
    n = n0
    used = 1
    converged = terminated = False
    while used < cap:
        if cfg.extended:
            nh, nl = z, 0.0
            for a in upper:
                ah, al = _dd.two_sum(a, float(n))
                nh, nl = _dd.mul(nh, nl, ah, al)
            if nh == 0.0:
                converged = terminated = True
                break
            dh, dl = float(n + 1), 0.0
            for b in lower:
                bh, bl = _dd.two_sum(b, float(n))
                dh, dl = _dd.mul(dh, dl, bh, bl)
            th, tl = _dd.mul(th, tl, nh, nl)
            th, tl = _dd.div(th, tl, dh, dl)
            sh, sl = _dd.add(sh, sl, th, tl)
            shrinking = abs(nh) < abs(dh)
            partial = sh
        else:
            num = z
            for a in upper:
                num *= a + n
            if num == 0.0:
                converged = terminated = True
                break
            den = float(n + 1)
            for b in lower:
                den *= b + n
            th = th * num / den
            sh, e = _dd.two_sum(sh, th)
            comp += e
            shrinking = abs(num) < abs(den)
            partial = sh + comp
        used += 1
        n += 1
        peak = max(peak, abs(partial))
        recent.append(abs(th))
        if len(recent) > need:
            recent.pop(0)
        if shrinking and len(recent) == need:
            bound = tol * max(1.0, abs(partial))
            if max(recent) <= bound:
                converged = True
                break
    value = sh + sl if cfg.extended else sh + comp
    # a terminated polynomial is exact up to rounding
    est = 0.0 if terminated or not recent else max(recent)
    return SeriesResult(
        value=value,
        terms_used=used,
        est_abs_error=est,
        converged=converged,
        regularized=False,
        max_abs_partial=peak,
    )


def _shift_for_poles(lower: Sequence[float]) -> int:
    n0 = 0
    for b in lower:
        if is_nonpositive_integer(b):
            n0 = max(n0, int(1 - b))
    return n0


def _leading_term(upper, lower, z, n0) -> SignedLog:
    """Regularized series term at index n0: prod (a)_n0 z^n0 / (n0! prod Gamma(b + n0))."""
    out = power_signed(z, n0) * rgamma_signed(n0 + 1.0)
    for a in upper:
        out = out * pochhammer_signed(a, n0)
    for b in lower:
        out = out * rgamma_signed(b + n0)
    return out


@functools.lru_cache(maxsize=200_000)
def _parts_cached(upper, lower, z, cfg: SeriesConfig):
    n0 = _shift_for_poles(lower)
    lead = _leading_term(upper, lower, z, n0)
    if lead.sign == 0:
        # z == 0 with a pole shift, or an upper parameter that kills the tail
        return lead, SeriesResult(0.0, 1, 0.0, True, True, 0.0)
    series = _sum_normalized(upper, lower, z, n0, cfg)
    return lead, series


def _check_convergence(series: SeriesResult, params: HypParams, cfg: SeriesConfig):
    if not series.converged:
        raise NoConvergence(
            f"series {params.p}F{params.q} at z={params.argument!r} did not converge "
            f"within {cfg.max_terms} terms",
            series,
        )


def regularized_parts(params: HypParams, cfg: SeriesConfig | None = None) -> tuple[SignedLog, SeriesResult]:
    """Split the regularized series into ``scale * series.value``.

    ``scale`` is the first nonvanishing term (in log space) and ``series`` is
    the sum normalized so its first term is 1.  Callers assembling large
    gamma prefactors multiply into ``scale`` before exponentiating.
    """
    cfg = cfg or DEFAULT_CONFIG
    lead, series = _parts_cached(params.upper, params.lower, params.argument, cfg)
    _check_convergence(series, params, cfg)
    return lead, series


def pfq_regularized(params: HypParams, cfg: SeriesConfig | None = None) -> SeriesResult:
    """pFq divided by the product of Gamma(b_j); finite at every lower parameter.

    For a lower parameter equal to -m the first m+1 terms carry 1/Gamma at a
    pole and vanish, so summation starts past them.
    """
    lead, series = regularized_parts(params, cfg)
    return series.scaled(float(lead), regularized=True)


def pfq(params: HypParams, cfg: SeriesConfig | None = None) -> SeriesResult:
    """Sum the series of ``params`` directly.

    Raises DomainError for a nonpositive-integer lower parameter; use
    :func:`pfq_regularized` there.
    """
    poles = params.pole_lowers()
    if poles:
        raise DomainError(
            f"lower parameter {poles[0]!r} is a nonpositive integer; use pfq_regularized"
        )
    cfg = cfg or DEFAULT_CONFIG
    if params.argument == 0:
        return SeriesResult(1.0, 1, 0.0, True, False, 1.0)
    _, series = _parts_cached(params.upper, params.lower, params.argument, cfg)
    _check_convergence(series, params, cfg)
    return series


def pfq_array(
    upper: Sequence[float],
    lower: Sequence[float],
    z: np.ndarray,
    cfg: SeriesConfig | None = None,
    regularized: bool = False,
) -> np.ndarray:
    """Vectorized series over an array of arguments (same parameters).

    Used by the quadrature oracle; stops once every element meets the
    stopping rule.
    """
    cfg = cfg or DEFAULT_CONFIG
    upper = tuple(float(a) for a in upper)
    lower = tuple(float(b) for b in lower)
    if len(upper) > len(lower):
        raise DomainError("only p <= q series are supported")
    z = np.asarray(z, dtype=float)
    if not regularized and any(is_nonpositive_integer(b) for b in lower):
        raise DomainError("nonpositive-integer lower parameter; use regularized=True")
    n0 = _shift_for_poles(lower) if regularized else 0

    const = rgamma_signed(n0 + 1.0)
    for a in upper:
        const = const * pochhammer_signed(a, n0)
    if regularized:
        for b in lower:
            const = const * rgamma_signed(b + n0)
    if const.sign == 0:
        return np.zeros_like(z)
    scale = float(const) * z**n0

    sh = np.ones_like(z)
    sl = np.zeros_like(z)
    th = np.ones_like(z)
    tl = np.zeros_like(z)
    small = np.zeros(z.shape, dtype=int)
    n = n0
    for _ in range(cfg.max_terms - 1):
        nh, nl = z, np.zeros_like(z)
        for a in upper:
            ah, al = _dd.two_sum(a, float(n))
            nh, nl = _dd.mul(nh, nl, ah, al)
        dh, dl = float(n + 1), 0.0
        for b in lower:
            bh, bl = _dd.two_sum(b, float(n))
            dh, dl = _dd.mul(dh, dl, bh, bl)
        if not np.any(nh):
            break
        th, tl = _dd.mul(th, tl, nh, nl)
        th, tl = _dd.div(th, tl, dh, dl)
        sh, sl = _dd.add(sh, sl, th, tl)
        n += 1
        ok = (np.abs(th) <= cfg.tol * np.maximum(1.0, np.abs(sh))) & (np.abs(nh) < abs(dh))
        small = np.where(ok, small + 1, 0)
        if np.all(small >= cfg.n_consec):
            break
    else:
        raise NoConvergence(f"vectorized {len(upper)}F{len(lower)} did not converge")
    return scale * (sh + sl)


# ---------------------------------------------------------------------------
# Bessel functions


def _integer_order(order: float) -> int | None:
    return int(order) if float(order).is_integer() else None


def bessel_j(order: float, z: float, cfg: SeriesConfig | None = None) -> float:
    """J_order(z) from the ascending 0F1 series.

    Validated for |z| <= 30; there is no asymptotic branch.
    """
    n = _integer_order(order)
    if z < 0:
        if n is None:
            raise DomainError("J of non-integer order at negative argument is complex")
        return (-1) ** (n % 2) * bessel_j(order, -z, cfg)
    if n is not None and n < 0:
        return (-1) ** (n % 2) * bessel_j(-order, z, cfg)
    if z == 0:
        if order == 0:
            return 1.0
        if order > 0:
            return 0.0
        raise DomainError("J of negative non-integer order is singular at 0")
    scale = power_signed(z / 2.0, order) * rgamma_signed(order + 1.0)
    series = pfq(HypParams((), (order + 1.0,), -z * z / 4.0), cfg)
    return float(scale) * series.value


def bessel_j_scaled(order: float, z: float, cfg: SeriesConfig | None = None) -> float:
    """J_order(z) * z**(-order), the entire even function 2^-order 0F1~(;order+1;-z^2/4)."""
    lead, series = regularized_parts(HypParams((), (order + 1.0,), -z * z / 4.0), cfg)
    return float(lead * power_signed(2.0, -order)) * series.value


def bessel_j_scaled_array(order: float, z: np.ndarray, cfg: SeriesConfig | None = None) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    vals = pfq_array((), (order + 1.0,), -z * z / 4.0, cfg, regularized=True)
    return 2.0 ** (-order) * vals


def product_jj_2f3(mu: float, nu: float, z: float, cfg: SeriesConfig | None = None) -> float:
    """J_mu(z) J_nu(z) collapsed into a single 2F3 of argument -z^2."""
    s = mu + nu
    for b in (mu + 1.0, nu + 1.0, s + 1.0):
        if is_nonpositive_integer(b):
            raise DomainError(f"lower parameter {b!r} of the Bessel-product 2F3 is a pole")
    if s <= -1:
        raise DomainError("mu + nu must exceed -1")
    if z < 0:
        raise DomainError("z must be nonnegative")
    pre = (
        power_signed(2.0, -s)
        * power_signed(z, s)
        * rgamma_signed(mu + 1.0)
        * rgamma_signed(nu + 1.0)
    )
    if pre.sign == 0:
        return 0.0
    series = pfq(HypParams((0.5 * (s + 1.0), 0.5 * s + 1.0), (mu + 1.0, nu + 1.0, s + 1.0), -z * z), cfg)
    return float(pre) * series.value
