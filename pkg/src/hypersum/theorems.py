"""Both sides of the 3F4 summation theorems, their corollaries and the
negative half-integer lambda limits.

Every right-hand side is a truncated sum over L.  Gamma and Pochhammer
clusters are assembled as :class:`SignedLog` values and exponentiated
once, and every 1F2 / 2F3 factor goes through its regularized form, so
lower parameters that land on Gamma poles never produce 0 * inf.

Normalization: a case is compared in the normalization of its left-hand
hypergeometric function, which tends to 1 as k -> 0.  When one of the
lower parameters mu+1, nu+1 or lambda+1 is a Gamma pole the bare value is
undefined, and both sides are divided by the Gamma functions of those
parameters instead ("regularized" mode).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable, NamedTuple

from hypersum.hyper_core import (
    ONE,
    ZERO,
    DomainError,
    HypParams,
    SeriesConfig,
    SeriesResult,
    SignedLog,
    bessel_j_scaled,
    gamma_signed,
    is_nonpositive_integer,
    pfq,
    pochhammer_signed,
    power_signed,
    product_jj_2f3,
    regularized_parts,
    rgamma_signed,
)

SQRT_PI = math.sqrt(math.pi)

THEOREM_IDS = ("T1", "T2", "T3")
COROLLARY_IDS = ("C2a", "C2b", "C3a", "C3b", "C3ci", "C3cii", "C3di", "C3dii")
LIMIT_IDS = ("LAM_NEG_3_2",)
CASE_IDS = THEOREM_IDS + COROLLARY_IDS + LIMIT_IDS

PARENT = {
    "C2a": "T2",
    "C2b": "T2",
    "C3a": "T3",
    "C3b": "T3",
    "C3ci": "T3",
    "C3cii": "T3",
    "C3di": "T3",
    "C3dii": "T3",
}

# corollaries whose printed form is already regularized
_REGULARIZED_COROLLARIES = ("C2a", "C3a")

_FIXED_NU = {
    "C2a": ("-mu", "C2a fixes ν=−μ"),
    "C3a": ("-mu", "C3a fixes ν=−μ"),
    "C2b": (-0.5, "C2b fixes ν=−1/2"),
    "C3b": (-0.5, "C3b fixes ν=−1/2"),
    "C3cii": (-0.5, "C3cii fixes ν=−1/2"),
    "C3dii": (-0.5, "C3dii fixes ν=−1/2"),
}

_FIXED_LAMBDA = {
    "C3ci": (lambda mu, nu: 0.5 * (mu + nu), "C3ci fixes λ=(μ+ν)/2"),
    "C3cii": (lambda mu, nu: 0.5 * (mu + nu), "C3cii fixes λ=(μ+ν)/2 with ν=−1/2"),
    "C3di": (lambda mu, nu: 0.5 * (mu + nu - 1.0), "C3di fixes λ=(μ+ν−1)/2"),
    "C3dii": (lambda mu, nu: 0.5 * (mu + nu - 1.0), "C3dii fixes λ=(μ+ν−1)/2 with ν=−1/2"),
    "LAM_NEG_3_2": (lambda mu, nu: -1.5, "LAM_NEG_3_2 fixes λ=−3/2"),
}


def _is_int(x: float) -> bool:
    return float(x).is_integer()


@dataclass(frozen=True)
class TheoremCase:
    """One theorem or corollary instance.

    ``nu`` and ``lam`` may be left as None where the case fixes them; the
    resolved values are available as :attr:`mu_nu_lam`.  Supplying a value
    that contradicts a fixed one raises DomainError.
    """

    id: str
    mu: float
    nu: float | None = None
    lam: float | None = None
    k: float = 1.0
    L_max: int = 40

    def __post_init__(self):
        if self.id not in CASE_IDS:
            raise DomainError(f"unknown case id {self.id!r}; expected one of {', '.join(CASE_IDS)}")
        if self.L_max < 0:
            raise DomainError("L_max must be nonnegative")
        if not math.isfinite(self.k) or self.k < 0:
            raise DomainError("k must be finite and nonnegative")
        self.mu_nu_lam  # runs the remaining checks

    @property
    def mu_nu_lam(self) -> tuple[float, float, float | None]:
        mu = float(self.mu)
        cid = self.id
        if cid in _FIXED_NU:
            fixed, msg = _FIXED_NU[cid]
            want = -mu if fixed == "-mu" else fixed
            if self.nu is not None and float(self.nu) != want:
                raise DomainError(msg)
            nu = want
        else:
            if self.nu is None:
                raise DomainError(f"{cid} needs ν")
            nu = float(self.nu)

        if cid == "T1":
            if not (_is_int(mu) and _is_int(nu) and int(mu + nu) % 2 == 0):
                raise DomainError("T1 requires μ, ν integers with μ+ν even")
            if mu + nu < 0:
                raise DomainError("T1 requires μ+ν ≥ 0")

        if cid in ("T1", "T2", "C2a", "C2b"):
            if self.lam is not None:
                raise DomainError(f"{cid} takes no λ")
            return mu, nu, None

        if cid in _FIXED_LAMBDA:
            rule, msg = _FIXED_LAMBDA[cid]
            want = rule(mu, nu)
            if self.lam is not None and float(self.lam) != want:
                raise DomainError(msg)
            lam = want
        else:
            if self.lam is None:
                raise DomainError(f"{cid} needs λ")
            lam = float(self.lam)
        if lam == 0:
            raise DomainError("λ must be nonzero")
        if cid == "LAM_NEG_3_2" and mu + nu <= -1:
            raise DomainError("LAM_NEG_3_2 requires μ+ν > −1")
        return mu, nu, lam

    @property
    def parent(self) -> str | None:
        return PARENT.get(self.id)


@dataclass(frozen=True)
class ConvergenceReport:
    case: TheoremCase
    lhs: float
    partials: tuple[float, ...]
    residuals: tuple[float, ...]
    oracle: float | None
    digits_lost: float
    regularized: bool = False
    oracle_error: float | None = None

    @property
    def rhs(self) -> float:
        return self.partials[-1]

    @property
    def residual(self) -> float:
        return self.residuals[-1]

    @property
    def relative_residual(self) -> float:
        return self.residual / abs(self.lhs) if self.lhs else self.residual

    @property
    def oracle_delta(self) -> float | None:
        if self.oracle is None:
            return None
        return abs(self.lhs - self.oracle)


# ---------------------------------------------------------------------------
# shared pieces


@dataclass
class _Peak:
    """Largest digits_lost seen over the series of one evaluation."""

    digits: float = 0.0

    def note(self, series: SeriesResult) -> SeriesResult:
        d = series.digits_lost
        if math.isfinite(d):
            self.digits = max(self.digits, d)
        return series


def _parts(upper, lower, z, cfg, peak: _Peak) -> tuple[SignedLog, float]:
    scale, series = regularized_parts(HypParams(upper, lower, z), cfg)
    peak.note(series)
    return scale, series.value


def _normalized_pfq(upper, kept, dropped, z, cfg, peak: _Peak) -> float:
    """pFq(upper; kept + dropped; z) divided by the Gamma of each dropped lower parameter."""
    if not dropped:
        return peak.note(pfq(HypParams(upper, kept, z), cfg)).value
    scale, value = _parts(upper, tuple(kept) + tuple(dropped), z, cfg, peak)
    for b in kept:
        scale = scale * gamma_signed(b)
    return float(scale) * value


def _sign(n: int) -> SignedLog:
    return SignedLog(0.0, -1 if n % 2 else 1)


def _delta0(L: int) -> SignedLog:
    return SignedLog.from_float(1.0 if L == 0 else 2.0)


def _assemble(pieces, values) -> float:
    try:
        total = ONE
        for piece in pieces:
            total = total * piece
    except ZeroDivisionError as exc:
        raise DomainError("a Pochhammer or Gamma factor in a denominator vanishes") from exc
    out = float(total)
    for v in values:
        out *= v
    return out


def _needs_regularized(*lowers: float | None) -> bool:
    return any(b is not None and is_nonpositive_integer(b) for b in lowers)


# ---------------------------------------------------------------------------
# pole-order arithmetic for lambda limits


@dataclass(frozen=True)
class _Near:
    """Leading behaviour coef * delta**order of a factor as lambda -> lambda0."""

    coef: SignedLog
    order: int = 0

    def __mul__(self, other):
        if isinstance(other, SignedLog):
            return _Near(self.coef * other, self.order)
        return _Near(self.coef * other.coef, self.order + other.order)

    def __truediv__(self, other):
        if isinstance(other, SignedLog):
            return _Near(self.coef / other, self.order)
        return _Near(self.coef / other.coef, self.order - other.order)

    def limit(self) -> SignedLog:
        if self.order > 0:
            return ZERO
        if self.order < 0:
            raise DomainError("the λ-limit of this term diverges")
        return self.coef


def _near_gamma(c: float, slope: float) -> _Near:
    """Gamma(c + slope*delta); a simple pole when c is a nonpositive integer."""
    if is_nonpositive_integer(c):
        n = int(-c)
        residue = _sign(n) * rgamma_signed(n + 1.0) / SignedLog.from_float(slope)
        return _Near(residue, -1)
    return _Near(gamma_signed(c))


def _near_linear(c: float, slope: float) -> _Near:
    if c == 0:
        return _Near(SignedLog.from_float(slope), 1)
    return _Near(SignedLog.from_float(c))


def _near_poch(c: float, slope: float, n: int) -> _Near:
    out = _Near(ONE)
    for i in range(n):
        out = out * _near_linear(c + i, slope)
    return out


# ---------------------------------------------------------------------------
# Theorem 1 (Legendre)


def t1_lhs(mu: int, nu: int, k: float, regularized: bool = False, cfg: SeriesConfig | None = None,
           peak: _Peak | None = None) -> float:
    """The 3F4 of the Legendre theorem; divided by Gamma(mu+1)Gamma(nu+1) when regularized."""
    TheoremCase("T1", mu, nu, k=k)
    peak = peak or _Peak()
    s = mu + nu
    upper = (0.5 * s + 0.5, 0.5 * s + 0.5, 0.5 * s + 1.0)
    kept = (0.5 * s + 1.5, s + 1.0)
    pole_part = (mu + 1.0, nu + 1.0)
    if regularized:
        return _normalized_pfq(upper, kept, pole_part, -k * k, cfg, peak)
    return _normalized_pfq(upper, kept + pole_part, (), -k * k, cfg, peak)


def t1_term(L: int, mu: int, nu: int, k: float, regularized: bool = False,
            cfg: SeriesConfig | None = None, peak: _Peak | None = None) -> float:
    """Term L of the Legendre sum, in the normalization of :func:`t1_lhs`.

    Terms of the wrong parity are returned as exact zeros without touching
    any series.
    """
    if (L + mu) % 2 or (L + nu) % 2:
        return 0.0
    s = mu + nu
    if k == 0 and s > 0:
        raise DomainError("T1 is not evaluated at k=0 when μ+ν > 0 (k^(−μ−ν) prefactor)")
    peak = peak or _Peak()
    pieces = [
        _sign(L - s // 2),
        power_signed(2.0, s - 1 - 8 * L - 5 + 2),  # 2^(s-1) * 2^(-8L-5) * 4 from the parity factors
        SignedLog.from_float((s + 1.0) * (2 * L + 1.0) * math.pi**2),
        power_signed(k, 2 * L - s),
        gamma_signed(2 * L + 2.0) ** 2,
        rgamma_signed(L + 1.5) ** 2,
    ]
    if not regularized:
        pieces += [gamma_signed(mu + 1.0), gamma_signed(nu + 1.0)]
    values = []
    for order in (mu, nu):
        scale, value = _parts(
            (0.5 * L + 0.5, 0.5 * L + 1.0),
            (L + 1.5, 0.5 * (L - order) + 1.0, 0.5 * (L + order) + 1.0),
            -k * k / 4.0,
            cfg,
            peak,
        )
        pieces.append(scale)
        values.append(value)
    return _assemble(pieces, values)


# ---------------------------------------------------------------------------
# Theorem 2 (Chebyshev)


def t2_lhs(mu: float, nu: float, k: float, regularized: bool = False, cfg: SeriesConfig | None = None,
           peak: _Peak | None = None) -> float:
    """3F4(1/2, (mu+nu+1)/2, (mu+nu)/2+1; 1, mu+1, nu+1, mu+nu+1; -k^2)."""
    peak = peak or _Peak()
    s = mu + nu
    upper = (0.5, 0.5 * s + 0.5, 0.5 * s + 1.0)
    kept = (1.0, s + 1.0)
    pole_part = (mu + 1.0, nu + 1.0)
    if regularized:
        return _normalized_pfq(upper, kept, pole_part, -k * k, cfg, peak)
    if _needs_regularized(*pole_part, s + 1.0):
        raise DomainError("a lower parameter of the Chebyshev 3F4 is a Gamma pole; use regularized=True")
    return _normalized_pfq(upper, kept + pole_part, (), -k * k, cfg, peak)


def t2_term(L: int, mu: float, nu: float, k: float, regularized: bool = False,
            cfg: SeriesConfig | None = None, peak: _Peak | None = None) -> float:
    peak = peak or _Peak()
    pieces = [
        power_signed(k, 4 * L),
        power_signed(2.0, -8 * L),
        _delta0(L),
        rgamma_signed(L + 1.0) ** 2,
        gamma_signed(2 * L + 1.0) ** 2,
    ]
    if not regularized:
        pieces += [gamma_signed(mu + 1.0), gamma_signed(nu + 1.0)]
    values = []
    for order in (mu, nu):
        scale, value = _parts((L + 0.5,), (2 * L + 1.0, L + order + 1.0), -k * k / 4.0, cfg, peak)
        pieces.append(scale)
        values.append(value)
    # 2^(mu+nu) * 2^(-mu-nu) cancels
    return _assemble(pieces, values)


# ---------------------------------------------------------------------------
# Theorem 3 (Gegenbauer)


def t3_lhs(mu: float, nu: float, lam: float, k: float, regularized: bool = False,
           cfg: SeriesConfig | None = None, peak: _Peak | None = None) -> float:
    """3F4(1/2, (mu+nu+1)/2, (mu+nu)/2+1; lam+1, mu+1, nu+1, mu+nu+1; -k^2)."""
    if lam == 0:
        raise DomainError("λ must be nonzero")
    peak = peak or _Peak()
    s = mu + nu
    upper = (0.5, 0.5 * s + 0.5, 0.5 * s + 1.0)
    kept = (s + 1.0,)
    pole_part = (lam + 1.0, mu + 1.0, nu + 1.0)
    if regularized:
        return _normalized_pfq(upper, kept, pole_part, -k * k, cfg, peak)
    if _needs_regularized(*pole_part, s + 1.0):
        raise DomainError("a lower parameter of the Gegenbauer 3F4 is a Gamma pole; use regularized=True")
    return _normalized_pfq(upper, kept + pole_part, (), -k * k, cfg, peak)


def _t3_term_near(L: int, mu: float, nu: float, lam: float, k: float, regularized: bool,
                  cfg, peak: _Peak) -> _Near:
    """Term L of the Gegenbauer sum as lambda -> lam, with pole orders tracked.

    Away from the special lambdas every order is 0 and the coefficient is
    the ordinary term value.
    """
    out = _Near(ONE)
    if not regularized:
        out = out * _near_gamma(lam + 1.0, 1.0) * gamma_signed(mu + 1.0) * gamma_signed(nu + 1.0)
    out = out / SignedLog.from_float(SQRT_PI) / _near_gamma(lam + 0.5, 1.0)
    out = out / _near_gamma(lam, 1.0) / _near_gamma(lam, 1.0)
    # 2^(mu+nu) * 2^(4L - 2 lam - mu - nu + 1)
    out = out * power_signed(2.0, 4 * L - 2.0 * lam + 1.0) * power_signed(k, 4 * L)
    poch_half = _near_poch(lam + 0.5, 1.0, 2 * L)
    out = out * poch_half * poch_half * _near_gamma(2 * L + 2.0 * lam, 2.0)
    out = out / SignedLog(math.lgamma(2 * L + 1.0), 1) / _near_linear(2 * L + lam, 1.0)
    poch_two = _near_poch(2.0 * lam, 2.0, 2 * L)
    poch_shift = _near_poch(2 * L + 2.0 * lam, 2.0, 2 * L)
    out = out / poch_two / poch_two / poch_shift / poch_shift
    # 1F2 / (L+1/2)_(order+1/2) = Gamma(L+1/2) Gamma(2L+lam+1) * regularized 1F2
    for order in (mu, nu):
        scale, value = _parts((L + 0.5,), (2 * L + lam + 1.0, L + order + 1.0), -k * k / 4.0, cfg, peak)
        out = out * gamma_signed(L + 0.5) * _near_gamma(2 * L + lam + 1.0, 1.0) * scale
        out = out * SignedLog.from_float(value)
    return out


def t3_term(L: int, mu: float, nu: float, lam: float, k: float, regularized: bool = False,
            cfg: SeriesConfig | None = None, peak: _Peak | None = None) -> float:
    if lam == 0:
        raise DomainError("λ must be nonzero")
    near = _t3_term_near(L, mu, nu, lam, k, regularized, cfg, peak or _Peak())
    return float(near.limit())


def t3_term_order(L: int, mu: float, nu: float, lam: float, k: float, regularized: bool = False,
                  cfg: SeriesConfig | None = None) -> int:
    """Net power of delta in term L as lambda -> lam; > 0 means the term vanishes in the limit."""
    return _t3_term_near(L, mu, nu, lam, k, regularized, cfg, _Peak()).order


# ---------------------------------------------------------------------------
# corollaries


def _f12_reg(L, b1, b2, k, cfg, peak):
    return _parts((L + 0.5,), (b1, b2), -k * k / 4.0, cfg, peak)


def _c2a(mu, nu, lam, k, cfg, peak):
    lhs = _normalized_pfq((0.5, 0.5), (), (1.0, 1.0 - mu, mu + 1.0), -k * k, cfg, peak)

    def term(L):
        pieces = [
            power_signed(k, 4 * L),
            gamma_signed(2 * L + 1.0) ** 2,
            power_signed(2.0, -8 * L - mu - nu),
            _delta0(L),
            rgamma_signed(L + 1.0) ** 2,
        ]
        values = []
        for order in (mu, nu):
            scale, value = _f12_reg(L, 2 * L + 1.0, L + order + 1.0, k, cfg, peak)
            pieces.append(scale)
            values.append(value)
        return _assemble(pieces, values)

    return lhs, term


def _c2b(mu, nu, lam, k, cfg, peak):
    lhs = _normalized_pfq((0.5 * mu + 0.25, 0.5 * mu + 0.75), (1.0, mu + 0.5, mu + 1.0), (), -k * k, cfg, peak)

    def term(L):
        scale, value = _f12_reg(L, 2 * L + 1.0, L + mu + 1.0, k, cfg, peak)
        pieces = [
            SignedLog.from_float(SQRT_PI),
            gamma_signed(mu + 1.0),
            power_signed(2.0, -6 * L),
            power_signed(k, 4 * L),  # k^(2L) J_2L(k) = k^(4L) * J_2L(k) k^(-2L)
            gamma_signed(2 * L + 1.0) ** 2,
            _delta0(L),
            rgamma_signed(L + 1.0) ** 2,
            rgamma_signed(L + 0.5),
            scale,
        ]
        return _assemble(pieces, [bessel_j_scaled(2 * L, k, cfg), value])

    return lhs, term


def _c3a(mu, nu, lam, k, cfg, peak):
    lhs = _normalized_pfq((0.5, 0.5), (), (lam + 1.0, 1.0 - mu, mu + 1.0), -k * k, cfg, peak)

    def term(L):
        pieces = [
            power_signed(k, 4 * L),
            power_signed(2.0, 2 * L + 2.0 * lam + 1.0),
            SignedLog.from_float(2 * L + lam),
            gamma_signed(L + 0.5),
            gamma_signed(lam + 0.5),
            pochhammer_signed(lam + 0.5, 2 * L) ** 2,
            gamma_signed(2 * L + lam + 1.0) ** 2,
            gamma_signed(2 * L + 2.0 * lam),
            SignedLog.from_float(1.0 / math.pi),
            rgamma_signed(L + 1.0),
            rgamma_signed(4 * L + 2.0 * lam + 1.0) ** 2,
        ]
        values = []
        for lower in (L - mu + 1.0, L + mu + 1.0):
            scale, value = _f12_reg(L, 2 * L + lam + 1.0, lower, k, cfg, peak)
            pieces.append(scale)
            values.append(value)
        return _assemble(pieces, values)

    return lhs, term


def _c3b(mu, nu, lam, k, cfg, peak):
    lhs = _normalized_pfq((0.5 * mu + 0.25, 0.5 * mu + 0.75), (lam + 1.0, mu + 0.5, mu + 1.0), (), -k * k, cfg, peak)
    outer = [
        power_signed(2.0, mu - 0.5),
        gamma_signed(lam + 1.0),
        gamma_signed(mu + 1.0),
        rgamma_signed(lam + 0.5),
        rgamma_signed(lam) ** 2,
    ]

    def term(L):
        scale, value = _f12_reg(L, 2 * L + lam + 1.0, L + mu + 1.0, k, cfg, peak)
        pieces = outer + [
            power_signed(k, 4 * L),  # k^(2L-lam) J_(2L+lam)(k) = k^(4L) * scaled Bessel
            pochhammer_signed(lam + 0.5, 2 * L) ** 2,
            power_signed(2.0, 6 * L - lam - mu + 1.5),
            gamma_signed(2 * L + lam + 1.0),
            gamma_signed(2 * L + 2.0 * lam),
            rgamma_signed(2 * L + 1.0),
            1 / SignedLog.from_float(2 * L + lam),
            1 / pochhammer_signed(2.0 * lam, 2 * L) ** 2,
            1 / pochhammer_signed(2 * L + 2.0 * lam, 2 * L) ** 2,
            # 1F2 / (L+1/2)_(mu+1/2) = Gamma(L+1/2) Gamma(2L+lam+1) * regularized 1F2
            gamma_signed(L + 0.5),
            gamma_signed(2 * L + lam + 1.0),
            scale,
        ]
        return _assemble(pieces, [bessel_j_scaled(2 * L + lam, k, cfg), value])

    return lhs, term


def _c3ci(mu, nu, lam, k, cfg, peak):
    s = mu + nu
    h = 0.5 * s
    lhs = _normalized_pfq((0.5, h + 0.5), (mu + 1.0, nu + 1.0, s + 1.0), (), -k * k, cfg, peak)
    outer = [
        power_signed(2.0, s),
        gamma_signed(mu + 1.0),
        gamma_signed(nu + 1.0),
        gamma_signed(h + 1.0),
        SignedLog.from_float(1.0 / SQRT_PI),
        rgamma_signed(h) ** 2,
        rgamma_signed(h + 0.5),
    ]

    def term(L):
        pieces = outer + [
            power_signed(k, 4 * L),
            power_signed(2.0, 4 * L - 2 * h - s + 1.0),
            pochhammer_signed(h + 0.5, 2 * L) ** 2,
            gamma_signed(2 * L + s),
            rgamma_signed(2 * L + 1.0),
            1 / SignedLog.from_float(2 * L + h),
            1 / pochhammer_signed(s, 2 * L) ** 2,
            1 / pochhammer_signed(2 * L + s, 2 * L) ** 2,
        ]
        values = []
        for order in (mu, nu):
            scale, value = _f12_reg(L, L + order + 1.0, 2 * L + h + 1.0, k, cfg, peak)
            pieces += [gamma_signed(L + 0.5), gamma_signed(2 * L + h + 1.0), scale]
            values.append(value)
        return _assemble(pieces, values)

    return lhs, term


def _c3cii(mu, nu, lam, k, cfg, peak):
    lhs = _normalized_pfq((0.5 * mu + 0.25,), (mu + 0.5, mu + 1.0), (), -k * k, cfg, peak)

    def term(L):
        scale, value = _f12_reg(L, 2 * L + 0.5 * mu + 0.75, L + mu + 1.0, k, cfg, peak)
        pieces = [
            power_signed(2.0, 6 * L - 0.5 * mu + 1.25),
            gamma_signed(0.5 * mu + 0.75),
            gamma_signed(mu + 1.0),
            power_signed(k, 4 * L),  # k^(2L-mu/2+1/4) J_(2L+mu/2-1/4)(k) = k^(4L) * scaled Bessel
            pochhammer_signed(0.5 * mu + 0.25, 2 * L) ** 2,
            gamma_signed(2 * L + 0.5 * mu + 0.75),
            gamma_signed(2 * L + mu - 0.5),
            rgamma_signed(2 * L + 1.0),
            1 / SignedLog.from_float(2 * L + 0.5 * mu - 0.25),
            rgamma_signed(0.5 * mu - 0.25) ** 2,
            rgamma_signed(0.5 * mu + 0.25),
            1 / pochhammer_signed(mu - 0.5, 2 * L) ** 2,
            1 / pochhammer_signed(2 * L + mu - 0.5, 2 * L) ** 2,
            gamma_signed(L + 0.5),
            gamma_signed(2 * L + 0.5 * mu + 0.75),
            scale,
        ]
        return _assemble(pieces, [bessel_j_scaled(2 * L + 0.5 * mu - 0.25, k, cfg), value])

    return lhs, term


def _c3di(mu, nu, lam, k, cfg, peak):
    s = mu + nu
    h = 0.5 * s
    lhs = _normalized_pfq((0.5, h + 1.0), (mu + 1.0, nu + 1.0, s + 1.0), (), -k * k, cfg, peak)
    outer = [
        power_signed(2.0, 2 * s - 3.0),
        SignedLog.from_float(s - 1.0),
        gamma_signed(mu + 1.0),
        gamma_signed(nu + 1.0),
        SignedLog.from_float(1.0 / math.pi),
        rgamma_signed(s - 1.0),
    ]

    def term(L):
        pieces = outer + [
            power_signed(k, 4 * L),
            power_signed(2.0, 4 * L - 2 * s + 2.0),
            pochhammer_signed(h, 2 * L) ** 2,
            gamma_signed(2 * L + s - 1.0),
            rgamma_signed(2 * L + 1.0),
            1 / SignedLog.from_float(2 * L + h - 0.5),
            1 / pochhammer_signed(s - 1.0, 2 * L) ** 2,
            1 / pochhammer_signed(2 * L + s - 1.0, 2 * L) ** 2,
        ]
        values = []
        for order in (mu, nu):
            scale, value = _f12_reg(L, L + order + 1.0, 2 * L + h + 0.5, k, cfg, peak)
            pieces += [gamma_signed(L + 0.5), gamma_signed(2 * L + h + 0.5), scale]
            values.append(value)
        return _assemble(pieces, values)

    return lhs, term


def _c3dii(mu, nu, lam, k, cfg, peak):
    lhs = _normalized_pfq((0.5 * mu + 0.75,), (mu + 0.5, mu + 1.0), (), -k * k, cfg, peak)
    outer = [
        power_signed(2.0, mu - 0.5),
        gamma_signed(0.5 * mu + 0.25),
        gamma_signed(mu + 1.0),
        rgamma_signed(0.5 * mu - 0.25),
        rgamma_signed(0.5 * mu - 0.75) ** 2,
    ]

    def term(L):
        scale, value = _f12_reg(L, 2 * L + 0.5 * mu + 0.25, L + mu + 1.0, k, cfg, peak)
        pieces = outer + [
            power_signed(2.0, 6 * L - 1.5 * mu + 2.25),
            power_signed(k, 4 * L),  # k^(2L-mu/2+3/4) J_(2L+mu/2-3/4)(k) = k^(4L) * scaled Bessel
            pochhammer_signed(0.5 * mu - 0.25, 2 * L) ** 2,
            gamma_signed(2 * L + 0.5 * mu + 0.25),
            gamma_signed(2 * L + mu - 1.5),
            rgamma_signed(2 * L + 1.0),
            1 / SignedLog.from_float(2 * L + 0.5 * mu - 0.75),
            1 / pochhammer_signed(mu - 1.5, 2 * L) ** 2,
            1 / pochhammer_signed(2 * L + mu - 1.5, 2 * L) ** 2,
            gamma_signed(L + 0.5),
            gamma_signed(2 * L + 0.5 * mu + 0.25),
            scale,
        ]
        return _assemble(pieces, [bessel_j_scaled(2 * L + 0.5 * mu - 0.75, k, cfg), value])

    return lhs, term


_COROLLARIES: dict[str, Callable] = {
    "C2a": _c2a,
    "C2b": _c2b,
    "C3a": _c3a,
    "C3b": _c3b,
    "C3ci": _c3ci,
    "C3cii": _c3cii,
    "C3di": _c3di,
    "C3dii": _c3dii,
}


def _checked(term: Callable[[int], float], L: int) -> float:
    try:
        return term(L)
    except ZeroDivisionError as exc:
        raise DomainError(f"term L={L}: a Pochhammer or Gamma factor in a denominator vanishes") from exc


def _partials(terms: list[float]) -> tuple[float, ...]:
    return tuple(math.fsum(terms[: i + 1]) for i in range(len(terms)))


def corollary_eval(case: TheoremCase, cfg: SeriesConfig | None = None) -> tuple[float, tuple[float, ...]]:
    """Printed left-hand side and right-hand partial sums of a corollary."""
    if case.id not in _COROLLARIES:
        raise DomainError(f"{case.id} is not a corollary")
    mu, nu, lam = case.mu_nu_lam
    lhs, term = _COROLLARIES[case.id](mu, nu, lam, case.k, cfg, _Peak())
    return lhs, _partials([_checked(term, L) for L in range(case.L_max + 1)])


# ---------------------------------------------------------------------------
# evaluation of any case


def _theorem_regularized(cid: str, mu: float, nu: float, lam: float | None) -> bool:
    if cid in _REGULARIZED_COROLLARIES:
        return True
    return _needs_regularized(mu + 1.0, nu + 1.0, None if lam is None else lam + 1.0)


class _Evaluator:
    """Lazily extendable left side and term list for one case."""

    def __init__(self, case: TheoremCase, cfg: SeriesConfig | None, regularized: bool | None = None):
        self.case = case
        self.cfg = cfg
        self.peak = _Peak()
        mu, nu, lam = case.mu_nu_lam
        k = case.k
        cid = case.id
        self.regularized = _theorem_regularized(cid, mu, nu, lam) if regularized is None else regularized
        reg = self.regularized
        if cid == "T1":
            mu_i, nu_i = int(mu), int(nu)
            if k == 0 and mu_i + nu_i > 0:
                raise DomainError("T1 is not evaluated at k=0 when μ+ν > 0 (k^(−μ−ν) prefactor)")
            self.lhs = t1_lhs(mu_i, nu_i, k, reg, cfg, self.peak)
            self._term = lambda L: t1_term(L, mu_i, nu_i, k, reg, cfg, self.peak)
        elif cid == "T2":
            self.lhs = t2_lhs(mu, nu, k, reg, cfg, self.peak)
            self._term = lambda L: t2_term(L, mu, nu, k, reg, cfg, self.peak)
        elif cid == "T3":
            self.lhs = t3_lhs(mu, nu, lam, k, reg, cfg, self.peak)
            self._term = lambda L: t3_term(L, mu, nu, lam, k, reg, cfg, self.peak)
        elif cid == "LAM_NEG_3_2":
            ident = lam_limit_identity("neg_three_half", mu, nu, k, cfg)
            self.lhs = ident.lhs
            self.peak.digits = ident.digits_lost
            self._term = lambda L: ident.rhs if L == 0 else 0.0
        else:
            self.lhs, self._term = _COROLLARIES[cid](mu, nu, lam, k, cfg, self.peak)
        self.terms: list[float] = []

    def extend_to(self, L_max: int) -> tuple[float, ...]:
        while len(self.terms) <= L_max:
            self.terms.append(_checked(self._term, len(self.terms)))
        return _partials(self.terms[: L_max + 1])


def evaluate(case: TheoremCase, cfg: SeriesConfig | None = None, regularized: bool | None = None):
    """(lhs, partials, digits_lost, regularized) for any case at its own L_max."""
    ev = _Evaluator(case, cfg, regularized)
    partials = ev.extend_to(case.L_max)
    return ev.lhs, partials, ev.peak.digits, ev.regularized


def parent_eval(case: TheoremCase, cfg: SeriesConfig | None = None) -> tuple[float, tuple[float, ...]]:
    """The parent theorem at a corollary's specializing parameters, in the corollary's normalization."""
    if case.parent is None:
        raise DomainError(f"{case.id} has no parent theorem")
    mu, nu, lam = case.mu_nu_lam
    parent = TheoremCase(case.parent, mu, nu, lam, case.k, case.L_max)
    regularized = case.id in _REGULARIZED_COROLLARIES
    lhs, partials, _, _ = evaluate(parent, cfg, regularized)
    return lhs, partials


# ---------------------------------------------------------------------------
# lambda limits


class LimitIdentity(NamedTuple):
    lhs: float
    rhs: float
    limit_sum: float
    surviving: tuple[int, ...]
    digits_lost: float


def lam_limit_identity(variant: str, mu: float, nu: float, z: float, cfg: SeriesConfig | None = None,
                       L_max: int = 20) -> LimitIdentity:
    """Evaluate the Gegenbauer theorem at lambda = -1/2 or -3/2 as a limit.

    ``lhs`` is the 3F4 with lower parameter lambda+1, ``rhs`` the printed
    closed form, and ``limit_sum`` the theorem's right-hand side with every
    term replaced by its lambda-limit.  ``surviving`` lists the L whose
    limit is nonzero; every other term is an exact structural zero.
    """
    lam = {"neg_half": -0.5, "neg_three_half": -1.5}.get(variant)
    if lam is None:
        raise DomainError("variant must be 'neg_half' or 'neg_three_half'")
    if mu + nu <= -1:
        raise DomainError("μ+ν must exceed −1")
    if z < 0:
        raise DomainError("z must be nonnegative")
    peak = _Peak()
    s = mu + nu
    lhs = t3_lhs(mu, nu, lam, z, False, cfg, peak)
    norm = power_signed(2.0, s) * gamma_signed(mu + 1.0) * gamma_signed(nu + 1.0)
    if variant == "neg_half":
        if z == 0:
            rhs = 1.0
        else:
            rhs = float(norm * power_signed(z, -s)) * product_jj_2f3(mu, nu, z, cfg)
    else:
        def factor(order):
            return bessel_j_scaled(order, z, cfg) + z * z * bessel_j_scaled(order + 1.0, z, cfg)
        rhs = float(norm) * factor(mu) * factor(nu)
    terms, surviving = [], []
    for L in range(L_max + 1):
        near = _t3_term_near(L, mu, nu, lam, z, False, cfg, peak)
        value = float(near.limit())
        if near.order == 0:
            surviving.append(L)
        terms.append(value)
    return LimitIdentity(lhs, rhs, math.fsum(terms), tuple(surviving), peak.digits)


# ---------------------------------------------------------------------------
# oracle and verify


def oracle_lhs(case: TheoremCase, tol: float = 1e-12, cfg: SeriesConfig | None = None,
               regularized: bool | None = None) -> tuple[float, float] | None:
    """Quadrature value of the case's left side, with its error estimate.

    Returns None when the defining integral does not exist (lambda <= -1/2).
    """
    from hypersum import oracle

    mu, nu, lam = case.mu_nu_lam
    k = case.k
    reg = _theorem_regularized(case.id, mu, nu, lam) if regularized is None else regularized
    s = mu + nu
    if case.id == "T1":
        if k == 0 and s > 0:
            raise DomainError("T1 is not evaluated at k=0 when μ+ν > 0 (k^(−μ−ν) prefactor)")
        res = oracle.integral_A(mu, nu, k, tol, cfg)
        factor = power_signed(2.0, s - 1.0) * SignedLog.from_float(s + 1.0) * power_signed(k, -s)
        if not reg:
            factor = factor * gamma_signed(mu + 1.0) * gamma_signed(nu + 1.0)
    else:
        lam_eff = 0.0 if lam is None else lam
        if lam_eff <= -0.5:
            return None
        if lam is None:
            res = oracle.integral_B(mu, nu, k, tol, cfg)
        else:
            res = oracle.integral_H(mu, nu, lam, k, tol, cfg)
        factor = power_signed(2.0, s) / SignedLog.from_float(SQRT_PI) * rgamma_signed(lam_eff + 0.5)
        if not reg:
            factor = factor * gamma_signed(lam_eff + 1.0) * gamma_signed(mu + 1.0) * gamma_signed(nu + 1.0)
    f = float(factor)
    return res.value * f, res.est_abs_error * abs(f)


L_EXTEND_STEP = 10
L_EXTEND_CAP = 80


def verify(case: TheoremCase, with_oracle: bool = False, tol: float = 1e-9,
           cfg: SeriesConfig | None = None, extend: bool = True, oracle_tol: float = 1e-12) -> ConvergenceReport:
    """Evaluate both sides of a case and report convergence.

    If the relative residual at ``case.L_max`` exceeds ``tol`` and the sum is
    still improving, L_max grows by 10 up to 80; the returned report's case
    carries the L_max actually used.
    """
    ev = _Evaluator(case, cfg)
    L_max = case.L_max
    partials = ev.extend_to(L_max)

    def rel(p):
        return abs(ev.lhs - p) / abs(ev.lhs) if ev.lhs else abs(ev.lhs - p)

    while extend and rel(partials[-1]) > tol and L_max < L_EXTEND_CAP:
        before = rel(partials[-1])
        L_max = min(L_max + L_EXTEND_STEP, L_EXTEND_CAP)
        partials = ev.extend_to(L_max)
        if rel(partials[-1]) >= before:
            break
    residuals = tuple(abs(ev.lhs - p) for p in partials)
    oracle_value = oracle_err = None
    if with_oracle:
        got = oracle_lhs(case, oracle_tol, cfg, ev.regularized)
        if got is not None:
            oracle_value, oracle_err = got
    return ConvergenceReport(
        case=replace(case, L_max=L_max),
        lhs=ev.lhs,
        partials=partials,
        residuals=residuals,
        oracle=oracle_value,
        digits_lost=ev.peak.digits,
        regularized=ev.regularized,
        oracle_error=oracle_err,
    )
