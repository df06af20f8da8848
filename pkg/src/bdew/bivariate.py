"""Bivariate law of (max{V1,V3}, max{V2,V3}) for independent EDW components.

All joint quantities reduce to products and differences of univariate CDF
powers sharing (alpha, p); the shared component V3 puts positive mass on the
diagonal x1 = x2.
"""

import math
from dataclasses import dataclass

from .edw import EdwParams, edw_sample_one, log1mexp, log_edw_cdf
from .series import DEFAULT_CONTROL, SeriesTruncationError

__all__ = [
    "BdewParams",
    "NumericalDegeneracyError",
    "PairPoint",
    "cond_cdf_given_eq",
    "cond_cdf_given_le",
    "cond_expectation",
    "cond_pmf",
    "joint_cdf",
    "joint_hrf",
    "joint_pgf",
    "joint_pmf",
    "joint_sf",
    "marginal_cdf",
    "marginal_pmf",
    "max_combine",
    "sample_pair",
    "stress_strength",
]


class NumericalDegeneracyError(ArithmeticError):
    """Diagonal PMF evaluated non-positive beyond the roundoff guard."""


@dataclass(frozen=True)
class BdewParams:
    """Parameter quintuple (alpha, p, beta1, beta2, beta3)."""

    alpha: float
    p: float
    beta1: float
    beta2: float
    beta3: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise ValueError(f"alpha must be a positive real, got {self.alpha}")
        if not (0.0 < self.p < 1.0):
            raise ValueError(f"p must lie in (0, 1), got {self.p}")
        for name in ("beta1", "beta2", "beta3"):
            b = getattr(self, name)
            if not (math.isfinite(b) and b > 0):
                raise ValueError(f"{name} must be a positive real, got {b}")

    def component(self, i):
        """EdwParams of the latent component V_i, i in {1, 2, 3}."""
        beta = {1: self.beta1, 2: self.beta2, 3: self.beta3}[i]
        return EdwParams(self.alpha, self.p, beta)

    def marginal(self, which):
        """EdwParams of the marginal law of X_which (beta_i + beta_3)."""
        if which not in (1, 2):
            raise ValueError(f"which must be 1 or 2, got {which}")
        beta = (self.beta1 if which == 1 else self.beta2) + self.beta3
        return EdwParams(self.alpha, self.p, beta)


@dataclass(frozen=True)
class PairPoint:
    x1: int
    x2: int

    def __post_init__(self):
        if self.x1 < 0 or self.x2 < 0:
            raise ValueError(f"coordinates must be non-negative, got {self}")


def _as_pt(pt):
    if isinstance(pt, PairPoint):
        return pt
    return PairPoint(*pt)


def _log_cdf(params, beta, x):
    """log of [1 - p^((x+1)^alpha)]^beta, -inf below the support."""
    return log_edw_cdf(params.alpha, params.p, beta, x)


def _cdf_pow(params, beta, x):
    if x < 0:
        return 0.0
    return math.exp(_log_cdf(params, beta, x))


def _g1(params, beta, x):
    """Single-step CDF difference [1-p^((x+1)^a)]^b - [1-p^(x^a)]^b at x >= 0."""
    a = _log_cdf(params, beta, x)
    b = _log_cdf(params, beta, x - 1)
    if b == -math.inf:
        return math.exp(a)
    d = b - a
    if d >= 0.0:
        return 0.0
    return math.exp(a + log1mexp(d))


def joint_cdf(params, pt):
    """P(X1 <= x1, X2 <= x2); product of three CDF powers at x1, x2, min."""
    pt = _as_pt(pt)
    z = min(pt.x1, pt.x2)
    ln = (
        _log_cdf(params, params.beta1, pt.x1)
        + _log_cdf(params, params.beta2, pt.x2)
        + _log_cdf(params, params.beta3, z)
    )
    return math.exp(ln)


def _joint_cdf_ext(params, x1, x2):
    """joint_cdf extended by zero to negative coordinates."""
    if x1 < 0 or x2 < 0:
        return 0.0
    return joint_cdf(params, PairPoint(x1, x2))


def _four_corner(params, x1, x2):
    return (
        _joint_cdf_ext(params, x1, x2)
        - _joint_cdf_ext(params, x1 - 1, x2)
        - _joint_cdf_ext(params, x1, x2 - 1)
        + _joint_cdf_ext(params, x1 - 1, x2 - 1)
    )


def _diag_pmf(params, x):
    """Diagonal mass P(X1 = X2 = x), guarded against cancellation."""
    p1 = _cdf_pow(params, params.beta1, x)
    p2 = _cdf_pow(params, params.beta1 + params.beta3, x - 1)
    value = p1 * _g1(params, params.beta2 + params.beta3, x) - p2 * _g1(
        params, params.beta2, x
    )
    if value > 0.0:
        return value
    # the closed form subtracts nearby quantities; differencing the CDF is
    # better conditioned at extreme parameters
    value = _four_corner(params, x, x)
    if value >= 0.0:
        return value
    if value >= -1e-13:
        return 0.0
    raise NumericalDegeneracyError(
        f"diagonal pmf at x={x} evaluated to {value:.3e} for {params}"
    )


def joint_pmf(params, pt):
    """P(X1 = x1, X2 = x2) by branch (below, above, on the diagonal)."""
    pt = _as_pt(pt)
    if pt.x1 < pt.x2:
        return _g1(params, params.beta1 + params.beta3, pt.x1) * _g1(
            params, params.beta2, pt.x2
        )
    if pt.x2 < pt.x1:
        return _g1(params, params.beta1, pt.x1) * _g1(
            params, params.beta2 + params.beta3, pt.x2
        )
    return _diag_pmf(params, pt.x1)


def marginal_cdf(params, which, x):
    """CDF of X_which; the marginal is EDW with exponent beta_which + beta3."""
    if x < 0:
        return 0.0
    m = params.marginal(which)
    return math.exp(_log_cdf(params, m.beta, x))


def marginal_pmf(params, which, x):
    if x < 0:
        return 0.0
    return _g1(params, params.marginal(which).beta, x)


def cond_pmf(params, x1, given_x2):
    """P(X1 = x1 | X2 = x2)."""
    denom = marginal_pmf(params, 2, given_x2)
    if denom <= 0.0:
        raise ZeroDivisionError(
            f"conditioning event X2={given_x2} has zero probability"
        )
    return joint_pmf(params, PairPoint(x1, given_x2)) / denom


def cond_cdf_given_le(params, x1, le_x2):
    """P(X1 <= x1 | X2 <= x2), the ratio of joint to marginal CDF."""
    denom = marginal_cdf(params, 2, le_x2)
    if denom <= 0.0:
        raise ZeroDivisionError(
            f"conditioning event X2<={le_x2} has zero probability"
        )
    return joint_cdf(params, PairPoint(x1, le_x2)) / denom


def cond_cdf_given_eq(params, x1, eq_x2):
    """P(X1 <= x1 | X2 = x2) as a partial sum of the conditional PMF."""
    denom = marginal_pmf(params, 2, eq_x2)
    if denom <= 0.0:
        raise ZeroDivisionError(
            f"conditioning event X2={eq_x2} has zero probability"
        )
    total = sum(
        joint_pmf(params, PairPoint(j, eq_x2)) for j in range(x1 + 1)
    )
    return min(total / denom, 1.0)


def cond_expectation(params, eq_x2, ctrl=DEFAULT_CONTROL):
    """E[X1 | X2 = x2]; the upper tail is truncated under a survival bound."""
    denom = marginal_pmf(params, 2, eq_x2)
    if denom <= 0.0:
        raise ZeroDivisionError(
            f"conditioning event X2={eq_x2} has zero probability"
        )
    total = 0.0
    for x1 in range(eq_x2 + 1):
        total += x1 * joint_pmf(params, PairPoint(x1, eq_x2))
    # above the diagonal the pmf factors as f_EDW(x1; beta1) * const, so the
    # tail of sum x1*f(x1) is bounded by S(x)*(x+1 + rho/(1-rho)) with
    # rho the survival ratio (Abel summation on the EDW tail)
    const = _g1(params, params.beta2 + params.beta3, eq_x2)
    b1 = params.beta1
    x = eq_x2
    for _ in range(ctrl.max_terms):
        x += 1
        total += x * _g1(params, b1, x) * const
        s_x = 1.0 - _cdf_pow(params, b1, x)
        s_next = 1.0 - _cdf_pow(params, b1, x + 1)
        rho = s_next / s_x if s_x > 0.0 else 0.0
        rho = min(rho, 1.0 - 1e-12)
        tail = s_x * (x + 1.0 + rho / (1.0 - rho)) * const
        if tail < ctrl.tol * denom:
            return total / denom
    raise SeriesTruncationError("cond_expectation", ctrl.max_terms, tail, ctrl.tol)


def joint_pgf(params, u, v, ctrl=DEFAULT_CONTROL):
    """E[u^X1 v^X2] by truncated double summation of the PMF."""
    if abs(u) > 1.0 or abs(v) > 1.0:
        raise ValueError(f"pgf arguments need |u|,|v| <= 1, got u={u}, v={v}")
    if u == 1.0 and v == 1.0:
        return 1.0
    # grow the summation square until the untouched probability mass is small;
    # |u|,|v| <= 1 makes that mass a bound on the remainder
    n = 8
    while 1.0 - joint_cdf(params, PairPoint(n, n)) >= ctrl.tol:
        n *= 2
        if (n + 1) ** 2 > ctrl.max_terms:
            raise SeriesTruncationError(
                "joint_pgf",
                ctrl.max_terms,
                1.0 - joint_cdf(params, PairPoint(n // 2, n // 2)),
                ctrl.tol,
            )
    total = 0.0
    for i in range(n + 1):
        ui = u**i
        if ui == 0.0:
            break
        for j in range(n + 1):
            vj = v**j
            if vj == 0.0:
                break
            total += joint_pmf(params, PairPoint(i, j)) * ui * vj
    return total


def stress_strength(params, ctrl=DEFAULT_CONTROL):
    """P(X1 < X2) via the single-index series over the shared support."""
    b13 = params.beta1 + params.beta3
    b2 = params.beta2
    total = 0.0
    for i in range(ctrl.max_terms):
        c_next = _cdf_pow(params, b2, i + 1)
        c_here = _cdf_pow(params, b2, i)
        total += (c_next - c_here) * _cdf_pow(params, b13, i)
        # the remaining terms telescope below 1 - [1-p^((i+2)^a)]^b2
        if 1.0 - c_next < ctrl.tol:
            return total
    raise SeriesTruncationError("stress_strength", ctrl.max_terms, 1.0 - c_next, ctrl.tol)


def joint_sf(params, pt):
    """P(X1 > x1, X2 > x2) by inclusion-exclusion on the joint CDF."""
    pt = _as_pt(pt)
    return (
        1.0
        - marginal_cdf(params, 1, pt.x1)
        - marginal_cdf(params, 2, pt.x2)
        + joint_cdf(params, pt)
    )


def joint_hrf(params, pt):
    """Branchwise hazard joint_pmf / joint_sf; undefined where the SF is 0."""
    pt = _as_pt(pt)
    sf = joint_sf(params, pt)
    if sf <= 0.0:
        raise ZeroDivisionError(f"survival function is {sf} at {pt}; hazard undefined")
    return joint_pmf(params, pt) / sf


def max_combine(params_list):
    """Law of the componentwise maximum of independent vectors sharing (alpha, p)."""
    if not params_list:
        raise ValueError("max_combine needs at least one parameter set")
    head = params_list[0]
    for q in params_list[1:]:
        if q.alpha != head.alpha or q.p != head.p:
            raise ValueError(
                f"max_combine requires shared (alpha, p); got {(q.alpha, q.p)} "
                f"vs {(head.alpha, head.p)}"
            )
    return BdewParams(
        head.alpha,
        head.p,
        sum(q.beta1 for q in params_list),
        sum(q.beta2 for q in params_list),
        sum(q.beta3 for q in params_list),
    )


def sample_pair(params, u1, u2, u3):
    """One draw from the joint law given three independent uniforms."""
    v1 = edw_sample_one(params.component(1), u1)
    v2 = edw_sample_one(params.component(2), u2)
    v3 = edw_sample_one(params.component(3), u3)
    return PairPoint(max(v1, v3), max(v2, v3))
