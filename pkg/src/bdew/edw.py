"""Exponentiated discrete Weibull law on the non-negative integers.

The distribution has CDF [1 - p^((x+1)^alpha)]^beta.  Five classical discrete
lifetime families arise by pinning parameters; `make_special` builds them.
"""

import math
from dataclasses import dataclass

__all__ = [
    "EdwParams",
    "SPECIAL_KINDS",
    "edw_cdf",
    "edw_pmf",
    "edw_quantile",
    "edw_sample_one",
    "log1mexp",
    "log_edw_cdf",
    "make_special",
]

# free parameters of each nested special case; the rest are pinned
SPECIAL_KINDS = {
    "DW": {"fixed": {"beta": 1.0}, "free": ("alpha", "p")},
    "DGE": {"fixed": {"alpha": 1.0}, "free": ("p", "beta")},
    "DG": {"fixed": {"alpha": 1.0, "beta": 1.0}, "free": ("p",)},
    "DR": {"fixed": {"alpha": 2.0, "beta": 1.0}, "free": ("p",)},
    "DGR": {"fixed": {"alpha": 2.0}, "free": ("p", "beta")},
}


@dataclass(frozen=True)
class EdwParams:
    """Parameter triple (alpha, p, beta); validated at construction."""

    alpha: float
    p: float
    beta: float

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise ValueError(f"alpha must be a positive real, got {self.alpha}")
        if not (0.0 < self.p < 1.0):
            raise ValueError(f"p must lie in (0, 1), got {self.p}")
        if not (math.isfinite(self.beta) and self.beta > 0):
            raise ValueError(f"beta must be a positive real, got {self.beta}")

    @property
    def rate(self):
        """Rate of the continuous exponentiated Weibull parent, -ln(p)."""
        return -math.log(self.p)


def log1mexp(s):
    """log(1 - exp(s)) for s <= 0, accurate near both endpoints."""
    if s >= 0.0:
        if s == 0.0:
            return -math.inf
        raise ValueError(f"log1mexp requires s <= 0, got {s}")
    if s < -math.log(2.0):
        return math.log1p(-math.exp(s))
    return math.log(-math.expm1(s))


def _power_exponent(x, alpha, ln_p):
    """(x+1)^alpha * ln(p), with the power taken in log space to dodge overflow."""
    if x < 0:
        return 0.0  # makes the CDF at -1 equal exp(beta * log1mexp(0)) = 0
    e = alpha * math.log(x + 1.0)
    if e > 700.0:
        return -math.inf
    return math.exp(e) * ln_p


def log_edw_cdf(alpha, p, beta, x):
    """log of [1 - p^((x+1)^alpha)]^beta; -inf for x < 0."""
    s = _power_exponent(x, alpha, math.log(p))
    return beta * log1mexp(s)


def edw_cdf(params, x):
    """CDF at integer x; zero below the support."""
    if x < 0:
        return 0.0
    return math.exp(log_edw_cdf(params.alpha, params.p, params.beta, x))


def edw_pmf(params, x):
    """PMF at integer x via the two-term closed form F(x) - F(x-1)."""
    if x < 0:
        return 0.0
    a = log_edw_cdf(params.alpha, params.p, params.beta, x)
    b = log_edw_cdf(params.alpha, params.p, params.beta, x - 1)
    # log-space difference of exponentials keeps precision when both are near 1
    if b == -math.inf:
        return math.exp(a)
    d = b - a
    if d >= 0.0:
        return 0.0
    return math.exp(a + log1mexp(d))


def edw_quantile(params, u):
    """Smallest integer x with CDF(x) >= u, for u in [0, 1)."""
    if not (0.0 <= u < 1.0):
        raise ValueError(f"u must lie in [0, 1), got {u}")
    if u == 0.0:
        return 0
    # invert the CDF analytically, then correct for roundoff locally
    ln_p = math.log(params.p)
    t = log1mexp(math.log(u) / params.beta) / ln_p  # p^((x+1)^alpha) <= t form
    x = max(0, math.ceil(t ** (1.0 / params.alpha) - 1.0))
    while x > 0 and edw_cdf(params, x - 1) >= u:
        x -= 1
    while edw_cdf(params, x) < u:
        x += 1
    return x


def edw_sample_one(params, u):
    """Inverse-transform draw: floor of the continuous parent's quantile at u."""
    if not (0.0 < u < 1.0):
        raise ValueError(f"u must lie in (0, 1), got {u}")
    ln_u_root = math.log(u) / params.beta  # log(u^(1/beta))
    y = (-log1mexp(ln_u_root) / params.rate) ** (1.0 / params.alpha)
    return int(math.floor(y))


def make_special(kind, **free):
    """Build the EdwParams of a nested special case (DW, DGE, DG, DR, DGR).

    Only the kind's free parameters may be supplied; pinned ones are rejected.
    """
    try:
        rule = SPECIAL_KINDS[kind]
    except KeyError:
        raise ValueError(f"unknown special kind {kind!r}") from None
    for name in free:
        if name in rule["fixed"]:
            raise ValueError(f"{kind} fixes {name}={rule['fixed'][name]}; cannot override")
        if name not in rule["free"]:
            raise ValueError(f"{kind} takes no parameter {name!r}")
    missing = [name for name in rule["free"] if name not in free]
    if missing:
        raise ValueError(f"{kind} requires {missing}")
    return EdwParams(**rule["fixed"], **free)
