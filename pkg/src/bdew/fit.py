"""Maximum-likelihood fitting of the bivariate law and its nested sub-models.

The likelihood splits the sample by which coordinate is larger; the diagonal
pairs carry the shared-component mass.  Optimization runs on an unconstrained
reparameterization (log for shapes, log-odds for p) with multi-start simplex
search refined by gradient steps.
"""

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.optimize import minimize

from .bivariate import BdewParams, PairPoint, joint_pmf
from .edw import log1mexp

__all__ = [
    "FitConfig",
    "FitError",
    "FitResult",
    "ModelFamily",
    "PairSample",
    "compare_models",
    "fit_mle",
    "info_criteria",
    "log_likelihood",
    "partition_sample",
    "score",
]

_CRITERIA = ("aic", "bic", "caic", "hqic")


class FitError(RuntimeError):
    pass


class ModelFamily(Enum):
    """Fitting families; the nested ones pin parameters of the full model."""

    BDEW = "bdew"
    BDGE = "bdge"  # alpha = 1
    BDGR = "bdgr"  # alpha = 2
    NBG = "nbg"  # alpha = 1, beta3 = b, beta1 = beta2 = 1 - b

    @property
    def n_free(self):
        return {"bdew": 5, "bdge": 4, "bdgr": 4, "nbg": 2}[self.value]


@dataclass(frozen=True)
class PairSample:
    """Observed pairs partitioned by the sign of x1 - x2."""

    pairs: tuple
    n1: int  # x1 < x2
    n2: int  # x2 < x1
    n3: int  # x1 = x2

    @property
    def n(self):
        return len(self.pairs)


@dataclass(frozen=True)
class FitResult:
    family: ModelFamily
    params: BdewParams
    neg_log_lik: float
    criteria: dict
    k: int
    n: int
    converged: bool
    iterations: int
    gradient_norm: float


@dataclass(frozen=True)
class FitConfig:
    starts: int = 20
    seed: int = 0
    f_tol: float = 1e-8
    x_tol: float = 1e-7
    max_iter: int = 5000


def partition_sample(pairs):
    """Classify pairs into the below/above/diagonal index sets."""
    pts = []
    n1 = n2 = n3 = 0
    for pair in pairs:
        pt = pair if isinstance(pair, PairPoint) else PairPoint(*pair)
        pts.append(pt)
        if pt.x1 < pt.x2:
            n1 += 1
        elif pt.x2 < pt.x1:
            n2 += 1
        else:
            n3 += 1
    return PairSample(tuple(pts), n1, n2, n3)


# ---------------------------------------------------------------------------
# likelihood and analytic score
#
# Everything is built from B(x; beta) = [1 - p^(x^alpha)]^beta and its partial
# derivatives; note the x^alpha convention here (not (x+1)^alpha), so the CDF
# at x is B(x+1; beta).


def _lnC(alpha, ln_p, x):
    """ln(1 - p^(x^alpha)); -inf at x = 0."""
    if x <= 0:
        return -math.inf
    e = alpha * math.log(x)
    if e > 700.0:
        return 0.0
    return log1mexp(math.exp(e) * ln_p)


def _B(alpha, ln_p, x, beta):
    return math.exp(beta * _lnC(alpha, ln_p, x))


def _g1(alpha, ln_p, x, beta):
    """B(x+1; beta) - B(x; beta), evaluated in log space."""
    a = beta * _lnC(alpha, ln_p, x + 1)
    b = beta * _lnC(alpha, ln_p, x)
    if b == -math.inf:
        return math.exp(a)
    d = b - a
    if d >= 0.0:
        return 0.0
    return math.exp(a + log1mexp(d))


def _g2(alpha, ln_p, x, beta):
    """dB/dbeta = B(x; beta) * ln(1 - p^(x^alpha)); 0 at x = 0."""
    lc = _lnC(alpha, ln_p, x)
    if lc == -math.inf:
        return 0.0
    return math.exp(beta * lc) * lc


def _g3(alpha, ln_p, x, beta):
    """dB/dp = -beta x^alpha p^(x^alpha - 1) [1-p^(x^alpha)]^(beta-1); 0 at x=0."""
    if x <= 0:
        return 0.0
    e = alpha * math.log(x)
    if e > 700.0:
        return 0.0  # p^(x^alpha) underflow kills the derivative
    t = math.exp(e)
    lc = _lnC(alpha, ln_p, x)
    ln_mag = math.log(beta) + e + (t - 1.0) * ln_p + (beta - 1.0) * lc
    if ln_mag < -745.0:
        return 0.0
    return -math.exp(ln_mag)


def _g4(alpha, ln_p, x, beta):
    """dB/dalpha = -beta ln(x) x^alpha p^(x^alpha) ln(p) [1-p^(x^a)]^(beta-1)."""
    if x <= 0 or x == 1:
        return 0.0  # ln(1) = 0; the x=0 limit vanishes for alpha > 0
    e = alpha * math.log(x)
    if e > 700.0:
        return 0.0
    t = math.exp(e)
    lc = _lnC(alpha, ln_p, x)
    ln_mag = (
        math.log(beta)
        + math.log(math.log(x))
        + e
        + t * ln_p
        + math.log(-ln_p)
        + (beta - 1.0) * lc
    )
    if ln_mag < -745.0:
        return 0.0
    return math.exp(ln_mag)  # two negative factors cancel


def _diag_terms(alpha, ln_p, x, b1, b2, b3):
    """Factors of the diagonal mass D = A*G - Bt*H and their logs."""
    A = _B(alpha, ln_p, x + 1, b1)
    G = _g1(alpha, ln_p, x, b2 + b3)
    Bt = _B(alpha, ln_p, x, b1 + b3)
    H = _g1(alpha, ln_p, x, b2)
    D = A * G - Bt * H
    return A, G, Bt, H, D


def log_likelihood(params, sample):
    """Log-likelihood of the sample; -inf if any pair has zero mass."""
    alpha, ln_p = params.alpha, math.log(params.p)
    b1, b2, b3 = params.beta1, params.beta2, params.beta3
    total = 0.0
    for pt in sample.pairs:
        if pt.x1 < pt.x2:
            f = _g1(alpha, ln_p, pt.x1, b1 + b3) * _g1(alpha, ln_p, pt.x2, b2)
        elif pt.x2 < pt.x1:
            f = _g1(alpha, ln_p, pt.x1, b1) * _g1(alpha, ln_p, pt.x2, b2 + b3)
        else:
            f = _diag_terms(alpha, ln_p, pt.x1, b1, b2, b3)[4]
            if f <= 0.0:
                try:
                    f = joint_pmf(params, pt)  # four-corner fallback
                except ArithmeticError:
                    return -math.inf
        if f <= 0.0:
            return -math.inf
        total += math.log(f)
    return total


def _dg1(gk, alpha, ln_p, x, beta):
    """Parameter derivative of g1 through one of the gk helper functions."""
    return gk(alpha, ln_p, x + 1, beta) - gk(alpha, ln_p, x, beta)


def score(params, sample):
    """Gradient of log_likelihood w.r.t. (alpha, p, beta1, beta2, beta3)."""
    alpha, p = params.alpha, params.p
    ln_p = math.log(p)
    b1, b2, b3 = params.beta1, params.beta2, params.beta3
    grad = np.zeros(5)

    def off_diag(x, beta, slots):
        """Accumulate d ln g1(x; beta) for an off-diagonal factor.

        slots maps gradient indices to weights (1 for each beta making up the
        exponent).
        """
        g = _g1(alpha, ln_p, x, beta)
        if g <= 0.0:
            raise FitError(f"zero-mass factor at x={x}, beta={beta}")
        grad[0] += _dg1(_g4, alpha, ln_p, x, beta) / g
        grad[1] += _dg1(_g3, alpha, ln_p, x, beta) / g
        db = _dg1(_g2, alpha, ln_p, x, beta) / g
        for idx in slots:
            grad[idx] += db

    for pt in sample.pairs:
        if pt.x1 < pt.x2:
            off_diag(pt.x1, b1 + b3, (2, 4))
            off_diag(pt.x2, b2, (3,))
        elif pt.x2 < pt.x1:
            off_diag(pt.x1, b1, (2,))
            off_diag(pt.x2, b2 + b3, (3, 4))
        else:
            x = pt.x1
            A, G, Bt, H, D = _diag_terms(alpha, ln_p, x, b1, b2, b3)
            if D <= 0.0:
                D = joint_pmf(params, pt)
                if D <= 0.0:
                    raise FitError(f"zero diagonal mass at x={x}")
            # D = A*G - Bt*H; chain rule through each factor
            dG_a = _dg1(_g4, alpha, ln_p, x, b2 + b3)
            dH_a = _dg1(_g4, alpha, ln_p, x, b2)
            grad[0] += (
                _g4(alpha, ln_p, x + 1, b1) * G
                + A * dG_a
                - _g4(alpha, ln_p, x, b1 + b3) * H
                - Bt * dH_a
            ) / D
            dG_p = _dg1(_g3, alpha, ln_p, x, b2 + b3)
            dH_p = _dg1(_g3, alpha, ln_p, x, b2)
            grad[1] += (
                _g3(alpha, ln_p, x + 1, b1) * G
                + A * dG_p
                - _g3(alpha, ln_p, x, b1 + b3) * H
                - Bt * dH_p
            ) / D
            dG_b = _dg1(_g2, alpha, ln_p, x, b2 + b3)
            dH_b = _dg1(_g2, alpha, ln_p, x, b2)
            A_b = _g2(alpha, ln_p, x + 1, b1)  # dA/dbeta1
            Bt_b = _g2(alpha, ln_p, x, b1 + b3)  # dBt/dbeta1 and /dbeta3
            grad[2] += (A_b * G - Bt_b * H) / D
            grad[3] += (A * dG_b - Bt * dH_b) / D
            grad[4] += (A * dG_b - Bt_b * H) / D
    return grad


# ---------------------------------------------------------------------------
# unconstrained reparameterization per family


def _sigmoid(t):
    if t >= 0:
        return 1.0 / (1.0 + math.exp(-t))
    e = math.exp(t)
    return e / (1.0 + e)


def _logit(p):
    return math.log(p) - math.log1p(-p)


def _theta_to_params(family, theta):
    if family is ModelFamily.BDEW:
        la, lp, l1, l2, l3 = theta
        return BdewParams(math.exp(la), _sigmoid(lp), math.exp(l1), math.exp(l2), math.exp(l3))
    if family is ModelFamily.BDGE:
        lp, l1, l2, l3 = theta
        return BdewParams(1.0, _sigmoid(lp), math.exp(l1), math.exp(l2), math.exp(l3))
    if family is ModelFamily.BDGR:
        lp, l1, l2, l3 = theta
        return BdewParams(2.0, _sigmoid(lp), math.exp(l1), math.exp(l2), math.exp(l3))
    if family is ModelFamily.NBG:
        lp, lb = theta
        b = _sigmoid(lb)
        return BdewParams(1.0, _sigmoid(lp), 1.0 - b, 1.0 - b, b)
    raise ValueError(family)


def _params_to_theta(family, params):
    lp = _logit(params.p)
    if family is ModelFamily.BDEW:
        return np.array([
            math.log(params.alpha), lp,
            math.log(params.beta1), math.log(params.beta2), math.log(params.beta3),
        ])
    if family in (ModelFamily.BDGE, ModelFamily.BDGR):
        return np.array([
            lp, math.log(params.beta1), math.log(params.beta2), math.log(params.beta3),
        ])
    if family is ModelFamily.NBG:
        return np.array([lp, _logit(params.beta3)])
    raise ValueError(family)


def _chain_gradient(family, theta, params, full_grad):
    """Map the 5-vector score into the free-coordinate gradient."""
    da, dp, d1, d2, d3 = full_grad
    p = params.p
    dp_dt = p * (1.0 - p)  # d sigmoid / d logit
    if family is ModelFamily.BDEW:
        return np.array([
            da * params.alpha, dp * dp_dt,
            d1 * params.beta1, d2 * params.beta2, d3 * params.beta3,
        ])
    if family in (ModelFamily.BDGE, ModelFamily.BDGR):
        return np.array([
            dp * dp_dt, d1 * params.beta1, d2 * params.beta2, d3 * params.beta3,
        ])
    if family is ModelFamily.NBG:
        b = params.beta3
        return np.array([dp * dp_dt, (d3 - d1 - d2) * b * (1.0 - b)])
    raise ValueError(family)


def _moment_seeds(sample, family, config):
    """Moment-informed starting points with seeded jitter."""
    x1 = np.array([pt.x1 for pt in sample.pairs], dtype=float)
    x2 = np.array([pt.x2 for pt in sample.pairs], dtype=float)
    mean = max(float(np.mean(np.concatenate([x1, x2]))), 0.05)
    # a geometric law with this mean; anchors the p seed scale
    p_geo = mean / (1.0 + mean)
    rng = np.random.default_rng(config.seed)

    alphas = [0.5, 1.0, 2.0, 3.0] if family is ModelFamily.BDEW else [1.0]
    p_bases = sorted({p_geo, p_geo**0.25, 0.5, 1.0 - (1.0 - p_geo) / 8.0})
    betas0 = (0.5, 0.5, 0.5) if family is ModelFamily.NBG else (1.0, 1.0, 1.0)
    seeds = []
    for a in alphas:
        for pb in p_bases:
            seeds.append(BdewParams(a, pb, *betas0))
    while len(seeds) < config.starts:
        a = float(np.exp(rng.uniform(-1.2, 1.4))) if family is ModelFamily.BDEW else 1.0
        pb = float(_sigmoid(rng.normal(_logit(p_geo), 2.0)))
        betas = np.exp(rng.uniform(-1.5, 2.5, size=3))
        if family is ModelFamily.NBG:
            b = float(_sigmoid(rng.normal(0.0, 1.5)))
            seeds.append(BdewParams(1.0, pb, 1.0 - b, 1.0 - b, b))
        else:
            seeds.append(BdewParams(a, pb, *map(float, betas)))
    return seeds[: config.starts]


def fit_mle(sample, family, config=None):
    """Maximize the log-likelihood for one family; multi-start local search."""
    config = config or FitConfig()
    if isinstance(family, str):
        family = ModelFamily(family.lower())
    k = family.n_free
    if sample.n < k:
        raise FitError(f"need at least {k} pairs to fit {family.name}, got {sample.n}")
    if len(set(sample.pairs)) == 1:
        raise FitError("degenerate sample: all pairs identical")

    def objective(theta):
        try:
            params = _theta_to_params(family, theta)
            ll = log_likelihood(params, sample)
        except (OverflowError, ValueError):
            return math.inf
        return math.inf if ll == -math.inf else -ll

    def gradient(theta):
        params = _theta_to_params(family, theta)
        return -_chain_gradient(family, theta, params, score(params, sample))

    best = None
    iterations = 0
    for seed_params in _moment_seeds(sample, family, config):
        theta0 = _params_to_theta(family, seed_params)
        if not np.isfinite(objective(theta0)):
            continue
        res = minimize(
            objective,
            theta0,
            method="Nelder-Mead",
            options={
                "maxiter": config.max_iter,
                "fatol": config.f_tol,
                "xatol": config.x_tol,
            },
        )
        iterations += res.nit
        try:
            polished = minimize(
                objective, res.x, jac=gradient, method="BFGS",
                options={"maxiter": 500, "gtol": 1e-7},
            )
            iterations += polished.nit
            if np.isfinite(polished.fun) and polished.fun <= res.fun:
                res = polished
        except (FitError, FloatingPointError, OverflowError, ValueError):
            pass
        if np.isfinite(res.fun) and (best is None or res.fun < best.fun):
            best = res
    if best is None:
        raise FitError(f"all {config.starts} starts failed for {family.name}")

    params = _theta_to_params(family, best.x)
    neg_ll = float(best.fun)
    try:
        gnorm = float(np.linalg.norm(_chain_gradient(
            family, best.x, params, score(params, sample)
        )))
    except FitError:
        gnorm = math.nan
    return FitResult(
        family=family,
        params=params,
        neg_log_lik=neg_ll,
        criteria=info_criteria(k, sample.n, neg_ll),
        k=k,
        n=sample.n,
        converged=bool(best.success or gnorm < 1e-3),
        iterations=iterations,
        gradient_norm=gnorm,
    )


def info_criteria(k, n, neg_log_lik):
    """AIC/BIC/CAIC/HQIC from the free-parameter count and sample size."""
    if n <= k + 1:
        raise ValueError(f"CAIC needs n > k + 1, got n={n}, k={k}")
    if n < 3:
        raise ValueError(f"HQIC needs n >= 3, got n={n}")
    two_negl = 2.0 * neg_log_lik
    aic = 2.0 * k + two_negl
    return {
        "aic": aic,
        "bic": k * math.log(n) + two_negl,
        "caic": aic + 2.0 * k * (k + 1.0) / (n - k - 1.0),
        "hqic": 2.0 * k * math.log(math.log(n)) + two_negl,
    }


def compare_models(sample, families, config=None, criterion="aic"):
    """Fit each family and rank ascending by the chosen criterion.

    Failed fits are excluded and reported in the second return value.
    """
    if criterion not in _CRITERIA:
        raise ValueError(f"criterion must be one of {_CRITERIA}, got {criterion!r}")
    order = list(ModelFamily)
    results, failures = [], []
    for fam in families:
        fam = ModelFamily(fam.lower()) if isinstance(fam, str) else fam
        try:
            results.append(fit_mle(sample, fam, config))
        except FitError as exc:
            failures.append((fam, str(exc)))
    results.sort(key=lambda r: (r.criteria[criterion], r.k, order.index(r.family)))
    return results, failures
