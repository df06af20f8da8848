"""FastAPI service wrapping the distribution, sampling, and fitting core."""

import numpy as np
from fastapi import FastAPI, HTTPException

from .. import bivariate as bv
from ..bivariate import BdewParams, PairPoint
from ..data import DatasetError, builtin_dataset, load_csv
from ..fit import (
    FitConfig,
    FitError,
    ModelFamily,
    compare_models,
    fit_mle,
    partition_sample,
)
from ..series import SeriesControl, SeriesTruncationError
from . import schemas as sc

# published table columns (statistic -> value); None marks a pinned parameter
PUBLISHED = {
    "table2": {
        "dataset": "football",
        "columns": {
            "bdew": {
                "alpha": 0.922, "p": 0.172, "b1": 4.315, "b2": 9.656, "b3": 2.892,
                "negL": 60.89, "aic": 131.7, "caic": 134.83, "bic": 138.09,
                "hqic": 133.61,
            },
        },
    },
    "table4": {
        "dataset": "diving",
        "columns": {
            "bdge": {
                "alpha": None, "p": 0.7613, "b1": 8.6046, "b2": 17.981, "b3": 24.116,
                "negL": 90.959, "aic": 189.917, "caic": 192.774, "bic": 193.695,
                "hqic": 190.556,
            },
            "bdgr": {
                "alpha": None, "p": 0.9893, "b1": 1.4968, "b2": 3.3389, "b3": 4.3561,
                "negL": 86.737, "aic": 181.474, "caic": 184.331, "bic": 185.251,
                "hqic": 182.113,
            },
            "bdew": {
                "alpha": 3.5239, "p": 0.9998, "b1": 0.5327, "b2": 1.2491, "b3": 1.5922,
                "negL": 84.056, "aic": 178.111, "caic": 182.726, "bic": 182.834,
                "hqic": 178.911,
            },
        },
    },
}


def _params(pin: sc.ParamsIn) -> BdewParams:
    return BdewParams(pin.alpha, pin.p, pin.b1, pin.b2, pin.b3)


def _resolve_sample(data: sc.DataIn):
    if data.builtin is not None:
        ds = builtin_dataset(data.builtin)
    else:
        ds = load_csv(data.csv_text)
    return ds, partition_sample(ds.pairs)


def _fit_record(result) -> sc.FitRecord:
    p = result.params
    return sc.FitRecord(
        family=result.family.value,
        alpha=p.alpha, p=p.p, b1=p.beta1, b2=p.beta2, b3=p.beta3,
        negL=result.neg_log_lik,
        aic=result.criteria["aic"], bic=result.criteria["bic"],
        caic=result.criteria["caic"], hqic=result.criteria["hqic"],
        converged=result.converged, iterations=result.iterations,
        k=result.k, n=result.n, gradient_norm=result.gradient_norm,
    )


def _fit_config(opts: sc.FitOptions) -> FitConfig:
    return FitConfig(starts=opts.starts, seed=opts.seed, max_iter=opts.max_iter)


def create_app() -> FastAPI:
    app = FastAPI(title="bdew", version="0.1.0")

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/datasets/{name}", response_model=sc.DatasetResponse)
    def dataset(name: str):
        try:
            ds = builtin_dataset(name)
        except DatasetError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        sample = partition_sample(ds.pairs)
        return sc.DatasetResponse(
            name=ds.name,
            pairs=[(pt.x1, pt.x2) for pt in ds.pairs],
            dropped_records=ds.dropped_records,
            n1=sample.n1, n2=sample.n2, n3=sample.n3,
        )

    @app.post("/eval", response_model=sc.EvalResponse)
    def evaluate(req: sc.EvalRequest):
        params = _params(req.params)
        ctrl = SeriesControl(tol=req.tol)
        try:
            value = _evaluate(req, params, ctrl)
        except (ZeroDivisionError, ValueError, ArithmeticError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        except SeriesTruncationError as exc:
            raise HTTPException(status_code=500, detail=str(exc))
        return sc.EvalResponse(quantity=req.quantity, value=value)

    @app.post("/fit", response_model=sc.FitRecord)
    def fit(req: sc.FitRequest):
        try:
            _, sample = _resolve_sample(req.data)
            result = fit_mle(sample, ModelFamily(req.model), _fit_config(req.options))
        except (DatasetError, FitError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return _fit_record(result)

    @app.post("/compare", response_model=sc.CompareResponse)
    def compare(req: sc.CompareRequest):
        try:
            _, sample = _resolve_sample(req.data)
            ranked, failures = compare_models(
                sample,
                [ModelFamily(m) for m in req.models],
                _fit_config(req.options),
                criterion=req.criterion,
            )
        except (DatasetError, FitError) as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return sc.CompareResponse(
            criterion=req.criterion,
            ranked=[_fit_record(r) for r in ranked],
            failures=[f"{fam.value}: {msg}" for fam, msg in failures],
        )

    @app.post("/sample", response_model=sc.SampleResponse)
    def sample(req: sc.SampleRequest):
        params = _params(req.params)
        rng = np.random.default_rng(req.seed)
        pairs = []
        for _ in range(req.count):
            u1, u2, u3 = rng.random(3)
            pt = bv.sample_pair(params, u1, u2, u3)
            pairs.append((pt.x1, pt.x2))
        return sc.SampleResponse(pairs=pairs)

    @app.post("/reproduce", response_model=sc.ReproduceResponse)
    def reproduce(req: sc.ReproduceRequest):
        table = PUBLISHED[req.table]
        ds = builtin_dataset(table["dataset"])
        sample = partition_sample(ds.pairs)
        columns = []
        for family, published in table["columns"].items():
            try:
                result = fit_mle(sample, ModelFamily(family), _fit_config(req.options))
            except FitError as exc:
                raise HTTPException(status_code=500, detail=f"{family}: {exc}")
            record = _fit_record(result)
            cells = []
            for stat in ("alpha", "p", "b1", "b2", "b3", "negL", "aic", "caic",
                         "bic", "hqic"):
                pub = published[stat]
                fitted = getattr(record, stat)
                delta = None if pub is None else fitted - pub
                cells.append(sc.ReproduceCell(
                    statistic=stat, published=pub, fitted=fitted, delta=delta,
                ))
            columns.append(sc.ReproduceColumn(family=family, cells=cells))
        return sc.ReproduceResponse(
            table=req.table, dataset=table["dataset"], columns=columns,
        )

    return app


def _evaluate(req: sc.EvalRequest, params: BdewParams, ctrl: SeriesControl) -> float:
    q = req.quantity
    if q == "pmf":
        return bv.joint_pmf(params, PairPoint(req.x1, req.x2))
    if q == "cdf":
        return bv.joint_cdf(params, PairPoint(req.x1, req.x2))
    if q == "sf":
        return bv.joint_sf(params, PairPoint(req.x1, req.x2))
    if q == "hrf":
        return bv.joint_hrf(params, PairPoint(req.x1, req.x2))
    if q == "cond-pmf":
        return bv.cond_pmf(params, req.x1, req.x2)
    if q == "cond-cdf":
        return bv.cond_cdf_given_le(params, req.x1, req.x2)
    if q == "cond-cdf-eq":
        return bv.cond_cdf_given_eq(params, req.x1, req.x2)
    if q == "cond-exp":
        return bv.cond_expectation(params, req.x2, ctrl)
    if q == "pgf":
        return bv.joint_pgf(params, req.u, req.v, ctrl)
    if q == "stress-strength":
        return bv.stress_strength(params, ctrl)
    raise ValueError(f"unknown quantity {q!r}")


app = create_app()
