"""Pydantic request/response models for the HTTP service."""

from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

Quantity = Literal[
    "pmf", "cdf", "sf", "hrf", "cond-pmf", "cond-cdf", "cond-cdf-eq",
    "cond-exp", "pgf", "stress-strength",
]


class ParamsIn(BaseModel):
    alpha: float = Field(gt=0)
    p: float = Field(gt=0, lt=1)
    b1: float = Field(gt=0)
    b2: float = Field(gt=0)
    b3: float = Field(gt=0)


class EvalRequest(BaseModel):
    quantity: Quantity
    params: ParamsIn
    x1: Optional[int] = Field(default=None, ge=0)
    x2: Optional[int] = Field(default=None, ge=0)
    u: Optional[float] = None
    v: Optional[float] = None
    tol: float = Field(default=1e-12, gt=0)

    @model_validator(mode="after")
    def _check_arguments(self):
        needs_pt = {"pmf", "cdf", "sf", "hrf", "cond-pmf", "cond-cdf", "cond-cdf-eq"}
        if self.quantity in needs_pt and (self.x1 is None or self.x2 is None):
            raise ValueError(f"{self.quantity} requires x1 and x2")
        if self.quantity == "cond-exp" and self.x2 is None:
            raise ValueError("cond-exp requires x2")
        if self.quantity == "pgf" and (self.u is None or self.v is None):
            raise ValueError("pgf requires u and v")
        return self


class EvalResponse(BaseModel):
    quantity: Quantity
    value: float


class DataIn(BaseModel):
    """Either a builtin dataset name or inline CSV text."""

    builtin: Optional[str] = None
    csv_text: Optional[str] = None

    @model_validator(mode="after")
    def _exactly_one(self):
        if (self.builtin is None) == (self.csv_text is None):
            raise ValueError("provide exactly one of builtin / csv_text")
        return self


class FitOptions(BaseModel):
    starts: int = Field(default=20, ge=1)
    seed: int = Field(default=0, ge=0)
    max_iter: int = Field(default=5000, ge=1)


class FitRequest(BaseModel):
    data: DataIn
    model: Literal["bdew", "bdge", "bdgr", "nbg"] = "bdew"
    options: FitOptions = FitOptions()


class FitRecord(BaseModel):
    """Flat result record; mirrors the CLI's structured-document output."""

    family: str
    alpha: float
    p: float
    b1: float
    b2: float
    b3: float
    negL: float
    aic: float
    bic: float
    caic: float
    hqic: float
    converged: bool
    iterations: int
    k: int
    n: int
    gradient_norm: float


class CompareRequest(BaseModel):
    data: DataIn
    models: list[Literal["bdew", "bdge", "bdgr", "nbg"]]
    criterion: Literal["aic", "bic", "caic", "hqic"] = "aic"
    options: FitOptions = FitOptions()


class CompareResponse(BaseModel):
    criterion: str
    ranked: list[FitRecord]
    failures: list[str]


class SampleRequest(BaseModel):
    params: ParamsIn
    count: int = Field(ge=1)
    seed: int = Field(default=0, ge=0)


class SampleResponse(BaseModel):
    pairs: list[tuple[int, int]]


class ReproduceRequest(BaseModel):
    table: Literal["table2", "table4"]
    options: FitOptions = FitOptions()


class ReproduceCell(BaseModel):
    statistic: str
    published: Optional[float]
    fitted: float
    delta: Optional[float]


class ReproduceColumn(BaseModel):
    family: str
    cells: list[ReproduceCell]


class ReproduceResponse(BaseModel):
    table: str
    dataset: str
    columns: list[ReproduceColumn]


class DatasetResponse(BaseModel):
    name: str
    pairs: list[tuple[int, int]]
    dropped_records: int
    n1: int
    n2: int
    n3: int
