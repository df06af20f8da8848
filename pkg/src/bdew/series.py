"""Truncation control for infinite-series evaluations."""

from dataclasses import dataclass


class SeriesTruncationError(RuntimeError):
    """Raised when a series fails to meet its tail tolerance within the term cap."""

    def __init__(self, name, terms, tail_bound, tol):
        self.name = name
        self.terms = terms
        self.tail_bound = tail_bound
        self.tol = tol
        super().__init__(
            f"{name}: tail bound {tail_bound:.3e} still above tol {tol:.3e} "
            f"after {terms} terms"
        )


@dataclass(frozen=True)
class SeriesControl:
    """Absolute tail tolerance and hard term cap for truncated sums."""

    tol: float = 1e-12
    max_terms: int = 100_000

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_terms < 1:
            raise ValueError(f"max_terms must be >= 1, got {self.max_terms}")


DEFAULT_CONTROL = SeriesControl()
