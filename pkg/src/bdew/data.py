"""Paired count dataset ingestion plus the two embedded study datasets."""

import io
from dataclasses import dataclass, field

from .bivariate import PairPoint

__all__ = ["Dataset", "DatasetError", "builtin_dataset", "load_csv", "to_csv"]


class DatasetError(ValueError):
    """Malformed dataset input."""


@dataclass(frozen=True)
class Dataset:
    name: str
    pairs: tuple
    dropped_records: int = 0


# Serie A scores, Fiorentina (x1) vs Juventus (x2), 1996-2011 seasons
_FOOTBALL = (
    (1, 2), (0, 0), (1, 1), (1, 2), (1, 1), (0, 1), (1, 1), (3, 2), (1, 1),
    (1, 1), (1, 2), (3, 3), (0, 1), (1, 2), (1, 1), (1, 3), (3, 3), (0, 1),
    (1, 1), (1, 2), (1, 0), (3, 0), (1, 2), (1, 1), (0, 1), (0, 1),
)

# 1995 World Cup diving: max Asian/Caucasus judge score (x1) vs max Western
# judge score (x2); one dive was never broadcast and is excluded
_DIVING = (
    (19, 19), (15, 15), (13, 14), (11, 12), (14, 14), (15, 14), (13, 16),
    (7, 5), (13, 13), (15, 16), (15, 15), (17, 18), (16, 16), (12, 13),
    (14, 14), (12, 13), (17, 18), (9, 10), (18, 18),
)

_BUILTIN = {
    "football": Dataset("football", tuple(PairPoint(*t) for t in _FOOTBALL)),
    "diving": Dataset("diving", tuple(PairPoint(*t) for t in _DIVING), dropped_records=1),
}

_MISSING_TOKENS = {"", "--"}


def builtin_dataset(name):
    """Return one of the embedded datasets ('football' or 'diving')."""
    try:
        return _BUILTIN[name]
    except KeyError:
        raise DatasetError(
            f"unknown builtin dataset {name!r}; choose from {sorted(_BUILTIN)}"
        ) from None


def _parse_field(token, lineno):
    token = token.strip()
    if token in _MISSING_TOKENS:
        return None
    try:
        value = int(token)
    except ValueError:
        raise DatasetError(f"line {lineno}: non-integer value {token!r}") from None
    if value < 0:
        raise DatasetError(f"line {lineno}: negative value {value}")
    return value


def load_csv(source, name="csv"):
    """Parse `x1,x2` lines into a Dataset.

    Accepts a path, text, or binary stream.  An optional `x1,x2` header is
    skipped; `--` or an empty field marks a missing value and drops the record.
    """
    if isinstance(source, (str,)) and "\n" not in source and "," not in source:
        with open(source, encoding="utf-8") as fh:
            text = fh.read()
    elif isinstance(source, str):
        text = source
    elif isinstance(source, bytes):
        text = source.decode("utf-8")
    elif isinstance(source, io.IOBase) or hasattr(source, "read"):
        raw = source.read()
        text = raw.decode("utf-8") if isinstance(raw, bytes) else raw
    else:
        raise TypeError(f"unsupported source type {type(source)!r}")

    pairs = []
    dropped = 0
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        fields = [f.strip() for f in line.split(",")]
        if lineno == 1 and fields == ["x1", "x2"]:
            continue
        if len(fields) != 2:
            raise DatasetError(f"line {lineno}: expected two fields, got {len(fields)}")
        x1 = _parse_field(fields[0], lineno)
        x2 = _parse_field(fields[1], lineno)
        if x1 is None or x2 is None:
            dropped += 1
            continue
        pairs.append(PairPoint(x1, x2))
    return Dataset(name, tuple(pairs), dropped)


def to_csv(dataset):
    """Serialize a Dataset back to `x1,x2` lines (LF, no header)."""
    return "\n".join(f"{pt.x1},{pt.x2}" for pt in dataset.pairs)
