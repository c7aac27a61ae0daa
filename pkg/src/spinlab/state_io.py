"""
Read state specifications, directions and triplets, and write run records.

Inline state specifications have the form `kind:args`:

    fock:N:K                  number state |K⟩
    gauss:N:L:SIGMA           Gaussian state peaked at L
    flatpeak:N:P[:WEIGHTING]  flat-peak state, WEIGHTING = amplitude | probability
    mixture:N:uniform         uniform diagonal mixture
    mixture:N:P0,P1,...       diagonal mixture (renormalized)
    amplitudes:N:RE,IM;...    superposition with complex amplitudes (normalized)

The same information can be given as a JSON file
`{"v": 1, "n": N, "kind": KIND, "params": {...}}`.
"""

from dataclasses import asdict, is_dataclass
from enum import Enum
import json
import logging
from math import isinf, isnan, sqrt
from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError

from . import __version__
from .errors import DomainError
from .fock import (
    AXES,
    DiagonalMixture,
    Direction,
    OrthogonalTriplet,
    number_state,
    superposition,
)
from .squeezing import WEIGHTINGS, flat_peak_state, gaussian_state

logger = logging.getLogger(__name__)

RENORMALIZE_WARN = 1e-6
UNDEFINED = "undefined"


class SpecParseError(DomainError):
    """
    Malformed input, located by a 1-based line and column.
    """

    def __init__(self, message, line=1, column=1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line, self.column = line, column


class StateParams(BaseModel):
    model_config = ConfigDict(extra="forbid")

    k: int | None = None
    l: float | None = None  # noqa: E741
    sigma: float | None = None
    p: float | None = None
    weighting: Literal["amplitude", "probability"] | None = None
    probs: list[float] | None = None
    uniform: bool | None = None
    amplitudes: list[tuple[float, float]] | None = None


class StateSpec(BaseModel):
    """
    Versioned description of a PureState or DiagonalMixture.
    """

    model_config = ConfigDict(extra="forbid")

    v: Literal[1] = 1
    n: int = Field(..., ge=0)
    kind: Literal["fock", "gauss", "flatpeak", "mixture", "amplitudes"]
    params: StateParams = Field(default_factory=StateParams)

    def _require(self, *names):
        missing = [x for x in names if getattr(self.params, x) is None]
        if missing:
            raise SpecParseError(f"{self.kind} state needs parameter(s) {missing}")
        return [getattr(self.params, x) for x in names]

    def build(self):
        """Return the PureState or DiagonalMixture described by this spec."""
        n, params = self.n, self.params
        if self.kind == "fock":
            return number_state(n, *self._require("k"))
        if self.kind == "gauss":
            return gaussian_state(n, *self._require("l", "sigma"))
        if self.kind == "flatpeak":
            (p,) = self._require("p")
            return flat_peak_state(n, p, params.weighting or "amplitude")
        if self.kind == "mixture":
            if params.uniform:
                return DiagonalMixture.uniform(n)
            (probs,) = self._require("probs")
            return DiagonalMixture(n, _renormalized(probs, "mixture probabilities"))
        (amps,) = self._require("amplitudes")
        return superposition(n, [complex(re, im) for re, im in amps])

    def is_number_state(self) -> bool:
        return self.kind == "fock"

    def is_diagonal(self) -> bool:
        return self.kind in ("fock", "mixture")


def _renormalized(probs, what):
    p = np.asarray(probs, dtype=np.float64)
    if np.any(p < 0):
        raise DomainError(f"{what} must be non-negative")
    total = float(p.sum())
    if total == 0.0:
        raise DomainError(f"{what} sum to zero")
    if abs(total - 1.0) > RENORMALIZE_WARN:
        logger.warning("%s sum to %r; renormalizing", what, total)
    return p / total


def _fields(text, sep=":"):
    """Split `text`, yielding (1-based column, field)."""
    column = 1
    for part in text.split(sep):
        yield column, part
        column += len(part) + len(sep)


def _number(kind, text, column, what):
    try:
        return kind(text)
    except ValueError as e:
        raise SpecParseError(f"cannot read {what} from {text!r}", 1, column) from e


def parse_state_spec(text) -> StateSpec:
    """
    Parse an inline `kind:args` state specification.
    :raises SpecParseError: with the column of the offending field.
    """
    fields = list(_fields(text.strip()))
    kind = fields[0][1]
    arity = {"fock": 3, "gauss": 4, "flatpeak": (3, 4), "mixture": 3, "amplitudes": 3}
    if kind not in arity:
        raise SpecParseError(f"unknown state kind {kind!r}", 1, 1)
    expected = arity[kind] if isinstance(arity[kind], tuple) else (arity[kind],)
    if len(fields) not in expected:
        col = fields[-1][0] + len(fields[-1][1])
        raise SpecParseError(
            f"{kind} expects {' or '.join(map(str, expected))} fields, got {len(fields)}",
            1,
            col,
        )
    n = _number(int, fields[1][1], fields[1][0], "particle number")
    col, arg = fields[2]

    params = {}
    if kind == "fock":
        params["k"] = _number(int, arg, col, "occupation k")
    elif kind == "gauss":
        params["l"] = _number(float, arg, col, "center")
        params["sigma"] = _number(float, fields[3][1], fields[3][0], "sigma")
    elif kind == "flatpeak":
        params["p"] = _number(float, arg, col, "p")
        if len(fields) == 4:
            if fields[3][1] not in WEIGHTINGS:
                raise SpecParseError(f"unknown weighting {fields[3][1]!r}", 1, fields[3][0])
            params["weighting"] = fields[3][1]
    elif kind == "mixture":
        if arg == "uniform":
            params["uniform"] = True
        else:
            params["probs"] = [
                _number(float, x, col + c - 1, "probability") for c, x in _fields(arg, ",")
            ]
    else:
        amps = []
        for c, pair in _fields(arg, ";"):
            parts = list(_fields(pair, ","))
            if len(parts) != 2:
                raise SpecParseError("amplitudes are RE,IM pairs", 1, col + c - 1)
            amps.append(
                tuple(_number(float, x, col + c + d - 2, "amplitude") for d, x in parts)
            )
        params["amplitudes"] = amps

    try:
        return StateSpec(n=n, kind=kind, params=StateParams(**params))
    except ValidationError as e:
        raise SpecParseError(str(e.errors()[0]["msg"]), 1, fields[1][0]) from e


def load_state_file(path) -> StateSpec:
    """
    Read a JSON state specification.
    :raises SpecParseError: on an unreadable file, malformed JSON or an invalid schema.
    """
    try:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise SpecParseError(f"cannot read state file {path}: {e.strerror}") from e
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise SpecParseError(e.msg, e.lineno, e.colno) from e
    try:
        return StateSpec.model_validate(data)
    except ValidationError as e:
        err = e.errors()[0]
        where = ".".join(map(str, err["loc"]))
        raise SpecParseError(f"{where}: {err['msg']}") from e


def parse_vector(text, flag="--dir"):
    """Parse `x,y,z` into three floats."""
    parts = list(_fields(text.strip(), ","))
    if len(parts) != 3:
        raise SpecParseError(f"{flag} needs three comma-separated components", 1, 1)
    return [_number(float, x, c, f"{flag} component") for c, x in parts]


def parse_direction(text, flag="--dir") -> Direction:
    """
    Parse `x,y,z` into a Direction, normalizing it (with a warning when the norm
    deviates from 1 by more than 1e-6).
    """
    v = parse_vector(text, flag)
    norm = sqrt(sum(x * x for x in v))
    if norm == 0.0:
        raise SpecParseError(f"{flag} must be non-zero", 1, 1)
    if abs(norm - 1.0) > RENORMALIZE_WARN:
        logger.warning("%s has norm %r; normalizing", flag, norm)
    return Direction.from_vector(v, normalize=True)


def parse_triplet(text, flag="--triplet") -> OrthogonalTriplet:
    """
    Parse `auto-x|auto-y|auto-z`, three axis letters such as `z,y,x`, or three
    `;`-separated vectors.
    """
    text = text.strip()
    if text in ("auto-x", "auto-y", "auto-z"):
        return OrthogonalTriplet.cyclic(text[-1])
    letters = text.split(",")
    if len(letters) == 3 and all(x.strip() in AXES for x in letters):
        return OrthogonalTriplet(*(AXES[x.strip()] for x in letters))
    vectors = text.split(";")
    if len(vectors) != 3:
        raise SpecParseError(f"{flag} needs auto-AXIS, three axis letters or three vectors")
    return OrthogonalTriplet(*(parse_direction(v, flag) for v in vectors))


def to_jsonable(obj):
    """
    Convert results to JSON-compatible values. None (an undefined or vacuous value)
    becomes "undefined" and infinities become "inf"/"-inf".
    """
    if obj is None:
        return UNDEFINED
    if is_dataclass(obj):
        out = {k: to_jsonable(v) for k, v in asdict(obj).items()}
        for name in dir(type(obj)):
            if isinstance(getattr(type(obj), name), property):
                out[name] = to_jsonable(getattr(obj, name))
        return out
    if isinstance(obj, BaseModel):
        return to_jsonable(obj.model_dump())
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, list | tuple | np.ndarray):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, bool | np.bool_):
        return bool(obj)
    if isinstance(obj, int | np.integer):
        return int(obj)
    if isinstance(obj, float | np.floating):
        x = float(obj)
        if isinf(x):
            return "inf" if x > 0 else "-inf"
        if isnan(x):
            raise DomainError("refusing to serialize NaN")
        return x
    if isinstance(obj, complex | np.complexfloating):
        return [float(obj.real), float(obj.imag)]
    return obj


class RunRecord(BaseModel):
    """
    Everything needed to reproduce one command: its inputs, outputs, the toolkit
    version and, for stochastic commands, the seed.
    """

    command: str
    inputs: dict[str, Any]
    outputs: Any
    versions: str = __version__
    seed: int | None = None

    def to_json(self) -> str:
        return self.model_dump_json(indent=2, exclude_none=True)
