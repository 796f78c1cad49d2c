"""Ensemble JSON files.

    {
      "id": "trine-mixed",                      optional
      "dim": 2,
      "states": [
        {"prior": 0.333..., "matrix": [[[re, im], [re, im]], [[re, im], [re, im]]]},
        ...
      ],
      "family": {"kind": "qubit", "n": 3, "theta": 1.57..., "r": 0.333...}   optional
    }

``family`` declares which symmetric family the states come from. It selects
the no-signaling construction. ``bound file`` rejects a declaration that
does not reproduce the states; ``compare`` uses it anyway, so a mismatch
shows up as a failed ordering.
"""

import json
import logging
from pathlib import Path
from typing import Annotated, List, Literal, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field, ValidationError, model_validator

from src.linalg.errors import StateError
from src.linalg.matcore import frobenius
from src.states.operators import DensityOperator, Ensemble

logger = logging.getLogger(__name__)

ComplexPair = Tuple[float, float]
EncodedMatrix = List[List[ComplexPair]]


class EnsembleFileError(ValueError):
    """Unreadable or invalid ensemble file; ``invariant`` and ``index`` locate the problem."""

    def __init__(self, message: str, invariant: str = "schema", index: Optional[int] = None):
        self.invariant = invariant
        self.index = index
        where = f" (state {index})" if index is not None else ""
        super().__init__(f"{invariant}{where}: {message}")


class StateEntry(BaseModel):
    prior: float
    matrix: EncodedMatrix


class QubitFamilySpec(BaseModel):
    kind: Literal["qubit"] = "qubit"
    n: int = Field(..., ge=2)
    theta: float
    r: float = Field(..., ge=0.0, le=1.0)


class SpinFamilySpec(BaseModel):
    kind: Literal["spin"] = "spin"
    two_j: int = Field(..., ge=1)
    alpha: float
    thetas: List[float] = Field(..., min_length=2)


FamilySpec = Annotated[Union[QubitFamilySpec, SpinFamilySpec], Field(discriminator="kind")]


class EnsembleFile(BaseModel):
    """Schema of an ensemble file; ``to_ensemble`` enforces the state invariants."""
    id: Optional[str] = None
    dim: int = Field(..., ge=1)
    states: List[StateEntry]
    family: Optional[FamilySpec] = None

    @model_validator(mode="after")
    def check_shapes(self):
        for i, entry in enumerate(self.states):
            rows = entry.matrix
            if len(rows) != self.dim or any(len(row) != self.dim for row in rows):
                shape = f"{len(rows)}x{max((len(r) for r in rows), default=0)}"
                raise ValueError(f"state {i}: matrix is {shape}, expected {self.dim}x{self.dim}")
        return self

    def to_ensemble(self) -> Ensemble:
        states = []
        for i, entry in enumerate(self.states):
            try:
                states.append(DensityOperator.from_matrix(decode_matrix(entry.matrix), index=i))
            except StateError as e:
                raise EnsembleFileError(e.detail, invariant=e.invariant, index=i) from e
        try:
            return Ensemble(tuple(s.prior for s in self.states), tuple(states))
        except StateError as e:
            raise EnsembleFileError(e.detail, invariant=e.invariant, index=e.index) from e


def decode_matrix(rows: EncodedMatrix) -> np.ndarray:
    return np.array([[complex(re, im) for re, im in row] for row in rows], dtype=np.complex128)


def encode_matrix(m: np.ndarray, digits: Optional[int] = None) -> EncodedMatrix:
    """Row-major [re, im] pairs, optionally rounded to ``digits`` significant digits."""
    def fmt(x: float) -> float:
        x = float(x)
        return float(f"{x:.{digits}g}") if digits else x

    return [[(fmt(z.real), fmt(z.imag)) for z in row] for row in np.asarray(m)]


def ensemble_to_file(
    ensemble: Ensemble,
    ensemble_id: Optional[str] = None,
    family: Optional[Union[QubitFamilySpec, SpinFamilySpec]] = None,
) -> EnsembleFile:
    return EnsembleFile(
        id=ensemble_id,
        dim=ensemble.dim,
        states=[
            StateEntry(prior=p, matrix=encode_matrix(s.matrix))
            for p, s in zip(ensemble.priors, ensemble.states)
        ],
        family=family,
    )


def write_ensemble_file(
    path: Union[str, Path],
    ensemble: Ensemble,
    ensemble_id: Optional[str] = None,
    family: Optional[Union[QubitFamilySpec, SpinFamilySpec]] = None,
) -> Path:
    """Write an ensemble at full float precision."""
    path = Path(path)
    doc = ensemble_to_file(ensemble, ensemble_id, family)
    path.write_text(doc.model_dump_json(indent=2, exclude_none=True), encoding="utf-8")
    return path


def read_ensemble_file(path: Union[str, Path]) -> EnsembleFile:
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except OSError as e:
        raise EnsembleFileError(str(e), invariant="file") from e
    except json.JSONDecodeError as e:
        raise EnsembleFileError(f"not valid JSON: {e}", invariant="json") from e

    try:
        doc = EnsembleFile.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        loc = first.get("loc", ())
        index = loc[1] if len(loc) > 1 and loc[0] == "states" and isinstance(loc[1], int) else None
        raise EnsembleFileError(first.get("msg", str(e)), invariant="schema", index=index) from e
    if doc.id is None:
        doc.id = path.stem
    return doc


def load_ensemble(path: Union[str, Path]) -> Tuple[str, Ensemble, EnsembleFile]:
    """Parse ``path`` into (ensemble id, validated Ensemble, raw document)."""
    doc = read_ensemble_file(path)
    ensemble = doc.to_ensemble()
    logger.info("Loaded ensemble '%s': %d states of dimension %d", doc.id, ensemble.size, ensemble.dim)
    return doc.id, ensemble, doc


def same_ensemble(a: Ensemble, b: Ensemble, tol: float) -> bool:
    """Members agree in order, priors and matrices within ``tol``."""
    if a.size != b.size or a.dim != b.dim:
        return False
    if any(abs(p - q) > tol for p, q in zip(a.priors, b.priors)):
        return False
    return all(frobenius(x.matrix, y.matrix) <= tol for x, y in zip(a.states, b.states))
