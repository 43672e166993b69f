"""JSON problem files.

Complex numbers are ``[re, im]`` pairs.  Polynomials in several variables
are lists of ``[multi_index, re, im]`` terms.
"""

from __future__ import annotations

import json
from typing import Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from .errors import SchemaError
from .jets import HermitianDefiningFunction
from .kaehler import HoloEmbedding
from .lemma import BidegreePoly
from .tensors import is_positive_definite
from .webster import Grid

Pair = tuple[float, float]
Term = tuple[list[int], float, float]


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", allow_inf_nan=False, frozen=True)


class GridSpec(_Strict):
    center: Pair = (0.0, 0.0)
    radius: float = Field(ge=0)
    steps: int = Field(ge=1)

    def to_grid(self) -> Grid:
        return Grid(complex(*self.center), self.radius, self.steps)


class Families(_Strict):
    g: list[list[Term]]
    f: list[list[Term]]


class ProblemFile(_Strict):
    kind: Literal["revolution", "lemma", "embedding", "sphere-map"]
    n: int = Field(ge=1, le=16)
    N: Optional[int] = Field(default=None, ge=1, le=16)
    kappa: Optional[Literal[-1, 0, 1]] = None
    source_kappa: Optional[Literal[-1, 0, 1]] = None
    q_coeffs: Optional[list[tuple[int, int, float, float]]] = None
    h_matrix: Optional[list[Pair]] = None
    families: Optional[Families] = None
    map_coeffs: Optional[list[list[Term]]] = None
    grid: Optional[GridSpec] = None
    samples: Optional[list[list[Pair]]] = None
    tol: Optional[float] = Field(default=None, gt=0)
    exact: bool = False

    @model_validator(mode="after")
    def _required_for_kind(self):
        need = {
            "revolution": ("q_coeffs",),
            "lemma": ("families",),
            "embedding": ("map_coeffs", "kappa", "samples"),
            "sphere-map": ("q_coeffs", "map_coeffs", "samples"),
        }[self.kind]
        for name in need:
            if getattr(self, name) is None:
                raise ValueError(f"field {name!r} is required for kind {self.kind!r}")
        return self

    # conversions ----------------------------------------------------------
    def defining_function(self) -> HermitianDefiningFunction:
        for a, b, *_ in self.q_coeffs:
            if a < 0 or b < 0:
                raise SchemaError("q_coeffs", f"negative exponent ({a}, {b})")
        return HermitianDefiningFunction.from_terms(self.q_coeffs)

    def h(self) -> np.ndarray:
        if self.h_matrix is None:
            return np.eye(self.n, dtype=complex)
        return np.array([complex(*p) for p in self.h_matrix]).reshape(self.n, self.n)

    def families_as_polys(self) -> tuple[list[BidegreePoly], list[BidegreePoly]]:
        def conv(poly):
            return BidegreePoly.holomorphic(self.n, {tuple(I): complex(re, im) for I, re, im in poly})

        return [conv(p) for p in self.families.g], [conv(p) for p in self.families.f]

    def embedding(self, n_vars: int) -> HoloEmbedding:
        return HoloEmbedding.from_terms(n_vars, self.map_coeffs)

    def sample_points(self) -> list[np.ndarray]:
        return [np.array([complex(*p) for p in s]) for s in self.samples]


def _validate_semantics(p: ProblemFile) -> None:
    if p.q_coeffs is not None:
        p.defining_function()  # raises RealityViolation
    if p.h_matrix is not None:
        if len(p.h_matrix) != p.n * p.n:
            raise SchemaError("h_matrix", f"expected {p.n * p.n} entries for n={p.n}")
        h = p.h()
        if np.abs(h - h.conj().T).max() > 1e-12 * max(1.0, np.abs(h).max()):
            raise SchemaError("h_matrix", "matrix is not Hermitian")
        if not is_positive_definite(h):
            raise SchemaError("h_matrix", "matrix is not positive definite")
    n_vars = p.n + 1 if p.kind == "sphere-map" else p.n
    for label, polys in (
        ("map_coeffs", p.map_coeffs or []),
        ("families.g", p.families.g if p.families else []),
        ("families.f", p.families.f if p.families else []),
    ):
        for i, poly in enumerate(polys):
            for j, (I, _, _) in enumerate(poly):
                if len(I) != n_vars or min(I, default=0) < 0:
                    raise SchemaError(f"{label}.{i}.{j}", f"multi-index must have {n_vars} non-negative entries")
    if p.kind == "embedding":
        if p.N is not None and p.N != len(p.map_coeffs):
            raise SchemaError("N", f"N={p.N} but map has {len(p.map_coeffs)} components")
        for i, s in enumerate(p.samples):
            if len(s) != p.n:
                raise SchemaError(f"samples.{i}", f"expected {p.n} coordinates")
    if p.kind == "sphere-map":
        for i, s in enumerate(p.samples):
            if len(s) not in (1, p.n + 1):
                raise SchemaError(f"samples.{i}", f"expected [w] or [w, u_1..u_{p.n}]")


def parse_problem(data: bytes | str) -> ProblemFile:
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise SchemaError("$", f"input is not UTF-8: {exc}") from None
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"invalid JSON: {exc}") from None
    try:
        problem = ProblemFile.model_validate(raw)
    except ValidationError as exc:
        err = exc.errors()[0]
        path = ".".join(str(x) for x in err["loc"]) or "$"
        raise SchemaError(path, err["msg"]) from None
    try:
        _validate_semantics(problem)
    except ValueError as exc:
        raise SchemaError("$", str(exc)) from None
    return problem


def echo(problem: ProblemFile) -> dict:
    return problem.model_dump(mode="json", exclude_none=True)
