# genericity/schemas/reports.py
from __future__ import annotations

from fractions import Fraction
from typing import List, Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

ModelName = Literal["torus", "torus-rho", "lamination"]

TORUS_COLUMNS = ["L", "total", "nonpa", "periodic", "reducible", "fraction"]
LAMINATION_COLUMNS = TORUS_COLUMNS + ["unresolved", "fraction_certified", "complete"]


class CountRow(BaseModel):
    L: int
    total: int
    nonpa: int
    periodic: int
    reducible: int
    pa: int
    unresolved: int = 0
    fraction: float
    fraction_certified: Optional[float] = None
    curve_orbits: Optional[int] = None
    complete: bool = True
    # wall time stays out of every serialized form so reports are byte-stable
    seconds: float = Field(default=0.0, exclude=True)

    @model_validator(mode="after")
    def _totals_add_up(self):
        if self.total != self.periodic + self.reducible + self.pa + self.unresolved:
            raise ValueError(f"row L={self.L}: total does not split into its classes")
        if self.nonpa != self.periodic + self.reducible + self.unresolved:
            raise ValueError(f"row L={self.L}: nonpa must count periodic, reducible and unresolved")
        if not 0.0 <= self.fraction <= 1.0:
            raise ValueError(f"row L={self.L}: fraction {self.fraction} outside [0, 1]")
        return self


class CountReport(BaseModel):
    model: ModelName
    F: str
    surface: str
    grid: List[int]
    rows: List[CountRow]

    @model_validator(mode="after")
    def _monotone(self):
        totals = [r.total for r in self.rows]
        if any(b < a for a, b in zip(totals, totals[1:])):
            raise ValueError("counts must be non-decreasing in L")
        return self

    @property
    def complete(self) -> bool:
        return all(r.complete for r in self.rows)

    @property
    def columns(self) -> list[str]:
        return TORUS_COLUMNS if self.model != "lamination" else LAMINATION_COLUMNS

    def records(self) -> list[dict]:
        cols = self.columns
        return [{c: getattr(r, c) for c in cols} for r in self.rows]


class ExponentFit(BaseModel):
    slope: float
    stderr: float
    points: int

    def __str__(self) -> str:
        return f"{self.slope:.4f} +- {self.stderr:.4f} ({self.points} points)"


class Box(BaseModel):
    lower: List[float]
    upper: List[float]

    @model_validator(mode="after")
    def _ordered(self):
        if len(self.lower) != len(self.upper):
            raise ValueError("box corners have different dimensions")
        if any(lo > hi for lo, hi in zip(self.lower, self.upper)):
            raise ValueError("box lower corner exceeds upper corner")
        return self


class EmpiricalMeasure(BaseModel):
    model: ModelName
    restriction: Literal["all", "nonPA", "isolated", "dense"]
    exponent: int
    boxes: List[Box]
    grid: List[int]
    # counts[i][j]: members in box j at grid[i]
    counts: List[List[int]]
    totals: List[int]

    @field_validator("counts")
    @classmethod
    def _non_negative(cls, v):
        if any(c < 0 for row in v for c in row):
            raise ValueError("box counts must be non-negative")
        return v

    def mass(self, i: int, j: int) -> Fraction:
        return Fraction(self.counts[i][j], self.grid[i] ** self.exponent)

    def total_mass(self, i: int) -> Fraction:
        return Fraction(self.totals[i], self.grid[i] ** self.exponent)

    def records(self) -> list[dict]:
        out = []
        for i, L in enumerate(self.grid):
            for j in range(len(self.boxes)):
                out.append({"L": L, "box": j, "count": self.counts[i][j], "mass": float(self.mass(i, j))})
        return out


class IsolationMember(BaseModel):
    matrix: str
    kind: str
    nearest: Optional[int] = None
    proximity: Optional[int] = None


class IsolationProfile(BaseModel):
    k: int
    radius: int
    generators: str
    isolated: List[IsolationMember]
    dense: List[IsolationMember]

    def records(self) -> list[dict]:
        rows = [{"set": "isolated", **m.model_dump()} for m in self.isolated]
        rows += [{"set": "dense", **m.model_dump()} for m in self.dense]
        return rows


class HistogramRow(BaseModel):
    distance: int
    count: int


class ProximityProfile(BaseModel):
    radius: int
    window: int
    phi0: List[str]
    rows: List[HistogramRow]

    def records(self) -> list[dict]:
        return [r.model_dump() for r in self.rows]


class CrossValidationResult(BaseModel):
    sample_size: int
    max_length: int
    checked: int
    discrepancies: List[str]

    @property
    def passed(self) -> bool:
        return not self.discrepancies

    def records(self) -> list[dict]:
        return [{"checked": self.checked, "passed": self.passed, "discrepancy": d} for d in self.discrepancies] or [
            {"checked": self.checked, "passed": self.passed, "discrepancy": ""}
        ]


class SurveyRow(BaseModel):
    name: str
    generators: str
    length: Optional[int] = None
    cap: int

    @property
    def shown(self) -> str:
        return str(self.length) if self.length is not None else f"exceeded({self.cap})"

    def record(self) -> dict:
        return {"name": self.name, "generators": self.generators, "length": self.shown}


class Comparability(BaseModel):
    radius: int
    min_ratio: float
    max_ratio: float

    @property
    def constant(self) -> float:
        return (self.max_ratio / self.min_ratio) ** 0.5

    def records(self) -> list[dict]:
        return [{"radius": self.radius, "min_ratio": self.min_ratio, "max_ratio": self.max_ratio, "C1": self.constant}]
