# genericity/schemas/run_spec.py
from __future__ import annotations

import hashlib
import json
from typing import Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field, field_validator

from genericity.core.config import CACHE_FORMAT_VERSION

Scalar = Union[int, float, str, bool]


def parse_grid(text: str) -> List[int]:
    """'50:1600:x2' (geometric), '8:64:+8' (arithmetic) or '1,2,5' (explicit)."""
    text = text.strip()
    if ":" not in text:
        values = [int(v) for v in text.split(",") if v.strip()]
    else:
        start, stop, step = text.split(":")
        start, stop = int(start), int(stop)
        values = []
        x = start
        if step.startswith("x"):
            factor = int(step[1:])
            if factor < 2:
                raise ValueError(f"grid factor must be at least 2, got {factor}")
            while x <= stop:
                values.append(x)
                x *= factor
        elif step.startswith("+"):
            inc = int(step[1:])
            if inc < 1:
                raise ValueError(f"grid step must be positive, got {inc}")
            while x <= stop:
                values.append(x)
                x += inc
        else:
            raise ValueError(f"grid step must look like 'x2' or '+8', got '{step}'")
    if not values or any(v < 1 for v in values):
        raise ValueError(f"grid '{text}' has no positive values")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise ValueError(f"grid '{text}' is not increasing")
    return values


class RunSpec(BaseModel):
    """A fully materialized command invocation."""
    command: str
    model: str = "torus"
    surface: str = "1,1"
    F: str = "sum"
    grid: List[int] = Field(default_factory=list)
    word_cap: int = 14
    window: int = 1000
    seed: int = 0
    threads: int = 1
    format: Literal["csv", "json"] = "csv"
    out: Optional[str] = None
    cache: Optional[str] = None
    params: Dict[str, Scalar] = Field(default_factory=dict)

    @field_validator("grid", mode="before")
    @classmethod
    def _grid(cls, v):
        if isinstance(v, str):
            return parse_grid(v)
        return v

    @field_validator("threads", "word_cap", "window")
    @classmethod
    def _positive(cls, v):
        if v < 1:
            raise ValueError("must be at least 1")
        return v

    def canonical_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))

    def spec_hash(self) -> str:
        # results never depend on how they are computed or where they are written
        body = self.model_dump(mode="json", exclude={"threads", "format", "out", "cache"})
        text = json.dumps(body, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode("utf-8")).hexdigest()


class CacheEntry(BaseModel):
    format_version: int = CACHE_FORMAT_VERSION
    library_version: int
    spec_hash: str
    payload: List[str] = Field(default_factory=list)

    @field_validator("payload")
    @classmethod
    def _single_lines(cls, v):
        if any("\n" in line for line in v):
            raise ValueError("payload records must be single lines")
        return v

    def checksum(self) -> str:
        digest = hashlib.sha256()
        for line in self.payload:
            digest.update(line.encode("utf-8"))
            digest.update(b"\n")
        return digest.hexdigest()
