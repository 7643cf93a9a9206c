# genericity/models/torus.py
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, Mapping

from genericity.core.errors import InvalidInputError


@dataclass(frozen=True, slots=True)
class IntMatrix2:
    """Determinant-one integer matrix [[a, b], [c, d]], a mapping class of the punctured torus."""
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if det != 1:
            raise InvalidInputError(f"determinant must be 1, got {det} for {self.entries()}")

    @classmethod
    def parse(cls, text: str) -> "IntMatrix2":
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 4:
            raise InvalidInputError(f"expected four comma-separated entries, got '{text}'")
        try:
            a, b, c, d = (int(p) for p in parts)
        except ValueError:
            raise InvalidInputError(f"matrix entries must be integers: '{text}'")
        return cls(a, b, c, d)

    @classmethod
    def identity(cls) -> "IntMatrix2":
        return cls(1, 0, 0, 1)

    def entries(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    @property
    def trace(self) -> int:
        return self.a + self.d

    def __matmul__(self, other: "IntMatrix2") -> "IntMatrix2":
        a, b, c, d = self.entries()
        e, f, g, h = other.entries()
        return IntMatrix2(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def __neg__(self) -> "IntMatrix2":
        return IntMatrix2(-self.a, -self.b, -self.c, -self.d)

    def inverse(self) -> "IntMatrix2":
        return IntMatrix2(self.d, -self.b, -self.c, self.a)

    def transpose(self) -> "IntMatrix2":
        return IntMatrix2(self.a, self.c, self.b, self.d)

    def power(self, n: int) -> "IntMatrix2":
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        result = IntMatrix2.identity()
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def is_central(self) -> bool:
        return self.b == 0 and self.c == 0

    def __str__(self) -> str:
        return f"{self.a},{self.b},{self.c},{self.d}"


# standard generators of SL2Z
S = IntMatrix2(0, -1, 1, 0)
T = IntMatrix2(1, 1, 0, 1)
L = IntMatrix2(1, 0, 1, 1)
R = T


class NTKind(str, Enum):
    PERIODIC = "periodic"
    REDUCIBLE = "reducible"
    PSEUDO_ANOSOV = "pseudo-anosov"


@dataclass(frozen=True)
class NTType:
    kind: NTKind
    order: int | None = None
    dilatation: float | None = None

    @classmethod
    def periodic(cls, order: int) -> "NTType":
        return cls(NTKind.PERIODIC, order=order)

    @classmethod
    def reducible(cls) -> "NTType":
        return cls(NTKind.REDUCIBLE)

    @classmethod
    def pseudo_anosov(cls, dilatation: float) -> "NTType":
        return cls(NTKind.PSEUDO_ANOSOV, dilatation=dilatation)

    @property
    def is_pseudo_anosov(self) -> bool:
        return self.kind is NTKind.PSEUDO_ANOSOV

    def __str__(self) -> str:
        if self.kind is NTKind.PERIODIC:
            return f"periodic({self.order})"
        if self.kind is NTKind.PSEUDO_ANOSOV:
            return f"pseudo-anosov({self.dilatation!r})"
        return self.kind.value


@dataclass(frozen=True, slots=True, order=True)
class PrimitiveClass:
    """Slope of a simple closed curve: coprime (p, q) with q > 0, or (1, 0)."""
    p: int
    q: int

    def __post_init__(self):
        if gcd(self.p, self.q) != 1:
            raise InvalidInputError(f"({self.p},{self.q}) is not primitive")
        if not (self.q > 0 or (self.q == 0 and self.p == 1)):
            raise InvalidInputError(f"({self.p},{self.q}) is not in canonical sign")

    @classmethod
    def of(cls, p: int, q: int) -> "PrimitiveClass":
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        return cls(p, q)

    def __str__(self) -> str:
        return f"({self.p},{self.q})"


@dataclass(frozen=True)
class TorusMulticurve:
    """Finite positive rational combination of slopes; the empty map is the zero current."""
    components: Mapping[PrimitiveClass, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for x, w in self.components.items():
            w = Fraction(w)
            if w < 0:
                raise InvalidInputError(f"negative weight {w} on {x}")
            if w:
                clean[x] = w
        object.__setattr__(self, "components", dict(sorted(clean.items())))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[tuple[int, int], int | Fraction]]) -> "TorusMulticurve":
        out: dict[PrimitiveClass, Fraction] = {}
        for (p, q), w in pairs:
            x = PrimitiveClass.of(p, q)
            out[x] = out.get(x, Fraction(0)) + Fraction(w)
        return cls(out)

    @classmethod
    def parse(cls, text: str) -> "TorusMulticurve":
        """'p,q:w;p,q:w', e.g. '1,0:1;0,1:2'; a missing weight is 1."""
        pairs = []
        for part in (s.strip() for s in text.split(";")):
            if not part:
                continue
            slope, _, weight = part.partition(":")
            try:
                p, q = (int(v) for v in slope.split(","))
                pairs.append(((p, q), Fraction(weight.strip() or 1)))
            except (ValueError, ZeroDivisionError):
                raise InvalidInputError(f"multicurve components look like 'p,q:w', got '{part}'")
        if not pairs:
            raise InvalidInputError(f"empty multicurve '{text}'")
        return cls.from_pairs(pairs)

    def dumps(self) -> str:
        return ";".join(f"{x.p},{x.q}:{w}" for x, w in self)

    @classmethod
    def standard_pair(cls) -> "TorusMulticurve":
        return cls.from_pairs([((1, 0), 1), ((0, 1), 1)])

    def __iter__(self) -> Iterator[tuple[PrimitiveClass, Fraction]]:
        return iter(self.components.items())

    def __len__(self) -> int:
        return len(self.components)

    def __hash__(self) -> int:
        return hash(tuple(self.components.items()))

    def __eq__(self, other) -> bool:
        return isinstance(other, TorusMulticurve) and self.components == other.components

    def __add__(self, other: "TorusMulticurve") -> "TorusMulticurve":
        out = dict(self.components)
        for x, w in other:
            out[x] = out.get(x, Fraction(0)) + w
        return TorusMulticurve(out)

    def scale(self, t: Fraction | int) -> "TorusMulticurve":
        t = Fraction(t)
        if t < 0:
            raise InvalidInputError("multicurves only scale by non-negative numbers")
        return TorusMulticurve({x: w * t for x, w in self})

    def is_integral(self) -> bool:
        return all(w.denominator == 1 for _, w in self)

    def __str__(self) -> str:
        return "{" + ", ".join(f"{x}:{w}" for x, w in self) + "}"


@dataclass(frozen=True)
class GeneratingSet:
    """Inverse-closed finite generating set of SL2Z, identity excluded."""
    name: str
    elements: tuple[IntMatrix2, ...]

    def __post_init__(self):
        closed: list[IntMatrix2] = []
        for g in self.elements:
            for h in (g, g.inverse()):
                if h == IntMatrix2.identity():
                    raise InvalidInputError(f"generating set '{self.name}' contains the identity")
                if h not in closed:
                    closed.append(h)
        object.__setattr__(self, "elements", tuple(closed))

    @classmethod
    def named(cls, name: str) -> "GeneratingSet":
        sets = {
            "ST": (S, T),
            "TTt": (T, T.transpose()),
        }
        if name not in sets:
            raise InvalidInputError(f"unknown generating set '{name}', expected one of {sorted(sets)}")
        return cls(name, sets[name])

    def __len__(self) -> int:
        return len(self.elements)
