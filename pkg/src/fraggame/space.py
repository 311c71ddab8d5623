"""Normed-space kernel: sparse vectors, lp norms, and supporting functionals.

Points live in the space of finitely supported real sequences. A vector is a
canonical sparse map from coordinate index to value (no stored zeros), so the
ambient dimension is unbounded and a play may introduce new coordinates at any
round. The norm is an lp norm, p in [1, inf]; its dual is lq with
1/p + 1/q = 1. For 1 < p < inf the norm is rotund (the unit sphere contains
no line segment) and smooth, which is exactly what the slicing strategies
exploit; p = 1 and p = inf have flat faces and serve as counterexamples.

Everything here is an immutable value with pure operations, safe to share
across concurrent plays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping


def _canonical(entries: Mapping[int, float] | Iterable[tuple[int, float]]) -> tuple[tuple[int, float], ...]:
    items = entries.items() if isinstance(entries, Mapping) else entries
    merged: dict[int, float] = {}
    for i, v in items:
        if i < 0 or i != int(i):
            raise ValueError(f"coordinate index must be a non-negative integer, got {i!r}")
        merged[int(i)] = merged.get(int(i), 0.0) + float(v)
    return tuple(sorted((i, v) for i, v in merged.items() if v != 0.0))


@dataclass(frozen=True)
class SparseCoords:
    """Shared sparse-coordinate storage for vectors and functionals."""

    entries: tuple[tuple[int, float], ...] = ()

    @classmethod
    def from_dict(cls, entries: Mapping[int, float]):
        return cls(_canonical(entries))

    @classmethod
    def from_dense(cls, values: Iterable[float]):
        return cls(_canonical(enumerate(values)))

    def as_dict(self) -> dict[int, float]:
        return dict(self.entries)

    def get(self, index: int) -> float:
        for i, v in self.entries:
            if i == index:
                return v
        return 0.0

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.entries)

    def is_zero(self) -> bool:
        return not self.entries

    def to_jsonable(self) -> list[list[float]]:
        return [[i, v] for i, v in self.entries]

    @classmethod
    def from_jsonable(cls, pairs: Iterable[Iterable[float]]):
        return cls(_canonical((int(i), float(v)) for i, v in pairs))


class Vector(SparseCoords):
    """A finitely supported point, stored in canonical sparse form."""

    def __add__(self, other: "Vector") -> "Vector":
        merged = self.as_dict()
        for i, v in other.entries:
            merged[i] = merged.get(i, 0.0) + v
        return Vector(_canonical(merged))

    def __sub__(self, other: "Vector") -> "Vector":
        merged = self.as_dict()
        for i, v in other.entries:
            merged[i] = merged.get(i, 0.0) - v
        return Vector(_canonical(merged))

    def __mul__(self, scalar: float) -> "Vector":
        return Vector(_canonical((i, v * scalar) for i, v in self.entries))

    __rmul__ = __mul__

    def __repr__(self) -> str:
        inside = ", ".join(f"{i}: {v}" for i, v in self.entries)
        return f"Vector({{{inside}}})"


class Functional(SparseCoords):
    """A coordinate functional acting by dot product over the shared support."""

    def __call__(self, v: Vector) -> float:
        if len(self.entries) > len(v.entries):
            small, big = v, self
        else:
            small, big = self, v
        lookup = big.as_dict()
        return math.fsum(val * lookup[i] for i, val in small.entries if i in lookup)

    def __repr__(self) -> str:
        inside = ", ".join(f"{i}: {v}" for i, v in self.entries)
        return f"Functional({{{inside}}})"


def evaluate(f: Functional, v: Vector) -> float:
    """Apply a functional to a vector (sum of products over the common support)."""
    return f(v)


@dataclass(frozen=True)
class NormSpec:
    """The ambient lp norm, p in [1, inf], with its dual exponent and convexity flags.

    rotund/smooth are true exactly when 1 < p < inf: the lp unit sphere
    contains a nontrivial line segment iff p is 1 or inf.
    """

    p: float

    def __post_init__(self) -> None:
        if not (self.p >= 1.0):
            raise ValueError(f"p must satisfy 1 <= p <= inf, got {self.p}")

    @property
    def q(self) -> float:
        """Dual exponent: 1/p + 1/q = 1, with q = inf for p = 1 and q = 1 for p = inf."""
        if self.p == 1.0:
            return math.inf
        if math.isinf(self.p):
            return 1.0
        return self.p / (self.p - 1.0)

    @property
    def rotund(self) -> bool:
        return 1.0 < self.p < math.inf

    @property
    def smooth(self) -> bool:
        return 1.0 < self.p < math.inf

    def _p_norm(self, entries: tuple[tuple[int, float], ...], exponent: float) -> float:
        if not entries:
            return 0.0
        if math.isinf(exponent):
            return max(abs(v) for _, v in entries)
        if exponent == 1.0:
            return math.fsum(abs(v) for _, v in entries)
        if exponent == 2.0:
            return math.sqrt(math.fsum(v * v for _, v in entries))
        # Scale by the max entry so large exponents cannot overflow.
        top = max(abs(v) for _, v in entries)
        return top * math.fsum((abs(v) / top) ** exponent for _, v in entries) ** (1.0 / exponent)

    def norm(self, v: Vector) -> float:
        """lp norm of a vector; zero iff v is the zero vector."""
        return self._p_norm(v.entries, self.p)

    def dual_norm(self, f: Functional) -> float:
        """Operator norm of a functional, i.e. the lq norm of its coefficients."""
        return self._p_norm(f.entries, self.q)

    def support_functional(self, x: Vector) -> Functional:
        """A norm-attaining unit functional: dual_norm(mu) = 1 and mu(x) = norm(x).

        For 1 < p < inf this is the (unique) normalized gradient of the norm at
        x. The flat cases are handled by convention so the result is total and
        deterministic: p = 1 takes the sign vector on the support, p = inf
        takes the signed coordinate functional at the lowest index achieving
        the max, and x = 0 returns the unit functional at index 0.
        """
        if x.is_zero():
            return Functional(((0, 1.0),))
        if math.isinf(self.p):
            top = max(abs(v) for _, v in x.entries)
            for i, v in x.entries:
                if abs(v) == top:
                    return Functional(((i, math.copysign(1.0, v)),))
            raise AssertionError("unreachable: max not attained on its own support")
        if self.p == 1.0:
            return Functional(_canonical((i, math.copysign(1.0, v)) for i, v in x.entries))
        nx = self.norm(x)
        power = self.p - 1.0
        return Functional(
            _canonical((i, math.copysign((abs(v) / nx) ** power, v)) for i, v in x.entries)
        )


def parse_p(text: str) -> float:
    """Parse an exponent argument: a number, or 'inf' (case-insensitive)."""
    lowered = text.strip().lower()
    if lowered in ("inf", "infinity", "oo"):
        return math.inf
    return float(text)
