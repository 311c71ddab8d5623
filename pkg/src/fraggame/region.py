"""Point-cloud regions and weakly open constraint sets.

A Region models a player's nonempty set as a finite point cloud in insertion
order (first occurrence wins; ties everywhere downstream break by stored
order). An optional ``sup_hint`` declares a supremum that no point attains,
emulating unattained suprema over infinite sets; filters drop the hint, and an
adversary that wants to keep the emulation alive must re-declare it.

A WeakOpenSet is a finite conjunction of strict open halfspaces f(x) > t and
strict norm lower bounds ||x|| > r. Both constituents are weakly open: open
halfspaces by definition of the weak topology, ball complements because closed
balls are convex and norm-closed, hence weakly closed. Membership is decided
pointwise with exact float comparisons; tolerances belong in tests, not here.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .space import Functional, NormSpec, Vector


@dataclass(frozen=True)
class WeakOpenSet:
    """Conjunction of strict halfspaces ``f(x) > t`` and shells ``||x|| > r``."""

    halfspaces: tuple[tuple[Functional, float], ...] = ()
    shells: tuple[float, ...] = ()

    def contains(self, x: Vector, spec: NormSpec) -> bool:
        for f, t in self.halfspaces:
            if not f(x) > t:
                return False
        if self.shells:
            nx = spec.norm(x)
            for r in self.shells:
                if not nx > r:
                    return False
        return True

    def to_jsonable(self) -> dict:
        return {
            "halfspaces": [{"f": f.to_jsonable(), "t": t} for f, t in self.halfspaces],
            "shells": list(self.shells),
        }

    @classmethod
    def from_jsonable(cls, data: dict) -> "WeakOpenSet":
        return cls(
            halfspaces=tuple(
                (Functional.from_jsonable(h["f"]), float(h["t"])) for h in data["halfspaces"]
            ),
            shells=tuple(float(r) for r in data["shells"]),
        )


def _dedupe(points: Iterable[Vector]) -> tuple[Vector, ...]:
    seen: dict[Vector, None] = {}
    for pt in points:
        if pt not in seen:
            seen[pt] = None
    return tuple(seen)


@dataclass(frozen=True)
class Region:
    """A finite point cloud with an optional declared (unattained) supremum."""

    points: tuple[Vector, ...] = ()
    sup_hint: float | None = None

    @classmethod
    def of(cls, points: Iterable[Vector]) -> "Region":
        return cls(_dedupe(points))

    @classmethod
    def with_sup_hint(cls, points: Iterable[Vector], hint: float, spec: NormSpec) -> "Region":
        """Construct a hinted region, validating hint >= every attained norm."""
        pts = _dedupe(points)
        attained = max((spec.norm(p) for p in pts), default=0.0)
        if hint < attained:
            raise ValueError(
                f"sup_hint {hint} is below the attained norm {attained}"
            )
        return cls(pts, float(hint))

    def __len__(self) -> int:
        return len(self.points)

    def is_empty(self) -> bool:
        return not self.points

    def sup_norm(self, spec: NormSpec) -> tuple[float, Vector | None]:
        """Supremum of the norm over the region, with its attaining point if any.

        Without a hint the supremum is the attained max and the witness is the
        first point (stored order) achieving it. With a hint the supremum is
        the hint, and the witness is absent unless some point attains it
        exactly.
        """
        if self.is_empty() and self.sup_hint is None:
            raise ValueError("sup over empty set")
        best: Vector | None = None
        best_norm = -1.0
        for pt in self.points:
            n = spec.norm(pt)
            if n > best_norm:
                best, best_norm = pt, n
        if self.sup_hint is None:
            assert best is not None
            return best_norm, best
        if best is not None and best_norm == self.sup_hint:
            return self.sup_hint, best
        return self.sup_hint, None

    def slice(self, f: Functional, t: float) -> "Region":
        """Strict halfspace filter {x in region : f(x) > t}; drops the hint."""
        return Region(tuple(pt for pt in self.points if f(pt) > t))

    def shell(self, spec: NormSpec, r: float) -> "Region":
        """Strict norm filter {x in region : ||x|| > r}, r >= 0; drops the hint."""
        if r < 0:
            raise ValueError(f"shell radius must be non-negative, got {r}")
        return Region(tuple(pt for pt in self.points if spec.norm(pt) > r))

    def restrict(self, w: WeakOpenSet, spec: NormSpec) -> "Region":
        """Filter by every constraint of a weakly open set; drops the hint."""
        return Region(tuple(pt for pt in self.points if w.contains(pt, spec)))

    def diameter(self, spec: NormSpec) -> float:
        """Max pairwise distance, exact O(n^2) scan; 0 for singletons."""
        if self.is_empty():
            raise ValueError("diameter of empty region")
        pts = self.points
        best = 0.0
        for i in range(len(pts)):
            for j in range(i + 1, len(pts)):
                d = spec.norm(pts[i] - pts[j])
                if d > best:
                    best = d
        return best

    def subset_of(self, other: "Region") -> bool:
        """True iff every point of self is a point of other (exact equality)."""
        pool = set(other.points)
        return all(pt in pool for pt in self.points)

    def to_jsonable(self) -> dict:
        data: dict = {"points": [pt.to_jsonable() for pt in self.points]}
        if self.sup_hint is not None:
            data["sup_hint"] = self.sup_hint
        return data

    @classmethod
    def from_jsonable(cls, data: dict) -> "Region":
        points = tuple(Vector.from_jsonable(p) for p in data["points"])
        hint = data.get("sup_hint")
        return cls(points, None if hint is None else float(hint))


def region_of_dense(rows: Sequence[Sequence[float]]) -> Region:
    """Convenience: build a region from dense coordinate rows."""
    return Region.of(Vector.from_dense(row) for row in rows)
