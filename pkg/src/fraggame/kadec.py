"""Proximity witnesses on lp spheres and the countable cover they induce.

The central object is a witness (alpha, W) at a point x for a tolerance
epsilon: W is a weakly open set containing x such that any y in W whose norm
is within alpha of ||x|| satisfies ||y - x|| < epsilon. On a rotund lp space
such a witness always exists and is built from a supporting-halfspace slice:

  G = {y : mu(y) > ||x|| - delta}   with mu the supporting functional at x,

where delta is shrunk until the slice of the sphere through x that G cuts out
has small diameter. The witness set is the midpoint halfspace
W = {y : mu(y) > ||x|| - delta/2}, and alpha is capped below epsilon/2, ||x||
and delta/2, which makes the proximity guarantee a pure triangle-inequality
argument: rescale y to the sphere (costs at most alpha), land inside the thin
slice (costs at most its diameter).

For p = 1 and p = inf the unit sphere has flat faces and every supporting
slice at a face point contains the whole face, so no shrinking delta exists;
the search surfaces this as FacePointError instead of masking it.

delta is certified by seeded sampling (a 10% safety margin on the target
diameter), not by closed-form moduli, so the same code covers every
p in (1, inf); tests cross-check p = 2 against the exact circle-chord formula.

Grouping points by the size of their alpha and by their norm band yields a
countable cover of the space in which same-group points that see each other
through their witness sets are epsilon-close; ``cover_check`` verifies that
property on concrete clouds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CoverExhaustionError, FacePointError
from .region import WeakOpenSet
from .space import Functional, NormSpec, Vector

_DELTA_FLOOR = 1e-12
_SAFETY = 0.1  # sampled slice diameter must beat (1 - _SAFETY) * epsilon/2
_ALPHA_SHRINK = 0.9  # keeps the witness inequalities strict under floating point
_DEFAULT_WITNESS_SAMPLES = 512
_VACUOUS_ATTEMPTS = 1_000_000
_PAIR_SCAN_CAP = 400  # full pairwise scan size cap; extremes are kept by distance


@dataclass(frozen=True)
class KadecWitness:
    """Certificate (alpha, w) that w-membership plus a norm band pins y near x."""

    alpha: float
    delta: float
    mu: Functional | None
    w: WeakOpenSet
    x: Vector
    epsilon: float

    def validate(self, spec: NormSpec) -> None:
        """Assert the construction inequalities that the proximity proof needs."""
        assert self.alpha > 0.0
        assert self.alpha < self.epsilon / 2.0
        assert self.alpha < self.delta / 2.0
        if not self.x.is_zero():
            assert self.alpha < spec.norm(self.x)
        assert self.w.contains(self.x, spec)

    def to_jsonable(self) -> dict:
        return {
            "alpha": self.alpha,
            "delta": self.delta,
            "mu": None if self.mu is None else self.mu.to_jsonable(),
            "w": self.w.to_jsonable(),
            "x": self.x.to_jsonable(),
            "epsilon": self.epsilon,
        }


@dataclass(frozen=True)
class WitnessCheck:
    """Outcome of sampling a witness: violation count plus sampling context."""

    violations: int
    admissible: int
    attempts: int
    vacuous: bool = False


@dataclass(frozen=True)
class CoverIndex:
    """Cover cell (k, n): alpha > 2/k and n/k <= ||x|| <= (n+1)/k."""

    k: int
    n: int


@dataclass
class CoverReport:
    """Groups, sizes, and proximity violations for a cover check over a cloud."""

    n_points: int = 0
    group_sizes: dict[CoverIndex, int] = field(default_factory=dict)
    violations: int = 0
    pair_checks: int = 0
    errors: list[tuple[int, str]] = field(default_factory=list)

    @property
    def n_groups(self) -> int:
        return len(self.group_sizes)


def _sample_coords(x: Vector, *funcs: Functional | None, extra: int = 2) -> list[int]:
    """Coordinates to sample over: supports involved plus fresh directions."""
    coords = set(x.support())
    for f in funcs:
        if f is not None:
            coords.update(f.support())
    fresh = 0
    i = 0
    while fresh < extra:
        if i not in coords:
            coords.add(i)
            fresh += 1
        i += 1
    return sorted(coords)


def _dense(v: Vector | Functional, coords: list[int]) -> np.ndarray:
    lookup = v.as_dict()
    return np.array([lookup.get(i, 0.0) for i in coords], dtype=float)


def _np_norm(arr: np.ndarray, p: float) -> np.ndarray:
    """Row-wise lp norms of a 2-D array."""
    a = np.abs(arr)
    if math.isinf(p):
        return a.max(axis=1)
    if p == 1.0:
        return a.sum(axis=1)
    if p == 2.0:
        return np.sqrt((a * a).sum(axis=1))
    return (a**p).sum(axis=1) ** (1.0 / p)


def _max_pairwise(pts: np.ndarray, p: float) -> float:
    """Exact max pairwise lp distance, chunked to bound memory."""
    m = pts.shape[0]
    if m < 2:
        return 0.0
    best = 0.0
    chunk = max(1, 2_000_000 // (m * pts.shape[1] + 1))
    for lo in range(0, m, chunk):
        diff = pts[lo : lo + chunk, None, :] - pts[None, :, :]
        if math.isinf(p):
            d = np.abs(diff).max(axis=2)
        elif p == 1.0:
            d = np.abs(diff).sum(axis=2)
        elif p == 2.0:
            d = np.sqrt((diff * diff).sum(axis=2))
        else:
            d = (np.abs(diff) ** p).sum(axis=2) ** (1.0 / p)
        best = max(best, float(d.max()))
    return best


def _sphere_samples(
    x: Vector, spec: NormSpec, n_samples: int, rng_seed: int
) -> tuple[np.ndarray, np.ndarray, list[int]]:
    """Points on the lp sphere through x, spread over log-spaced perturbation scales.

    Returns (samples, x_dense, coords); samples include x itself as row 0.
    """
    coords = _sample_coords(x)
    x_dense = _dense(x, coords)
    radius = float(_np_norm(x_dense[None, :], spec.p)[0])
    rng = np.random.default_rng(rng_seed)
    scales = np.exp(rng.uniform(math.log(1e-4), math.log(2.0), size=n_samples)) * radius
    dirs = rng.standard_normal((n_samples, len(coords)))
    dirs /= np.maximum(np.sqrt((dirs * dirs).sum(axis=1, keepdims=True)), 1e-300)
    raw = x_dense[None, :] + scales[:, None] * dirs
    norms = _np_norm(raw, spec.p)
    keep = norms > 0.0
    samples = raw[keep] * (radius / norms[keep])[:, None]
    return np.vstack([x_dense[None, :], samples]), x_dense, coords


def slice_delta(
    x: Vector,
    epsilon: float,
    spec: NormSpec,
    n_samples: int = _DEFAULT_WITNESS_SAMPLES,
    rng_seed: int = 0,
) -> float:
    """Slice depth delta whose sphere slice at x has sampled diameter < epsilon/2.

    Starts at delta = ||x||/2 and halves until the sampled diameter of
    {z : ||z|| = ||x||, mu(z) > ||x|| - delta} beats the target with a 10%
    safety margin. Raises FacePointError when the search bottoms out, which is
    the expected outcome at flat-face points of the p = 1 and p = inf balls.
    """
    if x.is_zero():
        raise ValueError("slice depth is undefined at the zero vector")
    if not epsilon > 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    mu = spec.support_functional(x)
    samples, x_dense, coords = _sphere_samples(x, spec, n_samples, rng_seed)
    radius = float(_np_norm(x_dense[None, :], spec.p)[0])
    mu_vals = samples @ _dense(mu, coords)
    target = (epsilon / 2.0) * (1.0 - _SAFETY)

    delta = radius / 2.0
    while True:
        in_slice = samples[mu_vals > radius - delta]
        dist_to_x = _np_norm(in_slice - x_dense[None, :], spec.p)
        max_from_x = float(dist_to_x.max()) if dist_to_x.size else 0.0
        if max_from_x < target:
            # Cheap bound inconclusive: scan the extremes exactly.
            if in_slice.shape[0] > _PAIR_SCAN_CAP:
                order = np.argsort(dist_to_x)[::-1][:_PAIR_SCAN_CAP]
                in_slice = in_slice[order]
            if _max_pairwise(in_slice, spec.p) < target:
                return delta
        delta /= 2.0
        if delta < _DELTA_FLOOR:
            raise FacePointError("no shrinking slice at face point")


def kadec_witness(
    x: Vector,
    epsilon: float,
    spec: NormSpec,
    rng_seed: int = 0,
    n_samples: int = _DEFAULT_WITNESS_SAMPLES,
) -> KadecWitness:
    """Build the proximity witness (alpha, W) at x for tolerance epsilon.

    At x = 0 the whole space works as W and alpha = epsilon/4. Otherwise W is
    the midpoint halfspace {y : mu(y) > ||x|| - delta/2} over the certified
    slice depth, and alpha = 0.9 * min(epsilon/2, ||x||, delta/2).
    """
    if not epsilon > 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if x.is_zero():
        wit = KadecWitness(
            alpha=epsilon / 4.0,
            delta=epsilon,
            mu=None,
            w=WeakOpenSet(),
            x=x,
            epsilon=epsilon,
        )
        wit.validate(spec)
        return wit
    mu = spec.support_functional(x)
    delta = slice_delta(x, epsilon, spec, n_samples=n_samples, rng_seed=rng_seed)
    nx = spec.norm(x)
    alpha = _ALPHA_SHRINK * min(epsilon / 2.0, nx, delta / 2.0)
    wit = KadecWitness(
        alpha=alpha,
        delta=delta,
        mu=mu,
        w=WeakOpenSet(halfspaces=((mu, nx - delta / 2.0),)),
        x=x,
        epsilon=epsilon,
    )
    wit.validate(spec)
    return wit


def verify_witness(
    wit: KadecWitness,
    spec: NormSpec,
    n_samples: int = 10_000,
    rng_seed: int = 0,
) -> WitnessCheck:
    """Sample the witness region and count proximity violations.

    Draws n_samples box points around x (half-width 2||x|| + 1), keeps the
    admissible ones (inside wit.w with norm within alpha of ||x||) and counts
    those at distance >= epsilon from x. When no admissible point shows up,
    drawing continues to 1e6 attempts before the result is declared vacuous.
    """
    funcs = [f for f, _ in wit.w.halfspaces]
    coords = _sample_coords(wit.x, *funcs)
    x_dense = _dense(wit.x, coords)
    nx = float(_np_norm(x_dense[None, :], spec.p)[0])
    half_width = 2.0 * nx + 1.0
    dense_funcs = [(_dense(f, coords), t) for f, t in wit.w.halfspaces]

    rng = np.random.default_rng(rng_seed)
    attempts = 0
    admissible = 0
    violations = 0
    budget = n_samples
    while True:
        batch = min(100_000, budget - attempts)
        ys = x_dense[None, :] + rng.uniform(-half_width, half_width, size=(batch, len(coords)))
        attempts += batch
        norms = _np_norm(ys, spec.p)
        mask = np.abs(norms - nx) <= wit.alpha
        for f_dense, t in dense_funcs:
            mask &= ys @ f_dense > t
        for r in wit.w.shells:
            mask &= norms > r
        picked = ys[mask]
        admissible += picked.shape[0]
        if picked.shape[0]:
            dists = _np_norm(picked - x_dense[None, :], spec.p)
            violations += int((dists >= wit.epsilon).sum())
        if attempts >= n_samples and admissible > 0:
            return WitnessCheck(violations, admissible, attempts)
        if attempts >= max(n_samples, _VACUOUS_ATTEMPTS):
            if admissible == 0:
                return WitnessCheck(0, 0, attempts, vacuous=True)
            return WitnessCheck(violations, admissible, attempts)
        if attempts >= budget:
            budget = max(n_samples, _VACUOUS_ATTEMPTS)


def _index_from_alpha(alpha: float, norm_x: float, k_max: int) -> CoverIndex:
    if alpha <= 0.0:
        raise CoverExhaustionError("alpha too small for k_max")
    k = max(1, math.floor(2.0 / alpha))
    while 2.0 / k >= alpha:
        k += 1
        if k > k_max:
            raise CoverExhaustionError("alpha too small for k_max")
    if k > k_max:
        raise CoverExhaustionError("alpha too small for k_max")
    n = math.floor(k * norm_x)
    while n > 0 and n / k > norm_x:
        n -= 1
    while (n + 1) / k < norm_x:
        n += 1
    return CoverIndex(k=k, n=n)


def cover_index(
    x: Vector,
    epsilon: float,
    spec: NormSpec,
    k_max: int = 1_000_000,
    rng_seed: int = 0,
) -> CoverIndex:
    """Smallest-k cover cell for x: alpha(x) > 2/k and a width-1/k norm band."""
    wit = kadec_witness(x, epsilon, spec, rng_seed=rng_seed)
    return _index_from_alpha(wit.alpha, spec.norm(x), k_max)


def cover_check(
    points: list[Vector],
    epsilon: float,
    spec: NormSpec,
    rng_seed: int = 0,
    k_max: int = 1_000_000,
) -> CoverReport:
    """Group a cloud by cover cell and verify same-group witness proximity.

    Within one cell both norms sit in a band of width 1/k and every alpha
    exceeds 2/k, so whenever y lies in x's witness set the proximity
    guarantee applies and ||y - x|| <= epsilon must hold. Per-point indexing
    errors are collected into the report rather than aborting the scan.
    """
    report = CoverReport(n_points=len(points))
    groups: dict[CoverIndex, list[tuple[Vector, KadecWitness, float]]] = {}
    for pos, x in enumerate(points):
        try:
            wit = kadec_witness(x, epsilon, spec, rng_seed=rng_seed)
            idx = _index_from_alpha(wit.alpha, spec.norm(x), k_max)
        except (CoverExhaustionError, FacePointError) as exc:
            report.errors.append((pos, str(exc)))
            continue
        groups.setdefault(idx, []).append((x, wit, spec.norm(x)))

    for idx, members in groups.items():
        report.group_sizes[idx] = len(members)
        for x, wit, nx in members:
            for y, _, ny in members:
                if y is x:
                    continue
                # Same cell forces the norm band needed by the witness guarantee.
                assert abs(ny - nx) <= (1.0 / idx.k) * (1.0 + 1e-9)
                assert 2.0 / idx.k < wit.alpha
                if wit.w.contains(y, spec):
                    report.pair_checks += 1
                    if spec.norm(y - x) > epsilon:
                        report.violations += 1
    return report
