"""Move rules for both players of the set-selection game.

The open-set player has three strategies, each returning the chosen region
together with the weakly open set certifying that the choice is relatively
open in its parent (re-filtering the parent by that set must reproduce the
choice exactly):

* ``rotund``: take the norm supremum rho of the current set, pick a point
  whose norm clears rho - 1/(n+1), slice by its supporting functional at the
  same threshold. On a rotund norm the thresholds squeeze the surviving set
  onto a single norm-attaining point; on a flat-faced norm a whole face can
  ride the slices forever, which is exactly the failure the face adversary
  exhibits.
* ``kadec``: maintain a tolerance budget epsilon_n starting at 1. If some
  point's proximity-witness margin alpha reaches past the supremum
  (alpha + ||x|| > rho), intersect with the witness set and peel the shell
  ||y|| > ||x|| - alpha; the survivors all sit within epsilon_n of x, so the
  set has diameter < 2 epsilon_n, and the budget halves. Otherwise (only
  possible when the supremum is an unattained hint) peel the shell
  ||y|| > (1 - 1/(n+1)) rho and keep the budget.
* ``naive``: box the first point with 2d strict halfspaces of half-width
  1/(4n(1+d)), giving diameter < 1/n outright. This is the strategy available
  once fragmentability is already known; it needs no norm geometry.

The subset player's adversaries (identity, random subset, flat-face filter,
farthest pair, asymptote hint re-declarer) all obey the legality rule: a
filter that would empty the set falls back to returning it unchanged.

Strategy objects are immutable; moves return fresh state, so independent
plays can share them freely.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .errors import HintStarvationError
from .kadec import KadecWitness, kadec_witness
from .region import Region, WeakOpenSet
from .space import Functional, NormSpec, Vector


@dataclass(frozen=True)
class OmegaMove:
    """A chosen region plus the weakly open certificate and trace annotations."""

    b: Region
    open_set: WeakOpenSet
    rho: float | None = None
    x: Vector | None = None
    mu: Functional | None = None
    case: str | None = None
    epsilon: float | None = None
    alpha: float | None = None


@dataclass(frozen=True)
class RotundState:
    """Per-round (rho, x, mu) history; rho must never increase along a play."""

    rounds: tuple[tuple[float, Vector, Functional], ...] = ()


@dataclass(frozen=True)
class KadecState:
    """Current tolerance budget and the case tag history."""

    epsilon: float = 1.0
    cases: tuple[str, ...] = ()


@dataclass(frozen=True)
class NaiveState:
    rounds_played: int = 0


def rotund_move(
    state: RotundState, a: Region, n: int, spec: NormSpec
) -> tuple[OmegaMove, RotundState]:
    """Slice by a supporting functional at threshold rho - 1/(n+1)."""
    rho, witness = a.sup_norm(spec)
    if state.rounds:
        assert rho <= state.rounds[-1][0], "supremum increased along the play"
    margin = 1.0 / (n + 1)
    threshold = rho - margin
    if witness is not None:
        x = witness
    else:
        x = next((pt for pt in a.points if spec.norm(pt) > threshold), None)
        if x is None:
            raise HintStarvationError("hint starves strategy")
    mu = spec.support_functional(x)
    open_set = WeakOpenSet(halfspaces=((mu, threshold),))
    b = a.restrict(open_set, spec)
    if b.is_empty():
        raise HintStarvationError("hint starves strategy")
    move = OmegaMove(b=b, open_set=open_set, rho=rho, x=x, mu=mu)
    return move, RotundState(state.rounds + ((rho, x, mu),))


def kadec_move(
    state: KadecState, a: Region, n: int, spec: NormSpec, rng_seed: int = 0
) -> tuple[OmegaMove, KadecState]:
    """Witness slice-and-shell when some margin reaches the supremum, else shell."""
    if not spec.rotund:
        raise ValueError("the kadec strategy requires a rotund lp norm (1 < p < inf)")
    rho, witness = a.sup_norm(spec)
    epsilon = state.epsilon

    chosen: tuple[Vector, KadecWitness] | None = None
    candidates = [witness] if witness is not None else []
    candidates += [pt for pt in a.points if pt is not witness]
    for x in candidates:
        wit = kadec_witness(x, epsilon, spec, rng_seed=rng_seed)
        if wit.alpha + spec.norm(x) > rho:
            chosen = (x, wit)
            break

    if chosen is not None:
        x, wit = chosen
        shell_r = spec.norm(x) - wit.alpha
        open_set = WeakOpenSet(
            halfspaces=wit.w.halfspaces,
            shells=(shell_r,) if shell_r > 0.0 else (),
        )
        b = a.restrict(open_set, spec)
        if b.is_empty():
            raise HintStarvationError("hint starves strategy")
        move = OmegaMove(
            b=b, open_set=open_set, rho=rho, x=x, mu=wit.mu,
            case="case1", epsilon=epsilon, alpha=wit.alpha,
        )
        return move, KadecState(epsilon / 2.0, state.cases + ("case1",))

    open_set = WeakOpenSet(shells=((1.0 - 1.0 / (n + 1)) * rho,))
    b = a.restrict(open_set, spec)
    if b.is_empty():
        raise HintStarvationError("hint starves strategy")
    move = OmegaMove(b=b, open_set=open_set, rho=rho, case="case2", epsilon=epsilon)
    return move, KadecState(epsilon, state.cases + ("case2",))


def naive_move(
    state: NaiveState, a: Region, n: int, spec: NormSpec
) -> tuple[OmegaMove, NaiveState]:
    """Box the first point tightly enough that the result has diameter < 1/n."""
    x = a.points[0]
    coords = sorted({i for pt in a.points for i in pt.support()})
    d = len(coords)
    width = 1.0 / (4.0 * n * (1 + d)) if d else 0.0
    halfspaces = []
    for i in coords:
        xi = x.get(i)
        halfspaces.append((Functional(((i, 1.0),)), xi - width))
        halfspaces.append((Functional(((i, -1.0),)), -xi - width))
    open_set = WeakOpenSet(halfspaces=tuple(halfspaces))
    b = a.restrict(open_set, spec)
    move = OmegaMove(b=b, open_set=open_set, x=x)
    return move, NaiveState(state.rounds_played + 1)


def sigma_identity(b: Region) -> Region:
    """The maximal legal answer: hand the whole set back."""
    return b


def sigma_random(b: Region, fraction: float, rng: random.Random) -> Region:
    """A uniformly chosen nonempty subset of ceil(fraction * |b|) points."""
    if not 0.0 < fraction <= 1.0:
        raise ValueError(f"fraction must be in (0, 1], got {fraction}")
    k = max(1, math.ceil(fraction * len(b)))
    picked = sorted(rng.sample(range(len(b.points)), k))
    return Region(tuple(b.points[i] for i in picked))


def sigma_face(
    b: Region, spec: NormSpec, face_functional: Functional, face_value: float
) -> Region:
    """Keep the points on a flat face f(x) = v; fall back to b if none match."""
    matched = tuple(
        pt for pt in b.points if abs(face_functional(pt) - face_value) <= 1e-12
    )
    return Region(matched) if matched else b


def sigma_farthest_pair(b: Region, spec: NormSpec) -> Region:
    """The two points realizing the diameter (lowest index pair on ties)."""
    pts = b.points
    if len(pts) <= 2:
        return Region(pts)
    best = (0, 1)
    best_d = spec.norm(pts[0] - pts[1])
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            d = spec.norm(pts[i] - pts[j])
            if d > best_d:
                best, best_d = (i, j), d
    return Region((pts[best[0]], pts[best[1]]))


def sigma_asymptote(b: Region, spec: NormSpec, hint: float) -> Region:
    """Re-declare the supremum hint so the unattained-sup emulation persists."""
    try:
        return Region.with_sup_hint(b.points, hint, spec)
    except ValueError:
        return b


class RotundOmega:
    name = "rotund"

    def initial_state(self) -> RotundState:
        return RotundState()

    def move(self, state, a, n, spec, rng_seed):
        return rotund_move(state, a, n, spec)


class KadecOmega:
    name = "kadec"

    def initial_state(self) -> KadecState:
        return KadecState()

    def move(self, state, a, n, spec, rng_seed):
        return kadec_move(state, a, n, spec, rng_seed=rng_seed)


class NaiveOmega:
    name = "naive"

    def initial_state(self) -> NaiveState:
        return NaiveState()

    def move(self, state, a, n, spec, rng_seed):
        return naive_move(state, a, n, spec)


class IdentitySigma:
    name = "identity"

    def move(self, b, spec, rng):
        return sigma_identity(b)


class RandomSigma:
    def __init__(self, fraction: float):
        if not 0.0 < fraction <= 1.0:
            raise ValueError(f"fraction must be in (0, 1], got {fraction}")
        self.fraction = fraction
        self.name = f"random:{fraction}"

    def move(self, b, spec, rng):
        return sigma_random(b, self.fraction, rng)


class FaceSigma:
    def __init__(self, index: int, value: float):
        self.functional = Functional(((index, 1.0),))
        self.value = value
        self.name = f"face:{index}:{value}"

    def move(self, b, spec, rng):
        return sigma_face(b, spec, self.functional, self.value)


class FarthestPairSigma:
    name = "farthest-pair"

    def move(self, b, spec, rng):
        return sigma_farthest_pair(b, spec)


class AsymptoteSigma:
    def __init__(self, hint: float):
        self.hint = hint
        self.name = f"asymptote:{hint}"

    def move(self, b, spec, rng):
        return sigma_asymptote(b, spec, self.hint)


def make_omega(strategy: str):
    """Resolve an open-set player id: rotund | kadec | naive."""
    table = {"rotund": RotundOmega, "kadec": KadecOmega, "naive": NaiveOmega}
    if strategy not in table:
        raise ValueError(f"unknown omega strategy {strategy!r}")
    return table[strategy]()


def make_sigma(strategy: str):
    """Resolve a subset player id.

    Accepted forms: identity, random:<fraction>, face:<index>:<value>,
    farthest-pair, asymptote:<hint>.
    """
    if strategy == "identity":
        return IdentitySigma()
    if strategy == "farthest-pair":
        return FarthestPairSigma()
    head, _, rest = strategy.partition(":")
    if head == "random" and rest:
        return RandomSigma(float(rest))
    if head == "face" and rest:
        idx_text, _, value_text = rest.partition(":")
        if not value_text:
            raise ValueError(f"face adversary needs face:<index>:<value>, got {strategy!r}")
        return FaceSigma(int(idx_text), float(value_text))
    if head == "asymptote" and rest:
        return AsymptoteSigma(float(rest))
    raise ValueError(f"unknown sigma strategy {strategy!r}")
