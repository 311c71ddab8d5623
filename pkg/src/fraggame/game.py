"""The alternating play loop: nesting validation, verdicts, trace records.

A play alternates the subset player (who may pass any nonempty subset of the
previous choice) and the open-set player (whose move must come with a weakly
open certificate that reproduces it from its parent). The engine validates
the nesting chain A1 >= B1 >= A2 >= ... online, enforces the unit-ball
precondition on the initial set, and scores the play:

* OmegaWinEmpty: a move emptied the candidate set, so the intersection is
  empty (vacuously at most one point). Under hint emulation emptiness is an
  artifact and surfaces as HintStarvationError instead.
* OmegaWinSingleton: the final set is a single point or has diameter < tol.
* SigmaStall: the horizon was reached with diameter >= stall_bound.
* Undetermined: the horizon was reached in between; an honest outcome, never
  coerced either way.

The infinite intersection is undecidable from finitely many rounds, so the
tol / stall_bound / horizon taxonomy is the desk-scale proxy for it.

Each round emits a TraceRecord that carries the serialized regions, the open
set, and the strategy annotations verbatim; a trace alone is enough to replay
every certificate check and the post-hoc trend conditions below.
"""

from __future__ import annotations

import enum
import json
import random
from dataclasses import dataclass, field
from typing import Sequence

from .errors import HintStarvationError, InvalidMoveError
from .region import Region, WeakOpenSet
from .space import Functional, NormSpec, Vector
from .strategies import OmegaMove, make_omega, make_sigma


class Outcome(str, enum.Enum):
    OMEGA_WIN_EMPTY = "OmegaWinEmpty"
    OMEGA_WIN_SINGLETON = "OmegaWinSingleton"
    SIGMA_STALL = "SigmaStall"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class PlayVerdict:
    outcome: Outcome
    final_diameter: float
    rounds_played: int

    def to_jsonable(self) -> dict:
        return {
            "record": "verdict",
            "outcome": self.outcome.value,
            "final_diameter": self.final_diameter,
            "rounds_played": self.rounds_played,
        }


@dataclass(frozen=True)
class TraceRecord:
    """One completed round: sizes, annotations, and the serialized sets."""

    round: int
    a_size: int
    b_size: int
    rho: float | None
    epsilon: float | None
    case: str | None
    diam_b: float
    x: Vector | None
    mu: Functional | None
    alpha: float | None
    open_set: WeakOpenSet
    a: Region
    b: Region

    def to_jsonable(self) -> dict:
        return {
            "record": "round",
            "round": self.round,
            "a_size": self.a_size,
            "b_size": self.b_size,
            "rho": self.rho,
            "epsilon": self.epsilon,
            "case": self.case,
            "diam_b": self.diam_b,
            "x": None if self.x is None else self.x.to_jsonable(),
            "mu": None if self.mu is None else self.mu.to_jsonable(),
            "alpha": self.alpha,
            "open_set": self.open_set.to_jsonable(),
            "a": self.a.to_jsonable(),
            "b": self.b.to_jsonable(),
        }

    @classmethod
    def from_jsonable(cls, data: dict) -> "TraceRecord":
        return cls(
            round=int(data["round"]),
            a_size=int(data["a_size"]),
            b_size=int(data["b_size"]),
            rho=None if data["rho"] is None else float(data["rho"]),
            epsilon=None if data["epsilon"] is None else float(data["epsilon"]),
            case=data["case"],
            diam_b=float(data["diam_b"]),
            x=None if data["x"] is None else Vector.from_jsonable(data["x"]),
            mu=None if data["mu"] is None else Functional.from_jsonable(data["mu"]),
            alpha=None if data["alpha"] is None else float(data["alpha"]),
            open_set=WeakOpenSet.from_jsonable(data["open_set"]),
            a=Region.from_jsonable(data["a"]),
            b=Region.from_jsonable(data["b"]),
        )


@dataclass
class PartialPlay:
    """The nested round history, validated as it is appended to."""

    spec: NormSpec
    rounds: list[tuple[Region, Region, OmegaMove]] = field(default_factory=list)

    def append(self, a: Region, move: OmegaMove) -> None:
        if a.is_empty():
            raise InvalidMoveError("subset player produced an empty set")
        if self.rounds:
            prev_b = self.rounds[-1][1]
            if not a.subset_of(prev_b):
                raise InvalidMoveError("subset player escaped the previous choice")
        if not move.b.subset_of(a):
            raise InvalidMoveError("open-set player escaped its parent set")
        self.rounds.append((a, move.b, move))


@dataclass(frozen=True)
class PlayResult:
    verdict: PlayVerdict
    trace: list[TraceRecord]


def run_play(
    spec: NormSpec,
    omega,
    sigma,
    initial: Region,
    max_rounds: int = 200,
    tol: float = 1e-6,
    stall_bound: float = 1e-2,
    rng_seed: int = 0,
) -> PlayResult:
    """Run one full play; deterministic given the configuration and seed.

    ``omega`` and ``sigma`` are strategy id strings (see strategies.make_omega
    / make_sigma) or objects with the same move interface. The initial set
    must live in the closed unit ball; every play is run there. Supremum
    hints may be re-declared by the adversary but never above the initial
    declaration (hint-free plays stay hint-free), since a larger hint would
    claim points the parent set never had.
    """
    if isinstance(omega, str):
        omega = make_omega(omega)
    if isinstance(sigma, str):
        sigma = make_sigma(sigma)
    if max_rounds < 1:
        raise ValueError("max_rounds must be at least 1")
    if not 0.0 < tol < stall_bound:
        raise ValueError("need 0 < tol < stall_bound")
    if initial.is_empty():
        raise ValueError("initial set is empty")
    for pt in initial.points:
        if spec.norm(pt) > 1.0:
            raise ValueError("initial set not in unit ball")
    if initial.sup_hint is not None and initial.sup_hint > 1.0:
        raise ValueError("initial set not in unit ball")
    hint_cap = initial.sup_hint

    master = random.Random(rng_seed)
    state = omega.initial_state()
    play = PartialPlay(spec)
    trace: list[TraceRecord] = []
    a = initial
    verdict: PlayVerdict | None = None

    for n in range(1, max_rounds + 1):
        sigma_seed = master.getrandbits(32)
        omega_seed = master.getrandbits(32)
        if n > 1:
            prev_b = play.rounds[-1][1]
            a = sigma.move(prev_b, spec, random.Random(sigma_seed))
            if a.is_empty():
                raise InvalidMoveError(f"round {n}: subset player chose an empty set")
            if not a.subset_of(prev_b):
                raise InvalidMoveError(f"round {n}: subset player escaped the previous choice")
            if a.sup_hint is not None and (hint_cap is None or a.sup_hint > hint_cap):
                raise InvalidMoveError(f"round {n}: declared hint exceeds the initial declaration")

        move, state = omega.move(state, a, n, spec, omega_seed)
        if a.restrict(move.open_set, spec) != move.b:
            raise AssertionError(f"round {n}: open-set certificate does not reproduce the move")

        diam = 0.0 if len(move.b) <= 1 else move.b.diameter(spec)
        trace.append(
            TraceRecord(
                round=n, a_size=len(a), b_size=len(move.b),
                rho=move.rho, epsilon=move.epsilon, case=move.case,
                diam_b=diam, x=move.x, mu=move.mu, alpha=move.alpha,
                open_set=move.open_set, a=a, b=move.b,
            )
        )
        if move.b.is_empty():
            if a.sup_hint is not None:
                raise HintStarvationError("hint starves strategy")
            verdict = PlayVerdict(Outcome.OMEGA_WIN_EMPTY, 0.0, n)
            break
        play.append(a, move)
        if len(move.b) <= 1 or diam < tol:
            verdict = PlayVerdict(Outcome.OMEGA_WIN_SINGLETON, diam, n)
            break

    if verdict is None:
        final_diam = trace[-1].diam_b
        outcome = Outcome.SIGMA_STALL if final_diam >= stall_bound else Outcome.UNDETERMINED
        verdict = PlayVerdict(outcome, final_diam, max_rounds)
    return PlayResult(verdict, trace)


def condition_iv_check(trace: Sequence[TraceRecord], window: int = 5, tol: float = 1e-6) -> bool:
    """Trend check: the candidate sets emptied out or their diameters died.

    True iff some round emptied the set, the final diameter is exactly 0, or
    the last ``window`` diameters are strictly decreasing down below tol.
    """
    if not trace:
        raise ValueError("empty trace")
    if any(rec.b_size == 0 for rec in trace):
        return True
    diams = [rec.diam_b for rec in trace]
    if diams[-1] == 0.0:
        return True
    w = min(window, len(diams))
    tail = diams[-w:]
    decreasing = all(tail[i] > tail[i + 1] for i in range(len(tail) - 1))
    return decreasing and tail[-1] < tol


def condition_v_check(
    trace: Sequence[TraceRecord],
    picks: Sequence[Vector],
    spec: NormSpec,
    tol: float = 1e-6,
) -> bool:
    """Convergence check for per-round picks against the final point.

    Requires a play that ended on a singleton (size <= 1 or diameter < tol).
    True iff the last pick is within tol of the final point and the
    midpoint-norm chain closes at the final round: both the pick's norm and
    the midpoint norm sit within tol of the final supremum. In this
    finite-dimensional model norm convergence certifies the weak cluster
    point.
    """
    if not trace:
        raise ValueError("empty trace")
    final = trace[-1]
    if final.b_size == 0 or not (final.b_size <= 1 or final.diam_b < tol):
        raise ValueError("play did not end in a singleton")
    if len(picks) != len(trace):
        raise ValueError(f"need one pick per round: {len(picks)} picks, {len(trace)} rounds")
    for rec, y in zip(trace, picks):
        if y not in rec.b.points:
            raise ValueError(f"round {rec.round}: pick is not a member of the chosen set")
    if final.rho is None:
        raise ValueError("trace lacks supremum annotations")

    x_hat = final.b.points[0]
    y_final = picks[-1]
    if not spec.norm(y_final - x_hat) < tol:
        return False
    if not abs(spec.norm(y_final) - final.rho) < tol:
        return False
    midpoint = 0.5 * (x_hat + y_final)
    return abs(spec.norm(midpoint) - final.rho) < tol


def trace_to_lines(result: PlayResult) -> list[str]:
    """Serialize a play as line-delimited self-describing records."""
    lines = [json.dumps(rec.to_jsonable()) for rec in result.trace]
    lines.append(json.dumps(result.verdict.to_jsonable()))
    return lines


def parse_trace_line(line: str) -> dict:
    return json.loads(line)
