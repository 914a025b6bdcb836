"""The query game between a student and an all-knowing teacher.

Solve mode: on a shared n-bit input, the student names rows of the design
and the teacher answers each row i with the unique permutation preimage of
the input's restriction to that row.  The run succeeds the moment a reply's
hard bit disagrees with the published off-range string at the queried row;
the sequence of rows of a successful run is its trace.

Witness mode runs the same interaction but aborts on any disagreeing
reply, so the student's final output becomes a partial function of the
input: defined exactly where the solve-mode student fails.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any, Callable

from .bits import check_bits, int_to_bits
from .design import restrict
from .errors import CapabilityError
from .generator import Instance
from .seeds import derive_seed

EXHAUSTIVE_MAX_N = 14


@dataclass(frozen=True)
class Output:
    """A strategy's final move: stop querying and emit a value."""

    value: Any = None


# A move is a row index to query, an Output to stop with a value, or None
# to stop with nothing.
Move = Any


class GameView:
    """What a strategy is allowed to see and do.

    Public data: the design, the target string b, the budget c, the hard
    bit, and the strategy's advice bytes.  The forward permutation is free;
    invert is gated on the strategy's may_invert flag and every use is
    counted so reports can attribute oracle calls.
    """

    def __init__(self, inst: Instance, may_invert: bool, advice: bytes = b"") -> None:
        self.design = inst.design
        self.b = inst.b
        self.c = inst.c
        self.hard_bit = inst.hard_bit
        self.advice = advice
        self.invert_calls = 0
        self._h = inst.h
        self._may_invert = may_invert

    @property
    def n(self) -> int:
        return self.design.n

    @property
    def m(self) -> int:
        return self.design.m

    @property
    def ell(self) -> int:
        return self.design.ell

    def apply(self, v: str) -> str:
        return self._h.apply(v)

    def invert(self, u: str) -> str:
        if not self._may_invert:
            raise CapabilityError("strategy is not flagged may_invert")
        self.invert_calls += 1
        return self._h.invert(u)


@dataclass(frozen=True)
class StudentStrategy:
    """A deterministic student.

    move(view, a, replies) sees the shared input and all teacher replies so
    far and returns the next row to query, an Output to stop with a value,
    or None to give up.
    """

    name: str
    max_queries: int
    move: Callable[[GameView, str, tuple[str, ...]], Move]
    may_invert: bool = False
    advice: bytes = b""


@dataclass(frozen=True)
class Transcript:
    """One full run.  `defined` is None in solve mode; in witness mode it
    records whether the run survived to produce an output.  Protocol
    violations never raise; they fail the run and set the flag."""

    a: str
    queries: tuple[int, ...]
    replies: tuple[str, ...]
    success: bool
    violation: bool = False
    defined: bool | None = None
    output: Any = None

    @property
    def trace(self) -> tuple[int, ...] | None:
        """The query sequence, for successful non-violating runs only."""
        if self.success and not self.violation:
            return self.queries
        return None

    def to_json_dict(self) -> dict:
        return {
            "a": self.a,
            "queries": list(self.queries),
            "replies": list(self.replies),
            "success": self.success,
            "violation": self.violation,
            "defined": self.defined,
            "output": self.output,
        }


def _run(inst: Instance, strategy: StudentStrategy, view: GameView, a: str, witness: bool) -> Transcript:
    budget = strategy.max_queries if witness else min(strategy.max_queries, inst.c)
    queries: list[int] = []
    replies: list[str] = []

    def stopped(success: bool, violation: bool = False, output: Any = None) -> Transcript:
        defined = (not success) if witness else None
        return Transcript(
            a, tuple(queries), tuple(replies), success,
            violation=violation, defined=defined,
            output=output if (witness and not success and not violation) else None,
        )

    while len(queries) < budget:
        move = strategy.move(view, a, tuple(replies))
        if move is None:
            return stopped(success=False)
        if isinstance(move, Output):
            return stopped(success=False, output=move.value)
        if not isinstance(move, int) or not 0 <= move < inst.m:
            return stopped(success=False, violation=True)
        queries.append(move)
        reply = inst.h.invert(restrict(a, inst.design.sets[move]))
        replies.append(reply)
        if inst.hard_bit.value(reply) != int(inst.b[move]):
            return stopped(success=True)
    if not witness:
        # the game ends at the budget; solve mode has nothing left to collect
        return stopped(success=False)
    # witness mode still needs the student's output
    move = strategy.move(view, a, tuple(replies))
    if isinstance(move, Output):
        return stopped(success=False, output=move.value)
    if move is None:
        return stopped(success=False)
    # querying past the budget is a violation, not an error
    return stopped(success=False, violation=True)


def _require_playable(inst: Instance) -> None:
    if inst.b is None:
        raise ValueError("instance has no off-range string b; attach one first")


def play(inst: Instance, strategy: StudentStrategy, a: str) -> Transcript:
    """One solve-mode run on input a."""
    _require_playable(inst)
    check_bits(a, inst.n, "game input")
    view = GameView(inst, strategy.may_invert, strategy.advice)
    return _run(inst, strategy, view, a, witness=False)


def evaluate_partial(inst: Instance, strategy: StudentStrategy, a: str) -> Transcript:
    """One witness-mode run on input a; aborts on any disagreeing reply."""
    _require_playable(inst)
    check_bits(a, inst.n, "game input")
    view = GameView(inst, strategy.may_invert, strategy.advice)
    return _run(inst, strategy, view, a, witness=True)


@dataclass(frozen=True)
class FailureReport:
    """Inputs on which solve-mode runs fail.  Exhaustive for n <= 14;
    larger n only via an explicit, clearly-labeled Monte-Carlo sample."""

    n: int
    exhaustive: bool
    failures: tuple[str, ...]
    success_count: int
    sample_size: int | None = None
    seed: int | None = None

    @property
    def failure_count(self) -> int:
        return len(self.failures)

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "exhaustive": self.exhaustive,
            "failure_count": self.failure_count,
            "success_count": self.success_count,
            "failures": list(self.failures),
            "sample_size": self.sample_size,
            "seed": self.seed,
        }


def failure_set(
    inst: Instance,
    strategy: StudentStrategy,
    jobs: int = 1,
    sample: tuple[int, int] | None = None,
) -> FailureReport:
    """All inputs where the solve-mode run fails (exhaustive, n <= 14), or
    a seeded sample of them when `sample=(size, seed)` is given."""
    _require_playable(inst)
    if sample is None and inst.n > EXHAUSTIVE_MAX_N:
        raise ValueError(
            f"n={inst.n} > {EXHAUSTIVE_MAX_N}: exhaustive scan refused; "
            "pass sample=(size, seed) for a labeled estimate"
        )
    if sample is not None:
        size, seed = sample
        rng = random.Random(derive_seed("failure-sample", seed))
        failures = []
        successes = 0
        for _ in range(size):
            a = int_to_bits(rng.randrange(1 << inst.n), inst.n)
            if play(inst, strategy, a).success:
                successes += 1
            else:
                failures.append(a)
        return FailureReport(
            inst.n, exhaustive=False, failures=tuple(failures),
            success_count=successes, sample_size=size, seed=seed,
        )

    from .sharding import run_sharded

    def worker(lo: int, hi: int) -> tuple[list[str], int]:
        view = GameView(inst, strategy.may_invert, strategy.advice)
        bad: list[str] = []
        good = 0
        for value in range(lo, hi):
            a = int_to_bits(value, inst.n)
            if _run(inst, strategy, view, a, witness=False).success:
                good += 1
            else:
                bad.append(a)
        return bad, good

    shards = run_sharded(1 << inst.n, jobs, worker)
    failures = tuple(a for bad, _ in shards for a in bad)
    successes = sum(good for _, good in shards)
    return FailureReport(inst.n, exhaustive=True, failures=failures, success_count=successes)


# ---------------------------------------------------------------------------
# Built-in strategy library


def constant_strategy(row: int, queries: int = 1, output: Any = None, name: str | None = None) -> StudentStrategy:
    """Query the same row `queries` times, then stop with `output`.
    queries=0 makes a zero-query student that just emits."""

    def move(view: GameView, a: str, replies: tuple[str, ...]) -> Move:
        if len(replies) < queries:
            return row
        return Output(output)

    return StudentStrategy(name or f"constant-{row}x{queries}", max_queries=queries, move=move)


def round_robin_strategy(max_queries: int, start: int = 0, output: Any = None, name: str | None = None) -> StudentStrategy:
    """Query rows start, start+1, ... mod m, then stop with `output`."""

    def move(view: GameView, a: str, replies: tuple[str, ...]) -> Move:
        if len(replies) < max_queries:
            return (start + len(replies)) % view.m
        return Output(output)

    return StudentStrategy(name or f"round-robin-{max_queries}@{start}", max_queries=max_queries, move=move)


def seeded_random_strategy(max_queries: int, seed: int = 0, output: Any = None, name: str | None = None) -> StudentStrategy:
    """Rows drawn from a per-(input, step) derived stream: deterministic as
    a strategy, uncorrelated with the design's structure."""

    def move(view: GameView, a: str, replies: tuple[str, ...]) -> Move:
        if len(replies) < max_queries:
            return derive_seed("srand", seed, a, len(replies)) % view.m
        return Output(output)

    return StudentStrategy(name or f"seeded-random-{max_queries}s{seed}", max_queries=max_queries, move=move)


def omniscient_strategy(name: str = "omniscient") -> StudentStrategy:
    """Inverts the permutation directly to find a disagreeing row and
    queries it first.  Needs the may_invert capability."""

    def move(view: GameView, a: str, replies: tuple[str, ...]) -> Move:
        for i, row in enumerate(view.design.sets):
            bit = view.hard_bit.value(view.invert(restrict(a, row)))
            if bit != int(view.b[i]):
                return i
        return Output(None)

    return StudentStrategy(name, max_queries=1, move=move, may_invert=True)


def table_strategy(moves: dict[str, tuple], max_queries: int, name: str = "table", output: Any = None) -> StudentStrategy:
    """Scripted per-input play: moves[a] lists the rows to query for input
    a, after which the student stops with `output`.  Inputs missing from
    the table stop immediately."""

    frozen = {a: tuple(seq) for a, seq in moves.items()}

    def move(view: GameView, a: str, replies: tuple[str, ...]) -> Move:
        seq = frozen.get(a, ())
        if len(replies) < len(seq):
            return seq[len(replies)]
        return Output(output)

    return StudentStrategy(name, max_queries=max_queries, move=move)


def strategy_from_spec(spec: dict) -> StudentStrategy:
    """Build a library strategy from a JSON-style description.

    Kinds: constant {row, queries?, output?}, round-robin {max_queries,
    start?}, seeded-random {max_queries, seed?}, omniscient {}, table
    {moves, max_queries?}.  Each accepts an optional name.
    """
    kind = spec.get("kind")
    name = spec.get("name")
    if kind == "constant":
        return constant_strategy(
            int(spec["row"]), queries=int(spec.get("queries", 1)),
            output=spec.get("output"), name=name,
        )
    if kind == "round-robin":
        return round_robin_strategy(
            int(spec["max_queries"]), start=int(spec.get("start", 0)),
            output=spec.get("output"), name=name,
        )
    if kind == "seeded-random":
        return seeded_random_strategy(
            int(spec["max_queries"]), seed=int(spec.get("seed", 0)),
            output=spec.get("output"), name=name,
        )
    if kind == "omniscient":
        return omniscient_strategy(name=name or "omniscient")
    if kind == "table":
        moves = {a: tuple(int(r) for r in seq) for a, seq in spec["moves"].items()}
        max_queries = int(spec.get("max_queries", max((len(s) for s in moves.values()), default=1)))
        return table_strategy(moves, max_queries=max_queries, name=name or "table", output=spec.get("output"))
    raise ValueError(f"unknown strategy kind {kind!r}")
