"""Trace counting, assignment search, witness compilation, and the
compiled row-predictor, all in exact integer and rational arithmetic.

The pipeline turns a successful student into a predictor for the hard bit
of permutation preimages: count traces over all inputs, pick a trace whose
count beats its extensions, fix the bits outside the final queried row,
precompute teacher replies for every earlier query, and let the student's
own moves decide the guess.  The predictor never inverts the permutation
at run time; inversion happens only while the advice is being built.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .bits import all_bitstrings, int_to_bits
from .crypto import preimage_bit
from .design import embed, restrict
from .game import EXHAUSTIVE_MAX_N, GameView, StudentStrategy, _run, failure_set
from .generator import Instance
from .sharding import run_sharded

Trace = tuple[int, ...]


def _score_key(m: int):
    """Argmax key for weight * (3m)^len, exact integers, ties to shorter
    traces then lexicographic order.  The counting arguments guarantee some
    trace clears a bound of this shape, so maximizing it finds a witness."""

    def key(item: tuple[Trace, int]):
        trace, weight = item
        return (-weight * (3 * m) ** len(trace), len(trace), trace)

    return key


@dataclass(frozen=True)
class TraceCensus:
    """Counts of every trace over all 2^n inputs, plus the best one by the
    count-score rule.  `no_trace` flags an empty success set."""

    m: int
    c: int
    w_size: int
    counts: dict[Trace, int]
    best_trace: Trace | None
    best_count: int

    @property
    def no_trace(self) -> bool:
        return self.best_trace is None

    @property
    def bound_ok(self) -> bool | None:
        """Whether best_count * (3m)^len >= 2 * w_size, exactly."""
        if self.best_trace is None:
            return None
        return self.best_count * (3 * self.m) ** len(self.best_trace) >= 2 * self.w_size

    def margin(self, trace: Trace) -> int:
        """count(trace) minus the counts of all proper extensions of it."""
        exact = self.counts.get(trace, 0)
        longer = sum(
            count
            for other, count in self.counts.items()
            if len(other) > len(trace) and other[: len(trace)] == trace
        )
        return exact - longer

    def to_json_dict(self) -> dict:
        ordered = sorted(self.counts.items(), key=lambda kv: (len(kv[0]), kv[0]))
        best = None
        if self.best_trace is not None:
            best = {
                "trace": list(self.best_trace),
                "count": self.best_count,
                "bound_ok": self.bound_ok,
            }
        return {
            "w_size": self.w_size,
            "traces": [{"trace": list(t), "count": count} for t, count in ordered],
            "best": best,
        }


def trace_census(inst: Instance, strategy: StudentStrategy, jobs: int = 1) -> TraceCensus:
    """Play every input and tally traces of successful runs (n <= 14)."""
    if inst.n > EXHAUSTIVE_MAX_N:
        raise ValueError(f"census needs n <= {EXHAUSTIVE_MAX_N}, got {inst.n}")
    if inst.b is None:
        raise ValueError("instance has no off-range string b; attach one first")

    def worker(lo: int, hi: int) -> dict[Trace, int]:
        view = GameView(inst, strategy.may_invert, strategy.advice)
        local: dict[Trace, int] = {}
        for value in range(lo, hi):
            trace = _run(inst, strategy, view, int_to_bits(value, inst.n), witness=False).trace
            if trace is not None:
                local[trace] = local.get(trace, 0) + 1
        return local

    counts: dict[Trace, int] = {}
    for shard in run_sharded(1 << inst.n, jobs, worker):
        for trace, count in shard.items():
            counts[trace] = counts.get(trace, 0) + count
    w_size = sum(counts.values())
    if not counts:
        return TraceCensus(inst.m, inst.c, 0, counts, None, 0)
    best, best_count = min(counts.items(), key=_score_key(inst.m))
    return TraceCensus(inst.m, inst.c, w_size, counts, best, best_count)


def best_margin_trace(census: TraceCensus) -> tuple[Trace, int] | None:
    """The trace maximizing margin * (3m)^(-len); this is the selection the
    reduction uses, since exact-count wins can be cancelled by extensions."""
    if not census.counts:
        return None
    margins = {trace: census.margin(trace) for trace in census.counts}
    trace, margin = min(margins.items(), key=_score_key(census.m))
    return trace, margin


@dataclass(frozen=True)
class PartialAssignment:
    """A fixing of the input bits outside the final queried row.

    row: last entry of the trace; the free bits live on that row's set.
    outside: the fixed bits, ascending position order.
    margin: exact-trace count minus proper-extension count over the free bits.
    """

    row: int
    outside: str
    margin: int
    exact_count: int
    proper_count: int

    def to_json_dict(self) -> dict:
        return {
            "row": self.row,
            "outside": self.outside,
            "margin": self.margin,
            "exact_count": self.exact_count,
            "proper_count": self.proper_count,
        }


def _classify(trace: Trace | None, target: Trace) -> str:
    if trace == target:
        return "exact"
    if trace is not None and len(trace) > len(target) and trace[: len(target)] == target:
        return "proper"
    return "other"


def best_partial_assignment(
    inst: Instance, strategy: StudentStrategy, trace: Trace, jobs: int = 1
) -> PartialAssignment:
    """Scan all 2^(n-ell) outside fixings and keep the one maximizing the
    margin; ties go to the lexicographically smallest fixing.

    The best margin is at least ceil(full_margin / 2^(n-ell)) by averaging:
    summing per-fixing margins over all fixings gives the full margin.
    """
    if not trace:
        raise ValueError("trace must be nonempty")
    row = trace[-1]
    positions = inst.design.sets[row]
    outside_width = inst.n - inst.ell

    def worker(lo: int, hi: int) -> tuple[int, str, int, int] | None:
        view = GameView(inst, strategy.may_invert, strategy.advice)
        best: tuple[int, str, int, int] | None = None
        for value in range(lo, hi):
            outside = int_to_bits(value, outside_width)
            exact = proper = 0
            for u in all_bitstrings(inst.ell):
                a = embed(u, outside, positions, inst.n)
                kind = _classify(_run(inst, strategy, view, a, witness=False).trace, trace)
                if kind == "exact":
                    exact += 1
                elif kind == "proper":
                    proper += 1
            margin = exact - proper
            if best is None or margin > best[0]:
                best = (margin, outside, exact, proper)
        return best

    best: tuple[int, str, int, int] | None = None
    for shard in run_sharded(1 << outside_width, jobs, worker):
        if shard is None:
            continue
        # strict inequality keeps the earliest (lex-min) fixing on ties
        if best is None or shard[0] > best[0]:
            best = shard
    assert best is not None
    margin, outside, exact, proper = best
    return PartialAssignment(row, outside, margin, exact, proper)


def build_witness_tables(
    inst: Instance, trace: Trace, outside: str
) -> dict[int, dict[str, str]]:
    """Precompute teacher replies for every row other than the trace's last.

    With the outside bits fixed, a row's restriction is determined by the
    bits it shares with the final row, so each table has 2^|shared| entries
    (at most 2^d): the map from the row's restriction z to its preimage.
    """
    if not trace:
        raise ValueError("trace must be nonempty")
    row_k = trace[-1]
    if row_k in trace[:-1]:
        raise ValueError(f"final row {row_k} repeats earlier in the trace {trace}")
    final_positions = set(inst.design.sets[row_k])
    outside_positions = [p for p in range(inst.n) if p not in final_positions]
    fixed_at = dict(zip(outside_positions, outside))
    tables: dict[int, dict[str, str]] = {}
    for i, row in enumerate(inst.design.sets):
        if i == row_k:
            continue
        shared = [p for p in row if p in final_positions]
        entries: dict[str, str] = {}
        for w in all_bitstrings(len(shared)):
            w_at = dict(zip(shared, w))
            z = "".join(w_at[p] if p in w_at else fixed_at[p] for p in row)
            entries[z] = inst.h.invert(z)
        tables[i] = entries
    return tables


@dataclass
class Predictor:
    """Compiled guesser for the hard bit of the preimage of an ell-bit u.

    run(u) places u on the final trace row, replays the student, answers
    earlier trace queries from the witness tables (checked by the forward
    permutation only), and guesses against the target bit if the run
    follows the whole trace; any deviation falls back to the default bit.
    No inverse-permutation calls happen here; the tables were built before.
    """

    inst: Instance
    strategy: StudentStrategy
    trace: Trace
    outside: str
    tables: dict[int, dict[str, str]]
    default_bit: int
    view: GameView
    missing_witness: int = 0
    forward_check_failures: int = 0

    def run(self, u: str) -> int:
        inst = self.inst
        trace = self.trace
        positions = inst.design.sets[trace[-1]]
        a = embed(u, self.outside, positions, inst.n)
        replies: list[str] = []
        last = len(trace) - 1
        for step, expected in enumerate(trace):
            move = self.strategy.move(self.view, a, tuple(replies))
            if not isinstance(move, int) or move != expected:
                return self.default_bit
            if step == last:
                # the live run reached the final query; bet that it succeeded
                return 1 - int(inst.b[expected])
            z = restrict(a, inst.design.sets[expected])
            witness = self.tables.get(expected, {}).get(z)
            if witness is None:
                self.missing_witness += 1
                return self.default_bit
            if inst.h.apply(witness) != z:
                self.forward_check_failures += 1
                return self.default_bit
            if inst.hard_bit.value(witness) != int(inst.b[expected]):
                # live game would have stopped here, short of the full trace
                return self.default_bit
            replies.append(witness)
        raise AssertionError("unreachable: loop returns at the final step")

    @property
    def student_invert_calls(self) -> int:
        return self.view.invert_calls

    def advice_json(self) -> dict:
        return {
            "trace": list(self.trace),
            "outside": self.outside,
            "default_bit": self.default_bit,
            "tables": {
                str(row): dict(sorted(entries.items())) for row, entries in sorted(self.tables.items())
            },
        }


def build_predictor(
    inst: Instance,
    strategy: StudentStrategy,
    trace: Trace,
    outside: str,
    tables: dict[int, dict[str, str]] | None = None,
) -> Predictor:
    """Assemble the advice: witness tables plus the default bit, computed as
    the exact majority of the true hard bit over the inputs whose live trace
    neither equals nor extends the chosen trace (ties and empty sets to 0).
    Inversion is confined to this build step."""
    if tables is None:
        tables = build_witness_tables(inst, trace, outside)
    positions = inst.design.sets[trace[-1]]
    view = GameView(inst, strategy.may_invert, strategy.advice)
    ones = 0
    total = 0
    for u in all_bitstrings(inst.ell):
        a = embed(u, outside, positions, inst.n)
        if _classify(_run(inst, strategy, view, a, witness=False).trace, trace) == "other":
            total += 1
            ones += preimage_bit(inst.h, inst.hard_bit, u)
    default_bit = 1 if 2 * ones > total else 0
    return Predictor(
        inst=inst,
        strategy=strategy,
        trace=trace,
        outside=outside,
        tables=tables,
        default_bit=default_bit,
        view=GameView(inst, strategy.may_invert, strategy.advice),
    )


def measure_advantage(inst: Instance, predictor: Predictor) -> Fraction:
    """Exact advantage over a coin flip: agreement rate with the true hard
    bit across all 2^ell points, minus one half."""
    agree = 0
    for u in all_bitstrings(inst.ell):
        if predictor.run(u) == preimage_bit(inst.h, inst.hard_bit, u):
            agree += 1
    return Fraction(agree, 1 << inst.ell) - Fraction(1, 2)


def failure_bound(ell: int, m: int, c: int) -> Fraction:
    """Ceiling on tolerable solve-mode failures: 2^ell / (2 * (3m)^c)."""
    if ell < 0 or m < 1 or c < 1:
        raise ValueError(f"need ell >= 0, m >= 1, c >= 1; got {(ell, m, c)}")
    return Fraction(2**ell, 2 * (3 * m) ** c)


@dataclass(frozen=True)
class ReductionReport:
    """Everything the trace-to-predictor pipeline produced, exactly."""

    census: TraceCensus
    trace: Trace | None
    margin: int | None
    assignment: PartialAssignment | None
    default_bit: int | None
    advantage: Fraction | None
    target: Fraction
    met: bool | None
    failure_count: int
    bound: Fraction
    diagnostics: dict[str, int] = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "census": self.census.to_json_dict(),
            "trace": None if self.trace is None else list(self.trace),
            "margin": self.margin,
            "assignment": None if self.assignment is None else self.assignment.to_json_dict(),
            "default_bit": self.default_bit,
            "advantage": None if self.advantage is None else _fraction_json(self.advantage),
            "target": _fraction_json(self.target),
            "met": self.met,
            "failure_count": self.failure_count,
            "failure_bound": _fraction_json(self.bound),
            "diagnostics": dict(sorted(self.diagnostics.items())),
        }


def _fraction_json(value: Fraction) -> dict:
    return {"num": value.numerator, "den": value.denominator}


def run_reduction(inst: Instance, strategy: StudentStrategy, jobs: int = 1) -> ReductionReport:
    """Full pipeline: census, margin-best trace, assignment search, witness
    tables, predictor build, exact advantage measurement."""
    census = trace_census(inst, strategy, jobs=jobs)
    failures = failure_set(inst, strategy, jobs=jobs)
    target = Fraction(1, 2 * (3 * inst.m) ** inst.c)
    bound = failure_bound(inst.ell, inst.m, inst.c)
    if census.no_trace:
        return ReductionReport(
            census=census, trace=None, margin=None, assignment=None,
            default_bit=None, advantage=None, target=target, met=None,
            failure_count=failures.failure_count, bound=bound,
        )
    picked = best_margin_trace(census)
    assert picked is not None
    trace, margin = picked
    assignment = best_partial_assignment(inst, strategy, trace, jobs=jobs)
    predictor = build_predictor(inst, strategy, trace, assignment.outside)
    advantage = measure_advantage(inst, predictor)
    diagnostics = {
        "missing_witness": predictor.missing_witness,
        "forward_check_failures": predictor.forward_check_failures,
        "student_invert_calls": predictor.student_invert_calls,
        "witness_entries": sum(len(t) for t in predictor.tables.values()),
    }
    return ReductionReport(
        census=census,
        trace=trace,
        margin=margin,
        assignment=assignment,
        default_bit=predictor.default_bit,
        advantage=advantage,
        target=target,
        met=advantage >= target,
        failure_count=failures.failure_count,
        bound=bound,
        diagnostics=diagnostics,
    )
