import pytest
from hypothesis import given, settings, strategies as st

from nwgame import (
    CapabilityError,
    Output,
    StudentStrategy,
    constant_strategy,
    evaluate_partial,
    failure_set,
    omniscient_strategy,
    play,
    round_robin_strategy,
    seeded_random_strategy,
    strategy_from_spec,
    table_strategy,
)
from nwgame.bits import all_bitstrings
from nwgame.generator import evaluate

from helpers import bad_index_strategy, near_omniscient, reference_instance


def test_play_constant_row0_semantics(inst_a):
    # row 0 reads (x0, x2); with identity and last-bit, success iff x2 != b0 = 0
    s = constant_strategy(0)
    for a in all_bitstrings(4):
        t = play(inst_a, s, a)
        assert t.success == (a[2] == "1")
        assert t.queries == (0,)
        assert t.replies == (a[0] + a[2],)
        assert t.trace == ((0,) if t.success else None)
        assert t.defined is None


def test_play_budget_respects_c(inst_a):
    # c=1 caps a two-query student at one query
    s = round_robin_strategy(2)
    t = play(inst_a, s, "0000")
    assert t.queries == (0,)
    assert not t.success


def test_witness_budget_is_strategy_own(inst_a):
    # witness mode ignores c and lets the student use its declared budget
    s = round_robin_strategy(2, output="done")
    t = evaluate_partial(inst_a, s, "0000")
    assert t.queries == (0, 1)
    assert t.defined and t.output == "done"


def test_witness_aborts_on_disagreement(inst_a):
    s = round_robin_strategy(2, output="done")
    t = evaluate_partial(inst_a, s, "0010")  # x2=1 disagrees at row 0
    assert t.queries == (0,)
    assert t.defined is False
    assert t.output is None


def test_zero_query_student_is_always_defined(inst_a):
    s = constant_strategy(0, queries=0, output=7)
    for a in all_bitstrings(4):
        assert not play(inst_a, s, a).success
        t = evaluate_partial(inst_a, s, a)
        assert t.defined and t.output == 7 and t.queries == ()


def test_giving_up_is_failure_not_violation(inst_a):
    s = StudentStrategy("quitter", max_queries=2, move=lambda v, a, r: None)
    t = play(inst_a, s, "0010")
    assert not t.success and not t.violation
    w = evaluate_partial(inst_a, s, "0010")
    assert w.defined and w.output is None


def test_bad_index_is_violation_not_exception(inst_a):
    s = bad_index_strategy()
    t = play(inst_a, s, "0000")
    assert not t.success and t.violation
    w = evaluate_partial(inst_a, s, "0000")
    assert w.defined and w.violation and w.output is None


def test_over_budget_query_in_witness_mode_is_violation(inst_a):
    s = StudentStrategy("greedy", max_queries=1, move=lambda v, a, r: 1)
    w = evaluate_partial(inst_a, s, "0000")  # row 1 reads (x1,x3): agrees on 0000
    assert w.queries == (1,)
    assert w.violation and w.defined and w.output is None


def test_invert_capability_is_gated(inst_a):
    snoop = StudentStrategy("snoop", max_queries=1, move=lambda v, a, r: v.invert("00") and 0)
    with pytest.raises(CapabilityError):
        play(inst_a, snoop, "0000")


def test_omniscient_always_succeeds_in_one_query(inst_a):
    s = omniscient_strategy()
    for a in all_bitstrings(4):
        t = play(inst_a, s, a)
        assert t.success and len(t.queries) == 1
        row = t.queries[0]
        assert evaluate(inst_a, a)[row] != inst_a.b[row]


def test_failure_set_constant_row0(inst_a):
    report = failure_set(inst_a, constant_strategy(0))
    assert report.exhaustive
    assert report.failure_count == 8
    assert set(report.failures) == {a for a in all_bitstrings(4) if a[2] == "0"}
    assert report.success_count == 8


def test_failure_set_jobs_invariant(inst_a):
    base = failure_set(inst_a, seeded_random_strategy(1, seed=4))
    for jobs in (2, 3, 8):
        again = failure_set(inst_a, seeded_random_strategy(1, seed=4), jobs=jobs)
        assert again.failures == base.failures
        assert again.success_count == base.success_count


def test_failure_set_empty_for_near_omniscient():
    inst = reference_instance(c=2)
    report = failure_set(inst, near_omniscient(inst, seed=1))
    assert report.failure_count == 0


def test_failure_set_sampling_is_labeled(inst_a):
    report = failure_set(inst_a, constant_strategy(0), sample=(64, 5))
    assert not report.exhaustive
    assert report.sample_size == 64 and report.seed == 5
    assert report.failure_count + report.success_count == 64
    again = failure_set(inst_a, constant_strategy(0), sample=(64, 5))
    assert again.failures == report.failures


def test_seeded_random_strategy_is_reproducible(inst_a):
    s = seeded_random_strategy(2, seed=9)
    t1 = play(inst_a, s, "0101")
    t2 = play(inst_a, s, "0101")
    assert t1.queries == t2.queries


def test_table_strategy_missing_input_stops(inst_a):
    s = table_strategy({"0010": (0,)}, max_queries=1)
    assert play(inst_a, s, "0010").success
    t = play(inst_a, s, "0011")
    assert not t.success and t.queries == ()


def test_strategy_from_spec_round_trip(inst_a):
    for spec in (
        {"kind": "constant", "row": 0},
        {"kind": "round-robin", "max_queries": 2, "start": 1},
        {"kind": "seeded-random", "max_queries": 1, "seed": 3},
        {"kind": "omniscient"},
        {"kind": "table", "moves": {"0010": [0]}, "max_queries": 1},
    ):
        s = strategy_from_spec(spec)
        play(inst_a, s, "0010")
    with pytest.raises(ValueError):
        strategy_from_spec({"kind": "psychic"})


def test_transcript_json_shape(inst_a):
    t = play(inst_a, constant_strategy(0), "0010")
    data = t.to_json_dict()
    assert data["a"] == "0010"
    assert data["queries"] == [0]
    assert data["success"] is True


def test_output_move_in_solve_mode_is_failure(inst_a):
    s = StudentStrategy("confident", max_queries=2, move=lambda v, a, r: Output(1))
    t = play(inst_a, s, "0010")
    assert not t.success and t.queries == ()


@settings(max_examples=50)
@given(st.integers(0, 15), st.integers(1, 3), st.integers(0, 20))
def test_budget_property(a_value, max_queries, seed):
    inst = reference_instance(c=2)
    a = format(a_value, "04b")
    s = seeded_random_strategy(max_queries, seed=seed)
    solve = play(inst, s, a)
    assert len(solve.queries) <= min(max_queries, inst.c)
    witness = evaluate_partial(inst, s, a)
    assert len(witness.queries) <= max_queries
