import math

import pytest

import fism


def test_oracle_examples():
    value, grad = fism.logistic_eval([1.0, 0.0], 1, [0.0, 0.0])
    assert value == pytest.approx(math.log(2))
    assert grad == pytest.approx([-0.5, 0.0])
    assert fism.ball_dist_eval([3.0, 0.0], [0.0, 0.0], 1.0) == (2.0, [1.0, 0.0])
    assert fism.outer_l1_quad_eval([1.0, -2.0]) == (5.5, [2.0, -3.0])
    assert fism.project_box([2.0, -3.0], fism.BoxConstraint.cube(2, -1, 1)) == [1.0, -1.0]
    with pytest.raises(ValueError):
        fism.ball_dist_eval([0.0], [0.0], 0.0)


def test_schedule():
    sched = fism.make_schedule(10, 0.8, 1, 0.1, 1.0, 11000)
    assert sched.feasible
    gamma, lam = fism.schedule_at(sched, 32)
    assert gamma == pytest.approx(0.625)
    assert lam == pytest.approx(2 ** -0.5)
    assert not fism.make_schedule(10, 0.8, 1, 0.1, 1.0, 1).feasible


def test_selection_run_converges_and_counts():
    problem = fism.selection_1d_problem(2, 2)
    sched = fism.make_schedule(1, 0.55, 1, 0.4, 1.0, 2)
    rec = fism.run_solver(problem, sched, fism.Method.FISM, max_rounds=20000, seed=3, threads=2)
    assert abs(rec.final_x[0] - 1.0) <= 1e-2
    last = rec.rows[-1].counters
    assert (last.inner, last.outer) == (40000, 20000)
    assert rec.prng == fism.PRNG
    again = fism.run_solver(problem, sched, fism.Method.FISM, max_rounds=20000, seed=3)
    assert again.final_x == rec.final_x


def test_custom_problem_and_reference_solve():
    box = fism.BoxConstraint.cube(2, -10, 10)
    balls = [[fism.BallDistance([0.0, 0.0], 1.0)], [fism.BallDistance([1.2, 0.0], 0.8)]]
    problem = fism.ProblemSpec(2, balls, fism.QuadAnchorOuter([0.5, 3.0]), box)
    assert problem.inner_count == 2
    rec = fism.run_solver(problem, fism.make_schedule(1, 0.8, 1, 0.1, 1.0, 2),
                          max_rounds=5000, seed=1)
    assert math.dist(rec.final_x, [0.75, 0.6614]) <= 5e-2
    ref = fism.reference_solve(fism.selection_1d_problem(1, 1), 0.1, 100000, 1)
    assert abs(ref[0] - 1.0) <= 1e-1


def test_timing_model():
    expected = {1: 500, 2: 250, 4: 125, 8: 63}
    for s, t in expected.items():
        part = fism.partition_data(500, s)
        assert fism.simulate_round_time(part, fism.uniform_cost_model(part), fism.Method.FISM) == t


def test_experiment_and_config():
    cfg = fism.parse_config("preset = classification\nS = 4\nmethods = fism\nrepeats = 2\n")
    result = fism.run_experiment(cfg, threads=1)
    assert len(result.runs) == 2
    assert all(r.ok and r.record.extras["accuracy"] >= 0.9 for r in result.runs)
    assert result.summary_csv.startswith("method,S,")
    with pytest.raises(fism.ConfigError):
        fism.parse_config("unknown_key = 1\n")


def test_selftest():
    report = fism.run_selftest()
    assert report.ok()
    assert report.checks > 0
