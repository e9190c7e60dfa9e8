#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "reference.hpp"

#include <fism/experiment.hpp>
#include <fism/metrics.hpp>

#include <cmath>
#include <sstream>

using namespace fism;

TEST_CASE("accuracy examples") {
    auto s = make_synthetic_logistic(5, 40, 0.5, 3);
    CHECK(accuracy(s.w_star, s.train) == 1.0);
    Vector neg = s.w_star;
    for (double &v : neg)
        v = -v;
    CHECK(accuracy(neg, s.train) == 0.0);
    CHECK(accuracy(Vector(5, 0.0), s.train) == 0.5);

    LabeledDataset empty;
    CHECK_THROWS_AS(accuracy(Vector{1.0}, empty), std::invalid_argument);
}

TEST_CASE("fit_rate_slope") {
    std::vector<double> power, flat(1000, 0.3), zeros(1000, 0.0);
    for (int k = 1; k <= 1000; ++k)
        power.push_back(std::pow(static_cast<double>(k), -0.4));
    CHECK(*fit_rate_slope(power) == doctest::Approx(-0.4).epsilon(0.01 / 0.4));
    CHECK(std::abs(*fit_rate_slope(flat)) <= 1e-12);
    CHECK_FALSE(fit_rate_slope(zeros).has_value());
}

TEST_CASE("rate_diagnostic on the 1D instance") {
    auto p = selection_1d_problem(1, 1);
    SolverOptions opt;
    opt.max_rounds = 10000;
    opt.x_init = Vector{5.0};
    opt.track_average = true;
    auto rec = run_solver(p, make_schedule(1, 0.55, 1, 0.4, 1.0, 1), opt);
    const double f_star = fism::testing::grid_min_1d(
        [](double y) { return std::max(0.0, std::abs(y - 0.5) - 0.5); }, -10, 10, 1e-4);
    auto slope = rate_diagnostic(rec, f_star);
    REQUIRE(slope.has_value());
    CHECK(*slope <= -0.2);

    RunRecord tiny = rec;
    tiny.rows.resize(50);
    CHECK_THROWS_AS(rate_diagnostic(tiny, f_star), std::invalid_argument);
    RunRecord untracked = rec;
    untracked.rows[3].avg_inner_value.reset();
    CHECK_THROWS_AS(rate_diagnostic(untracked, f_star), std::invalid_argument);
}

TEST_CASE("summary JSON round trip and JSONL layout") {
    auto p = selection_1d_problem(2, 2);
    SolverOptions opt;
    opt.max_rounds = 4;
    opt.seed = 11;
    opt.problem_id = "selection-1d";
    opt.track_average = true;
    auto rec = run_solver(p, make_schedule(1, 0.55, 1, 0.4, 1.0, 2), opt);
    rec.config["S"] = "2";
    rec.extras["error"] = 0.25;

    auto back = parse_summary_json(summary_json(rec));
    CHECK(back.method == rec.method);
    CHECK(back.problem == "selection-1d");
    CHECK(back.clients == 2);
    CHECK(back.m == 2);
    CHECK(back.seed == 11);
    CHECK(back.prng == rec.prng);
    CHECK(back.final_x == rec.final_x);
    CHECK(back.final_average == rec.final_average);
    CHECK(back.schedule.a == rec.schedule.a);
    CHECK(back.config.at("S") == "2");
    CHECK(back.extras.at("error") == 0.25);
    CHECK(back.stop_reason == rec.stop_reason);

    std::ostringstream jl;
    write_jsonl(rec, jl);
    std::istringstream lines(jl.str());
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) {
        ++count;
        CHECK(line.rfind("{\"k\":" + std::to_string(count) + ",", 0) == 0);
        CHECK(line.find("\"F_avg\"") != std::string::npos);
        CHECK(line.find("\"wall_s\"") != std::string::npos);
    }
    CHECK(count == 4);

    std::ostringstream csv;
    write_rows_csv(rec, csv);
    CHECK(csv.str().rfind("k,", 0) == 0);

    CHECK_THROWS(parse_summary_json("{not json"));
}
