#include <fism/experiment.hpp>
#include <fism/random.hpp>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace fism;

namespace {

py::tuple as_tuple(const EvalResult &r) { return py::make_tuple(r.value, r.subgrad); }

std::string jsonl(const RunRecord &record) {
    std::ostringstream out;
    write_jsonl(record, out);
    return out.str();
}

} // namespace

PYBIND11_MODULE(fism, mod) {
    mod.doc() = "Federated inexact subgradient methods for simple convex bilevel problems";

    py::register_exception<FormatError>(mod, "FormatError", PyExc_ValueError);
    py::register_exception<PreconditionError>(mod, "PreconditionError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(mod, "ConfigError", PyExc_ValueError);
    py::register_exception<DataError>(mod, "DataError", PyExc_OSError);

    py::enum_<Method>(mod, "Method")
        .value("FISM", Method::Fism)
        .value("IRIG", Method::Irig);

    py::enum_<PartitionStrategy>(mod, "PartitionStrategy")
        .value("CONTIGUOUS", PartitionStrategy::ContiguousBalanced)
        .value("SHUFFLED", PartitionStrategy::ShuffledBalanced);

    py::enum_<StopReason>(mod, "StopReason")
        .value("MAX_ROUNDS", StopReason::MaxRounds)
        .value("TOLERANCE", StopReason::Tolerance);

    // geometry and oracles
    py::class_<BoxConstraint>(mod, "BoxConstraint")
        .def(py::init<Vector, Vector>(), py::arg("lo"), py::arg("hi"))
        .def_static("cube", &BoxConstraint::cube, py::arg("n"), py::arg("lo"), py::arg("hi"))
        .def_property_readonly("lo", &BoxConstraint::lo)
        .def_property_readonly("hi", &BoxConstraint::hi)
        .def_property_readonly("dimension", &BoxConstraint::dimension)
        .def("contains", [](const BoxConstraint &b, const Vector &x) { return b.contains(x); });

    mod.def("project_box", [](const Vector &x, const BoxConstraint &b) { return project_box(x, b); },
            py::arg("x"), py::arg("box"));

    py::class_<Oracle, std::shared_ptr<Oracle>>(mod, "Oracle")
        .def_property_readonly("dimension", &Oracle::dimension)
        .def("eval", [](const Oracle &o, const Vector &x) { return as_tuple(o.eval(x)); },
             "Returns (value, subgradient).")
        .def("value", [](const Oracle &o, const Vector &x) { return o.value(x); });
    py::class_<LogisticLoss, Oracle, std::shared_ptr<LogisticLoss>>(mod, "LogisticLoss")
        .def(py::init<Vector, int>(), py::arg("features"), py::arg("label"));
    py::class_<BallDistance, Oracle, std::shared_ptr<BallDistance>>(mod, "BallDistance")
        .def(py::init<Vector, double>(), py::arg("center"), py::arg("radius"));
    py::class_<L1QuadOuter, Oracle, std::shared_ptr<L1QuadOuter>>(mod, "L1QuadOuter")
        .def(py::init<std::size_t>(), py::arg("n"));
    py::class_<QuadAnchorOuter, Oracle, std::shared_ptr<QuadAnchorOuter>>(mod, "QuadAnchorOuter")
        .def(py::init<Vector>(), py::arg("anchor"));

    mod.def("logistic_eval",
            [](const Vector &a, int b, const Vector &x) { return as_tuple(logistic_eval(a, b, x)); },
            py::arg("a"), py::arg("b"), py::arg("x"));
    mod.def("ball_dist_eval",
            [](const Vector &x, const Vector &c, double r) { return as_tuple(ball_dist_eval(x, c, r)); },
            py::arg("x"), py::arg("center"), py::arg("radius"));
    mod.def("outer_l1_quad_eval", [](const Vector &x) { return as_tuple(outer_l1_quad_eval(x)); },
            py::arg("x"));
    mod.def("outer_quad_anchor_eval",
            [](const Vector &x, const Vector &a) { return as_tuple(outer_quad_anchor_eval(x, a)); },
            py::arg("x"), py::arg("anchor"));

    // problems and schedules
    py::class_<ProblemSpec>(mod, "ProblemSpec")
        .def(py::init([](std::size_t n, const std::vector<std::vector<std::shared_ptr<Oracle>>> &clients,
                         std::shared_ptr<Oracle> outer, BoxConstraint box, double mu) {
                 std::vector<ProblemSpec::ClientFunctions> groups;
                 for (const auto &c : clients)
                     groups.emplace_back(c.begin(), c.end());
                 return ProblemSpec(n, std::move(groups), std::move(outer), std::move(box), mu);
             }),
             py::arg("dimension"), py::arg("clients"), py::arg("outer"), py::arg("box"),
             py::arg("mu_outer") = 1.0)
        .def_property_readonly("dimension", &ProblemSpec::dimension)
        .def_property_readonly("client_count", &ProblemSpec::client_count)
        .def_property_readonly("inner_count", &ProblemSpec::inner_count)
        .def_property_readonly("mu_outer", &ProblemSpec::mu_outer)
        .def_property_readonly("constraint", &ProblemSpec::constraint)
        .def("inner_value", [](const ProblemSpec &p, const Vector &x) { return p.inner_value(x); })
        .def("outer_value", [](const ProblemSpec &p, const Vector &x) { return p.outer_value(x); })
        .def("regrouped", &ProblemSpec::regrouped, py::arg("clients"));

    mod.def("selection_1d_problem", &selection_1d_problem, py::arg("copies"), py::arg("clients"));
    mod.def("location_problem", &location_problem, py::arg("instance"), py::arg("clients"));
    mod.def("logistic_problem", &logistic_problem, py::arg("train"), py::arg("clients"),
            py::arg("box_half_width") = 100.0);

    py::class_<StepSchedule>(mod, "StepSchedule")
        .def_readonly("gamma1", &StepSchedule::gamma1)
        .def_readonly("a", &StepSchedule::a)
        .def_readonly("lambda1", &StepSchedule::lambda1)
        .def_readonly("b", &StepSchedule::b)
        .def_readonly("feasible", &StepSchedule::feasible);
    mod.def("make_schedule", &make_schedule, py::arg("gamma1"), py::arg("a"), py::arg("lambda1"),
            py::arg("b"), py::arg("mu_outer"), py::arg("m"));
    mod.def("schedule_at",
            [](const StepSchedule &s, std::size_t k) {
                auto p = schedule_at(s, k);
                return py::make_tuple(p.gamma, p.lambda);
            },
            py::arg("sched"), py::arg("k"));

    // federation
    py::class_<ClientPartition>(mod, "ClientPartition")
        .def_readonly("assignments", &ClientPartition::assignments)
        .def_readonly("strategy", &ClientPartition::strategy);
    py::class_<CostModel>(mod, "CostModel")
        .def(py::init<>())
        .def(py::init([](std::vector<std::vector<double>> per_update, std::vector<double> comm) {
                 return CostModel{std::move(per_update), std::move(comm)};
             }),
             py::arg("per_update"), py::arg("comm"))
        .def_readwrite("per_update", &CostModel::per_update)
        .def_readwrite("comm", &CostModel::comm);
    mod.def("partition_data", &partition_data, py::arg("m"), py::arg("clients"),
            py::arg("strategy") = PartitionStrategy::ContiguousBalanced, py::arg("seed") = 0);
    mod.def("uniform_cost_model", &uniform_cost_model, py::arg("partition"),
            py::arg("update_cost") = 1.0, py::arg("comm_cost") = 0.0);
    mod.def("simulate_round_time", &simulate_round_time, py::arg("partition"), py::arg("costs"),
            py::arg("method"));

    // data
    py::class_<LabeledDataset>(mod, "LabeledDataset")
        .def(py::init<>())
        .def_readwrite("features", &LabeledDataset::features)
        .def_readwrite("labels", &LabeledDataset::labels)
        .def_readwrite("name", &LabeledDataset::name)
        .def("__len__", &LabeledDataset::size);
    py::class_<SyntheticLogistic>(mod, "SyntheticLogistic")
        .def_readonly("train", &SyntheticLogistic::train)
        .def_readonly("test", &SyntheticLogistic::test)
        .def_readonly("w_star", &SyntheticLogistic::w_star);
    py::class_<LocationInstance>(mod, "LocationInstance")
        .def_readonly("centers", &LocationInstance::centers)
        .def_readonly("radii", &LocationInstance::radii)
        .def_readonly("anchor", &LocationInstance::anchor)
        .def_readonly("box", &LocationInstance::box);
    mod.def("make_synthetic_logistic", &make_synthetic_logistic, py::arg("n"), py::arg("m"),
            py::arg("margin"), py::arg("seed"), py::arg("test_m") = 0);
    mod.def("make_location_instance", &make_location_instance, py::arg("n"), py::arg("m"),
            py::arg("seed"));
    mod.def("read_csv_dataset",
            [](const std::string &path) { return read_csv_dataset(std::filesystem::path(path)); },
            py::arg("path"));

    // solvers and metrics
    py::class_<SubgradientCounters>(mod, "SubgradientCounters")
        .def_readonly("inner", &SubgradientCounters::inner)
        .def_readonly("outer", &SubgradientCounters::outer);
    py::class_<RoundRow>(mod, "RoundRow")
        .def_readonly("k", &RoundRow::k)
        .def_readonly("inner_value", &RoundRow::inner_value)
        .def_readonly("inner_mean", &RoundRow::inner_mean)
        .def_readonly("outer_value", &RoundRow::outer_value)
        .def_readonly("step_norm", &RoundRow::step_norm)
        .def_readonly("sim_time", &RoundRow::sim_time)
        .def_readonly("cum_sim_time", &RoundRow::cum_sim_time)
        .def_readonly("counters", &RoundRow::counters)
        .def_readonly("avg_inner_value", &RoundRow::avg_inner_value)
        .def_readonly("wall_seconds", &RoundRow::wall_seconds);
    py::class_<RunRecord>(mod, "RunRecord")
        .def_readonly("method", &RunRecord::method)
        .def_readonly("problem", &RunRecord::problem)
        .def_readonly("schedule", &RunRecord::schedule)
        .def_readonly("clients", &RunRecord::clients)
        .def_readonly("m", &RunRecord::m)
        .def_readonly("n", &RunRecord::n)
        .def_readonly("seed", &RunRecord::seed)
        .def_readonly("prng", &RunRecord::prng)
        .def_readonly("rows", &RunRecord::rows)
        .def_readonly("final_x", &RunRecord::final_x)
        .def_readonly("final_average", &RunRecord::final_average)
        .def_readonly("stop_reason", &RunRecord::stop_reason)
        .def_readonly("warnings", &RunRecord::warnings)
        .def_readonly("config", &RunRecord::config)
        .def_readonly("extras", &RunRecord::extras)
        .def("summary_json", &summary_json)
        .def("jsonl", &jsonl);

    mod.def("run_solver",
            [](const ProblemSpec &problem, const StepSchedule &sched, Method method,
               std::optional<Vector> x_init, std::size_t max_rounds, std::optional<double> tol,
               std::uint64_t seed, std::optional<CostModel> costs, bool track_average,
               std::size_t threads) {
                SolverOptions opt;
                opt.method = method;
                opt.x_init = std::move(x_init);
                opt.max_rounds = max_rounds;
                opt.tol = tol;
                opt.seed = seed;
                opt.costs = std::move(costs);
                opt.track_average = track_average;
                py::gil_scoped_release release;
                Executor executor(threads);
                opt.executor = &executor;
                return run_solver(problem, sched, opt);
            },
            py::arg("problem"), py::arg("sched"), py::arg("method") = Method::Fism,
            py::arg("x_init") = py::none(), py::arg("max_rounds") = 200, py::arg("tol") = py::none(),
            py::arg("seed") = 0, py::arg("costs") = py::none(), py::arg("track_average") = false,
            py::arg("threads") = 1);
    mod.def("reference_solve", &reference_solve, py::arg("problem"), py::arg("lam"),
            py::arg("iters"), py::arg("seed"), py::arg("x_init") = py::none(),
            py::call_guard<py::gil_scoped_release>());
    mod.def("stopping_criterion",
            [](const Vector &xp, const Vector &xn, double fp, double fn, double hp, double hn,
               double tol) { return stopping_criterion(xp, xn, fp, fn, hp, hn, tol); },
            py::arg("x_prev"), py::arg("x_next"), py::arg("f_prev"), py::arg("f_next"),
            py::arg("h_prev"), py::arg("h_next"), py::arg("tol"));
    mod.def("accuracy", [](const Vector &x, const LabeledDataset &d) { return accuracy(x, d); },
            py::arg("x"), py::arg("data"));
    mod.def("fit_rate_slope", [](const std::vector<double> &gaps) { return fit_rate_slope(gaps); },
            py::arg("gaps"));
    mod.def("rate_diagnostic", &rate_diagnostic, py::arg("record"), py::arg("f_star"));

    // experiments
    py::class_<ExperimentConfig>(mod, "ExperimentConfig")
        .def("echo", &ExperimentConfig::echo)
        .def("set", [](ExperimentConfig &c, const std::string &kv) { apply_override(c, kv); },
             py::arg("assignment"), "Applies one key=value override.");
    mod.def("preset_config", &preset_config, py::arg("name"));
    mod.def("parse_config", &parse_config, py::arg("text"));
    mod.def("validate_config", &validate, py::arg("config"));

    py::class_<RunOutcome>(mod, "RunOutcome")
        .def_readonly("record", &RunOutcome::record)
        .def_readonly("ok", &RunOutcome::ok)
        .def_readonly("error", &RunOutcome::error);
    py::class_<ExperimentResult>(mod, "ExperimentResult")
        .def_readonly("runs", &ExperimentResult::runs)
        .def_readonly("summary_csv", &ExperimentResult::summary_csv);
    mod.def("run_experiment", &run_experiment, py::arg("config"), py::arg("threads") = 1,
            py::arg("write_files") = false, py::call_guard<py::gil_scoped_release>());

    py::class_<SelfTestReport>(mod, "SelfTestReport")
        .def_readonly("checks", &SelfTestReport::checks)
        .def_readonly("failures", &SelfTestReport::failures)
        .def("ok", &SelfTestReport::ok);
    mod.def("run_selftest", &run_selftest, py::arg("seed") = 7);

    mod.attr("PRNG") = std::string(CounterRng::algorithm_id);
    mod.attr("__version__") = "0.1.0";
}
