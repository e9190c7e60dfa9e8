#include <fism/experiment.hpp>
#include <fism/random.hpp>

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

namespace fism {

namespace {

std::vector<std::size_t> ordering(std::size_t m, std::uint64_t seed) {
    std::vector<std::size_t> perm(m);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    CounterRng rng(seed);
    shuffle(std::span<std::size_t>(perm), rng);
    return perm;
}

std::vector<ProblemSpec::ClientFunctions> group(const std::vector<OraclePtr> &pool,
                                                std::size_t clients) {
    auto partition = partition_data(pool.size(), clients, PartitionStrategy::ContiguousBalanced);
    std::vector<ProblemSpec::ClientFunctions> grouped;
    for (const auto &indices : partition.assignments) {
        ProblemSpec::ClientFunctions fns;
        for (auto idx : indices)
            fns.push_back(pool[idx]);
        grouped.push_back(std::move(fns));
    }
    return grouped;
}

LabeledDataset balanced_subset(const LabeledDataset &data, std::size_t m) {
    const std::size_t want_neg = m / 2, want_pos = m - want_neg;
    LabeledDataset out;
    out.name = data.name;
    std::size_t pos = 0, neg = 0;
    for (std::size_t j = 0; j < data.size() && out.size() < m; ++j) {
        auto &count = data.labels[j] == 1 ? pos : neg;
        if (count >= (data.labels[j] == 1 ? want_pos : want_neg))
            continue;
        ++count;
        out.features.push_back(data.features[j]);
        out.labels.push_back(data.labels[j]);
    }
    if (out.size() < m)
        throw DataError("training data has too few samples per class for m = " +
                        std::to_string(m));
    return out;
}

void warn_single_class(const LabeledDataset &data, std::vector<std::string> &warnings) {
    bool pos = false, neg = false;
    for (int l : data.labels)
        (l == 1 ? pos : neg) = true;
    if (pos != neg)
        warnings.push_back("dataset '" + data.name + "' contains a single class");
}

std::string fmt(double v) {
    std::ostringstream out;
    out << std::setprecision(12) << v;
    return out.str();
}

} // namespace

ProblemSpec selection_1d_problem(std::size_t copies, std::size_t clients) {
    require(copies >= 1, "selection-1d needs at least one inner function");
    auto ball = std::make_shared<BallDistance>(Vector{0.5}, 0.5);
    std::vector<OraclePtr> pool(copies, ball);
    return ProblemSpec(1, group(pool, clients), std::make_shared<QuadAnchorOuter>(Vector{2.0}),
                       BoxConstraint::cube(1, -10.0, 10.0), 1.0);
}

ProblemSpec location_problem(const LocationInstance &instance, std::size_t clients) {
    require(instance.centers.size() == instance.radii.size(), "centers and radii differ in count");
    std::vector<OraclePtr> pool;
    for (std::size_t j = 0; j < instance.centers.size(); ++j)
        pool.push_back(std::make_shared<BallDistance>(instance.centers[j], instance.radii[j]));
    const std::size_t n = instance.anchor.size();
    return ProblemSpec(n, group(pool, clients), std::make_shared<QuadAnchorOuter>(instance.anchor),
                       instance.box, 1.0);
}

ProblemSpec logistic_problem(const LabeledDataset &train, std::size_t clients,
                             double box_half_width) {
    train.validate();
    require(train.size() >= 1, "empty training set");
    std::vector<OraclePtr> pool;
    for (std::size_t j = 0; j < train.size(); ++j)
        pool.push_back(std::make_shared<LogisticLoss>(train.features[j], train.labels[j]));
    const std::size_t n = train.dimension();
    return ProblemSpec(n, group(pool, clients), std::make_shared<L1QuadOuter>(n),
                       BoxConstraint::cube(n, -box_half_width, box_half_width), 1.0);
}

PreparedData prepare_data(const ExperimentConfig &config) {
    PreparedData data;
    const std::uint64_t data_seed = config.data_seed.value_or(config.seed);
    switch (config.problem) {
    case ProblemKind::Selection1d:
        break;
    case ProblemKind::Location:
        data.location = make_location_instance(config.n, config.m, data_seed);
        break;
    case ProblemKind::LogisticSynthetic: {
        auto syn = make_synthetic_logistic(config.n, config.m, config.margin, data_seed,
                                           config.test_m);
        data.train = std::move(syn.train);
        if (config.test_m > 0)
            data.test = std::move(syn.test);
        break;
    }
    case ProblemKind::LogisticMnist: {
        try {
            LabeledDataset train;
            if (!config.train_csv.empty()) {
                train = read_csv_dataset(config.train_csv);
                if (!config.test_csv.empty())
                    data.test = read_csv_dataset(config.test_csv);
            } else {
                train = filter_binary(load_mnist(config.train_images, config.train_labels),
                                      config.pos_digit, config.neg_digit);
                if (!config.test_images.empty())
                    data.test = filter_binary(load_mnist(config.test_images, config.test_labels),
                                              config.pos_digit, config.neg_digit);
            }
            train.validate();
            warn_single_class(train, data.warnings);
            data.train = balanced_subset(train, config.m);
            if (data.test && data.test->dimension() != data.train->dimension())
                throw DataError("test and training features differ in dimension");
        } catch (const FormatError &e) {
            throw DataError(e.what());
        }
        break;
    }
    }
    return data;
}

BuiltProblem build_problem(const ExperimentConfig &config, const PreparedData &data,
                           std::size_t clients, std::uint64_t ordering_seed) {
    switch (config.problem) {
    case ProblemKind::Selection1d:
        return {selection_1d_problem(config.m, clients), "selection-1d", std::nullopt,
                Vector{1.0}};
    case ProblemKind::Location: {
        const auto &src = data.location.value();
        LocationInstance inst{{}, {}, src.anchor, src.box};
        for (auto j : ordering(src.centers.size(), ordering_seed)) {
            inst.centers.push_back(src.centers[j]);
            inst.radii.push_back(src.radii[j]);
        }
        return {location_problem(inst, clients), "location", std::nullopt, std::nullopt};
    }
    case ProblemKind::LogisticSynthetic:
    case ProblemKind::LogisticMnist: {
        const auto &src = data.train.value();
        LabeledDataset train;
        train.name = src.name;
        for (auto j : ordering(src.size(), ordering_seed)) {
            train.features.push_back(src.features[j]);
            train.labels.push_back(src.labels[j]);
        }
        return {logistic_problem(train, clients), std::string(to_string(config.problem)),
                data.test, std::nullopt};
    }
    }
    throw std::logic_error("unhandled problem kind");
}

namespace {

struct Job {
    Method method;
    std::size_t clients;
    std::size_t repeat;
};

CostModel cost_model_for(const ExperimentConfig &config, const ProblemSpec &problem,
                         Method method) {
    const auto partition = partition_of(problem);
    CostModel costs = uniform_cost_model(partition, config.update_cost, config.comm_cost);
    if (method == Method::Fism) {
        for (std::size_t i = 0; i < partition.client_count(); ++i) {
            if (!config.client_update_costs.empty())
                std::fill(costs.per_update[i].begin(), costs.per_update[i].end(),
                          config.client_update_costs[i]);
            if (!config.client_comm_costs.empty())
                costs.comm[i] = config.client_comm_costs[i];
        }
    }
    return costs;
}

std::string run_name(const Job &job) {
    return std::string(to_string(job.method)) + "_S" + std::to_string(job.clients) + "_r" +
           std::to_string(job.repeat);
}

RunOutcome execute(const ExperimentConfig &config, const PreparedData &data, const Job &job,
                   const Executor *executor) {
    RunOutcome outcome;
    try {
        const std::uint64_t run_seed = config.seed + job.repeat;
        BuiltProblem built =
            build_problem(config, data, job.clients, derive_seed(run_seed, 2));
        const auto &problem = built.problem;
        StepSchedule sched = make_schedule(config.gamma1, config.a, config.lambda1, config.b,
                                           problem.mu_outer(), problem.inner_count());
        SolverOptions options;
        options.method = job.method;
        options.max_rounds = config.max_rounds;
        options.tol = config.tol;
        options.seed = run_seed;
        options.costs = cost_model_for(config, problem, job.method);
        options.track_average = config.track_average;
        options.executor = executor;
        options.problem_id = built.id;

        RunRecord record = run_solver(problem, sched, options);
        record.config = config.echo();
        record.config["repeat"] = std::to_string(job.repeat);
        record.warnings.insert(record.warnings.end(), data.warnings.begin(), data.warnings.end());
        if (built.test_set)
            record.extras["accuracy"] = accuracy(record.final_x, *built.test_set);
        if (built.known_solution) {
            double sq = 0.0;
            for (std::size_t d = 0; d < record.final_x.size(); ++d)
                sq += std::pow(record.final_x[d] - (*built.known_solution)[d], 2);
            record.extras["error"] = std::sqrt(sq);
        }
        outcome.record = std::move(record);
    } catch (const std::exception &e) {
        outcome.ok = false;
        outcome.error = e.what();
        outcome.record.method = std::string(to_string(job.method));
        outcome.record.clients = job.clients;
        outcome.record.config = config.echo();
    }
    return outcome;
}

std::string summarize(const std::vector<Job> &jobs, const std::vector<RunOutcome> &runs) {
    struct Acc {
        std::size_t runs = 0, failed = 0;
        double rounds = 0, sim = 0, f = 0, h = 0, acc = 0, err = 0;
        std::size_t acc_n = 0, err_n = 0;
    };
    std::vector<std::pair<std::string, std::size_t>> keys;
    std::map<std::pair<std::string, std::size_t>, Acc> table;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        auto key = std::make_pair(std::string(to_string(jobs[i].method)), jobs[i].clients);
        if (!table.count(key))
            keys.push_back(key);
        auto &acc = table[key];
        const auto &out = runs[i];
        if (!out.ok) {
            ++acc.failed;
            continue;
        }
        const auto &rec = out.record;
        ++acc.runs;
        acc.rounds += static_cast<double>(rec.rows.size());
        acc.sim += rec.rows.empty() ? 0.0 : rec.rows.back().cum_sim_time;
        acc.f += rec.extras.at("final_F");
        acc.h += rec.extras.at("final_H");
        if (auto it = rec.extras.find("accuracy"); it != rec.extras.end())
            acc.acc += it->second, ++acc.acc_n;
        if (auto it = rec.extras.find("error"); it != rec.extras.end())
            acc.err += it->second, ++acc.err_n;
    }
    std::ostringstream csv;
    csv << "method,S,runs,failed,mean_rounds,mean_sim_time,mean_final_F,mean_final_H,"
           "mean_accuracy,mean_error\n";
    for (const auto &key : keys) {
        const auto &a = table[key];
        const double r = a.runs ? static_cast<double>(a.runs) : 1.0;
        csv << key.first << ',' << key.second << ',' << a.runs << ',' << a.failed << ','
            << fmt(a.rounds / r) << ',' << fmt(a.sim / r) << ',' << fmt(a.f / r) << ','
            << fmt(a.h / r) << ',' << (a.acc_n ? fmt(a.acc / a.acc_n) : "") << ','
            << (a.err_n ? fmt(a.err / a.err_n) : "") << '\n';
    }
    return csv.str();
}

void write_text(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
    if (!out)
        throw std::runtime_error("cannot write '" + path.string() + "'");
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig &config, std::size_t threads,
                                bool write_files) {
    validate(config);
    const PreparedData data = prepare_data(config);

    std::vector<Job> jobs;
    for (std::size_t r = 0; r < config.repeats; ++r)
        for (auto method : config.methods) {
            if (method == Method::Irig) {
                jobs.push_back({method, 1, r});
                continue;
            }
            for (auto s : config.clients)
                jobs.push_back({method, s, r});
        }

    Executor executor(threads);
    std::vector<RunOutcome> runs(jobs.size());
    if (jobs.size() > 1) {
        executor.for_each(jobs.size(), [&](std::size_t i) {
            runs[i] = execute(config, data, jobs[i], nullptr);
        });
    } else {
        runs[0] = execute(config, data, jobs[0], &executor);
    }

    ExperimentResult result;
    result.summary_csv = summarize(jobs, runs);
    if (write_files) {
        const std::filesystem::path dir(config.out_dir);
        std::filesystem::create_directories(dir);
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            const auto name = run_name(jobs[i]);
            if (!runs[i].ok) {
                write_text(dir / (name + ".error.txt"), runs[i].error + '\n');
                continue;
            }
            write_text(dir / (name + ".json"), summary_json(runs[i].record) + '\n');
            std::ostringstream rows;
            write_jsonl(runs[i].record, rows);
            write_text(dir / (name + ".jsonl"), rows.str());
            if (config.rows_csv) {
                std::ostringstream csv;
                write_rows_csv(runs[i].record, csv);
                write_text(dir / (name + ".csv"), csv.str());
            }
        }
        write_text(dir / "summary.csv", result.summary_csv);
    }
    result.runs = std::move(runs);
    return result;
}

ExperimentResult run_sweep(const ExperimentConfig &config, std::size_t threads,
                           bool write_files) {
    validate(config);
    const auto ns = config.sweep_n.empty() ? std::vector<std::size_t>{config.n} : config.sweep_n;
    const auto ms = config.sweep_m.empty() ? std::vector<std::size_t>{config.m} : config.sweep_m;
    ExperimentResult total;
    std::ostringstream merged;
    bool header = true;
    for (auto n : ns) {
        for (auto m : ms) {
            ExperimentConfig cell = config;
            cell.n = n;
            cell.m = m;
            cell.sweep_n.clear();
            cell.sweep_m.clear();
            cell.out_dir = (std::filesystem::path(config.out_dir) /
                            ("n" + std::to_string(n) + "_m" + std::to_string(m)))
                               .string();
            auto result = run_experiment(cell, threads, write_files);
            std::istringstream lines(result.summary_csv);
            std::string line;
            std::getline(lines, line);
            if (header) {
                merged << "n,m," << line << '\n';
                header = false;
            }
            while (std::getline(lines, line))
                merged << n << ',' << m << ',' << line << '\n';
            for (auto &run : result.runs)
                total.runs.push_back(std::move(run));
        }
    }
    if (write_files) {
        std::filesystem::create_directories(config.out_dir);
        write_text(std::filesystem::path(config.out_dir) / "sweep_summary.csv", merged.str());
    }
    total.summary_csv = merged.str();
    return total;
}

std::string inspect_record(const std::filesystem::path &summary_path) {
    std::ifstream in(summary_path);
    if (!in)
        throw DataError("cannot read '" + summary_path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    RunRecord rec;
    try {
        rec = parse_summary_json(buffer.str());
    } catch (const nlohmann::json::exception &e) {
        throw DataError(std::string("not a run record: ") + e.what());
    }
    const auto j = nlohmann::json::parse(buffer.str());

    std::ostringstream out;
    out << "method      " << rec.method << "\n"
        << "problem     " << rec.problem << "  (n=" << rec.n << ", m=" << rec.m
        << ", S=" << rec.clients << ")\n"
        << "schedule    gamma_k=" << rec.schedule.gamma1 << "/k^" << rec.schedule.a
        << "  lambda_k=" << rec.schedule.lambda1 << "/k^" << rec.schedule.b
        << (rec.schedule.feasible ? "" : "  [infeasible]") << "\n"
        << "seed        " << rec.seed << " (" << rec.prng << ")\n"
        << "rounds      " << j.value("rounds", 0) << " (stop: " << to_string(rec.stop_reason)
        << ")\n";
    if (j.contains("inner_evals"))
        out << "subgrads    inner=" << j["inner_evals"] << " outer=" << j["outer_evals"] << "\n"
            << "sim time    " << j["total_sim_time"] << "\n";
    for (const auto &[k, v] : rec.extras)
        out << std::left << std::setw(12) << k << v << "\n";
    for (const auto &w : rec.warnings)
        out << "warning     " << w << "\n";
    return out.str();
}

} // namespace fism
