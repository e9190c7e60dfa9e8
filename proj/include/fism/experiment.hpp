#pragma once

#include <fism/data_io.hpp>
#include <fism/metrics.hpp>
#include <fism/solvers.hpp>

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fism {

/// Invalid configuration; carries the offending line (0 when not from a file).
class ConfigError : public std::runtime_error {
  public:
    ConfigError(const std::string &message, std::size_t line = 0);
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

/// Missing or malformed data referenced by a config.
class DataError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class ProblemKind { LogisticMnist, LogisticSynthetic, Location, Selection1d };

std::string_view to_string(ProblemKind kind);

struct ExperimentConfig {
    ProblemKind problem = ProblemKind::Selection1d;
    std::string preset;

    // problem parameters
    std::size_t n = 1;
    std::size_t m = 2;
    std::size_t test_m = 0;
    double margin = 0.5;
    std::optional<std::uint64_t> data_seed;
    std::string train_images, train_labels, test_images, test_labels;
    std::string train_csv, test_csv;
    int pos_digit = 1;
    int neg_digit = 0;

    std::vector<Method> methods{Method::Fism, Method::Irig};
    std::vector<std::size_t> clients{1};
    double gamma1 = 1.0, a = 0.55, lambda1 = 1.0, b = 0.4;
    std::size_t max_rounds = 50000;
    std::optional<double> tol;
    std::size_t repeats = 1;
    std::uint64_t seed = 1;
    bool track_average = false;
    bool rows_csv = false;

    double update_cost = 1.0;
    double comm_cost = 0.0;
    std::vector<double> client_update_costs;
    std::vector<double> client_comm_costs;

    // sweep grid (sweep subcommand only)
    std::vector<std::size_t> sweep_n;
    std::vector<std::size_t> sweep_m;

    std::string out_dir = "fism_out";

    /// Canonical key=value echo, stored in every RunRecord.
    std::map<std::string, std::string> echo() const;
};

/// Named parameter sets: "classification" and "mnist" (gamma_k = 10/k^0.8,
/// lambda_k = 1/k^0.1, 200 rounds, 10 repeats), "location" (gamma_k = 1/k^0.8,
/// lambda_k = 1/k^0.1, tol 1e-5, 1e5 rounds, 10 repeats) and "selection"
/// (1/k^0.55, 1/k^0.4, 5e4 rounds).
ExperimentConfig preset_config(const std::string &name);

/// Flat `key = value` text; `#` starts a comment. Lists are comma separated.
/// A `preset` key, if present, is applied before the other keys.
ExperimentConfig parse_config(const std::string &text);
ExperimentConfig load_config(const std::filesystem::path &path);
/// Applies one `key=value` override.
void apply_override(ExperimentConfig &config, const std::string &assignment);
void validate(const ExperimentConfig &config);

/// Data loaded or generated once per experiment and shared by its runs.
struct PreparedData {
    std::optional<LabeledDataset> train;
    std::optional<LabeledDataset> test;
    std::optional<LocationInstance> location;
    std::vector<std::string> warnings;
};

/// Throws DataError when files are missing or malformed.
PreparedData prepare_data(const ExperimentConfig &config);

/// A problem plus whatever is needed to score it.
struct BuiltProblem {
    ProblemSpec problem;
    std::string id;
    std::optional<LabeledDataset> test_set;
    std::optional<Vector> known_solution;
};

/// Problem for one run. `ordering_seed` permutes the inner functions before
/// the contiguous client split (the data ordering of that run).
BuiltProblem build_problem(const ExperimentConfig &config, const PreparedData &data,
                           std::size_t clients, std::uint64_t ordering_seed);

/// 1D selection: m copies of dist(., [0, 1]) on [-10, 10], H = 0.5 (y - 2)^2.
ProblemSpec selection_1d_problem(std::size_t copies, std::size_t clients);
ProblemSpec location_problem(const LocationInstance &instance, std::size_t clients);
ProblemSpec logistic_problem(const LabeledDataset &train, std::size_t clients, double box_half_width = 100.0);

struct RunOutcome {
    RunRecord record;
    bool ok = true;
    std::string error;
};

struct ExperimentResult {
    std::vector<RunOutcome> runs;
    std::string summary_csv;
};

/// methods x S x repeats; IR-IG ignores S and runs once per repeat. Writes
/// one `<run>.json` + `<run>.jsonl` per run and `summary.csv` into out_dir
/// when `write_files` is set.
ExperimentResult run_experiment(const ExperimentConfig &config, std::size_t threads,
                                bool write_files = true);

/// run_experiment over every (n, m) in the sweep grid. The merged CSV (with
/// n and m columns) is returned in summary_csv and written to
/// `sweep_summary.csv`.
ExperimentResult run_sweep(const ExperimentConfig &config, std::size_t threads,
                      bool write_files = true);

/// Oracle self-test report.
struct SelfTestReport {
    std::size_t checks = 0;
    std::vector<std::string> failures;
    bool ok() const { return failures.empty(); }
};

/// Finite-difference, subgradient-inequality and projection checks on the
/// shipped oracles.
SelfTestReport run_selftest(std::uint64_t seed = 7);

/// Human-readable digest of a summary JSON file.
std::string inspect_record(const std::filesystem::path &summary_path);

} // namespace fism
