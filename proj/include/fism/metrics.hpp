#pragma once

#include <fism/problem.hpp>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

namespace fism {

struct LabeledDataset;

struct SubgradientCounters {
    std::uint64_t inner = 0;
    std::uint64_t outer = 0;

    friend bool operator==(const SubgradientCounters &, const SubgradientCounters &) = default;
};

/// Metrics for round k, measured at the round's starting iterate x_k.
struct RoundRow {
    std::size_t k = 0;
    double inner_value = 0.0;   ///< F(x_k)
    double inner_mean = 0.0;    ///< F(x_k) / m
    double outer_value = 0.0;   ///< H(x_k)
    double step_norm = 0.0;     ///< ||x_{k+1} - x_k||
    double sim_time = 0.0;      ///< simulated time of this round
    double cum_sim_time = 0.0;  ///< simulated time through this round
    SubgradientCounters counters;  ///< cumulative, after this round
    std::optional<double> avg_inner_value;  ///< F(x_hat_k), when tracked
    double wall_seconds = 0.0;  ///< cumulative wall clock; never compared
};

enum class StopReason { MaxRounds, Tolerance };

std::string_view to_string(StopReason reason);

struct RunRecord {
    std::string method;
    std::string problem;
    StepSchedule schedule;
    std::size_t clients = 0;
    std::size_t m = 0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::string prng = "";
    std::vector<RoundRow> rows;
    Vector final_x;
    Vector final_average;
    StopReason stop_reason = StopReason::MaxRounds;
    std::vector<std::string> warnings;
    /// Config echo and experiment-level extras (accuracy, error, ...).
    std::map<std::string, std::string> config;
    std::map<std::string, double> extras;
};

/// Fraction of samples with sign(<a_j, x>) == b_j; <a_j, x> == 0 predicts +1.
double accuracy(std::span<const double> x, const LabeledDataset &data);

/// Least-squares slope of log(gap_K) against log K over the last 80% of the
/// sequence (K is 1-based). Gaps are clipped below 1e-12. Returns nullopt if
/// every gap in that window is at or below the clip.
std::optional<double> fit_rate_slope(std::span<const double> gaps);

/// fit_rate_slope on F(x_hat_K) - f_star. Needs >= 100 rows with the
/// averaged objective tracked.
std::optional<double> rate_diagnostic(const RunRecord &record, double f_star);

// Serialization. Field names are stable; wall-clock appears only in the
// `wall_s` row field and the `wall_seconds` summary field.
std::string summary_json(const RunRecord &record);
void write_jsonl(const RunRecord &record, std::ostream &out);
void write_rows_csv(const RunRecord &record, std::ostream &out);

/// Parses a summary produced by summary_json (rows are not included).
RunRecord parse_summary_json(const std::string &text);

} // namespace fism
