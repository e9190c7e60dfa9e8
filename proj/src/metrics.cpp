#include <fism/data_io.hpp>
#include <fism/metrics.hpp>

#include <json.hpp>

#include <cmath>
#include <iomanip>
#include <ostream>

namespace fism {

using ojson = nlohmann::ordered_json;

std::string_view to_string(StopReason reason) {
    return reason == StopReason::Tolerance ? "tolerance" : "max_rounds";
}

double accuracy(std::span<const double> x, const LabeledDataset &data) {
    require(data.size() > 0, "accuracy of an empty dataset");
    std::size_t correct = 0;
    for (std::size_t j = 0; j < data.size(); ++j) {
        const auto &a = data.features[j];
        require(a.size() == x.size(), "accuracy: dimension mismatch");
        double score = 0.0;
        for (std::size_t d = 0; d < a.size(); ++d)
            score += a[d] * x[d];
        const int predicted = score >= 0.0 ? 1 : -1;
        correct += predicted == data.labels[j];
    }
    return static_cast<double>(correct) / static_cast<double>(data.size());
}

std::optional<double> fit_rate_slope(std::span<const double> gaps) {
    constexpr double kClip = 1e-12;
    const std::size_t total = gaps.size();
    require(total >= 2, "rate fit needs at least two points");
    const std::size_t first = total / 5;  // drop the first 20%

    bool informative = false;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double count = static_cast<double>(total - first);
    for (std::size_t i = first; i < total; ++i) {
        const double gap = std::max(gaps[i], kClip);
        informative |= gaps[i] > kClip;
        const double lx = std::log(static_cast<double>(i + 1));
        const double ly = std::log(gap);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    if (!informative)
        return std::nullopt;
    return (count * sxy - sx * sy) / (count * sxx - sx * sx);
}

std::optional<double> rate_diagnostic(const RunRecord &record, double f_star) {
    require(record.rows.size() >= 100, "rate diagnostic needs at least 100 rounds");
    std::vector<double> gaps;
    gaps.reserve(record.rows.size());
    for (const auto &row : record.rows) {
        require(row.avg_inner_value.has_value(),
                "rate diagnostic needs the averaged objective (track_average)");
        gaps.push_back(*row.avg_inner_value - f_star);
    }
    return fit_rate_slope(gaps);
}

namespace {

ojson schedule_json(const StepSchedule &s) {
    return ojson{{"gamma1", s.gamma1}, {"a", s.a}, {"lambda1", s.lambda1}, {"b", s.b},
                 {"feasible", s.feasible}};
}

ojson row_json(const RoundRow &row) {
    ojson j;
    j["k"] = row.k;
    j["F"] = row.inner_value;
    j["F_mean"] = row.inner_mean;
    j["H"] = row.outer_value;
    j["step_norm"] = row.step_norm;
    j["sim_time"] = row.sim_time;
    j["cum_sim_time"] = row.cum_sim_time;
    j["inner_evals"] = row.counters.inner;
    j["outer_evals"] = row.counters.outer;
    if (row.avg_inner_value)
        j["F_avg"] = *row.avg_inner_value;
    j["wall_s"] = row.wall_seconds;
    return j;
}

} // namespace

std::string summary_json(const RunRecord &record) {
    ojson j;
    j["method"] = record.method;
    j["problem"] = record.problem;
    j["schedule"] = schedule_json(record.schedule);
    j["S"] = record.clients;
    j["m"] = record.m;
    j["n"] = record.n;
    j["seed"] = record.seed;
    j["prng"] = record.prng;
    j["rounds"] = record.rows.size();
    j["stop_reason"] = std::string(to_string(record.stop_reason));
    if (!record.rows.empty()) {
        const auto &last = record.rows.back();
        j["inner_evals"] = last.counters.inner;
        j["outer_evals"] = last.counters.outer;
        j["total_sim_time"] = last.cum_sim_time;
        j["wall_seconds"] = last.wall_seconds;
    }
    j["final_x"] = record.final_x;
    j["final_average"] = record.final_average;
    j["extras"] = record.extras;
    j["warnings"] = record.warnings;
    j["config"] = record.config;
    return j.dump(2);
}

void write_jsonl(const RunRecord &record, std::ostream &out) {
    for (const auto &row : record.rows)
        out << row_json(row).dump() << '\n';
}

void write_rows_csv(const RunRecord &record, std::ostream &out) {
    const bool has_avg = !record.rows.empty() && record.rows.front().avg_inner_value;
    out << "k,F,F_mean,H,step_norm,sim_time,cum_sim_time,inner_evals,outer_evals";
    if (has_avg)
        out << ",F_avg";
    out << ",wall_s\n";
    out << std::setprecision(17);
    for (const auto &r : record.rows) {
        out << r.k << ',' << r.inner_value << ',' << r.inner_mean << ',' << r.outer_value << ','
            << r.step_norm << ',' << r.sim_time << ',' << r.cum_sim_time << ',' << r.counters.inner
            << ',' << r.counters.outer;
        if (has_avg)
            out << ',' << r.avg_inner_value.value_or(NAN);
        out << ',' << r.wall_seconds << '\n';
    }
}

RunRecord parse_summary_json(const std::string &text) {
    const auto j = nlohmann::json::parse(text);
    RunRecord record;
    record.method = j.at("method").get<std::string>();
    record.problem = j.at("problem").get<std::string>();
    const auto &s = j.at("schedule");
    record.schedule = StepSchedule{s.at("gamma1").get<double>(), s.at("a").get<double>(),
                                   s.at("lambda1").get<double>(), s.at("b").get<double>(),
                                   s.at("feasible").get<bool>()};
    record.clients = j.at("S").get<std::size_t>();
    record.m = j.at("m").get<std::size_t>();
    record.n = j.at("n").get<std::size_t>();
    record.seed = j.at("seed").get<std::uint64_t>();
    record.prng = j.at("prng").get<std::string>();
    record.stop_reason = j.at("stop_reason").get<std::string>() == "tolerance"
                             ? StopReason::Tolerance
                             : StopReason::MaxRounds;
    record.final_x = j.at("final_x").get<Vector>();
    record.final_average = j.at("final_average").get<Vector>();
    record.extras = j.at("extras").get<std::map<std::string, double>>();
    record.warnings = j.at("warnings").get<std::vector<std::string>>();
    record.config = j.at("config").get<std::map<std::string, std::string>>();
    return record;
}

} // namespace fism
