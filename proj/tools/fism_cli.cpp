#include <fism/experiment.hpp>

#include <CLI11.hpp>

#include <iostream>

namespace {

enum ExitCode { kOk = 0, kPartialFailure = 1, kBadConfig = 2, kDataError = 3 };

fism::ExperimentConfig configure(const std::string &path, const std::vector<std::string> &sets,
                                 const std::string &out, const std::optional<std::uint64_t> &seed) {
    auto config = fism::load_config(path);
    for (const auto &assignment : sets)
        fism::apply_override(config, assignment);
    if (!out.empty())
        config.out_dir = out;
    if (seed)
        config.seed = *seed;
    fism::validate(config);
    return config;
}

int report(const fism::ExperimentResult &result) {
    int failed = 0;
    for (const auto &run : result.runs) {
        for (const auto &w : run.record.warnings)
            std::cerr << "warning: " << run.record.method << " S=" << run.record.clients << ": "
                      << w << '\n';
        if (!run.ok) {
            ++failed;
            std::cerr << "run failed: " << run.record.method << " S=" << run.record.clients
                      << ": " << run.error << '\n';
        }
    }
    std::cout << result.summary_csv;
    return failed ? kPartialFailure : kOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Federated incremental subgradient experiments for convex bilevel problems"};
    app.require_subcommand(1);

    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> sets;
    std::size_t threads = 1;
    std::string config_path;

    auto add_common = [&](CLI::App *cmd) {
        cmd->add_option("config", config_path, "Experiment config file")->required();
        cmd->add_option("--out", out_dir, "Output directory");
        cmd->add_option("--seed", seed, "Base seed");
        cmd->add_option("--set", sets, "Override a config key (key=value)");
        cmd->add_option("--threads", threads, "Worker threads (speed only)")
            ->check(CLI::PositiveNumber);
    };

    auto *run = app.add_subcommand("run", "Run methods x S x repeats from a config");
    add_common(run);
    auto *sweep = app.add_subcommand("sweep", "Run the config over sweep_n x sweep_m");
    add_common(sweep);
    auto *selftest = app.add_subcommand("selftest", "Oracle and projection checks");
    std::uint64_t selftest_seed = 7;
    selftest->add_option("--seed", selftest_seed, "Seed for sampled points");
    auto *inspect = app.add_subcommand("inspect", "Summarize a run record");
    std::string record_path;
    inspect->add_option("record", record_path, "Run record (.json)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            auto config = configure(config_path, sets, out_dir, seed);
            return report(fism::run_experiment(config, threads));
        }
        if (sweep->parsed()) {
            auto config = configure(config_path, sets, out_dir, seed);
            return report(fism::run_sweep(config, threads));
        }
        if (selftest->parsed()) {
            auto result = fism::run_selftest(selftest_seed);
            for (const auto &f : result.failures)
                std::cout << "FAIL " << f << '\n';
            std::cout << result.checks << " checks, " << result.failures.size() << " failures\n";
            return result.ok() ? kOk : kPartialFailure;
        }
        if (inspect->parsed()) {
            std::cout << fism::inspect_record(record_path);
            return kOk;
        }
    } catch (const fism::ConfigError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kBadConfig;
    } catch (const fism::DataError &e) {
        std::cerr << "data error: " << e.what() << '\n';
        return kDataError;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kPartialFailure;
    }
    return kOk;
}
