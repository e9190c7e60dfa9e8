#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fism/experiment.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <sys/wait.h>

using namespace fism;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("fism_exp_" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write(const fs::path &p, const std::string &text) { std::ofstream(p) << text; }

std::string slurp(const fs::path &p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

#ifdef FISM_CLI_PATH
int cli(const std::string &args) {
    const std::string cmd = std::string(FISM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}
#endif

/// Column value from summary CSV rows keyed by (method, S).
std::map<std::pair<std::string, std::string>, std::map<std::string, std::string>>
parse_summary(const std::string &csv) {
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    std::vector<std::string> header;
    for (std::istringstream h(line); std::getline(h, line, ',');)
        header.push_back(line);
    std::map<std::pair<std::string, std::string>, std::map<std::string, std::string>> out;
    while (std::getline(in, line)) {
        std::istringstream row(line);
        std::map<std::string, std::string> cells;
        std::string cell;
        for (std::size_t i = 0; std::getline(row, cell, ','); ++i)
            cells[header.at(i)] = cell;
        out[{cells["method"], cells["S"]}] = cells;
    }
    return out;
}

} // namespace

TEST_CASE("parse_config reads keys, lists and comments") {
    auto c = parse_config("# comment\nproblem = location\nn = 3\nm = 12 # trailing\n"
                          "S = 1, 2, 4\nmethods = fism\ntol = 1e-4\nseed = 9\n");
    CHECK(c.problem == ProblemKind::Location);
    CHECK(c.n == 3);
    CHECK(c.m == 12);
    CHECK(c.clients == std::vector<std::size_t>{1, 2, 4});
    CHECK(c.methods == std::vector<Method>{Method::Fism});
    CHECK(c.tol == 1e-4);
    CHECK(c.seed == 9);
}

TEST_CASE("presets apply before other keys") {
    auto c = parse_config("max_rounds = 7\npreset = classification\n");
    CHECK(c.problem == ProblemKind::LogisticSynthetic);
    CHECK(c.n == 20);
    CHECK(c.m == 400);
    CHECK(c.gamma1 == 10.0);
    CHECK(c.a == 0.8);
    CHECK(c.lambda1 == 1.0);
    CHECK(c.b == 0.1);
    CHECK(c.repeats == 10);
    CHECK(c.max_rounds == 7);

    auto loc = preset_config("location");
    CHECK(loc.tol == 1e-5);
    CHECK(loc.max_rounds == 100000);
    CHECK(loc.gamma1 == 1.0);
}

TEST_CASE("config errors carry the offending line") {
    auto line_of = [](const std::string &text) {
        try {
            parse_config(text);
        } catch (const ConfigError &e) {
            return e.line();
        }
        return std::size_t{0};
    };
    CHECK(line_of("n = 2\nbogus = 1\n") == 2);
    CHECK(line_of("n = 2\n\nn = 3\n") == 3);
    CHECK(line_of("just words\n") == 1);
    CHECK(line_of("m = -4\n") == 1);
    CHECK(line_of("\npreset = nope\n") == 2);
    CHECK(line_of("methods = fism, sgd\n") == 1);
}

TEST_CASE("validate rejects inconsistent configs") {
    auto c = preset_config("selection");
    CHECK_NOTHROW(validate(c));
    auto bad = c;
    bad.clients = {3};
    CHECK_THROWS_AS(validate(bad), ConfigError);
    bad = c;
    bad.gamma1 = 0;
    CHECK_THROWS_AS(validate(bad), ConfigError);
    bad = c;
    bad.problem = ProblemKind::LogisticMnist;
    CHECK_THROWS_AS(validate(bad), ConfigError);
}

TEST_CASE("apply_override") {
    auto c = preset_config("selection");
    apply_override(c, "max_rounds=12");
    apply_override(c, "S=1,2");
    apply_override(c, "tol=none");
    CHECK(c.max_rounds == 12);
    CHECK(c.clients == std::vector<std::size_t>{1, 2});
    CHECK_FALSE(c.tol.has_value());
    CHECK_THROWS_AS(apply_override(c, "preset=location"), ConfigError);
    CHECK_THROWS_AS(apply_override(c, "nonsense"), ConfigError);
}

TEST_CASE("selection default reaches the selected solution") {
    auto c = preset_config("selection");
    auto result = run_experiment(c, 1, false);
    REQUIRE(result.runs.size() == 3);
    for (const auto &run : result.runs) {
        REQUIRE(run.ok);
        CHECK(run.record.extras.at("error") <= 1e-2);
    }
    auto table = parse_summary(result.summary_csv);
    CHECK(table.size() == 3);
    for (const auto &[key, row] : table)
        CHECK(std::stod(row.at("mean_error")) <= 1e-2);
}

TEST_CASE("location simulated time decreases with the client count") {
    auto c = preset_config("location");
    c.repeats = 1;
    c.methods = {Method::Fism};
    c.max_rounds = 30;
    c.tol.reset();
    auto table = parse_summary(run_experiment(c, 1, false).summary_csv);
    double prev = 1e300;
    for (const char *s : {"1", "2", "4", "8"}) {
        const double t = std::stod(table.at({"fism", s}).at("mean_sim_time"));
        CHECK(t < prev);
        prev = t;
    }
}

TEST_CASE("repeated experiments write identical summaries") {
    auto c = preset_config("location");
    c.n = 3;
    c.m = 24;
    c.max_rounds = 20;
    c.tol.reset();
    c.repeats = 10;
    TempDir a, b;
    c.out_dir = a.path.string();
    run_experiment(c, 1, true);
    c.out_dir = b.path.string();
    run_experiment(c, 4, true);
    CHECK(slurp(a.path / "summary.csv") == slurp(b.path / "summary.csv"));
    CHECK(fs::exists(a.path / "fism_S4_r9.json"));
    CHECK(fs::exists(a.path / "irig_S1_r0.jsonl"));
    CHECK(inspect_record(a.path / "fism_S2_r3.json").find("fism") != std::string::npos);
}

TEST_CASE("missing data is a DataError") {
    auto c = preset_config("mnist");
    c.train_images = "/nonexistent/images";
    c.train_labels = "/nonexistent/labels";
    CHECK_THROWS_AS(prepare_data(c), DataError);
}

TEST_CASE("selftest passes") {
    auto report = run_selftest(3);
    CHECK(report.ok());
    CHECK(report.checks > 1000);
}

#ifdef FISM_CLI_PATH
TEST_CASE("CLI exit codes") {
    TempDir dir;
    write(dir.path / "ok.cfg", "problem = selection-1d\nmax_rounds = 50\nS = 1\n");
    write(dir.path / "bad.cfg", "problem = selection-1d\nwhat = 1\n");
    write(dir.path / "data.cfg", "preset = mnist\ntrain_images = /nonexistent/a\n"
                                 "train_labels = /nonexistent/b\n");
    const std::string out = " --out " + (dir.path / "out").string();
    CHECK(cli("run " + (dir.path / "ok.cfg").string() + out) == 0);
    CHECK(fs::exists(dir.path / "out" / "summary.csv"));
    CHECK(cli("run " + (dir.path / "bad.cfg").string() + out) == 2);
    CHECK(cli("run " + (dir.path / "ok.cfg").string() + out + " --set gamma1=-1") == 2);
    CHECK(cli("run " + (dir.path / "data.cfg").string() + out) == 3);
    CHECK(cli("selftest") == 0);
    CHECK(cli("inspect " + (dir.path / "out" / "fism_S1_r0.json").string()) == 0);
}
#endif
