#include <fism/experiment.hpp>

#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>

namespace fism {

ConfigError::ConfigError(const std::string &message, std::size_t line)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message),
      line_{line} {}

std::string_view to_string(ProblemKind kind) {
    switch (kind) {
    case ProblemKind::LogisticMnist: return "logistic-mnist";
    case ProblemKind::LogisticSynthetic: return "logistic-synthetic";
    case ProblemKind::Location: return "location";
    case ProblemKind::Selection1d: return "selection-1d";
    }
    return "unknown";
}

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::string format_double(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

template <class T>
std::string join(const std::vector<T> &items, const std::function<std::string(const T &)> &fmt) {
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        if (i)
            out += ',';
        out += fmt(items[i]);
    }
    return out;
}

std::vector<std::string> split_list(const std::string &value) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(value);
    while (std::getline(ss, item, ','))
        if (auto t = trim(item); !t.empty())
            out.push_back(std::move(t));
    return out;
}

double to_real(const std::string &v) {
    double out = 0.0;
    const char *begin = v.data();
    if (!v.empty() && v[0] == '+')
        ++begin;
    auto [ptr, ec] = std::from_chars(begin, v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
        throw std::invalid_argument("expected a number, got '" + v + "'");
    return out;
}

std::uint64_t to_uint(const std::string &v) {
    // Accept integral reals such as 1e5.
    const double real = to_real(v);
    if (real < 0 || real != static_cast<double>(static_cast<std::uint64_t>(real)))
        throw std::invalid_argument("expected a nonnegative integer, got '" + v + "'");
    return static_cast<std::uint64_t>(real);
}

bool to_bool(const std::string &v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on")
        return true;
    if (v == "false" || v == "0" || v == "no" || v == "off")
        return false;
    throw std::invalid_argument("expected a boolean, got '" + v + "'");
}

ProblemKind to_problem(const std::string &v) {
    for (auto kind : {ProblemKind::LogisticMnist, ProblemKind::LogisticSynthetic,
                      ProblemKind::Location, ProblemKind::Selection1d})
        if (to_string(kind) == v)
            return kind;
    throw std::invalid_argument("unknown problem '" + v + "'");
}

template <class T, class F>
std::vector<T> to_list(const std::string &v, F convert) {
    std::vector<T> out;
    for (const auto &item : split_list(v))
        out.push_back(static_cast<T>(convert(item)));
    return out;
}

using Setter = std::function<void(ExperimentConfig &, const std::string &)>;

const std::unordered_map<std::string, Setter> &setters() {
    static const std::unordered_map<std::string, Setter> table = {
        {"problem", [](auto &c, auto &v) { c.problem = to_problem(v); }},
        {"n", [](auto &c, auto &v) { c.n = to_uint(v); }},
        {"m", [](auto &c, auto &v) { c.m = to_uint(v); }},
        {"test_m", [](auto &c, auto &v) { c.test_m = to_uint(v); }},
        {"margin", [](auto &c, auto &v) { c.margin = to_real(v); }},
        {"data_seed", [](auto &c, auto &v) { c.data_seed = to_uint(v); }},
        {"train_images", [](auto &c, auto &v) { c.train_images = v; }},
        {"train_labels", [](auto &c, auto &v) { c.train_labels = v; }},
        {"test_images", [](auto &c, auto &v) { c.test_images = v; }},
        {"test_labels", [](auto &c, auto &v) { c.test_labels = v; }},
        {"train_csv", [](auto &c, auto &v) { c.train_csv = v; }},
        {"test_csv", [](auto &c, auto &v) { c.test_csv = v; }},
        {"pos_digit", [](auto &c, auto &v) { c.pos_digit = static_cast<int>(to_uint(v)); }},
        {"neg_digit", [](auto &c, auto &v) { c.neg_digit = static_cast<int>(to_uint(v)); }},
        {"methods",
         [](auto &c, auto &v) {
             c.methods = to_list<Method>(v, [](const std::string &s) { return parse_method(s); });
         }},
        {"S", [](auto &c, auto &v) { c.clients = to_list<std::size_t>(v, to_uint); }},
        {"gamma1", [](auto &c, auto &v) { c.gamma1 = to_real(v); }},
        {"a", [](auto &c, auto &v) { c.a = to_real(v); }},
        {"lambda1", [](auto &c, auto &v) { c.lambda1 = to_real(v); }},
        {"b", [](auto &c, auto &v) { c.b = to_real(v); }},
        {"max_rounds", [](auto &c, auto &v) { c.max_rounds = to_uint(v); }},
        {"tol",
         [](auto &c, auto &v) {
             if (v == "none")
                 c.tol.reset();
             else
                 c.tol = to_real(v);
         }},
        {"repeats", [](auto &c, auto &v) { c.repeats = to_uint(v); }},
        {"seed", [](auto &c, auto &v) { c.seed = to_uint(v); }},
        {"track_average", [](auto &c, auto &v) { c.track_average = to_bool(v); }},
        {"rows_csv", [](auto &c, auto &v) { c.rows_csv = to_bool(v); }},
        {"update_cost", [](auto &c, auto &v) { c.update_cost = to_real(v); }},
        {"comm_cost", [](auto &c, auto &v) { c.comm_cost = to_real(v); }},
        {"client_update_costs",
         [](auto &c, auto &v) { c.client_update_costs = to_list<double>(v, to_real); }},
        {"client_comm_costs",
         [](auto &c, auto &v) { c.client_comm_costs = to_list<double>(v, to_real); }},
        {"sweep_n", [](auto &c, auto &v) { c.sweep_n = to_list<std::size_t>(v, to_uint); }},
        {"sweep_m", [](auto &c, auto &v) { c.sweep_m = to_list<std::size_t>(v, to_uint); }},
        {"out_dir", [](auto &c, auto &v) { c.out_dir = v; }},
    };
    return table;
}

void set_key(ExperimentConfig &config, const std::string &key, const std::string &value,
             std::size_t line) {
    const auto &table = setters();
    auto it = table.find(key);
    if (it == table.end())
        throw ConfigError("unknown key '" + key + "'", line);
    try {
        it->second(config, value);
    } catch (const std::invalid_argument &e) {
        throw ConfigError(key + ": " + e.what(), line);
    }
}

std::pair<std::string, std::string> split_assignment(const std::string &text, std::size_t line) {
    const auto eq = text.find('=');
    if (eq == std::string::npos)
        throw ConfigError("expected key = value", line);
    auto key = trim(std::string_view(text).substr(0, eq));
    auto value = trim(std::string_view(text).substr(eq + 1));
    if (key.empty())
        throw ConfigError("empty key", line);
    return {key, value};
}

} // namespace

std::map<std::string, std::string> ExperimentConfig::echo() const {
    std::map<std::string, std::string> out;
    auto num = [](std::size_t v) { return std::to_string(v); };
    out["problem"] = std::string(to_string(problem));
    out["preset"] = preset;
    out["n"] = num(n);
    out["m"] = num(m);
    out["test_m"] = num(test_m);
    out["margin"] = format_double(margin);
    out["data_seed"] = data_seed ? std::to_string(*data_seed) : "seed";
    out["methods"] = join<Method>(methods, [](const Method &x) { return std::string(to_string(x)); });
    out["S"] = join<std::size_t>(clients, [](const std::size_t &x) { return std::to_string(x); });
    out["gamma1"] = format_double(gamma1);
    out["a"] = format_double(a);
    out["lambda1"] = format_double(lambda1);
    out["b"] = format_double(b);
    out["max_rounds"] = num(max_rounds);
    out["tol"] = tol ? format_double(*tol) : "none";
    out["repeats"] = num(repeats);
    out["seed"] = std::to_string(seed);
    out["track_average"] = track_average ? "true" : "false";
    out["rows_csv"] = rows_csv ? "true" : "false";
    out["update_cost"] = format_double(update_cost);
    out["comm_cost"] = format_double(comm_cost);
    if (!client_update_costs.empty())
        out["client_update_costs"] = join<double>(client_update_costs, format_double);
    if (!client_comm_costs.empty())
        out["client_comm_costs"] = join<double>(client_comm_costs, format_double);
    if (problem == ProblemKind::LogisticMnist) {
        out["train_images"] = train_images;
        out["train_labels"] = train_labels;
        out["test_images"] = test_images;
        out["test_labels"] = test_labels;
        out["train_csv"] = train_csv;
        out["test_csv"] = test_csv;
        out["pos_digit"] = std::to_string(pos_digit);
        out["neg_digit"] = std::to_string(neg_digit);
    }
    return out;
}

ExperimentConfig preset_config(const std::string &name) {
    ExperimentConfig c;
    c.preset = name;
    if (name == "selection") {
        c.problem = ProblemKind::Selection1d;
        c.n = 1;
        c.m = 2;
        c.clients = {1, 2};
        c.gamma1 = 1.0, c.a = 0.55, c.lambda1 = 1.0, c.b = 0.4;
        c.max_rounds = 50000;
    } else if (name == "classification" || name == "mnist") {
        c.problem = name == "mnist" ? ProblemKind::LogisticMnist : ProblemKind::LogisticSynthetic;
        c.n = name == "mnist" ? 784 : 20;
        c.m = name == "mnist" ? 11000 : 400;
        c.test_m = 100;
        c.margin = 0.5;
        c.clients = {1, 2, 4, 8};
        c.gamma1 = 10.0, c.a = 0.8, c.lambda1 = 1.0, c.b = 0.1;
        c.max_rounds = 200;
        c.repeats = 10;
    } else if (name == "location") {
        c.problem = ProblemKind::Location;
        c.n = 10;
        c.m = 500;
        c.clients = {1, 2, 4, 8};
        c.gamma1 = 1.0, c.a = 0.8, c.lambda1 = 1.0, c.b = 0.1;
        c.max_rounds = 100000;
        c.tol = 1e-5;
        c.repeats = 10;
    } else {
        throw ConfigError("unknown preset '" + name + "'");
    }
    return c;
}

ExperimentConfig parse_config(const std::string &text) {
    std::vector<std::tuple<std::size_t, std::string, std::string>> entries;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        if (auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        auto content = trim(raw);
        if (content.empty())
            continue;
        auto [key, value] = split_assignment(content, line);
        if (!seen.insert(key).second)
            throw ConfigError("duplicate key '" + key + "'", line);
        entries.emplace_back(line, std::move(key), std::move(value));
    }

    ExperimentConfig config = preset_config("selection");
    config.preset.clear();
    for (const auto &[l, key, value] : entries)
        if (key == "preset") {
            try {
                config = preset_config(value);
            } catch (const ConfigError &e) {
                throw ConfigError(e.what(), l);
            }
        }
    for (const auto &[l, key, value] : entries)
        if (key != "preset")
            set_key(config, key, value, l);
    return config;
}

ExperimentConfig load_config(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot read config '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

void apply_override(ExperimentConfig &config, const std::string &assignment) {
    auto [key, value] = split_assignment(assignment, 0);
    if (key == "preset")
        throw ConfigError("preset cannot be overridden with --set");
    set_key(config, key, value, 0);
}

void validate(const ExperimentConfig &c) {
    auto fail = [](const std::string &msg) { throw ConfigError(msg); };
    if (c.n < 1)
        fail("n: must be at least 1");
    if (c.m < 1)
        fail("m: must be at least 1");
    if (c.problem == ProblemKind::Selection1d && c.n != 1)
        fail("n: selection-1d is one-dimensional");
    if (c.methods.empty())
        fail("methods: at least one method required");
    if (c.clients.empty())
        fail("S: at least one client count required");
    for (auto s : c.clients) {
        if (s < 1)
            fail("S: client counts must be positive");
        if (s > c.m && c.problem != ProblemKind::LogisticMnist)
            fail("S: more clients than inner functions");
    }
    if (!(c.gamma1 > 0.0))
        fail("gamma1: must be positive");
    if (!(c.lambda1 > 0.0))
        fail("lambda1: must be positive");
    if (c.a < 0.0 || c.b < 0.0)
        fail("a, b: exponents must be nonnegative");
    if (c.max_rounds < 1)
        fail("max_rounds: must be at least 1");
    if (c.tol && !(*c.tol > 0.0))
        fail("tol: must be positive");
    if (c.repeats < 1)
        fail("repeats: must be at least 1");
    if (c.margin < 0.0)
        fail("margin: must be nonnegative");
    if (c.update_cost < 0.0 || c.comm_cost < 0.0)
        fail("update_cost, comm_cost: must be nonnegative");
    std::size_t max_s = 0;
    for (auto s : c.clients)
        max_s = std::max(max_s, s);
    if (!c.client_update_costs.empty() && c.client_update_costs.size() < max_s)
        fail("client_update_costs: need one entry per client");
    if (!c.client_comm_costs.empty() && c.client_comm_costs.size() < max_s)
        fail("client_comm_costs: need one entry per client");
    for (double v : c.client_update_costs)
        if (v < 0.0)
            fail("client_update_costs: must be nonnegative");
    for (double v : c.client_comm_costs)
        if (v < 0.0)
            fail("client_comm_costs: must be nonnegative");
    if (c.problem == ProblemKind::LogisticMnist) {
        const bool idx = !c.train_images.empty() && !c.train_labels.empty();
        const bool csv = !c.train_csv.empty();
        if (!idx && !csv)
            fail("logistic-mnist: set train_images/train_labels or train_csv");
        if (c.pos_digit == c.neg_digit)
            fail("pos_digit, neg_digit: must differ");
    }
    for (auto v : c.sweep_n)
        if (v < 1)
            fail("sweep_n: entries must be positive");
    for (auto v : c.sweep_m)
        if (v < 1)
            fail("sweep_m: entries must be positive");
    if (c.out_dir.empty())
        fail("out_dir: must not be empty");
}

} // namespace fism
