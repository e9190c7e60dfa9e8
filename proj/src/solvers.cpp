#include <fism/solvers.hpp>
#include <fism/random.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

namespace fism {

namespace {

// Single update rule for both methods.
inline void projected_step(std::span<double> x, std::span<const double> inner_subgrad,
                           std::span<const double> outer_subgrad, double gamma, double reg,
                           const BoxConstraint &box) {
    const auto &lo = box.lo();
    const auto &hi = box.hi();
    for (std::size_t d = 0; d < x.size(); ++d)
        x[d] = std::clamp(x[d] - gamma * inner_subgrad[d] - reg * outer_subgrad[d], lo[d], hi[d]);
}

double distance(std::span<const double> u, std::span<const double> v) {
    double s = 0.0;
    for (std::size_t d = 0; d < u.size(); ++d)
        s += (u[d] - v[d]) * (u[d] - v[d]);
    return std::sqrt(s);
}

double norm(std::span<const double> u) {
    double s = 0.0;
    for (double e : u)
        s += e * e;
    return std::sqrt(s);
}

RoundState advance_average(const RoundState &state, double gamma) {
    RoundState next;
    next.k = state.k + 1;
    next.avg_num = state.avg_num;
    if (next.avg_num.empty())
        next.avg_num.assign(state.x.size(), 0.0);
    for (std::size_t d = 0; d < state.x.size(); ++d)
        next.avg_num[d] += gamma * state.x[d];
    next.avg_den = state.avg_den + gamma;
    next.counters = state.counters;
    return next;
}

void check_state(const RoundState &state, const ProblemSpec &problem) {
    require(state.k >= 1, "round index starts at 1");
    require(state.x.size() == problem.dimension(), "iterate dimension mismatch");
}

} // namespace

Vector sample_interior(const BoxConstraint &box, std::uint64_t seed) {
    CounterRng rng(seed);
    Vector x(box.dimension());
    for (std::size_t d = 0; d < x.size(); ++d) {
        const double lo = box.lo()[d], hi = box.hi()[d];
        x[d] = lo == hi ? lo : rng.uniform(lo, hi);
    }
    return x;
}

RoundState initial_state(const ProblemSpec &problem, std::span<const double> x_init) {
    require(x_init.size() == problem.dimension(), "initial point dimension mismatch");
    RoundState state;
    state.x = project_box(x_init, problem.constraint());
    state.k = 1;
    state.avg_num.assign(problem.dimension(), 0.0);
    return state;
}

ClientResult client_local_pass(std::span<const double> x_k, std::span<const double> outer_subgrad,
                               double gamma, double lambda, std::size_t m,
                               std::span<const OraclePtr> local_fns, const BoxConstraint &box,
                               std::span<const double> update_costs,
                               const LocalObserver *observer) {
    require(m >= 1, "m must be positive");
    require(gamma >= 0.0 && lambda >= 0.0, "stepsizes must be nonnegative");
    require(!local_fns.empty(), "a client needs at least one local function");
    require(x_k.size() == box.dimension(), "client pass: iterate dimension mismatch");
    require(outer_subgrad.size() == x_k.size(), "client pass: outer subgradient dimension mismatch");
    require(update_costs.empty() || update_costs.size() == local_fns.size(),
            "client pass: one update cost per local function");

    ClientResult result;
    result.x_out.assign(x_k.begin(), x_k.end());
    Vector grad(x_k.size());
    const double reg = gamma * lambda / static_cast<double>(m);

    if (observer)
        (*observer)(1, result.x_out);
    for (std::size_t j = 0; j < local_fns.size(); ++j) {
        local_fns[j]->evaluate(result.x_out, grad);
        projected_step(result.x_out, grad, outer_subgrad, gamma, reg, box);
        if (observer)
            (*observer)(j + 2, result.x_out);
    }

    if (update_costs.empty()) {
        result.local_cost_units = static_cast<double>(local_fns.size());
    } else {
        for (double s : update_costs)
            result.local_cost_units += s;
    }
    return result;
}

RoundState fism_round(const RoundState &state, const StepSchedule &sched,
                      const ProblemSpec &problem, const RoundHooks &hooks) {
    check_state(state, problem);
    const auto [gamma, lambda] = schedule_at(sched, state.k);
    const std::size_t n = problem.dimension();
    const std::size_t clients = problem.client_count();
    const std::size_t m = problem.inner_count();

    Vector outer_subgrad(n);
    problem.outer().evaluate(state.x, outer_subgrad);

    std::vector<ClientResult> results(clients);
    auto job = [&](std::size_t i) {
        const auto &fns = problem.client(i);
        if (hooks.observer) {
            LocalObserver observer = [&, i](std::size_t j, std::span<const double> x_local) {
                hooks.observer(i, j, x_local);
            };
            results[i] = client_local_pass(state.x, outer_subgrad, gamma, lambda, m, fns,
                                           problem.constraint(), {}, &observer);
        } else {
            results[i] = client_local_pass(state.x, outer_subgrad, gamma, lambda, m, fns,
                                           problem.constraint());
        }
    };
    if (hooks.executor)
        hooks.executor->for_each(clients, job);
    else
        for (std::size_t i = 0; i < clients; ++i)
            job(i);

    RoundState next = advance_average(state, gamma);
    next.x = std::move(results[0].x_out);
    for (std::size_t i = 1; i < clients; ++i)
        for (std::size_t d = 0; d < n; ++d)
            next.x[d] += results[i].x_out[d];
    const double count = static_cast<double>(clients);
    for (double &v : next.x)
        v /= count;

    next.counters.inner += m;
    next.counters.outer += 1;
    return next;
}

RoundState irig_round(const RoundState &state, const StepSchedule &sched,
                      const ProblemSpec &problem) {
    check_state(state, problem);
    const auto [gamma, lambda] = schedule_at(sched, state.k);
    const std::size_t m = problem.inner_count();
    const double reg = gamma * lambda / static_cast<double>(m);

    Vector x = state.x;
    Vector grad(x.size());
    Vector outer_subgrad(x.size());
    for (const auto &fns : problem.clients()) {
        for (const auto &f : fns) {
            problem.outer().evaluate(x, outer_subgrad);
            f->evaluate(x, grad);
            projected_step(x, grad, outer_subgrad, gamma, reg, problem.constraint());
        }
    }

    RoundState next = advance_average(state, gamma);
    next.x = std::move(x);
    next.counters.inner += m;
    next.counters.outer += m;
    return next;
}

Vector weighted_average(const RoundState &state) {
    if (!(state.avg_den > 0.0))
        throw PreconditionError("weighted_average called before any round");
    Vector out = state.avg_num;
    for (double &v : out)
        v /= state.avg_den;
    return out;
}

bool stopping_criterion(std::span<const double> x_prev, std::span<const double> x_next,
                        double f_prev, double f_next, double h_prev, double h_next, double tol) {
    require(tol > 0.0, "tolerance must be positive");
    require(x_prev.size() == x_next.size(), "stopping criterion: dimension mismatch");
    const double dx = distance(x_next, x_prev) / (norm(x_prev) + 1.0);
    const double dh = std::abs(h_next - h_prev) / (h_prev + 1.0);
    const double df = std::abs(f_next - f_prev) / (f_prev + 1.0);
    return std::max({dx, dh, df}) <= tol;
}

RunRecord run_solver(const ProblemSpec &problem, const StepSchedule &sched,
                     const SolverOptions &options) {
    require(options.max_rounds >= 1, "max_rounds must be at least 1");
    const std::size_t m = problem.inner_count();

    Vector x_init = options.x_init ? *options.x_init
                                   : sample_interior(problem.constraint(),
                                                     derive_seed(options.seed, 1));
    RoundState state = initial_state(problem, x_init);

    const ClientPartition partition = partition_of(problem);
    const CostModel costs = options.costs ? *options.costs : uniform_cost_model(partition);
    const double round_time = simulate_round_time(partition, costs, options.method);

    RunRecord record;
    record.method = std::string(to_string(options.method));
    record.problem = options.problem_id;
    record.schedule = sched;
    record.clients = problem.client_count();
    record.m = m;
    record.n = problem.dimension();
    record.seed = options.seed;
    record.prng = std::string(CounterRng::algorithm_id);
    if (!sched.feasible) {
        std::ostringstream msg;
        msg << "schedule violates gamma1*lambda1*mu_H <= 2m (" << sched.gamma1 * sched.lambda1 *
                                                                         problem.mu_outer()
            << " > " << 2 * m << "); running anyway";
        record.warnings.push_back(msg.str());
    }

    RoundHooks hooks;
    hooks.executor = options.executor;

    double f_cur = problem.inner_value(state.x);
    double h_cur = problem.outer_value(state.x);
    double cumulative = 0.0;
    const auto wall_start = std::chrono::steady_clock::now();

    for (std::size_t round = 0; round < options.max_rounds; ++round) {
        RoundState next = options.method == Method::Fism ? fism_round(state, sched, problem, hooks)
                                                         : irig_round(state, sched, problem);
        const double f_next = problem.inner_value(next.x);
        const double h_next = problem.outer_value(next.x);

        RoundRow row;
        row.k = state.k;
        row.inner_value = f_cur;
        row.inner_mean = f_cur / static_cast<double>(m);
        row.outer_value = h_cur;
        row.step_norm = distance(next.x, state.x);
        row.sim_time = round_time;
        cumulative += round_time;
        row.cum_sim_time = cumulative;
        row.counters = next.counters;
        if (options.track_average)
            row.avg_inner_value = problem.inner_value(weighted_average(next));
        row.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
        record.rows.push_back(row);

        const bool stop = options.tol && stopping_criterion(state.x, next.x, f_cur, f_next, h_cur,
                                                            h_next, *options.tol);
        state = std::move(next);
        f_cur = f_next;
        h_cur = h_next;
        if (stop) {
            record.stop_reason = StopReason::Tolerance;
            break;
        }
    }

    record.final_x = state.x;
    record.final_average = weighted_average(state);
    record.extras["final_F"] = f_cur;
    record.extras["final_H"] = h_cur;
    return record;
}

Vector reference_solve(const ProblemSpec &problem, double lambda, std::size_t iters,
                       std::uint64_t seed, std::optional<Vector> x_init) {
    require(lambda > 0.0, "lambda must be positive");
    require(iters >= 1, "iters must be at least 1");
    const std::size_t n = problem.dimension();
    const auto &box = problem.constraint();

    Vector x = x_init ? project_box(*x_init, box) : sample_interior(box, seed);
    require(x.size() == n, "initial point dimension mismatch");
    const double c = 2.0 / (lambda * problem.mu_outer());

    Vector grad(n), part(n), tail(n, 0.0);
    std::size_t tail_count = 0;
    for (std::size_t k = 1; k <= iters; ++k) {
        problem.outer().evaluate(x, part);
        for (std::size_t d = 0; d < n; ++d)
            grad[d] = lambda * part[d];
        for (const auto &fns : problem.clients()) {
            for (const auto &f : fns) {
                f->evaluate(x, part);
                for (std::size_t d = 0; d < n; ++d)
                    grad[d] += part[d];
            }
        }
        const double step = c / static_cast<double>(k);
        for (std::size_t d = 0; d < n; ++d)
            x[d] -= step * grad[d];
        project_box_inplace(x, box);
        if (k > iters / 2) {
            for (std::size_t d = 0; d < n; ++d)
                tail[d] += x[d];
            ++tail_count;
        }
    }
    for (double &v : tail)
        v /= static_cast<double>(tail_count);
    return tail;
}

} // namespace fism
