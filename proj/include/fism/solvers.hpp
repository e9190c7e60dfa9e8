#pragma once

#include <fism/executor.hpp>
#include <fism/federation.hpp>
#include <fism/metrics.hpp>
#include <fism/problem.hpp>

#include <functional>
#include <optional>

namespace fism {

/// Driver-owned state between rounds.
struct RoundState {
    Vector x;          ///< x_k
    std::size_t k = 1;
    Vector avg_num;    ///< sum of gamma_j x_j for j < k
    double avg_den = 0.0;
    SubgradientCounters counters;
};

/// State for round 1 with x_1 = P_X(x_init).
RoundState initial_state(const ProblemSpec &problem, std::span<const double> x_init);

struct ClientResult {
    Vector x_out;
    double local_cost_units = 0.0;
};

/// Called with the 1-based local index j and x^i_{k,j}, for j = 1..I_i+1.
using LocalObserver = std::function<void(std::size_t j, std::span<const double> x_local)>;

/// One client's incremental pass with the outer subgradient frozen at
/// `outer_subgrad`:  x_{j+1} = P_X[x_j - gamma g_j - (gamma lambda / m) H_k].
/// `update_costs` gives s_{i,j}; empty means one unit per update.
ClientResult client_local_pass(std::span<const double> x_k, std::span<const double> outer_subgrad,
                               double gamma, double lambda, std::size_t m,
                               std::span<const OraclePtr> local_fns, const BoxConstraint &box,
                               std::span<const double> update_costs = {},
                               const LocalObserver *observer = nullptr);

/// Optional hooks for a round. The observer is called from worker threads
/// when the executor has more than one thread.
struct RoundHooks {
    const Executor *executor = nullptr;
    std::function<void(std::size_t client, std::size_t j, std::span<const double> x_local)>
        observer;
};

/// One FISM round: a single outer subgradient, parallel client passes,
/// ascending-index averaging.
RoundState fism_round(const RoundState &state, const StepSchedule &sched,
                      const ProblemSpec &problem, const RoundHooks &hooks = {});

/// One IR-IG pass over all m inner functions in global order, with a fresh
/// outer subgradient at every step.
RoundState irig_round(const RoundState &state, const StepSchedule &sched,
                      const ProblemSpec &problem);

/// x_hat = sum gamma_k x_k / sum gamma_k over the rounds completed so far.
Vector weighted_average(const RoundState &state);

/// max{||dx|| / (||x_prev|| + 1), |dH| / (H_prev + 1), |dF| / (F_prev + 1)} <= tol.
bool stopping_criterion(std::span<const double> x_prev, std::span<const double> x_next,
                        double f_prev, double f_next, double h_prev, double h_next, double tol);

struct SolverOptions {
    Method method = Method::Fism;
    /// Sampled uniformly in the open box interior from `seed` when empty.
    std::optional<Vector> x_init;
    std::size_t max_rounds = 200;
    std::optional<double> tol;
    std::uint64_t seed = 0;
    /// Unit update costs and zero communication when empty.
    std::optional<CostModel> costs;
    /// Also record F(x_hat_k) every round (needed by rate_diagnostic).
    bool track_average = false;
    const Executor *executor = nullptr;
    std::string problem_id = "custom";
};

RunRecord run_solver(const ProblemSpec &problem, const StepSchedule &sched,
                     const SolverOptions &options);

/// Approximates argmin_{x in X} F(x) + lambda H(x) by projected subgradient
/// with step c/k, c = 2 / (lambda mu_H), averaging the last half of the
/// iterates. Used as a test oracle.
Vector reference_solve(const ProblemSpec &problem, double lambda, std::size_t iters,
                       std::uint64_t seed, std::optional<Vector> x_init = std::nullopt);

/// Uniform point in the open interior of the box.
Vector sample_interior(const BoxConstraint &box, std::uint64_t seed);

} // namespace fism
