#pragma once

#include <fism/box.hpp>
#include <fism/oracles.hpp>

#include <cstdint>
#include <vector>

namespace fism {

/// The bilevel problem: minimize H over argmin_{y in X} sum_i sum_j f^i_j(y).
///
/// Inner functions are grouped by client; the order inside a client is the
/// order of the incremental pass.
class ProblemSpec {
  public:
    using ClientFunctions = std::vector<OraclePtr>;

    ProblemSpec(std::size_t dimension, std::vector<ClientFunctions> clients, OraclePtr outer,
                BoxConstraint constraint, double mu_outer);

    std::size_t dimension() const { return dimension_; }
    std::size_t client_count() const { return clients_.size(); }
    /// Total number of inner functions m.
    std::size_t inner_count() const { return inner_count_; }
    const std::vector<ClientFunctions> &clients() const { return clients_; }
    const ClientFunctions &client(std::size_t i) const { return clients_.at(i); }
    const Oracle &outer() const { return *outer_; }
    const OraclePtr &outer_ptr() const { return outer_; }
    const BoxConstraint &constraint() const { return constraint_; }
    double mu_outer() const { return mu_outer_; }

    /// F(x) summed in global order (client 0 first).
    double inner_value(std::span<const double> x) const;
    double outer_value(std::span<const double> x) const { return outer_->value(x); }

    /// Same functions regrouped into a different number of clients, keeping
    /// the global order and using balanced contiguous groups.
    ProblemSpec regrouped(std::size_t clients) const;

  private:
    std::size_t dimension_;
    std::vector<ClientFunctions> clients_;
    OraclePtr outer_;
    BoxConstraint constraint_;
    double mu_outer_;
    std::size_t inner_count_ = 0;
};

/// gamma_k = gamma1 / k^a, lambda_k = lambda1 / k^b.
struct StepSchedule {
    double gamma1 = 1.0;
    double a = 0.0;
    double lambda1 = 1.0;
    double b = 0.0;
    /// gamma1 * lambda1 * mu_H <= 2m. Infeasible schedules still run.
    bool feasible = true;
};

struct StepPair {
    double gamma;
    double lambda;
};

StepSchedule make_schedule(double gamma1, double a, double lambda1, double b, double mu_outer,
                           std::size_t m);
StepPair schedule_at(const StepSchedule &sched, std::size_t k);

/// Sampled upper estimates of C_f = max{B_f, L_f} and C_H = max{B_H, L_H, M_H}.
struct BoundEstimates {
    double c_inner = 0.0;
    double c_outer = 0.0;
};

/// Samples `samples` uniform points of the box (seeded) and records the
/// largest subgradient norm, secant slope between consecutive samples and,
/// for H, the largest |H|. Test-only helper; the solvers never use it.
BoundEstimates estimate_bounds(const ProblemSpec &problem, std::size_t samples = 1000,
                               std::uint64_t seed = 0x5eed);

} // namespace fism
