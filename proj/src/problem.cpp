#include <fism/federation.hpp>
#include <fism/problem.hpp>
#include <fism/random.hpp>

#include <cmath>

namespace fism {

ProblemSpec::ProblemSpec(std::size_t dimension, std::vector<ClientFunctions> clients,
                         OraclePtr outer, BoxConstraint constraint, double mu_outer)
    : dimension_{dimension}, clients_{std::move(clients)}, outer_{std::move(outer)},
      constraint_{std::move(constraint)}, mu_outer_{mu_outer} {
    require(dimension_ >= 1, "problem dimension must be positive");
    require(!clients_.empty(), "problem needs at least one client");
    require(outer_ != nullptr, "problem needs an outer objective");
    require(outer_->dimension() == dimension_, "outer objective dimension mismatch");
    require(constraint_.dimension() == dimension_, "constraint dimension mismatch");
    require(mu_outer_ > 0.0, "outer strong-convexity modulus must be positive");
    for (const auto &fns : clients_) {
        require(!fns.empty(), "every client needs at least one inner function");
        for (const auto &f : fns) {
            require(f != nullptr, "null inner function");
            require(f->dimension() == dimension_, "inner function dimension mismatch");
        }
        inner_count_ += fns.size();
    }
}

double ProblemSpec::inner_value(std::span<const double> x) const {
    double total = 0.0;
    for (const auto &fns : clients_)
        for (const auto &f : fns)
            total += f->value(x);
    return total;
}

ProblemSpec ProblemSpec::regrouped(std::size_t clients) const {
    std::vector<OraclePtr> pool;
    pool.reserve(inner_count_);
    for (const auto &fns : clients_)
        pool.insert(pool.end(), fns.begin(), fns.end());
    auto partition = partition_data(pool.size(), clients, PartitionStrategy::ContiguousBalanced);
    std::vector<ClientFunctions> grouped;
    for (const auto &indices : partition.assignments) {
        ClientFunctions fns;
        for (auto idx : indices)
            fns.push_back(pool[idx]);
        grouped.push_back(std::move(fns));
    }
    return ProblemSpec(dimension_, std::move(grouped), outer_, constraint_, mu_outer_);
}

StepSchedule make_schedule(double gamma1, double a, double lambda1, double b, double mu_outer,
                           std::size_t m) {
    require(gamma1 > 0.0, "gamma1 must be positive");
    require(lambda1 > 0.0, "lambda1 must be positive");
    StepSchedule sched{gamma1, a, lambda1, b, true};
    sched.feasible = gamma1 * lambda1 * mu_outer <= 2.0 * static_cast<double>(m);
    return sched;
}

StepPair schedule_at(const StepSchedule &sched, std::size_t k) {
    require(k >= 1, "schedule index starts at 1");
    const double kk = static_cast<double>(k);
    return {sched.gamma1 / std::pow(kk, sched.a), sched.lambda1 / std::pow(kk, sched.b)};
}

BoundEstimates estimate_bounds(const ProblemSpec &problem, std::size_t samples,
                               std::uint64_t seed) {
    const auto &box = problem.constraint();
    const std::size_t n = problem.dimension();
    CounterRng rng(seed);

    auto draw = [&] {
        Vector x(n);
        for (std::size_t d = 0; d < n; ++d)
            x[d] = box.lo()[d] == box.hi()[d] ? box.lo()[d] : rng.uniform(box.lo()[d], box.hi()[d]);
        return x;
    };
    auto norm = [](std::span<const double> v) {
        double s = 0.0;
        for (double e : v)
            s += e * e;
        return std::sqrt(s);
    };

    BoundEstimates est;
    Vector grad(n);
    Vector prev = draw();
    for (std::size_t s = 0; s < samples; ++s) {
        Vector x = draw();
        const double step = std::sqrt([&] {
            double acc = 0.0;
            for (std::size_t d = 0; d < n; ++d)
                acc += (x[d] - prev[d]) * (x[d] - prev[d]);
            return acc;
        }());
        for (const auto &fns : problem.clients()) {
            for (const auto &f : fns) {
                double v = f->evaluate(x, grad);
                est.c_inner = std::max(est.c_inner, norm(grad));
                if (step > 0.0)
                    est.c_inner = std::max(est.c_inner, std::abs(v - f->value(prev)) / step);
            }
        }
        double h = problem.outer().evaluate(x, grad);
        est.c_outer = std::max({est.c_outer, norm(grad), std::abs(h)});
        if (step > 0.0)
            est.c_outer =
                std::max(est.c_outer, std::abs(h - problem.outer().value(prev)) / step);
        prev = std::move(x);
    }
    return est;
}

} // namespace fism
