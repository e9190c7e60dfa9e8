#include <fism/federation.hpp>
#include <fism/problem.hpp>
#include <fism/random.hpp>

#include <algorithm>
#include <numeric>

namespace fism {

std::string_view to_string(PartitionStrategy strategy) {
    return strategy == PartitionStrategy::ContiguousBalanced ? "contiguous-balanced"
                                                             : "seeded-shuffle-balanced";
}

std::size_t ClientPartition::total() const {
    std::size_t total = 0;
    for (const auto &a : assignments)
        total += a.size();
    return total;
}

ClientPartition partition_data(std::size_t m, std::size_t clients, PartitionStrategy strategy,
                               std::uint64_t seed) {
    require(clients >= 1, "partition needs at least one client");
    require(clients <= m, "more clients than inner functions");

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    if (strategy == PartitionStrategy::ShuffledBalanced) {
        CounterRng rng(seed);
        shuffle(std::span<std::size_t>(order), rng);
    }

    ClientPartition partition;
    partition.strategy = strategy;
    const std::size_t base = m / clients;
    const std::size_t extra = m % clients;
    std::size_t next = 0;
    for (std::size_t i = 0; i < clients; ++i) {
        std::size_t size = base + (i < extra ? 1 : 0);
        partition.assignments.emplace_back(order.begin() + static_cast<std::ptrdiff_t>(next),
                                           order.begin() + static_cast<std::ptrdiff_t>(next + size));
        next += size;
    }
    return partition;
}

ClientPartition partition_of(const ProblemSpec &problem) {
    ClientPartition partition;
    std::size_t next = 0;
    for (const auto &fns : problem.clients()) {
        std::vector<std::size_t> idx(fns.size());
        std::iota(idx.begin(), idx.end(), next);
        next += fns.size();
        partition.assignments.push_back(std::move(idx));
    }
    return partition;
}

CostModel uniform_cost_model(const ClientPartition &partition, double update_cost,
                             double comm_cost) {
    require(update_cost >= 0.0 && comm_cost >= 0.0, "costs must be nonnegative");
    CostModel costs;
    for (const auto &a : partition.assignments)
        costs.per_update.emplace_back(a.size(), update_cost);
    costs.comm.assign(partition.client_count(), comm_cost);
    return costs;
}

double simulate_round_time(const ClientPartition &partition, const CostModel &costs,
                           Method method) {
    const std::size_t clients = partition.client_count();
    require(costs.per_update.size() == clients, "cost model is missing a client");
    double slowest = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < clients; ++i) {
        const auto &row = costs.per_update[i];
        require(row.size() == partition.assignments[i].size(),
                "cost model is missing an update cost entry");
        double local = 0.0;
        for (double s : row) {
            require(s >= 0.0, "costs must be nonnegative");
            local += s;
        }
        slowest = std::max(slowest, local);
        total += local;
    }
    if (method == Method::Irig)
        return total;

    require(costs.comm.size() == clients, "cost model is missing a communication entry");
    double comm = 0.0;
    for (double e : costs.comm) {
        require(e >= 0.0, "costs must be nonnegative");
        comm = std::max(comm, e);
    }
    return slowest + comm;
}

} // namespace fism
