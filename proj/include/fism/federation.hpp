#pragma once

#include <fism/types.hpp>

#include <cstdint>
#include <vector>

namespace fism {

class ProblemSpec;

enum class PartitionStrategy { ContiguousBalanced, ShuffledBalanced };

std::string_view to_string(PartitionStrategy strategy);

/// Assignment of the m global inner-function indices to S clients.
struct ClientPartition {
    std::vector<std::vector<std::size_t>> assignments;
    PartitionStrategy strategy = PartitionStrategy::ContiguousBalanced;

    std::size_t client_count() const { return assignments.size(); }
    std::size_t total() const;
};

/// Balanced split; the first m mod S clients receive one extra index.
/// ShuffledBalanced permutes 0..m-1 with `seed` before splitting.
ClientPartition partition_data(std::size_t m, std::size_t clients, PartitionStrategy strategy,
                               std::uint64_t seed = 0);

/// Contiguous partition matching the client sizes of a problem.
ClientPartition partition_of(const ProblemSpec &problem);

/// Simulated costs: per_update[i][j] is s_{i,j} for the j-th local update of
/// client i, comm[i] is the server <-> client i communication time.
struct CostModel {
    std::vector<std::vector<double>> per_update;
    std::vector<double> comm;
};

CostModel uniform_cost_model(const ClientPartition &partition, double update_cost = 1.0,
                             double comm_cost = 0.0);

/// Per-round time. FISM: slowest client's summed local cost plus the largest
/// communication cost. IR-IG: sum of all m update costs, no communication.
double simulate_round_time(const ClientPartition &partition, const CostModel &costs,
                           Method method);

} // namespace fism
