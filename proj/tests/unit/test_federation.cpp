#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "reference.hpp"

#include <fism/federation.hpp>

#include <algorithm>
#include <set>

using namespace fism;

namespace {

std::vector<std::size_t> sizes(const ClientPartition &p) {
    std::vector<std::size_t> out;
    for (const auto &a : p.assignments)
        out.push_back(a.size());
    return out;
}

} // namespace

TEST_CASE("partition_data examples") {
    auto p = partition_data(10, 4, PartitionStrategy::ContiguousBalanced);
    CHECK(sizes(p) == std::vector<std::size_t>{3, 3, 2, 2});
    CHECK(p.assignments[0] == std::vector<std::size_t>{0, 1, 2});
    CHECK(p.assignments[3] == std::vector<std::size_t>{8, 9});

    auto one = partition_data(8, 1, PartitionStrategy::ContiguousBalanced);
    CHECK(one.assignments.size() == 1);
    CHECK(one.assignments[0] == std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7});

    auto big = partition_data(11000, 8, PartitionStrategy::ContiguousBalanced);
    CHECK(sizes(big) == std::vector<std::size_t>(8, 1375));

    CHECK_THROWS_AS(partition_data(3, 4, PartitionStrategy::ContiguousBalanced),
                    std::invalid_argument);
    CHECK_THROWS_AS(partition_data(3, 0, PartitionStrategy::ContiguousBalanced),
                    std::invalid_argument);
}

TEST_CASE("partitions are balanced set partitions") {
    fism::testing::TestRng rng(21);
    for (int t = 0; t < 200; ++t) {
        const auto m = static_cast<std::size_t>(rng.uniform(1, 300));
        const auto s = 1 + static_cast<std::size_t>(rng.uniform(0, static_cast<double>(m)));
        const auto strategy =
            t % 2 ? PartitionStrategy::ShuffledBalanced : PartitionStrategy::ContiguousBalanced;
        auto p = partition_data(m, std::min(s, m), strategy, rng.next());
        std::set<std::size_t> seen;
        std::size_t total = 0;
        for (const auto &a : p.assignments) {
            total += a.size();
            seen.insert(a.begin(), a.end());
        }
        REQUIRE(total == m);
        REQUIRE(seen.size() == m);
        REQUIRE(*seen.rbegin() == m - 1);
        auto sz = sizes(p);
        REQUIRE(*std::max_element(sz.begin(), sz.end()) -
                    *std::min_element(sz.begin(), sz.end()) <=
                1);
    }
}

TEST_CASE("shuffled partition depends only on the seed") {
    auto a = partition_data(50, 3, PartitionStrategy::ShuffledBalanced, 9);
    auto b = partition_data(50, 3, PartitionStrategy::ShuffledBalanced, 9);
    auto c = partition_data(50, 3, PartitionStrategy::ShuffledBalanced, 10);
    CHECK(a.assignments == b.assignments);
    CHECK(a.assignments != c.assignments);
}

TEST_CASE("simulate_round_time examples") {
    auto p4 = partition_data(8, 4, PartitionStrategy::ContiguousBalanced);
    auto unit = uniform_cost_model(p4, 1.0, 0.0);
    CHECK(simulate_round_time(p4, unit, Method::Fism) == 2.0);
    CHECK(simulate_round_time(p4, unit, Method::Irig) == 8.0);

    auto p1 = partition_data(8, 1, PartitionStrategy::ContiguousBalanced);
    auto unit1 = uniform_cost_model(p1, 1.0, 0.0);
    CHECK(simulate_round_time(p1, unit1, Method::Fism) == 8.0);
    CHECK(simulate_round_time(p1, unit1, Method::Irig) == 8.0);

    CHECK(simulate_round_time(p4, uniform_cost_model(p4, 1.0, 3.0), Method::Fism) == 5.0);

    auto broken = unit;
    broken.per_update[2].pop_back();
    CHECK_THROWS_AS(simulate_round_time(p4, broken, Method::Fism), std::invalid_argument);
    broken = unit;
    broken.comm.pop_back();
    CHECK_THROWS_AS(simulate_round_time(p4, broken, Method::Fism), std::invalid_argument);
}

TEST_CASE("FISM time is bounded by IR-IG time plus the largest comm cost") {
    fism::testing::TestRng rng(22);
    for (int t = 0; t < 100; ++t) {
        const auto m = static_cast<std::size_t>(rng.uniform(1, 200));
        const auto s = 1 + static_cast<std::size_t>(rng.uniform(0, static_cast<double>(m)));
        auto p = partition_data(m, std::min(s, m), PartitionStrategy::ShuffledBalanced, rng.next());

        // t_j for IR-IG, s_{i,j} <= t_j for FISM under the identity mapping.
        std::vector<double> t_cost = rng.vec(m, 0.0, 2.0);
        CostModel fism_costs, irig_costs;
        irig_costs.per_update.push_back(t_cost);
        irig_costs.comm = {0.0};
        auto irig_part = partition_data(m, 1, PartitionStrategy::ContiguousBalanced);
        double max_eps = 0.0;
        for (const auto &a : p.assignments) {
            std::vector<double> row;
            for (auto j : a)
                row.push_back(t_cost[j] * rng.uniform(0, 1));
            fism_costs.per_update.push_back(row);
            fism_costs.comm.push_back(rng.uniform(0, 5));
            max_eps = std::max(max_eps, fism_costs.comm.back());
        }
        CHECK(simulate_round_time(p, fism_costs, Method::Fism) <=
              simulate_round_time(irig_part, irig_costs, Method::Irig) + max_eps);
    }
}

TEST_CASE("uniform costs give a ceil(m/S)/m speedup") {
    for (std::size_t m : {1, 7, 64, 500, 1001})
        for (std::size_t s : {1, 2, 3, 4, 8})
            if (s <= m) {
                auto p = partition_data(m, s, PartitionStrategy::ContiguousBalanced);
                auto costs = uniform_cost_model(p, 2.5, 0.0);
                const double t_fism = simulate_round_time(p, costs, Method::Fism);
                const double t_irig = simulate_round_time(p, costs, Method::Irig);
                const double ceil_ms = static_cast<double>((m + s - 1) / s);
                CHECK(t_fism == doctest::Approx(ceil_ms / static_cast<double>(m) * t_irig));
            }
}
