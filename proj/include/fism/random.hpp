#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace fism {

/// Counter-based SplitMix64 stream. Output i is mix(key + i * golden), so any
/// implementation that follows the published SplitMix64 finalizer reproduces
/// the same sequence for a given key.
class CounterRng {
  public:
    static constexpr std::string_view algorithm_id = "splitmix64-ctr/v1";

    explicit CounterRng(std::uint64_t key) : key_{key} {}

    std::uint64_t next_u64();
    /// Uniform in the open interval (0, 1).
    double uniform01();
    /// Uniform in the open interval (lo, hi).
    double uniform(double lo, double hi);
    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound);
    /// Standard normal via Box-Muller.
    double normal();

    std::uint64_t counter() const { return counter_; }

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_normal_ = 0.0;
    bool has_spare_ = false;
};

std::uint64_t splitmix64_mix(std::uint64_t z);

/// Independent child seed for a named stream (e.g. repeat r, "init").
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

template <class T>
void shuffle(std::span<T> items, CounterRng &rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        auto j = static_cast<std::size_t>(rng.below(i));
        std::swap(items[i - 1], items[j]);
    }
}

} // namespace fism
