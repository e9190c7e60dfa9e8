#pragma once

// Test-only oracles. Nothing here calls into the solver code paths it checks.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace fism::testing {

/// Central difference of f at x along every coordinate.
inline std::vector<double> central_difference(
    const std::function<double(std::span<const double>)> &f, std::span<const double> x,
    double h = 1e-6) {
    std::vector<double> out(x.size());
    std::vector<double> probe(x.begin(), x.end());
    for (std::size_t d = 0; d < x.size(); ++d) {
        probe[d] = x[d] + h;
        const double up = f(probe);
        probe[d] = x[d] - h;
        const double down = f(probe);
        probe[d] = x[d];
        out[d] = (up - down) / (2 * h);
    }
    return out;
}

/// Brute-force 1D argmin on lo, lo+step, ..., hi.
inline double grid_argmin_1d(const std::function<double(double)> &f, double lo, double hi,
                             double step) {
    const auto count = static_cast<std::int64_t>(std::llround((hi - lo) / step));
    double best_x = lo, best = std::numeric_limits<double>::infinity();
    for (std::int64_t i = 0; i <= count; ++i) {
        const double x = lo + static_cast<double>(i) * step;
        const double v = f(x);
        if (v < best) {
            best = v;
            best_x = x;
        }
    }
    return best_x;
}

/// Minimum value of f on the same 1D grid.
inline double grid_min_1d(const std::function<double(double)> &f, double lo, double hi,
                          double step) {
    return f(grid_argmin_1d(f, lo, hi, step));
}

struct GridPoint2d {
    double x = 0, y = 0, inner = 0, outer = 0;
};

/// Lexicographic grid search: minimize inner, break ties (within `tie`) by
/// the smallest outer value.
template <class Inner, class Outer>
GridPoint2d grid_bilevel_2d(Inner inner, Outer outer, double lo, double hi, double step,
                            double tie = 1e-12) {
    const auto count = static_cast<std::int64_t>(std::llround((hi - lo) / step));
    GridPoint2d best{0, 0, std::numeric_limits<double>::infinity(),
                     std::numeric_limits<double>::infinity()};
    for (std::int64_t i = 0; i <= count; ++i) {
        const double x = lo + static_cast<double>(i) * step;
        for (std::int64_t j = 0; j <= count; ++j) {
            const double y = lo + static_cast<double>(j) * step;
            const double f = inner(x, y);
            if (f > best.inner + tie)
                continue;
            const double h = outer(x, y);
            if (f < best.inner - tie || h < best.outer)
                best = {x, y, f, h};
        }
    }
    return best;
}

/// dist(x, B(c, r)) written out independently of the library oracle.
inline double ball_distance(std::span<const double> x, std::span<const double> c, double r) {
    double sq = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d)
        sq += (x[d] - c[d]) * (x[d] - c[d]);
    return std::max(0.0, std::sqrt(sq) - r);
}

/// Small deterministic generator for test inputs (xorshift64*).
class TestRng {
  public:
    explicit TestRng(std::uint64_t seed) : state_{seed ? seed : 0x9E3779B97F4A7C15ULL} {}
    std::uint64_t next() {
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * 0x2545F4914F6CDD1DULL;
    }
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(next() >> 11) * 0x1.0p-53);
    }
    std::vector<double> vec(std::size_t n, double lo, double hi) {
        std::vector<double> v(n);
        for (double &e : v)
            e = uniform(lo, hi);
        return v;
    }

  private:
    std::uint64_t state_;
};

} // namespace fism::testing
