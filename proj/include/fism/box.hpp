#pragma once

#include <fism/types.hpp>

#include <span>

namespace fism {

/// Axis-aligned box [lo, hi] in R^n.
class BoxConstraint {
  public:
    BoxConstraint(Vector lo, Vector hi);

    /// The cube [lo, hi]^n.
    static BoxConstraint cube(std::size_t n, double lo, double hi);

    std::size_t dimension() const { return lo_.size(); }
    const Vector &lo() const { return lo_; }
    const Vector &hi() const { return hi_; }

    bool contains(std::span<const double> x) const;

  private:
    Vector lo_;
    Vector hi_;
};

/// Componentwise clamp of x onto the box.
Vector project_box(std::span<const double> x, const BoxConstraint &box);

/// In-place variant used on hot paths.
void project_box_inplace(std::span<double> x, const BoxConstraint &box);

} // namespace fism
