#include <fism/box.hpp>

#include <algorithm>

namespace fism {

BoxConstraint::BoxConstraint(Vector lo, Vector hi) : lo_{std::move(lo)}, hi_{std::move(hi)} {
    require(lo_.size() == hi_.size(), "box bounds differ in dimension");
    require(!lo_.empty(), "box must have at least one coordinate");
    for (std::size_t d = 0; d < lo_.size(); ++d)
        require(lo_[d] <= hi_[d], "box lower bound exceeds upper bound");
}

BoxConstraint BoxConstraint::cube(std::size_t n, double lo, double hi) {
    return BoxConstraint(Vector(n, lo), Vector(n, hi));
}

bool BoxConstraint::contains(std::span<const double> x) const {
    if (x.size() != lo_.size())
        return false;
    for (std::size_t d = 0; d < x.size(); ++d)
        if (!(x[d] >= lo_[d] && x[d] <= hi_[d]))
            return false;
    return true;
}

Vector project_box(std::span<const double> x, const BoxConstraint &box) {
    Vector out(x.begin(), x.end());
    project_box_inplace(out, box);
    return out;
}

void project_box_inplace(std::span<double> x, const BoxConstraint &box) {
    require(x.size() == box.dimension(), "project_box: dimension mismatch");
    const auto &lo = box.lo();
    const auto &hi = box.hi();
    for (std::size_t d = 0; d < x.size(); ++d)
        x[d] = std::clamp(x[d], lo[d], hi[d]);
}

} // namespace fism
