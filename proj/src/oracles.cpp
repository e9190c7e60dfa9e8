#include <fism/oracles.hpp>

#include <cmath>
#include <numeric>

namespace fism {

namespace {

double dot(std::span<const double> u, std::span<const double> v) {
    return std::inner_product(u.begin(), u.end(), v.begin(), 0.0);
}

void check_dims(std::size_t expected, std::span<const double> x, const char *what) {
    if (x.size() != expected)
        throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

} // namespace

double softplus(double z) {
    if (z > 0.0)
        return z + std::log1p(std::exp(-z));
    return std::log1p(std::exp(z));
}

double sigmoid(double z) {
    if (z >= 0.0)
        return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

EvalResult Oracle::eval(std::span<const double> x) const {
    EvalResult out;
    out.subgrad.assign(dimension(), 0.0);
    out.value = evaluate(x, out.subgrad);
    return out;
}

// -- logistic ---------------------------------------------------------------

LogisticLoss::LogisticLoss(Vector features, int label)
    : features_{std::move(features)}, label_{static_cast<double>(label)} {
    require(label == 1 || label == -1, "logistic label must be -1 or +1");
    require(!features_.empty(), "logistic features must be non-empty");
}

double LogisticLoss::value(std::span<const double> x) const {
    check_dims(features_.size(), x, "logistic_eval");
    return softplus(-label_ * dot(features_, x));
}

double LogisticLoss::evaluate(std::span<const double> x, std::span<double> subgrad) const {
    check_dims(features_.size(), x, "logistic_eval");
    check_dims(features_.size(), subgrad, "logistic_eval");
    const double z = -label_ * dot(features_, x);
    const double scale = -label_ * sigmoid(z);
    for (std::size_t d = 0; d < features_.size(); ++d)
        subgrad[d] = scale * features_[d];
    return softplus(z);
}

// -- distance to a ball -----------------------------------------------------

BallDistance::BallDistance(Vector center, double radius)
    : center_{std::move(center)}, radius_{radius} {
    require(radius_ > 0.0, "ball radius must be positive");
}

double BallDistance::value(std::span<const double> x) const {
    check_dims(center_.size(), x, "ball_dist_eval");
    double sq = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d) {
        double diff = x[d] - center_[d];
        sq += diff * diff;
    }
    return std::max(0.0, std::sqrt(sq) - radius_);
}

double BallDistance::evaluate(std::span<const double> x, std::span<double> subgrad) const {
    check_dims(center_.size(), x, "ball_dist_eval");
    check_dims(center_.size(), subgrad, "ball_dist_eval");
    double sq = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d) {
        double diff = x[d] - center_[d];
        sq += diff * diff;
    }
    const double norm = std::sqrt(sq);
    if (norm <= radius_) {
        std::fill(subgrad.begin(), subgrad.end(), 0.0);
        return 0.0;
    }
    for (std::size_t d = 0; d < x.size(); ++d)
        subgrad[d] = (x[d] - center_[d]) / norm;
    return norm - radius_;
}

// -- outer objectives -------------------------------------------------------

double L1QuadOuter::value(std::span<const double> x) const {
    check_dims(n_, x, "outer_l1_quad_eval");
    double l1 = 0.0, sq = 0.0;
    for (double v : x) {
        l1 += std::abs(v);
        sq += v * v;
    }
    return l1 + 0.5 * sq;
}

double L1QuadOuter::evaluate(std::span<const double> x, std::span<double> subgrad) const {
    check_dims(n_, x, "outer_l1_quad_eval");
    check_dims(n_, subgrad, "outer_l1_quad_eval");
    for (std::size_t d = 0; d < x.size(); ++d) {
        double sign = (x[d] > 0.0) - (x[d] < 0.0);
        subgrad[d] = sign + x[d];
    }
    return value(x);
}

double QuadAnchorOuter::value(std::span<const double> x) const {
    check_dims(anchor_.size(), x, "outer_quad_anchor_eval");
    double sq = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d) {
        double diff = x[d] - anchor_[d];
        sq += diff * diff;
    }
    return 0.5 * sq;
}

double QuadAnchorOuter::evaluate(std::span<const double> x, std::span<double> subgrad) const {
    check_dims(anchor_.size(), subgrad, "outer_quad_anchor_eval");
    double v = value(x);
    for (std::size_t d = 0; d < x.size(); ++d)
        subgrad[d] = x[d] - anchor_[d];
    return v;
}

double FunctionOracle::evaluate(std::span<const double> x, std::span<double> subgrad) const {
    check_dims(n_, x, "function oracle");
    check_dims(n_, subgrad, "function oracle");
    return fn_(x, subgrad);
}

double FunctionOracle::value(std::span<const double> x) const {
    Vector scratch(n_, 0.0);
    return evaluate(x, scratch);
}

// -- free functions ---------------------------------------------------------

EvalResult logistic_eval(std::span<const double> a, int b, std::span<const double> x) {
    return LogisticLoss(Vector(a.begin(), a.end()), b).eval(x);
}

EvalResult ball_dist_eval(std::span<const double> x, std::span<const double> center,
                          double radius) {
    return BallDistance(Vector(center.begin(), center.end()), radius).eval(x);
}

EvalResult outer_l1_quad_eval(std::span<const double> x) { return L1QuadOuter(x.size()).eval(x); }

EvalResult outer_quad_anchor_eval(std::span<const double> x, std::span<const double> anchor) {
    return QuadAnchorOuter(Vector(anchor.begin(), anchor.end())).eval(x);
}

} // namespace fism
