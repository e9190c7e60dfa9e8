#pragma once

#include <fism/box.hpp>

#include <functional>
#include <memory>
#include <span>

namespace fism {

/// Function value together with one subgradient at the query point.
struct EvalResult {
    double value = 0.0;
    Vector subgrad;
};

/// Value + subgradient oracle for a convex function on R^n.
///
/// Implementations are immutable and must be safe to call concurrently.
/// At kinks every shipped oracle returns the minimum-norm subgradient.
class Oracle {
  public:
    virtual ~Oracle() = default;

    virtual std::size_t dimension() const = 0;
    /// Writes a subgradient at x into `subgrad` and returns f(x).
    virtual double evaluate(std::span<const double> x, std::span<double> subgrad) const = 0;
    virtual double value(std::span<const double> x) const = 0;

    EvalResult eval(std::span<const double> x) const;
};

using OraclePtr = std::shared_ptr<const Oracle>;

/// f(x) = log(1 + exp(-b <a, x>)), b in {-1, +1}.
class LogisticLoss final : public Oracle {
  public:
    LogisticLoss(Vector features, int label);

    std::size_t dimension() const override { return features_.size(); }
    double evaluate(std::span<const double> x, std::span<double> subgrad) const override;
    double value(std::span<const double> x) const override;

  private:
    Vector features_;
    double label_;
};

/// f(x) = dist(x, B(center, radius)).
class BallDistance final : public Oracle {
  public:
    BallDistance(Vector center, double radius);

    std::size_t dimension() const override { return center_.size(); }
    double evaluate(std::span<const double> x, std::span<double> subgrad) const override;
    double value(std::span<const double> x) const override;

    const Vector &center() const { return center_; }
    double radius() const { return radius_; }

  private:
    Vector center_;
    double radius_;
};

/// H(x) = ||x||_1 + 0.5 ||x||^2 (1-strongly convex).
class L1QuadOuter final : public Oracle {
  public:
    explicit L1QuadOuter(std::size_t n) : n_{n} {}

    std::size_t dimension() const override { return n_; }
    double evaluate(std::span<const double> x, std::span<double> subgrad) const override;
    double value(std::span<const double> x) const override;

  private:
    std::size_t n_;
};

/// H(x) = 0.5 ||x - anchor||^2 (1-strongly convex).
class QuadAnchorOuter final : public Oracle {
  public:
    explicit QuadAnchorOuter(Vector anchor) : anchor_{std::move(anchor)} {}

    std::size_t dimension() const override { return anchor_.size(); }
    double evaluate(std::span<const double> x, std::span<double> subgrad) const override;
    double value(std::span<const double> x) const override;

    const Vector &anchor() const { return anchor_; }

  private:
    Vector anchor_;
};

/// Adapter for user-supplied functions. `fn` must write a subgradient and
/// return the value; it must be thread-safe.
class FunctionOracle final : public Oracle {
  public:
    using Fn = std::function<double(std::span<const double>, std::span<double>)>;

    FunctionOracle(std::size_t n, Fn fn) : n_{n}, fn_{std::move(fn)} {}

    std::size_t dimension() const override { return n_; }
    double evaluate(std::span<const double> x, std::span<double> subgrad) const override;
    double value(std::span<const double> x) const override;

  private:
    std::size_t n_;
    Fn fn_;
};

// Free-function forms of the shipped oracles.
EvalResult logistic_eval(std::span<const double> a, int b, std::span<const double> x);
EvalResult ball_dist_eval(std::span<const double> x, std::span<const double> center,
                          double radius);
EvalResult outer_l1_quad_eval(std::span<const double> x);
EvalResult outer_quad_anchor_eval(std::span<const double> x, std::span<const double> anchor);

/// log(1 + exp(z)) without overflow.
double softplus(double z);
/// 1 / (1 + exp(-z)) without overflow.
double sigmoid(double z);

} // namespace fism
