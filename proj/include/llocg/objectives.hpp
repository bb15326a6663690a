#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "llocg/polytope.hpp"

namespace llocg {

/// Differentiable convex function with curvature metadata.
///
/// Curvature follows the convention without the 1/2 factor:
///   f(y) <= f(x) + grad f(x)^T (y - x) + beta  ||y - x||^2
///   f(y) >= f(x) + grad f(x)^T (y - x) + sigma ||y - x||^2
/// so ||x - a||^2 has beta = sigma = 1.
class Objective {
public:
    using ValueFn = std::function<double(const Vec&)>;
    using GradientFn = std::function<Vec(const Vec&)>;

    Objective(int dim, ValueFn value, GradientFn gradient, double beta, double sigma,
              std::optional<double> lipschitz = std::nullopt,
              std::optional<Vec> linear_coefficients = std::nullopt);

    int dim() const { return dim_; }
    double value(const Vec& x) const;
    Vec gradient(const Vec& x) const;

    double beta() const { return beta_; }
    double sigma() const { return sigma_; }
    const std::optional<double>& lipschitz() const { return lipschitz_; }

    /// Set when the function is exactly c^T x.
    const std::optional<Vec>& linear_coefficients() const { return linear_; }

    /// Same function with different (caller-certified) curvature constants.
    Objective with_curvature(double beta, double sigma) const;

private:
    int dim_;
    ValueFn value_;
    GradientFn gradient_;
    double beta_;
    double sigma_;
    std::optional<double> lipschitz_;
    std::optional<Vec> linear_;
};

/// ||x - 1||^2 - n + 2. Over the n-simplex its minimizer is (1/n) 1 with value
/// 1/n, and every t-sparse point has value at least 1/t.
Objective make_lower_bound_objective(int n);

/// x^T Q x - b^T x with beta = lambda_max(Q), sigma = lambda_min(Q).
/// Throws ArgumentError for asymmetric or indefinite Q.
Objective make_quadratic(const Mat& q, const Vec& b);

/// c^T x (beta = sigma = 0).
Objective make_linear(const Vec& c);

/// h ||x - a||^2 (beta = sigma = h).
Objective make_squared_distance(const Vec& a, double h = 1.0);

/// Pointwise sum; curvature constants add up.
Objective sum_objectives(std::span<const Objective> parts);

/// max_i |(f(x + h e_i) - f(x - h e_i)) / 2h - grad_i| / max(1, |grad_i|).
double finite_diff_check(const Objective& obj, const Vec& x, double h);

/// Sequence of loss functions revealed one round at a time. Single consumer.
class LossStream {
public:
    virtual ~LossStream() = default;

    /// Loss of round t (1-based). x_t is the point played, available to
    /// adaptive adversaries; the shipped streams ignore it.
    virtual Objective next(int t, const Vec& x_t) = 0;

    virtual int horizon() const = 0;
    /// Strong-convexity parameter H shared by every loss (0 if none).
    virtual double strong_convexity() const = 0;
    /// Upper bound on ||grad f_t(x)|| for ||x|| <= domain_radius.
    virtual double gradient_bound(double domain_radius) const = 0;
};

/// f_t(x) = c_t^T x with c_t uniform in [-scale, scale]^n, reproducible from seed.
std::unique_ptr<LossStream> make_linear_loss_stream(std::uint64_t seed, int n, int horizon, double scale);

/// f_t(x) = h ||x - a_t||^2 with a_t uniform in the unit ball.
std::unique_ptr<LossStream> make_strongly_convex_stream(std::uint64_t seed, int n, int horizon, double h = 1.0);

/// f_t(x) = h ||x - a_t||^2 with a_t drawn uniformly from `points`.
std::unique_ptr<LossStream> make_sampled_quadratic_stream(std::uint64_t seed, std::vector<Vec> points,
                                                          int horizon, double h = 1.0);

/// f_t(x) = (mean + noise_t)^T x with noise_t uniform in [-noise, noise]^n.
std::unique_ptr<LossStream> make_noisy_linear_stream(std::uint64_t seed, Vec mean, double noise, int horizon);

/// The same loss every round.
std::unique_ptr<LossStream> make_constant_stream(Objective loss, int horizon);

}  // namespace llocg
