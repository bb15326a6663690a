#include "llocg/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "llocg/errors.hpp"

namespace llocg {

Objective::Objective(int dim, ValueFn value, GradientFn gradient, double beta, double sigma,
                     std::optional<double> lipschitz, std::optional<Vec> linear_coefficients)
    : dim_(dim),
      value_(std::move(value)),
      gradient_(std::move(gradient)),
      beta_(beta),
      sigma_(sigma),
      lipschitz_(lipschitz),
      linear_(std::move(linear_coefficients)) {
    if (dim_ <= 0) throw ArgumentError("objective: dimension must be positive");
    if (!value_ || !gradient_) throw ArgumentError("objective: missing value or gradient");
    if (!(sigma_ >= 0.0) || !(beta_ >= sigma_) || !std::isfinite(beta_)) {
        throw ArgumentError("objective: need 0 <= sigma <= beta < inf");
    }
}

double Objective::value(const Vec& x) const {
    if (x.size() != dim_) throw ArgumentError("objective: dimension mismatch");
    return value_(x);
}

Vec Objective::gradient(const Vec& x) const {
    if (x.size() != dim_) throw ArgumentError("objective: dimension mismatch");
    return gradient_(x);
}

Objective Objective::with_curvature(double beta, double sigma) const {
    return Objective(dim_, value_, gradient_, beta, sigma, lipschitz_, linear_);
}

Objective make_lower_bound_objective(int n) {
    if (n < 2) throw ArgumentError("lower_bound objective: n must be at least 2");
    const double dn = static_cast<double>(n);
    auto value = [dn](const Vec& x) { return (x.array() - 1.0).square().sum() - dn + 2.0; };
    auto gradient = [](const Vec& x) -> Vec { return 2.0 * (x.array() - 1.0).matrix(); };
    return Objective(n, value, gradient, 1.0, 1.0);
}

Objective make_quadratic(const Mat& q, const Vec& b) {
    const auto n = q.rows();
    if (n == 0 || q.cols() != n || b.size() != n) throw ArgumentError("quadratic: shape mismatch");
    if (!q.allFinite() || !b.allFinite()) throw ArgumentError("quadratic: non-finite entries");
    const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
    if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw ArgumentError("quadratic: Q is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Mat> eig(q, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (lo < -1e-10 * std::max(1.0, std::abs(hi))) throw ArgumentError("quadratic: Q is indefinite");
    auto value = [q, b](const Vec& x) { return x.dot(q * x) - b.dot(x); };
    auto gradient = [q, b](const Vec& x) -> Vec { return 2.0 * (q * x) - b; };
    return Objective(static_cast<int>(n), value, gradient, std::max(hi, 0.0), std::max(lo, 0.0));
}

Objective make_linear(const Vec& c) {
    if (c.size() == 0 || !c.allFinite()) throw ArgumentError("linear objective: bad coefficients");
    auto value = [c](const Vec& x) { return c.dot(x); };
    auto gradient = [c](const Vec&) -> Vec { return c; };
    return Objective(static_cast<int>(c.size()), value, gradient, 0.0, 0.0, c.norm(), c);
}

Objective make_squared_distance(const Vec& a, double h) {
    if (a.size() == 0 || !a.allFinite()) throw ArgumentError("squared distance: bad center");
    if (!(h > 0.0)) throw ArgumentError("squared distance: h must be positive");
    auto value = [a, h](const Vec& x) { return h * (x - a).squaredNorm(); };
    auto gradient = [a, h](const Vec& x) -> Vec { return 2.0 * h * (x - a); };
    return Objective(static_cast<int>(a.size()), value, gradient, h, h);
}

Objective sum_objectives(std::span<const Objective> parts) {
    if (parts.empty()) throw ArgumentError("sum_objectives: empty");
    const int n = parts.front().dim();
    double beta = 0.0, sigma = 0.0, lip = 0.0;
    bool has_lip = true, linear = true;
    Vec coeffs = Vec::Zero(n);
    for (const auto& p : parts) {
        if (p.dim() != n) throw ArgumentError("sum_objectives: dimension mismatch");
        beta += p.beta();
        sigma += p.sigma();
        if (p.lipschitz()) lip += *p.lipschitz(); else has_lip = false;
        if (p.linear_coefficients()) coeffs += *p.linear_coefficients(); else linear = false;
    }
    if (linear) {
        Objective out = make_linear(coeffs);
        return out;
    }
    auto shared = std::make_shared<const std::vector<Objective>>(parts.begin(), parts.end());
    auto value = [shared](const Vec& x) {
        double s = 0.0;
        for (const auto& p : *shared) s += p.value(x);
        return s;
    };
    auto gradient = [shared, n](const Vec& x) -> Vec {
        Vec g = Vec::Zero(n);
        for (const auto& p : *shared) g += p.gradient(x);
        return g;
    };
    return Objective(n, value, gradient, beta, sigma,
                     has_lip ? std::optional<double>(lip) : std::nullopt);
}

double finite_diff_check(const Objective& obj, const Vec& x, double h) {
    if (!(h > 0.0)) throw ArgumentError("finite_diff_check: step must be positive");
    const Vec g = obj.gradient(x);
    double worst = 0.0;
    Vec probe = x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        probe(i) = x(i) + h;
        const double up = obj.value(probe);
        probe(i) = x(i) - h;
        const double down = obj.value(probe);
        probe(i) = x(i);
        const double fd = (up - down) / (2.0 * h);
        worst = std::max(worst, std::abs(fd - g(i)) / std::max(1.0, std::abs(g(i))));
    }
    return worst;
}

namespace {

class LinearStream final : public LossStream {
public:
    LinearStream(std::uint64_t seed, int n, int horizon, double scale)
        : rng_(seed), n_(n), horizon_(horizon), scale_(scale) {}

    Objective next(int, const Vec&) override {
        std::uniform_real_distribution<double> u(-scale_, scale_);
        Vec c(n_);
        for (int i = 0; i < n_; ++i) c(i) = u(rng_);
        return make_linear(c);
    }
    int horizon() const override { return horizon_; }
    double strong_convexity() const override { return 0.0; }
    double gradient_bound(double) const override { return scale_ * std::sqrt(static_cast<double>(n_)); }

private:
    std::mt19937_64 rng_;
    int n_;
    int horizon_;
    double scale_;
};

class NoisyLinearStream final : public LossStream {
public:
    NoisyLinearStream(std::uint64_t seed, Vec mean, double noise, int horizon)
        : rng_(seed), mean_(std::move(mean)), noise_(noise), horizon_(horizon) {}

    Objective next(int, const Vec&) override {
        std::uniform_real_distribution<double> u(-noise_, noise_);
        Vec c = mean_;
        for (Eigen::Index i = 0; i < c.size(); ++i) c(i) += u(rng_);
        return make_linear(c);
    }
    int horizon() const override { return horizon_; }
    double strong_convexity() const override { return 0.0; }
    double gradient_bound(double) const override {
        return mean_.norm() + noise_ * std::sqrt(static_cast<double>(mean_.size()));
    }

private:
    std::mt19937_64 rng_;
    Vec mean_;
    double noise_;
    int horizon_;
};

Vec uniform_in_unit_ball(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Vec d(n);
    do {
        for (int i = 0; i < n; ++i) d(i) = gauss(rng);
    } while (d.norm() == 0.0);
    return d.normalized() * std::pow(u(rng), 1.0 / n);
}

class StronglyConvexStream final : public LossStream {
public:
    StronglyConvexStream(std::uint64_t seed, int n, int horizon, double h)
        : rng_(seed), n_(n), horizon_(horizon), h_(h) {}

    Objective next(int, const Vec&) override { return make_squared_distance(uniform_in_unit_ball(rng_, n_), h_); }
    int horizon() const override { return horizon_; }
    double strong_convexity() const override { return h_; }
    double gradient_bound(double radius) const override { return 2.0 * h_ * (radius + 1.0); }

private:
    std::mt19937_64 rng_;
    int n_;
    int horizon_;
    double h_;
};

class SampledQuadraticStream final : public LossStream {
public:
    SampledQuadraticStream(std::uint64_t seed, std::vector<Vec> points, int horizon, double h)
        : rng_(seed), points_(std::move(points)), horizon_(horizon), h_(h) {}

    Objective next(int, const Vec&) override {
        std::uniform_int_distribution<std::size_t> pick(0, points_.size() - 1);
        return make_squared_distance(points_[pick(rng_)], h_);
    }
    int horizon() const override { return horizon_; }
    double strong_convexity() const override { return h_; }
    double gradient_bound(double radius) const override {
        double far = 0.0;
        for (const auto& p : points_) far = std::max(far, p.norm());
        return 2.0 * h_ * (radius + far);
    }

private:
    std::mt19937_64 rng_;
    std::vector<Vec> points_;
    int horizon_;
    double h_;
};

class ConstantStream final : public LossStream {
public:
    ConstantStream(Objective loss, int horizon) : loss_(std::move(loss)), horizon_(horizon) {}

    Objective next(int, const Vec&) override { return loss_; }
    int horizon() const override { return horizon_; }
    double strong_convexity() const override { return loss_.sigma(); }
    double gradient_bound(double radius) const override {
        if (loss_.lipschitz()) return *loss_.lipschitz();
        // ||grad f(x)|| <= ||grad f(0)|| + 2 beta ||x|| under the no-1/2 convention.
        return loss_.gradient(Vec::Zero(loss_.dim())).norm() + 2.0 * loss_.beta() * radius;
    }

private:
    Objective loss_;
    int horizon_;
};

void check_horizon(int horizon) {
    if (horizon < 1) throw ArgumentError("loss stream: horizon must be at least 1");
}

}  // namespace

std::unique_ptr<LossStream> make_linear_loss_stream(std::uint64_t seed, int n, int horizon, double scale) {
    check_horizon(horizon);
    if (n < 1 || !(scale > 0.0)) throw ArgumentError("linear stream: need n >= 1 and scale > 0");
    return std::make_unique<LinearStream>(seed, n, horizon, scale);
}

std::unique_ptr<LossStream> make_strongly_convex_stream(std::uint64_t seed, int n, int horizon, double h) {
    check_horizon(horizon);
    if (n < 1 || !(h > 0.0)) throw ArgumentError("strongly convex stream: need n >= 1 and h > 0");
    return std::make_unique<StronglyConvexStream>(seed, n, horizon, h);
}

std::unique_ptr<LossStream> make_sampled_quadratic_stream(std::uint64_t seed, std::vector<Vec> points,
                                                          int horizon, double h) {
    check_horizon(horizon);
    if (points.empty() || !(h > 0.0)) throw ArgumentError("sampled stream: need points and h > 0");
    for (const auto& p : points) {
        if (p.size() != points.front().size()) throw ArgumentError("sampled stream: mixed dimensions");
    }
    return std::make_unique<SampledQuadraticStream>(seed, std::move(points), horizon, h);
}

std::unique_ptr<LossStream> make_noisy_linear_stream(std::uint64_t seed, Vec mean, double noise, int horizon) {
    check_horizon(horizon);
    if (mean.size() == 0 || !(noise >= 0.0)) throw ArgumentError("noisy linear stream: bad parameters");
    return std::make_unique<NoisyLinearStream>(seed, std::move(mean), noise, horizon);
}

std::unique_ptr<LossStream> make_constant_stream(Objective loss, int horizon) {
    check_horizon(horizon);
    return std::make_unique<ConstantStream>(std::move(loss), horizon);
}

}  // namespace llocg
