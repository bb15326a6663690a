#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oracles {

namespace {

// Calls fn for every k-subset of {0..m-1} in lexicographic order.
void for_each_subset(int m, int k, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> idx(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    if (k > m) return;
    while (true) {
        fn(idx);
        int i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == m - k + i) --i;
        if (i < 0) return;
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
}

}  // namespace

std::vector<Vec> enumerate_vertices(const Mat& a1, const Vec& b1, const Mat& a2, const Vec& b2) {
    const auto n = static_cast<int>(a2.cols());
    const auto m = static_cast<int>(a2.rows());
    const auto e = static_cast<int>(a1.rows());
    std::vector<Vec> out;
    for (int k = std::max(0, n - e); k <= std::min(m, n); ++k) {
        for_each_subset(m, k, [&](const std::vector<int>& rows) {
            Mat a(e + k, n);
            Vec b(e + k);
            if (e > 0) {
                a.topRows(e) = a1;
                b.head(e) = b1;
            }
            for (int i = 0; i < k; ++i) {
                a.row(e + i) = a2.row(rows[static_cast<std::size_t>(i)]);
                b(e + i) = b2(rows[static_cast<std::size_t>(i)]);
            }
            Eigen::FullPivLU<Mat> lu(a);
            if (lu.rank() != n) return;
            Vec x = lu.solve(b);
            if ((a * x - b).norm() > 1e-9) return;
            if (((a2 * x - b2).array() > 1e-9).any()) return;
            for (const auto& v : out) {
                if ((v - x).norm() < 1e-9) return;
            }
            out.push_back(x);
        });
    }
    return out;
}

std::vector<Vec> enumerate_vertices(const llocg::Polytope& p) {
    return enumerate_vertices(p.eq_matrix(), p.eq_rhs(), p.ineq_matrix(), p.ineq_rhs());
}

double min_over(const std::vector<Vec>& vertices, const Vec& c) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& v : vertices) best = std::min(best, c.dot(v));
    return best;
}

double diameter(const std::vector<Vec>& vertices) {
    double d = 0.0;
    for (const auto& u : vertices) {
        for (const auto& v : vertices) d = std::max(d, (u - v).norm());
    }
    return d;
}

double xi(const std::vector<Vec>& vertices, const Mat& a2, const Vec& b2) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& v : vertices) {
        const Vec slack = b2 - a2 * v;
        for (Eigen::Index j = 0; j < slack.size(); ++j) {
            if (slack(j) > 1e-9) best = std::min(best, slack(j));
        }
    }
    return best;
}

double psi(const Mat& a2) {
    const auto m = static_cast<int>(a2.rows());
    const auto n = static_cast<int>(a2.cols());
    double best = 0.0;
    for (int k = 1; k <= std::min(m, n); ++k) {
        for_each_subset(m, k, [&](const std::vector<int>& rows) {
            Mat sub(k, n);
            for (int i = 0; i < k; ++i) sub.row(i) = a2.row(rows[static_cast<std::size_t>(i)]);
            Eigen::JacobiSVD<Mat> svd(sub);
            const Vec s = svd.singularValues();
            if (s(k - 1) <= 1e-10 * std::max(1.0, s(0))) return;  // dependent rows
            best = std::max(best, s(0));
        });
    }
    return best;
}

double grid_min_in_ball(int family_dim, bool simplex, const Vec& x, double r, const Vec& c, double step) {
    const int steps = static_cast<int>(std::lround(1.0 / step));
    double best = std::numeric_limits<double>::infinity();
    auto consider = [&](const Vec& y) {
        if ((y - x).norm() <= r) best = std::min(best, c.dot(y));
    };
    if (!simplex && family_dim == 2) {
        for (int i = 0; i <= steps; ++i) {
            for (int j = 0; j <= steps; ++j) consider(Vec{{i * step, j * step}});
        }
    } else if (simplex && family_dim == 3) {
        for (int i = 0; i <= steps; ++i) {
            for (int j = 0; i + j <= steps; ++j) {
                const int k = steps - i - j;
                consider(Vec{{i * step, j * step, k * step}});
            }
        }
    }
    return best;
}

Vec project_simplex_bruteforce(const Vec& y) {
    const auto n = static_cast<int>(y.size());
    Vec best;
    double best_dist = std::numeric_limits<double>::infinity();
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        double sum = 0.0;
        int count = 0;
        for (int i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                sum += y(i);
                ++count;
            }
        }
        const double theta = (sum - 1.0) / count;
        Vec x = Vec::Zero(n);
        bool ok = true;
        for (int i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                x(i) = y(i) - theta;
                ok = ok && x(i) >= -1e-15;
            }
        }
        if (!ok) continue;
        x = x.cwiseMax(0.0);
        const double d = (x - y).norm();
        if (d < best_dist) {
            best_dist = d;
            best = x;
        }
    }
    return best;
}

Vec numeric_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double h) {
    Vec g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        Vec up = x, down = x;
        up(i) += h;
        down(i) -= h;
        g(i) = (f(up) - f(down)) / (2.0 * h);
    }
    return g;
}

}  // namespace oracles
