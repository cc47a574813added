#include "shellfh/jacobi.hpp"

#include "shellfh/errors.hpp"
#include "shellfh/kahan.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace shellfh {

struct GammaCache {
    std::mutex mutex;
    std::vector<double> gamma_sq;
};

namespace {

constexpr double kXTol = 1e-12;

// Total mass of (1-x)^a (1+x)^b on [-1,1]: 2^(a+b+1) B(a+1, b+1).
// Well defined for all a, b > -1, including a+b = -1 where the generic
// gamma_k formula degenerates.
double reference_mass(double a, double b) {
    return std::exp((a + b + 1.0) * std::numbers::ln2 + std::lgamma(a + 1.0) +
                    std::lgamma(b + 1.0) - std::lgamma(a + b + 2.0));
}

// Eigenvalues of a symmetric tridiagonal matrix by implicit QL with
// Wilkinson shifts, accumulating the first row of the eigenvector matrix
// in z (Golub-Welsch). d: diagonal, e: subdiagonal (e[0..n-2]).
void tridiag_ql(std::vector<double>& d, std::vector<double>& e,
                std::vector<double>& z) {
    const int n = static_cast<int>(d.size());
    if (n == 1) return;
    e.resize(n, 0.0);
    constexpr double tol = 1e-14;
    constexpr int max_sweeps = 50;

    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double scale = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= tol * scale) break;
            }
            if (m == l) break;
            if (++iter > max_sweeps) {
                throw numerical_error(
                    "gauss_jacobi_rule: tridiagonal QL failed to converge "
                    "after 50 sweeps (eigenvalue " + std::to_string(l) + ")");
            }
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0;
            double c = 1.0;
            double p = 0.0;
            bool underflow = false;
            for (int i = m - 1; i >= l; --i) {
                double f = s * e[i];
                const double bb = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    // rotation annihilated early; recover and rescan
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * bb;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - bb;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if (!underflow) {
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (true);
    }
}

} // namespace

JacobiBasis::JacobiBasis(double alpha, double beta, double r_in, double r_out)
    : alpha_(alpha),
      beta_(beta),
      r_in_(r_in),
      r_out_(r_out),
      operator_range_(alpha >= -0.5 && beta >= -0.5),
      cache_(std::make_shared<GammaCache>()) {
    if (!(alpha > -1.0) || !(beta > -1.0))
        throw std::invalid_argument("JacobiBasis: alpha, beta must be > -1");
    if (!(r_in > 0.0) || !(r_in <= 1.0))
        throw std::invalid_argument("JacobiBasis: r_in must be in (0, 1]");
    if (!(r_out >= 1.0))
        throw std::invalid_argument("JacobiBasis: r_out must be >= 1");
    if (!(r_in < r_out))
        throw std::invalid_argument("JacobiBasis: r_in < r_out required");
}

double JacobiBasis::map_to_reference(double r) const {
    const double slack = kXTol * std::max(std::abs(r_in_), std::abs(r_out_));
    if (r < r_in_ - slack || r > r_out_ + slack)
        throw std::domain_error("map_to_reference: r outside [r_in, r_out]");
    const double x = (2.0 * r - (r_in_ + r_out_)) / (r_out_ - r_in_);
    return std::clamp(x, -1.0, 1.0);
}

double JacobiBasis::jacobi_eval(int k, double x) const {
    if (k < 0) throw std::invalid_argument("jacobi_eval: negative degree");
    if (std::abs(x) > 1.0 + kXTol)
        throw std::domain_error("jacobi_eval: x outside [-1, 1]");
    x = std::clamp(x, -1.0, 1.0);

    const double ab = alpha_ + beta_;
    double pm1 = 1.0;
    if (k == 0) return pm1;
    double p = (alpha_ + 1.0) + (ab + 2.0) * (x - 1.0) / 2.0;
    for (int i = 2; i <= k; ++i) {
        const double c = 2.0 * i + ab;
        const double num1 = (c - 1.0) * ((c * (c - 2.0)) * x + alpha_ * alpha_ - beta_ * beta_);
        const double num2 = 2.0 * (i + alpha_ - 1.0) * (i + beta_ - 1.0) * c;
        const double den = 2.0 * i * (i + ab) * (c - 2.0);
        const double next = (num1 * p - num2 * pm1) / den;
        pm1 = p;
        p = next;
    }
    return p;
}

std::vector<double> JacobiBasis::jacobi_seq(int k_max, double x) const {
    if (k_max < 0) throw std::invalid_argument("jacobi_seq: negative degree");
    if (std::abs(x) > 1.0 + kXTol)
        throw std::domain_error("jacobi_seq: x outside [-1, 1]");
    x = std::clamp(x, -1.0, 1.0);

    std::vector<double> out(static_cast<std::size_t>(k_max) + 1);
    const double ab = alpha_ + beta_;
    out[0] = 1.0;
    if (k_max == 0) return out;
    out[1] = (alpha_ + 1.0) + (ab + 2.0) * (x - 1.0) / 2.0;
    for (int i = 2; i <= k_max; ++i) {
        const double c = 2.0 * i + ab;
        const double num1 = (c - 1.0) * ((c * (c - 2.0)) * x + alpha_ * alpha_ - beta_ * beta_);
        const double num2 = 2.0 * (i + alpha_ - 1.0) * (i + beta_ - 1.0) * c;
        const double den = 2.0 * i * (i + ab) * (c - 2.0);
        out[i] = (num1 * out[i - 1] - num2 * out[i - 2]) / den;
    }
    return out;
}

double JacobiBasis::radial_basis_eval(int k, double r) const {
    return jacobi_eval(k, map_to_reference(r));
}

std::vector<double> JacobiBasis::radial_seq(int k_max, double r) const {
    return jacobi_seq(k_max, map_to_reference(r));
}

double JacobiBasis::gamma_sq(int k) const {
    if (k < 0) throw std::invalid_argument("gamma_sq: negative degree");
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto& cache = cache_->gamma_sq;
    while (static_cast<int>(cache.size()) <= k)
        cache.push_back(compute_gamma_sq(static_cast<int>(cache.size())));
    return cache[static_cast<std::size_t>(k)];
}

double JacobiBasis::gamma_norm(int k) const { return std::sqrt(gamma_sq(k)); }

double JacobiBasis::compute_gamma_sq(int k) const {
    const double ab = alpha_ + beta_;
    if (k == 0) return reference_mass(alpha_, beta_);
    if (k + ab + 1.0 > 0.5) {
        return std::exp((ab + 1.0) * std::numbers::ln2 +
                        std::lgamma(k + alpha_ + 1.0) +
                        std::lgamma(k + beta_ + 1.0) -
                        std::lgamma(k + 1.0) - std::lgamma(k + ab + 1.0)) /
               (2.0 * k + ab + 1.0);
    }
    // Near the parameter boundary the gamma-quotient loses accuracy; a
    // (k+1)-point rule integrates J_k^2 (degree 2k) exactly instead.
    std::vector<double> x, w;
    detail::gauss_jacobi_reference(alpha_, beta_, k + 1, x, w);
    KahanSum acc;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double v = jacobi_eval(k, x[j]);
        acc.add(w[j] * v * v);
    }
    return acc.value();
}

namespace detail {

void gauss_jacobi_reference(double alpha, double beta, int n,
                            std::vector<double>& nodes,
                            std::vector<double>& weights) {
    if (n < 1) throw std::invalid_argument("gauss_jacobi_reference: n < 1");
    nodes.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(n), 0.0);

    if (alpha == -0.5 && beta == -0.5) {
        // Gauss-Chebyshev: x_j = cos((2j+1)pi/(2n)), w_j = pi/n.
        for (int j = 0; j < n; ++j) {
            nodes[static_cast<std::size_t>(n - 1 - j)] =
                std::cos((2.0 * j + 1.0) * std::numbers::pi / (2.0 * n));
            weights[static_cast<std::size_t>(j)] = std::numbers::pi / n;
        }
        return;
    }

    // Jacobi matrix of the monic recurrence (Gautschi's coefficients).
    const double ab = alpha + beta;
    std::vector<double> d(static_cast<std::size_t>(n));
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    d[0] = (beta - alpha) / (ab + 2.0);
    for (int k = 1; k < n; ++k) {
        const double t = 2.0 * k + ab;
        d[static_cast<std::size_t>(k)] =
            (beta * beta - alpha * alpha) / (t * (t + 2.0));
        double bk;
        if (k == 1) {
            bk = 4.0 * (1.0 + alpha) * (1.0 + beta) /
                 ((ab + 2.0) * (ab + 2.0) * (ab + 3.0));
        } else {
            bk = 4.0 * k * (k + alpha) * (k + beta) * (k + ab) /
                 (t * t * (t + 1.0) * (t - 1.0));
        }
        e[static_cast<std::size_t>(k - 1)] = std::sqrt(bk);
    }

    std::vector<double> z(static_cast<std::size_t>(n), 0.0);
    z[0] = 1.0;
    tridiag_ql(d, e, z);

    const double mass = reference_mass(alpha, beta);
    std::vector<std::size_t> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return d[i] < d[j]; });
    for (int j = 0; j < n; ++j) {
        nodes[static_cast<std::size_t>(j)] = d[order[static_cast<std::size_t>(j)]];
        weights[static_cast<std::size_t>(j)] =
            mass * z[order[static_cast<std::size_t>(j)]] * z[order[static_cast<std::size_t>(j)]];
    }

    for (int j = 0; j < n; ++j) {
        if (!(weights[static_cast<std::size_t>(j)] > 0.0))
            throw numerical_error("gauss_jacobi_rule: nonpositive weight");
        if (std::abs(nodes[static_cast<std::size_t>(j)]) > 1.0)
            nodes[static_cast<std::size_t>(j)] =
                std::clamp(nodes[static_cast<std::size_t>(j)], -1.0, 1.0);
        if (j > 0 && !(nodes[static_cast<std::size_t>(j - 1)] < nodes[static_cast<std::size_t>(j)]))
            throw numerical_error("gauss_jacobi_rule: nodes not strictly increasing");
    }
}

} // namespace detail

RadialRule gauss_jacobi_rule(const JacobiBasis& basis, int n_points) {
    if (n_points < 1)
        throw std::invalid_argument("gauss_jacobi_rule: n_points must be >= 1");
    std::vector<double> x, w;
    detail::gauss_jacobi_reference(basis.alpha(), basis.beta(), n_points, x, w);

    RadialRule rule;
    rule.precision = 2 * n_points - 1;
    rule.nodes.resize(x.size());
    rule.weights = std::move(w);
    const double mid = 0.5 * (basis.r_in() + basis.r_out());
    const double half = 0.5 * (basis.r_out() - basis.r_in());
    for (std::size_t j = 0; j < x.size(); ++j)
        rule.nodes[j] = mid + half * x[j];
    return rule;
}

} // namespace shellfh
