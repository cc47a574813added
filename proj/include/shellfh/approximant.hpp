#pragma once

#include "shellfh/filters.hpp"
#include "shellfh/jacobi.hpp"
#include "shellfh/quadrature.hpp"
#include "shellfh/sphharm.hpp"

#include <array>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace shellfh {

/// A point of the shell: radius plus direction.
struct ShellPoint {
    double r = 1.0;
    SphPoint sigma;

    ShellPoint() = default;
    ShellPoint(double r_in, SphPoint sigma_in) : r(r_in), sigma(sigma_in) {}

    std::array<double, 3> cartesian() const;
    static ShellPoint from_cartesian(const std::array<double, 3>& x);
};

using ShellFunction = std::function<double(const ShellPoint&)>;

/// The fitted filtered approximant: coefficient tensor c_klm together with
/// everything needed to evaluate it anywhere on the shell. The filter
/// factors h(k/K, l/L) are folded into the coefficients at fit time, so
/// evaluation is filter-agnostic. Layout is radial-major with the packed
/// angular index l^2 + l + m; the serialised form uses the same order.
/// Immutable; evaluation is pure and thread-safe.
class ShellApproximant {
public:
    ShellApproximant(JacobiBasis basis, DegreeCaps caps, FilterPair filter,
                     std::vector<double> coeffs);

    /// Sum over k <= Kbar, l <= Lbar, |m| <= l of c_klm J_k(r) Y_lm(sigma),
    /// k outer, packed (l,m) inner, both ascending.
    /// Throws std::domain_error off the shell.
    double evaluate(const ShellPoint& p) const;

    /// d_k(sigma) = sum_lm c_klm Y_lm(sigma) for k = 0..Kbar. Evaluation
    /// factorises as evaluate = sum_k J_k(r) d_k(sigma); grid evaluation
    /// reuses one profile across all radii of a tensor grid.
    std::vector<double> angular_profile(const SphPoint& sigma) const;
    double evaluate_with_profile(const std::vector<double>& profile, double r) const;

    double coeff(int k, int ell, int m) const;
    const std::vector<double>& coeffs() const { return coeffs_; }
    const JacobiBasis& basis() const { return basis_; }
    const DegreeCaps& caps() const { return caps_; }
    const FilterPair& filter() const { return filter_; }
    /// Always true: h is applied at analysis time, not at synthesis.
    bool filter_folded() const { return true; }

    /// JSON document with basis, caps, filter names and the coefficient
    /// array; the round trip is bit-faithful for coefficients.
    void save(std::ostream& out) const;
    void save_file(const std::filesystem::path& path) const;
    static ShellApproximant load(std::istream& in);
    static ShellApproximant load_file(const std::filesystem::path& path);

private:
    JacobiBasis basis_;
    DegreeCaps caps_;
    FilterPair filter_;
    std::vector<double> coeffs_; // (Kbar+1) * (Lbar+1)^2
};

/// Fully discrete filtered hyperinterpolation:
///   c_klm = h(k/K, l/L) / gamma_k^2 *
///           sum_j sum_n w_rad_j w_ang_n f(r_j, sigma_n) J_k(r_j) Y_lm(sigma_n),
/// computed separably (angular reduction first) with compensated node sums;
/// f is sampled exactly once per node pair.
/// Preconditions (hard errors): radial precision >= Kbar + K, angular
/// precision >= Lbar + L, and the filter's caps equal the caps' a, b.
ShellApproximant fit(const ShellFunction& f, const DegreeCaps& caps,
                     const JacobiBasis& basis, const FilterPair& filter,
                     const RadialRule& radial, const SphericalRule& angular);

/// R_K f: filtered hyperinterpolation in the radial direction only. For
/// each sigma the result is a polynomial of degree <= Kbar in r.
class RadialFiltered {
public:
    RadialFiltered(ShellFunction f, DegreeCaps caps, JacobiBasis basis,
                   FilterPair filter, RadialRule rule);
    double operator()(const ShellPoint& p) const;

private:
    ShellFunction f_;
    DegreeCaps caps_;
    JacobiBasis basis_;
    RadialRule rule_;
    std::vector<std::vector<double>> basis_at_nodes_; // [j][k]
    std::vector<double> filter_over_gamma_sq_;        // h(k/K) / gamma_k^2
};

RadialFiltered radial_filtered(ShellFunction f, const DegreeCaps& caps,
                               const JacobiBasis& basis, const FilterPair& filter,
                               const RadialRule& rule);

/// A_L f: filtered hyperinterpolation in the angular direction only.
class AngularFiltered {
public:
    AngularFiltered(ShellFunction f, DegreeCaps caps, FilterPair filter,
                    SphericalRule rule);
    double operator()(const ShellPoint& p) const;

private:
    ShellFunction f_;
    DegreeCaps caps_;
    SphericalRule rule_;
    std::vector<std::vector<double>> harmonics_at_nodes_; // [n][packed]
    std::vector<double> filter_by_degree_;                // h(l/L)
};

AngularFiltered angular_filtered(ShellFunction f, const DegreeCaps& caps,
                                 const FilterPair& filter, const SphericalRule& rule);

/// Reproducing kernel of the radial operator,
///   G_K(s, r) = sum_{k<=Kbar} h_rad(k/K) J_k(s) J_k(r) / gamma_k^2;
/// symmetric in (s, r).
double radial_kernel(const JacobiBasis& basis, const DegreeCaps& caps,
                     const FilterPair& filter, double s, double r);

/// The non-filtered reference scheme: degree-K interpolation at the mapped
/// Chebyshev zeros in the radial direction (barycentric form) composed
/// with plain angular hyperinterpolation (indicator filter, degree L).
class BaselineApproximant {
public:
    double evaluate(const ShellPoint& p) const;
    std::vector<double> angular_profile(const SphPoint& sigma) const; // per node j
    double evaluate_with_profile(const std::vector<double>& profile, double r) const;

    int radial_degree() const { return radial_degree_; }
    int angular_degree() const { return angular_degree_; }
    const JacobiBasis& basis() const { return basis_; }

    friend BaselineApproximant baseline_nonfiltered(const ShellFunction& f, int K,
                                                    int L, const JacobiBasis& basis,
                                                    const SphericalRule& angular);

private:
    BaselineApproximant(JacobiBasis basis, int K, int L);

    JacobiBasis basis_;
    int radial_degree_;
    int angular_degree_;
    std::vector<double> ref_nodes_;    // Chebyshev zeros on [-1,1], descending
    std::vector<double> bary_weights_; // (-1)^j sin((2j+1) pi / (2n))
    std::vector<double> coeffs_;       // (K+1) * (L+1)^2, packed
};

/// Requires angular precision >= 2L.
BaselineApproximant baseline_nonfiltered(const ShellFunction& f, int K, int L,
                                         const JacobiBasis& basis,
                                         const SphericalRule& angular);

} // namespace shellfh
