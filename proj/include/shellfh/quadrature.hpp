#pragma once

#include "shellfh/jacobi.hpp"
#include "shellfh/sphharm.hpp"

#include <array>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace shellfh {

/// Positive-weight integration rule on the unit sphere, exact for
/// spherical polynomials of degree <= precision_t. Points are unit
/// vectors; weights sum to 4*pi.
class SphericalRule {
public:
    /// Validates unit norms (1e-12) and weight positivity; does not run
    /// exactness certification (see certify / load_design / product_rule).
    SphericalRule(std::vector<std::array<double, 3>> points,
                  std::vector<double> weights, int precision_t);

    const std::vector<std::array<double, 3>>& points() const { return points_; }
    /// Points converted to (theta, phi) once at construction.
    const std::vector<SphPoint>& angles() const { return angles_; }
    const std::vector<double>& weights() const { return weights_; }
    int precision_t() const { return precision_t_; }
    std::size_t size() const { return points_.size(); }

private:
    std::vector<std::array<double, 3>> points_;
    std::vector<SphPoint> angles_;
    std::vector<double> weights_;
    int precision_t_;
};

/// Truncation degrees of the combined scheme. Kbar = max(ceil(a K)-1, K)
/// and likewise Lbar; for a = b = 2 this gives 2K-1 and 2L-1.
struct DegreeCaps {
    int K = 1;
    int L = 1;
    double a = 2.0;
    double b = 2.0;
    int Kbar = 1;
    int Lbar = 1;

    /// Requires K, L >= 1 and a, b in (1, 2].
    static DegreeCaps make(int K, int L, double a, double b);
};

/// max(ceil(cap * degree) - 1, degree), with a 1e-9 snap so that binary
/// representations of decimal caps (1.1 * 10 = 11.000...2) round the way
/// the decimal literal intends.
int capped_degree(int degree, double cap);

/// Index kappa_Q of the radial quadrature: ceil((Kbar + K - 1) / 2).
int radial_quadrature_index(const DegreeCaps& caps);

/// Gauss-Jacobi rule with kappa_Q + 1 points; precision 2*kappa_Q + 1
/// >= Kbar + K.
RadialRule radial_rule_for(const JacobiBasis& basis, const DegreeCaps& caps);

/// Gauss-Legendre x uniform-longitude product rule of spherical precision
/// t: ceil((t+1)/2) nodes in cos(theta) times t+1 equispaced longitudes.
/// Certified before it is returned.
SphericalRule product_rule(int t);

/// Read a spherical design: one "x y z" unit vector per line, arbitrary
/// whitespace, blank lines and '#' comments allowed. Weights are the equal
/// 4*pi/N. Points further than 1e-8 from unit length raise a geometry
/// error; points within that are renormalised. The rule is certified at
/// declared_t before being returned.
/// Throws precondition_error (parse, geometry, or certification failure).
SphericalRule load_design(std::istream& in, int declared_t);
SphericalRule load_design_file(const std::filesystem::path& path, int declared_t);

/// Catalogue of design files, built from a manifest of "t N filename"
/// lines (paths relative to the manifest). Lookup picks the smallest
/// design of at least the requested precision.
class DesignLibrary {
public:
    struct Entry {
        int t = 0;
        int n = 0;
        std::string filename;
    };

    explicit DesignLibrary(const std::filesystem::path& manifest);

    const std::vector<Entry>& entries() const { return entries_; }
    std::optional<Entry> smallest_for(int min_t) const;
    /// Loads (and certifies) the smallest adequate design; nullopt when the
    /// manifest has none of precision >= min_t. Load failures propagate.
    std::optional<SphericalRule> rule_for(int min_t) const;

private:
    std::filesystem::path dir_;
    std::vector<Entry> entries_;
};

/// An angular rule of precision >= Lbar + L: the smallest adequate design
/// from the library if one exists, otherwise product_rule(Lbar + L).
SphericalRule angular_rule_for(const DegreeCaps& caps,
                               const DesignLibrary* designs = nullptr);

/// Discrete bilinear forms over the rule nodes (compensated summation).
double discrete_inner_radial(const RadialRule& rule,
                             const std::function<double(double)>& f,
                             const std::function<double(double)>& g);
double discrete_inner_angular(const SphericalRule& rule,
                              const std::function<double(const SphPoint&)>& f,
                              const std::function<double(const SphPoint&)>& g);

/// Exactness certification report. worst_residual[d] is the largest
/// residual among the checks of degree d; all residuals are on integrals
/// scaled to O(1).
struct CertReport {
    bool pass = false;
    int max_degree = 0;
    double tolerance = 0.0;
    std::vector<double> worst_residual;
    int first_failed_degree = -1;

    double worst() const;
    std::string summary() const;
};

/// Checks sum_n w_n Y(l,m)(sigma_n) = 0 for 1 <= l <= max_degree (and
/// sqrt(4 pi) at l = 0) with absolute tolerance tol.
CertReport certify(const SphericalRule& rule, int max_degree, double tol = 1e-9);

/// Checks sum_j w_j J_j J_k = delta_jk gamma_k^2 for all j + k <=
/// max_degree, residuals normalised by gamma_j gamma_k.
CertReport certify(const RadialRule& rule, const JacobiBasis& basis,
                   int max_degree, double tol = 1e-9);

} // namespace shellfh
