#pragma once

#include <memory>
#include <vector>

namespace shellfh {

/// Gauss-Jacobi quadrature rule on [r_in, r_out] against the radial measure.
/// Nodes are strictly increasing, weights are all positive and sum to the
/// total mass of the measure (which equals the mass of the reference weight
/// on [-1,1]; the affine Jacobian is folded into the measure).
struct RadialRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    int precision = 0; ///< exact for polynomials of degree <= precision

    std::size_t size() const { return nodes.size(); }
};

/// Jacobi polynomial basis J_k on [r_in, r_out]: the standard polynomials
/// P_k^(alpha,beta) on [-1,1] (normalised so P_k(1) = C(k+alpha, k))
/// composed with the affine map of the interval onto [-1,1].
///
/// Immutable after construction; the gamma_k cache is internally
/// synchronised, so instances may be shared across threads. Copies share
/// the cache.
class JacobiBasis {
public:
    /// Requires alpha, beta > -1 and 0 < r_in <= 1 <= r_out.
    JacobiBasis(double alpha, double beta, double r_in, double r_out);

    double alpha() const { return alpha_; }
    double beta() const { return beta_; }
    double r_in() const { return r_in_; }
    double r_out() const { return r_out_; }

    /// True when alpha, beta >= -1/2, the range in which the filtered
    /// radial operator family is uniformly bounded. Construction outside
    /// this range is allowed but carries no operator-norm claim.
    bool in_operator_range() const { return operator_range_; }

    /// Affine map r -> x in [-1,1] with r_in -> -1 and r_out -> +1.
    /// Throws std::domain_error if r lies outside the interval beyond a
    /// 1e-12 relative slack; results are clamped to [-1,1].
    double map_to_reference(double r) const;

    /// P_k^(alpha,beta)(x) by the three-term recurrence.
    /// Throws std::domain_error if |x| > 1 + 1e-12.
    double jacobi_eval(int k, double x) const;

    /// All of P_0(x)..P_kmax(x) in one recurrence sweep.
    std::vector<double> jacobi_seq(int k_max, double x) const;

    /// J_k(r) = jacobi_eval(k, map_to_reference(r)).
    double radial_basis_eval(int k, double r) const;

    /// J_0(r)..J_kmax(r) in one sweep.
    std::vector<double> radial_seq(int k_max, double r) const;

    /// gamma_k = L2 norm of J_k under the reference weight; cached.
    double gamma_norm(int k) const;
    /// gamma_k^2, the orthogonality normaliser.
    double gamma_sq(int k) const;

    /// Total mass of the radial measure, mu_rad([r_in, r_out]) = gamma_0^2.
    double total_mass() const { return gamma_sq(0); }

private:
    double compute_gamma_sq(int k) const;

    double alpha_;
    double beta_;
    double r_in_;
    double r_out_;
    bool operator_range_;
    std::shared_ptr<struct GammaCache> cache_;
};

/// n-point Gauss-Jacobi rule: nodes are the zeros of P_n mapped to
/// [r_in, r_out]; exact for polynomials of degree <= 2n-1 against the
/// radial measure. Chebyshev parameters (alpha = beta = -1/2) use the
/// closed-form nodes and weights; other parameters go through a
/// Golub-Welsch symmetric-tridiagonal eigensolve.
/// Throws numerical_error if the eigensolve fails to converge or a weight
/// comes out nonpositive.
RadialRule gauss_jacobi_rule(const JacobiBasis& basis, int n_points);

namespace detail {
/// Reference-interval rule for weight (1-x)^alpha (1+x)^beta on [-1,1].
void gauss_jacobi_reference(double alpha, double beta, int n,
                            std::vector<double>& nodes,
                            std::vector<double>& weights);
} // namespace detail

} // namespace shellfh
