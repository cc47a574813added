#pragma once

#include <array>
#include <vector>

namespace shellfh {

/// A point on the unit sphere in colatitude/longitude form.
/// theta in [0, pi], phi in [0, 2*pi); at the poles phi is canonicalised
/// to 0.
struct SphPoint {
    double theta = 0.0;
    double phi = 0.0;

    SphPoint() = default;
    SphPoint(double theta_in, double phi_in);

    static SphPoint from_unit_vector(const std::array<double, 3>& v);
    std::array<double, 3> unit_vector() const;
};

/// Spherical harmonic index: degree ell >= 0, order |m| <= ell.
struct HarmonicIndex {
    int ell = 0;
    int m = 0;

    HarmonicIndex(int ell_in, int m_in);

    /// Packed position ell^2 + ell + m, the layout used by batch tables
    /// and coefficient tensors.
    int packed() const { return ell * ell + ell + m; }
};

/// Normalised associated Legendre function
///   sqrt((2*ell+1)/2 * (ell-m)!/(ell+m)!) * P_ell^m(x),
/// with P_ell^m = (1-x^2)^(m/2) d^m P_ell / dx^m (no Condon-Shortley
/// phase). Computed by the normalised increasing-degree recurrence; the
/// factorial quotient is never formed, so degrees beyond ~85 stay finite.
/// Requires 0 <= m <= ell and |x| <= 1.
double assoc_legendre_norm(int ell, int m, double x);

/// Real spherical harmonic:
///   m = 0 : P~(ell,0)(cos theta) / sqrt(2 pi)
///   m > 0 : P~(ell,m)(cos theta) cos(m phi) / sqrt(pi)
///   m < 0 : P~(ell,|m|)(cos theta) sin(|m| phi) / sqrt(pi)
/// Orthonormal on the sphere with the surface measure.
double sph_harm_real(const HarmonicIndex& idx, const SphPoint& p);

/// All (max_ell+1)^2 harmonics at one point, packed as ell^2 + ell + m,
/// computed in a single recurrence sweep. Agrees with sph_harm_real
/// pointwise.
std::vector<double> sph_harm_batch(int max_ell, const SphPoint& p);

} // namespace shellfh
