#include "shellfh/sphharm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace shellfh {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const double kInvSqrt2Pi = 1.0 / std::sqrt(kTwoPi);
const double kInvSqrtPi = 1.0 / std::sqrt(std::numbers::pi);

// Ascend from P~(m,m) to P~(ell,m) with the normalised three-term
// recurrence. Shared verbatim by the pointwise and batch paths so the two
// agree to the last bit.
double ascend(int ell, int m, double x, double diag) {
    if (ell == m) return diag;
    const double mm = static_cast<double>(m) * m;
    double pl1 = diag;
    double pl = std::sqrt(2.0 * m + 3.0) * x * pl1;
    for (int l = m + 2; l <= ell; ++l) {
        const double a = std::sqrt((4.0 * l * l - 1.0) / (l * l - mm));
        const double b =
            std::sqrt(((l - 1.0) * (l - 1.0) - mm) / (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
        const double next = a * (x * pl - b * pl1);
        pl1 = pl;
        pl = next;
    }
    return pl;
}

double diagonal(int m, double s) {
    double d = std::numbers::sqrt2 / 2.0; // P~(0,0) = 1/sqrt(2)
    for (int i = 1; i <= m; ++i) d *= s * std::sqrt((2.0 * i + 1.0) / (2.0 * i));
    return d;
}

} // namespace

SphPoint::SphPoint(double theta_in, double phi_in) : theta(theta_in), phi(phi_in) {
    if (!(theta >= -1e-12) || !(theta <= std::numbers::pi + 1e-12) ||
        !std::isfinite(theta))
        throw std::domain_error("SphPoint: theta outside [0, pi]");
    if (!std::isfinite(phi)) throw std::domain_error("SphPoint: phi not finite");
    if (theta < 0.0) theta = 0.0;
    if (theta > std::numbers::pi) theta = std::numbers::pi;
    if (phi < 0.0 || phi >= kTwoPi) {
        phi = std::fmod(phi, kTwoPi);
        if (phi < 0.0) phi += kTwoPi;
        if (phi >= kTwoPi) phi = 0.0;
    }
    if (theta == 0.0 || theta == std::numbers::pi) phi = 0.0;
}

SphPoint SphPoint::from_unit_vector(const std::array<double, 3>& v) {
    const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (!(n > 0.0))
        throw std::invalid_argument("SphPoint::from_unit_vector: zero vector");
    const double z = std::clamp(v[2] / n, -1.0, 1.0);
    const double theta = std::acos(z);
    double phi = std::atan2(v[1], v[0]);
    if (phi < 0.0) phi += kTwoPi;
    return SphPoint(theta, phi);
}

std::array<double, 3> SphPoint::unit_vector() const {
    const double s = std::sin(theta);
    return {s * std::cos(phi), s * std::sin(phi), std::cos(theta)};
}

HarmonicIndex::HarmonicIndex(int ell_in, int m_in) : ell(ell_in), m(m_in) {
    if (ell < 0 || std::abs(m) > ell)
        throw std::invalid_argument("HarmonicIndex: need ell >= 0 and |m| <= ell");
}

double assoc_legendre_norm(int ell, int m, double x) {
    if (m < 0 || m > ell)
        throw std::invalid_argument("assoc_legendre_norm: order outside 0..ell");
    if (std::abs(x) > 1.0 + 1e-12)
        throw std::domain_error("assoc_legendre_norm: |x| > 1");
    x = std::clamp(x, -1.0, 1.0);
    const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
    return ascend(ell, m, x, diagonal(m, s));
}

double sph_harm_real(const HarmonicIndex& idx, const SphPoint& p) {
    const double x = std::cos(p.theta);
    const int mabs = std::abs(idx.m);
    const double leg = assoc_legendre_norm(idx.ell, mabs, x);
    if (idx.m == 0) return kInvSqrt2Pi * leg;

    // cos/sin of m*phi by the angle-addition recurrence.
    const double c1 = std::cos(p.phi);
    const double s1 = std::sin(p.phi);
    double cm = c1;
    double sm = s1;
    for (int i = 2; i <= mabs; ++i) {
        const double c = cm * c1 - sm * s1;
        sm = sm * c1 + cm * s1;
        cm = c;
    }
    return kInvSqrtPi * leg * (idx.m > 0 ? cm : sm);
}

std::vector<double> sph_harm_batch(int max_ell, const SphPoint& p) {
    if (max_ell < 0) throw std::invalid_argument("sph_harm_batch: max_ell < 0");
    const std::size_t count = static_cast<std::size_t>(max_ell + 1) *
                              static_cast<std::size_t>(max_ell + 1);
    std::vector<double> out(count);

    const double x = std::cos(p.theta);
    const double s = std::sqrt(std::max(0.0, 1.0 - x * x));
    const double c1 = std::cos(p.phi);
    const double s1 = std::sin(p.phi);

    double diag = std::numbers::sqrt2 / 2.0;
    double cm = 1.0;
    double sm = 0.0;
    for (int m = 0; m <= max_ell; ++m) {
        if (m > 0) {
            diag *= s * std::sqrt((2.0 * m + 1.0) / (2.0 * m));
            if (m == 1) {
                cm = c1;
                sm = s1;
            } else {
                const double c = cm * c1 - sm * s1;
                sm = sm * c1 + cm * s1;
                cm = c;
            }
        }
        const double mm = static_cast<double>(m) * m;
        double pl1 = diag;
        double pl = 0.0;
        for (int l = m; l <= max_ell; ++l) {
            double value;
            if (l == m) {
                value = diag;
            } else if (l == m + 1) {
                pl = std::sqrt(2.0 * m + 3.0) * x * pl1;
                value = pl;
            } else {
                const double a = std::sqrt((4.0 * l * l - 1.0) / (l * l - mm));
                const double b = std::sqrt(((l - 1.0) * (l - 1.0) - mm) /
                                           (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
                const double next = a * (x * pl - b * pl1);
                pl1 = pl;
                pl = next;
                value = next;
            }
            const std::size_t base = static_cast<std::size_t>(l) * l + static_cast<std::size_t>(l);
            if (m == 0) {
                out[base] = kInvSqrt2Pi * value;
            } else {
                out[base + static_cast<std::size_t>(m)] = kInvSqrtPi * value * cm;
                out[base - static_cast<std::size_t>(m)] = kInvSqrtPi * value * sm;
            }
        }
    }
    return out;
}

} // namespace shellfh
