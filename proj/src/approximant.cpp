#include "shellfh/approximant.hpp"

#include "shellfh/errors.hpp"
#include "shellfh/kahan.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace shellfh {

std::array<double, 3> ShellPoint::cartesian() const {
    const auto u = sigma.unit_vector();
    return {r * u[0], r * u[1], r * u[2]};
}

ShellPoint ShellPoint::from_cartesian(const std::array<double, 3>& x) {
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    if (!(r > 0.0))
        throw std::domain_error("ShellPoint::from_cartesian: zero vector");
    return ShellPoint(r, SphPoint::from_unit_vector(x));
}

ShellApproximant::ShellApproximant(JacobiBasis basis, DegreeCaps caps,
                                   FilterPair filter, std::vector<double> coeffs)
    : basis_(std::move(basis)),
      caps_(caps),
      filter_(std::move(filter)),
      coeffs_(std::move(coeffs)) {
    const std::size_t expected =
        static_cast<std::size_t>(caps_.Kbar + 1) *
        static_cast<std::size_t>(caps_.Lbar + 1) * static_cast<std::size_t>(caps_.Lbar + 1);
    if (coeffs_.size() != expected)
        throw std::invalid_argument("ShellApproximant: coefficient tensor has wrong size");
}

double ShellApproximant::coeff(int k, int ell, int m) const {
    if (k < 0 || k > caps_.Kbar || ell < 0 || ell > caps_.Lbar || std::abs(m) > ell)
        throw std::invalid_argument("ShellApproximant::coeff: index out of range");
    const std::size_t n_harm = static_cast<std::size_t>(caps_.Lbar + 1) *
                               static_cast<std::size_t>(caps_.Lbar + 1);
    return coeffs_[static_cast<std::size_t>(k) * n_harm +
                   static_cast<std::size_t>(HarmonicIndex(ell, m).packed())];
}

std::vector<double> ShellApproximant::angular_profile(const SphPoint& sigma) const {
    const std::size_t n_harm = static_cast<std::size_t>(caps_.Lbar + 1) *
                               static_cast<std::size_t>(caps_.Lbar + 1);
    const std::vector<double> y = sph_harm_batch(caps_.Lbar, sigma);
    std::vector<double> profile(static_cast<std::size_t>(caps_.Kbar + 1), 0.0);
    for (int k = 0; k <= caps_.Kbar; ++k) {
        const double* c = coeffs_.data() + static_cast<std::size_t>(k) * n_harm;
        double d = 0.0;
        for (std::size_t p = 0; p < n_harm; ++p) d += c[p] * y[p];
        profile[static_cast<std::size_t>(k)] = d;
    }
    return profile;
}

double ShellApproximant::evaluate_with_profile(const std::vector<double>& profile,
                                               double r) const {
    const std::vector<double> j = basis_.radial_seq(caps_.Kbar, r);
    double value = 0.0;
    for (std::size_t k = 0; k < profile.size(); ++k) value += j[k] * profile[k];
    return value;
}

double ShellApproximant::evaluate(const ShellPoint& p) const {
    return evaluate_with_profile(angular_profile(p.sigma), p.r);
}

void ShellApproximant::save(std::ostream& out) const {
    nlohmann::json doc;
    doc["format"] = "shellfh-approximant";
    doc["version"] = 1;
    doc["alpha"] = basis_.alpha();
    doc["beta"] = basis_.beta();
    doc["r_in"] = basis_.r_in();
    doc["r_out"] = basis_.r_out();
    doc["K"] = caps_.K;
    doc["L"] = caps_.L;
    doc["a"] = caps_.a;
    doc["b"] = caps_.b;
    doc["filter_rad"] = filter_.rad_name();
    doc["filter_ang"] = filter_.ang_name();
    doc["filter_folded"] = true;
    doc["coeff_layout"] = "radial-major; packed angular index l*l+l+m";
    doc["coeffs"] = coeffs_;
    out << doc.dump(1) << "\n";
}

void ShellApproximant::save_file(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw precondition_error("cannot open output file: " + path.string());
    save(out);
}

ShellApproximant ShellApproximant::load(std::istream& in) {
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw precondition_error(std::string("approximant parse error: ") + e.what());
    }
    try {
        if (doc.at("format") != "shellfh-approximant" || doc.at("version") != 1)
            throw precondition_error("approximant: unknown format or version");
        JacobiBasis basis(doc.at("alpha").get<double>(), doc.at("beta").get<double>(),
                          doc.at("r_in").get<double>(), doc.at("r_out").get<double>());
        const DegreeCaps caps =
            DegreeCaps::make(doc.at("K").get<int>(), doc.at("L").get<int>(),
                             doc.at("a").get<double>(), doc.at("b").get<double>());
        FilterPair filter =
            FilterPair::make(doc.at("filter_rad").get<std::string>(), caps.a,
                             doc.at("filter_ang").get<std::string>(), caps.b);
        auto coeffs = doc.at("coeffs").get<std::vector<double>>();
        return ShellApproximant(std::move(basis), caps, std::move(filter),
                                std::move(coeffs));
    } catch (const nlohmann::json::exception& e) {
        throw precondition_error(std::string("approximant: missing or bad field: ") +
                                 e.what());
    }
}

ShellApproximant ShellApproximant::load_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw precondition_error("cannot open approximant file: " + path.string());
    return load(in);
}

ShellApproximant fit(const ShellFunction& f, const DegreeCaps& caps,
                     const JacobiBasis& basis, const FilterPair& filter,
                     const RadialRule& radial, const SphericalRule& angular) {
    if (filter.a() != caps.a || filter.b() != caps.b)
        throw std::invalid_argument("fit: filter caps do not match the degree caps");
    if (radial.precision < caps.Kbar + caps.K)
        throw precondition_error("fit: radial rule precision " +
                                 std::to_string(radial.precision) + " < required " +
                                 std::to_string(caps.Kbar + caps.K));
    if (angular.precision_t() < caps.Lbar + caps.L)
        throw precondition_error("fit: angular rule precision " +
                                 std::to_string(angular.precision_t()) +
                                 " < required " + std::to_string(caps.Lbar + caps.L));

    const std::size_t n_rad = radial.size();
    const std::size_t n_harm = static_cast<std::size_t>(caps.Lbar + 1) *
                               static_cast<std::size_t>(caps.Lbar + 1);
    const std::size_t n_k = static_cast<std::size_t>(caps.Kbar + 1);

    // Angular reduction g[j][p] = sum_n w_ang_n f(r_j, sigma_n) Y_p(sigma_n):
    // one harmonic batch per node, f sampled once per (j, n).
    std::vector<KahanSum> g(n_rad * n_harm);
    for (std::size_t n = 0; n < angular.size(); ++n) {
        const SphPoint& sigma = angular.angles()[n];
        const std::vector<double> y = sph_harm_batch(caps.Lbar, sigma);
        const double wn = angular.weights()[n];
        for (std::size_t j = 0; j < n_rad; ++j) {
            const double fv = wn * f(ShellPoint(radial.nodes[j], sigma));
            KahanSum* row = g.data() + j * n_harm;
            for (std::size_t p = 0; p < n_harm; ++p) row[p].add(fv * y[p]);
        }
    }

    // Radial stage: c[k][p] = sum_j w_rad_j J_k(r_j) g[j][p].
    std::vector<KahanSum> acc(n_k * n_harm);
    for (std::size_t j = 0; j < n_rad; ++j) {
        const std::vector<double> jk = basis.radial_seq(caps.Kbar, radial.nodes[j]);
        const double wj = radial.weights[j];
        const KahanSum* row = g.data() + j * n_harm;
        for (std::size_t k = 0; k < n_k; ++k) {
            const double wjk = wj * jk[k];
            KahanSum* out = acc.data() + k * n_harm;
            for (std::size_t p = 0; p < n_harm; ++p) out[p].add(wjk * row[p].value());
        }
    }

    std::vector<double> coeffs(n_k * n_harm, 0.0);
    for (int k = 0; k <= caps.Kbar; ++k) {
        const double h_rad = filter.h_rad(static_cast<double>(k) / caps.K);
        const double inv_gamma_sq = 1.0 / basis.gamma_sq(k);
        for (int ell = 0; ell <= caps.Lbar; ++ell) {
            const double h = h_rad * filter.h_ang(static_cast<double>(ell) / caps.L);
            const double factor = h * inv_gamma_sq;
            for (int m = -ell; m <= ell; ++m) {
                const std::size_t idx =
                    static_cast<std::size_t>(k) * n_harm +
                    static_cast<std::size_t>(ell) * ell + static_cast<std::size_t>(ell + m);
                coeffs[idx] = (h == 0.0) ? 0.0 : factor * acc[idx].value();
            }
        }
    }
    return ShellApproximant(basis, caps, filter, std::move(coeffs));
}

RadialFiltered::RadialFiltered(ShellFunction f, DegreeCaps caps, JacobiBasis basis,
                               FilterPair filter, RadialRule rule)
    : f_(std::move(f)), caps_(caps), basis_(std::move(basis)), rule_(std::move(rule)) {
    if (filter.a() != caps_.a)
        throw std::invalid_argument("radial_filtered: filter cap does not match caps");
    if (rule_.precision < caps_.Kbar + caps_.K)
        throw precondition_error("radial_filtered: rule precision " +
                                 std::to_string(rule_.precision) + " < required " +
                                 std::to_string(caps_.Kbar + caps_.K));
    basis_at_nodes_.reserve(rule_.size());
    for (std::size_t j = 0; j < rule_.size(); ++j)
        basis_at_nodes_.push_back(basis_.radial_seq(caps_.Kbar, rule_.nodes[j]));
    filter_over_gamma_sq_.resize(static_cast<std::size_t>(caps_.Kbar + 1));
    for (int k = 0; k <= caps_.Kbar; ++k)
        filter_over_gamma_sq_[static_cast<std::size_t>(k)] =
            filter.h_rad(static_cast<double>(k) / caps_.K) / basis_.gamma_sq(k);
}

double RadialFiltered::operator()(const ShellPoint& p) const {
    const std::size_t n_k = static_cast<std::size_t>(caps_.Kbar + 1);
    std::vector<KahanSum> a(n_k);
    for (std::size_t j = 0; j < rule_.size(); ++j) {
        const double wf = rule_.weights[j] * f_(ShellPoint(rule_.nodes[j], p.sigma));
        for (std::size_t k = 0; k < n_k; ++k) a[k].add(wf * basis_at_nodes_[j][k]);
    }
    const std::vector<double> jr = basis_.radial_seq(caps_.Kbar, p.r);
    double value = 0.0;
    for (std::size_t k = 0; k < n_k; ++k)
        value += filter_over_gamma_sq_[k] * a[k].value() * jr[k];
    return value;
}

RadialFiltered radial_filtered(ShellFunction f, const DegreeCaps& caps,
                               const JacobiBasis& basis, const FilterPair& filter,
                               const RadialRule& rule) {
    return RadialFiltered(std::move(f), caps, basis, filter, rule);
}

AngularFiltered::AngularFiltered(ShellFunction f, DegreeCaps caps, FilterPair filter,
                                 SphericalRule rule)
    : f_(std::move(f)), caps_(caps), rule_(std::move(rule)) {
    if (filter.b() != caps_.b)
        throw std::invalid_argument("angular_filtered: filter cap does not match caps");
    if (rule_.precision_t() < caps_.Lbar + caps_.L)
        throw precondition_error("angular_filtered: rule precision " +
                                 std::to_string(rule_.precision_t()) + " < required " +
                                 std::to_string(caps_.Lbar + caps_.L));
    harmonics_at_nodes_.reserve(rule_.size());
    for (std::size_t n = 0; n < rule_.size(); ++n)
        harmonics_at_nodes_.push_back(sph_harm_batch(caps_.Lbar, rule_.angles()[n]));
    filter_by_degree_.resize(static_cast<std::size_t>(caps_.Lbar + 1));
    for (int ell = 0; ell <= caps_.Lbar; ++ell)
        filter_by_degree_[static_cast<std::size_t>(ell)] =
            filter.h_ang(static_cast<double>(ell) / caps_.L);
}

double AngularFiltered::operator()(const ShellPoint& p) const {
    const std::size_t n_harm = static_cast<std::size_t>(caps_.Lbar + 1) *
                               static_cast<std::size_t>(caps_.Lbar + 1);
    std::vector<KahanSum> q(n_harm);
    for (std::size_t n = 0; n < rule_.size(); ++n) {
        const double wf = rule_.weights()[n] * f_(ShellPoint(p.r, rule_.angles()[n]));
        const std::vector<double>& y = harmonics_at_nodes_[n];
        for (std::size_t i = 0; i < n_harm; ++i) q[i].add(wf * y[i]);
    }
    const std::vector<double> y = sph_harm_batch(caps_.Lbar, p.sigma);
    double value = 0.0;
    for (int ell = 0; ell <= caps_.Lbar; ++ell) {
        const double h = filter_by_degree_[static_cast<std::size_t>(ell)];
        if (h == 0.0) continue;
        double block = 0.0;
        const std::size_t base = static_cast<std::size_t>(ell) * ell;
        for (int m = -ell; m <= ell; ++m) {
            const std::size_t idx = base + static_cast<std::size_t>(ell + m);
            block += q[idx].value() * y[idx];
        }
        value += h * block;
    }
    return value;
}

AngularFiltered angular_filtered(ShellFunction f, const DegreeCaps& caps,
                                 const FilterPair& filter, const SphericalRule& rule) {
    return AngularFiltered(std::move(f), caps, filter, rule);
}

double radial_kernel(const JacobiBasis& basis, const DegreeCaps& caps,
                     const FilterPair& filter, double s, double r) {
    const std::vector<double> js = basis.radial_seq(caps.Kbar, s);
    const std::vector<double> jr = basis.radial_seq(caps.Kbar, r);
    double value = 0.0;
    for (int k = 0; k <= caps.Kbar; ++k) {
        const double h = filter.h_rad(static_cast<double>(k) / caps.K);
        if (h == 0.0) continue;
        // product of the two basis values first, so the sum is symmetric
        // in (s, r) bit for bit
        const double pair = js[static_cast<std::size_t>(k)] * jr[static_cast<std::size_t>(k)];
        value += pair * (h / basis.gamma_sq(k));
    }
    return value;
}

BaselineApproximant::BaselineApproximant(JacobiBasis basis, int K, int L)
    : basis_(std::move(basis)), radial_degree_(K), angular_degree_(L) {
    const int n = K + 1;
    ref_nodes_.resize(static_cast<std::size_t>(n));
    bary_weights_.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double angle = (2.0 * j + 1.0) * std::numbers::pi / (2.0 * n);
        ref_nodes_[static_cast<std::size_t>(j)] = std::cos(angle);
        bary_weights_[static_cast<std::size_t>(j)] =
            (j % 2 == 0 ? 1.0 : -1.0) * std::sin(angle);
    }
}

std::vector<double> BaselineApproximant::angular_profile(const SphPoint& sigma) const {
    const std::size_t n_harm = static_cast<std::size_t>(angular_degree_ + 1) *
                               static_cast<std::size_t>(angular_degree_ + 1);
    const std::vector<double> y = sph_harm_batch(angular_degree_, sigma);
    std::vector<double> profile(ref_nodes_.size(), 0.0);
    for (std::size_t j = 0; j < ref_nodes_.size(); ++j) {
        const double* c = coeffs_.data() + j * n_harm;
        double v = 0.0;
        for (std::size_t p = 0; p < n_harm; ++p) v += c[p] * y[p];
        profile[j] = v;
    }
    return profile;
}

double BaselineApproximant::evaluate_with_profile(const std::vector<double>& profile,
                                                  double r) const {
    const double x = basis_.map_to_reference(r);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < ref_nodes_.size(); ++j) {
        const double dx = x - ref_nodes_[j];
        if (dx == 0.0) return profile[j];
        const double t = bary_weights_[j] / dx;
        num += t * profile[j];
        den += t;
    }
    return num / den;
}

double BaselineApproximant::evaluate(const ShellPoint& p) const {
    return evaluate_with_profile(angular_profile(p.sigma), p.r);
}

BaselineApproximant baseline_nonfiltered(const ShellFunction& f, int K, int L,
                                         const JacobiBasis& basis,
                                         const SphericalRule& angular) {
    if (K < 1 || L < 1)
        throw std::invalid_argument("baseline_nonfiltered: K and L must be >= 1");
    if (angular.precision_t() < 2 * L)
        throw precondition_error("baseline_nonfiltered: angular rule precision " +
                                 std::to_string(angular.precision_t()) +
                                 " < required " + std::to_string(2 * L));

    BaselineApproximant out(basis, K, L);
    const std::size_t n_rad = out.ref_nodes_.size();
    const std::size_t n_harm = static_cast<std::size_t>(L + 1) *
                               static_cast<std::size_t>(L + 1);
    const double mid = 0.5 * (basis.r_in() + basis.r_out());
    const double half = 0.5 * (basis.r_out() - basis.r_in());

    std::vector<KahanSum> acc(n_rad * n_harm);
    for (std::size_t n = 0; n < angular.size(); ++n) {
        const SphPoint& sigma = angular.angles()[n];
        const std::vector<double> y = sph_harm_batch(L, sigma);
        const double wn = angular.weights()[n];
        for (std::size_t j = 0; j < n_rad; ++j) {
            const double rj = mid + half * out.ref_nodes_[j];
            const double fv = wn * f(ShellPoint(rj, sigma));
            KahanSum* row = acc.data() + j * n_harm;
            for (std::size_t p = 0; p < n_harm; ++p) row[p].add(fv * y[p]);
        }
    }
    out.coeffs_.resize(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) out.coeffs_[i] = acc[i].value();
    return out;
}

} // namespace shellfh
