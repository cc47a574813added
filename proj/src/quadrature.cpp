#include "shellfh/quadrature.hpp"

#include "shellfh/errors.hpp"
#include "shellfh/kahan.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace shellfh {

namespace {
constexpr double kFourPi = 4.0 * std::numbers::pi;
}

SphericalRule::SphericalRule(std::vector<std::array<double, 3>> points,
                             std::vector<double> weights, int precision_t)
    : points_(std::move(points)), weights_(std::move(weights)), precision_t_(precision_t) {
    if (points_.size() != weights_.size() || points_.empty())
        throw std::invalid_argument("SphericalRule: points/weights size mismatch");
    if (precision_t_ < 0)
        throw std::invalid_argument("SphericalRule: negative precision");
    angles_.reserve(points_.size());
    for (std::size_t i = 0; i < points_.size(); ++i) {
        const auto& p = points_[i];
        const double n = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
        if (std::abs(n - 1.0) > 1e-12)
            throw std::invalid_argument("SphericalRule: point " + std::to_string(i) +
                                        " is not a unit vector");
        if (!(weights_[i] > 0.0))
            throw std::invalid_argument("SphericalRule: nonpositive weight at " +
                                        std::to_string(i));
        angles_.push_back(SphPoint::from_unit_vector(p));
    }
}

int capped_degree(int degree, double cap) {
    const int c = static_cast<int>(std::ceil(cap * degree - 1e-9));
    return std::max(c - 1, degree);
}

DegreeCaps DegreeCaps::make(int K, int L, double a, double b) {
    if (K < 1 || L < 1)
        throw std::invalid_argument("DegreeCaps: K and L must be >= 1");
    if (!(a > 1.0) || !(a <= 2.0) || !(b > 1.0) || !(b <= 2.0))
        throw std::invalid_argument("DegreeCaps: a, b must lie in (1, 2]");
    DegreeCaps caps;
    caps.K = K;
    caps.L = L;
    caps.a = a;
    caps.b = b;
    caps.Kbar = capped_degree(K, a);
    caps.Lbar = capped_degree(L, b);
    return caps;
}

int radial_quadrature_index(const DegreeCaps& caps) {
    const int n = caps.Kbar + caps.K - 1;
    return (n + 1) / 2;
}

RadialRule radial_rule_for(const JacobiBasis& basis, const DegreeCaps& caps) {
    return gauss_jacobi_rule(basis, radial_quadrature_index(caps) + 1);
}

SphericalRule product_rule(int t) {
    if (t < 0) throw std::invalid_argument("product_rule: t must be >= 0");
    const int n_polar = (t + 2) / 2; // ceil((t+1)/2)
    const int n_phi = t + 1;

    std::vector<double> x, u;
    detail::gauss_jacobi_reference(0.0, 0.0, n_polar, x, u);

    std::vector<std::array<double, 3>> pts;
    std::vector<double> w;
    pts.reserve(static_cast<std::size_t>(n_polar) * n_phi);
    w.reserve(pts.capacity());
    const double phi_weight = 2.0 * std::numbers::pi / n_phi;
    for (int i = 0; i < n_polar; ++i) {
        const double z = x[static_cast<std::size_t>(i)];
        const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        for (int j = 0; j < n_phi; ++j) {
            const double phi = 2.0 * std::numbers::pi * j / n_phi;
            pts.push_back({s * std::cos(phi), s * std::sin(phi), z});
            w.push_back(u[static_cast<std::size_t>(i)] * phi_weight);
        }
    }
    SphericalRule rule(std::move(pts), std::move(w), t);
    const CertReport report = certify(rule, t);
    if (!report.pass)
        throw numerical_error("product_rule(" + std::to_string(t) +
                              "): exactness certification failed: " + report.summary());
    return rule;
}

SphericalRule load_design(std::istream& in, int declared_t) {
    if (declared_t < 0)
        throw std::invalid_argument("load_design: declared_t must be >= 0");
    std::vector<std::array<double, 3>> pts;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        std::array<double, 3> p{};
        if (!(ls >> p[0])) continue; // blank or comment-only line
        if (!(ls >> p[1] >> p[2]))
            throw precondition_error("design parse error at line " +
                                     std::to_string(line_no) +
                                     ": expected 3 numeric tokens");
        std::string extra;
        if (ls >> extra)
            throw precondition_error("design parse error at line " +
                                     std::to_string(line_no) +
                                     ": expected 3 tokens, found more");
        const double n = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
        if (!std::isfinite(n) || std::abs(n - 1.0) > 1e-8)
            throw precondition_error("design geometry error at line " +
                                     std::to_string(line_no) +
                                     ": point is not on the unit sphere");
        pts.push_back({p[0] / n, p[1] / n, p[2] / n});
    }
    if (pts.empty()) throw precondition_error("design parse error: no points");

    std::vector<double> w(pts.size(), kFourPi / static_cast<double>(pts.size()));
    SphericalRule rule(std::move(pts), std::move(w), declared_t);
    const CertReport report = certify(rule, declared_t);
    if (!report.pass)
        throw precondition_error("design certification failed at degree " +
                                 std::to_string(report.first_failed_degree) +
                                 " (declared t=" + std::to_string(declared_t) +
                                 ", residual " + std::to_string(report.worst()) + ")");
    return rule;
}

SphericalRule load_design_file(const std::filesystem::path& path, int declared_t) {
    std::ifstream in(path);
    if (!in)
        throw precondition_error("cannot open design file: " + path.string());
    return load_design(in, declared_t);
}

DesignLibrary::DesignLibrary(const std::filesystem::path& manifest)
    : dir_(manifest.parent_path()) {
    std::ifstream in(manifest);
    if (!in)
        throw precondition_error("cannot open design manifest: " + manifest.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        Entry e;
        if (!(ls >> e.t)) continue;
        if (!(ls >> e.n >> e.filename) || e.t < 0 || e.n < 1)
            throw precondition_error("manifest parse error at line " +
                                     std::to_string(line_no) +
                                     ": expected \"t N filename\"");
        entries_.push_back(std::move(e));
    }
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& a, const Entry& b) { return a.t < b.t; });
}

std::optional<DesignLibrary::Entry> DesignLibrary::smallest_for(int min_t) const {
    for (const auto& e : entries_)
        if (e.t >= min_t) return e;
    return std::nullopt;
}

std::optional<SphericalRule> DesignLibrary::rule_for(int min_t) const {
    // TODO: cache loaded rules; re-reading is fine for the bundled designs
    // but wasteful once multi-thousand-point files appear in a manifest.
    const auto entry = smallest_for(min_t);
    if (!entry) return std::nullopt;
    SphericalRule rule = load_design_file(dir_ / entry->filename, entry->t);
    if (static_cast<int>(rule.size()) != entry->n)
        throw precondition_error("design " + entry->filename + " has " +
                                 std::to_string(rule.size()) + " points, manifest says " +
                                 std::to_string(entry->n));
    return rule;
}

SphericalRule angular_rule_for(const DegreeCaps& caps, const DesignLibrary* designs) {
    const int need = caps.Lbar + caps.L;
    if (designs) {
        if (auto rule = designs->rule_for(need)) return std::move(*rule);
    }
    return product_rule(need);
}

double discrete_inner_radial(const RadialRule& rule,
                             const std::function<double(double)>& f,
                             const std::function<double(double)>& g) {
    KahanSum acc;
    for (std::size_t j = 0; j < rule.nodes.size(); ++j)
        acc.add(rule.weights[j] * f(rule.nodes[j]) * g(rule.nodes[j]));
    return acc.value();
}

double discrete_inner_angular(const SphericalRule& rule,
                              const std::function<double(const SphPoint&)>& f,
                              const std::function<double(const SphPoint&)>& g) {
    KahanSum acc;
    for (std::size_t n = 0; n < rule.size(); ++n)
        acc.add(rule.weights()[n] * f(rule.angles()[n]) * g(rule.angles()[n]));
    return acc.value();
}

double CertReport::worst() const {
    double w = 0.0;
    for (double r : worst_residual) w = std::max(w, r);
    return w;
}

std::string CertReport::summary() const {
    std::ostringstream os;
    os << (pass ? "PASS" : "FAIL") << " up to degree " << max_degree
       << " (tolerance " << tolerance << ")";
    if (!pass) os << ", first failure at degree " << first_failed_degree;
    os << "\n";
    for (std::size_t d = 0; d < worst_residual.size(); ++d) {
        os << "  degree " << d << ": worst residual " << worst_residual[d]
           << (worst_residual[d] <= tolerance ? "" : "  <-- FAIL") << "\n";
    }
    return os.str();
}

CertReport certify(const SphericalRule& rule, int max_degree, double tol) {
    if (max_degree < 0)
        throw std::invalid_argument("certify: max_degree must be >= 0");
    CertReport report;
    report.max_degree = max_degree;
    report.tolerance = tol;

    const std::size_t n_harm = static_cast<std::size_t>(max_degree + 1) *
                               static_cast<std::size_t>(max_degree + 1);
    std::vector<KahanSum> sums(n_harm);
    for (std::size_t n = 0; n < rule.size(); ++n) {
        const std::vector<double> y = sph_harm_batch(max_degree, rule.angles()[n]);
        const double w = rule.weights()[n];
        for (std::size_t p = 0; p < n_harm; ++p) sums[p].add(w * y[p]);
    }

    report.worst_residual.assign(static_cast<std::size_t>(max_degree) + 1, 0.0);
    for (int l = 0; l <= max_degree; ++l) {
        const double expected = (l == 0) ? std::sqrt(kFourPi) : 0.0;
        double worst = 0.0;
        for (int m = -l; m <= l; ++m) {
            const std::size_t p = static_cast<std::size_t>(l) * l +
                                  static_cast<std::size_t>(l + m);
            worst = std::max(worst, std::abs(sums[p].value() - expected));
        }
        report.worst_residual[static_cast<std::size_t>(l)] = worst;
        if (worst > tol && report.first_failed_degree < 0)
            report.first_failed_degree = l;
    }
    report.pass = report.first_failed_degree < 0;
    return report;
}

CertReport certify(const RadialRule& rule, const JacobiBasis& basis,
                   int max_degree, double tol) {
    if (max_degree < 0)
        throw std::invalid_argument("certify: max_degree must be >= 0");
    CertReport report;
    report.max_degree = max_degree;
    report.tolerance = tol;

    const std::size_t n = rule.size();
    std::vector<std::vector<double>> table(n);
    for (std::size_t i = 0; i < n; ++i)
        table[i] = basis.jacobi_seq(max_degree, basis.map_to_reference(rule.nodes[i]));

    std::vector<double> gamma(static_cast<std::size_t>(max_degree) + 1);
    for (int k = 0; k <= max_degree; ++k)
        gamma[static_cast<std::size_t>(k)] = basis.gamma_norm(k);

    report.worst_residual.assign(static_cast<std::size_t>(max_degree) + 1, 0.0);
    for (int j = 0; j <= max_degree; ++j) {
        for (int k = j; j + k <= max_degree; ++k) {
            KahanSum acc;
            for (std::size_t i = 0; i < n; ++i)
                acc.add(rule.weights[i] * table[i][static_cast<std::size_t>(j)] *
                        table[i][static_cast<std::size_t>(k)]);
            const double expected = (j == k) ? basis.gamma_sq(k) : 0.0;
            const double scale = gamma[static_cast<std::size_t>(j)] *
                                 gamma[static_cast<std::size_t>(k)];
            const double residual = std::abs(acc.value() - expected) / scale;
            auto& slot = report.worst_residual[static_cast<std::size_t>(j + k)];
            slot = std::max(slot, residual);
        }
    }
    for (int d = 0; d <= max_degree; ++d) {
        if (report.worst_residual[static_cast<std::size_t>(d)] > tol) {
            report.first_failed_degree = d;
            break;
        }
    }
    report.pass = report.first_failed_degree < 0;
    return report;
}

} // namespace shellfh
