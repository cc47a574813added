#include "shellfh/harness.hpp"

#include "shellfh/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <memory>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>

namespace shellfh {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

double f1(const ShellPoint& p) {
    const double radial = std::pow(std::abs(p.r - 1.0005), 8.5) / std::pow(0.0005, 8.5);
    const double c = std::cos(p.sigma.theta);
    return radial * c * c * c * c;
}

double f2(const ShellPoint& p) {
    const double radial = (p.r - 1.0) * (p.r - 1.0) / (0.001 * 0.001);
    return radial * std::pow(std::abs(std::cos(p.sigma.theta)), 8.5);
}

namespace {

double franke(const std::array<double, 3>& x) {
    const double x1 = x[0];
    const double x2 = x[1];
    const double x3 = x[2];
    const double t1 = 0.75 * std::exp(-((9 * x1 - 2) * (9 * x1 - 2) +
                                        (9 * x2 - 2) * (9 * x2 - 2) +
                                        (9 * x3 - 2) * (9 * x3 - 2)) /
                                      4.0);
    const double t2 = 0.75 * std::exp(-(9 * x1 + 1) * (9 * x1 + 1) / 49.0 -
                                      (9 * x2 + 1 + 9 * x3 + 1) / 10.0);
    const double t3 = 0.5 * std::exp(-((9 * x1 - 7) * (9 * x1 - 7) +
                                       (9 * x2 - 3) * (9 * x2 - 3) +
                                       (9 * x3 - 5) * (9 * x3 - 5)) /
                                     4.0);
    const double t4 = 0.2 * std::exp(-(9 * x1 - 4) * (9 * x1 - 4) -
                                     (9 * x2 - 7) * (9 * x2 - 7) -
                                     (9 * x3 - 5) * (9 * x3 - 5));
    return t1 + t2 + t3 - t4;
}

double cone(const ShellPoint& p) {
    static const std::array<double, 3> centre = {-0.5, -0.5, std::numbers::sqrt2 / 2.0};
    const auto u = p.sigma.unit_vector();
    const double dot = u[0] * centre[0] + u[1] * centre[1] + u[2] * centre[2];
    const double angle = std::acos(std::clamp(dot, -1.0, 1.0));
    if (angle > 0.5) return 0.0;
    return 1000.0 * std::abs(p.r - 1.0005) * (1.0 - 2.0 * angle);
}

} // namespace

double f3(const ShellPoint& p) { return franke(p.cartesian()) + cone(p); }

ShellFunction test_function(const std::string& id) {
    if (id == "f1") return f1;
    if (id == "f2") return f2;
    if (id == "f3") return f3;
    throw std::invalid_argument("unknown test function '" + id +
                                "' (expected f1, f2 or f3)");
}

EvalGrid EvalGrid::tensor(std::vector<double> radial, std::vector<SphPoint> angular) {
    if (radial.empty() || angular.empty())
        throw std::invalid_argument("EvalGrid::tensor: empty sample list");
    EvalGrid g;
    g.mode = Mode::tensor;
    g.radial = std::move(radial);
    g.angular = std::move(angular);
    return g;
}

EvalGrid EvalGrid::scattered(std::vector<double> radial, std::vector<SphPoint> angular) {
    if (radial.size() != angular.size() || radial.empty())
        throw std::invalid_argument("EvalGrid::scattered: lists must pair up");
    EvalGrid g;
    g.mode = Mode::scattered;
    g.radial = std::move(radial);
    g.angular = std::move(angular);
    return g;
}

std::size_t EvalGrid::point_count() const {
    return mode == Mode::tensor ? radial.size() * angular.size() : radial.size();
}

EvalGrid tensor_grid(const JacobiBasis& basis, int n_radial, int n_theta, int n_phi) {
    if (n_radial < 1 || n_theta < 2 || n_phi < 1)
        throw std::invalid_argument("tensor_grid: degenerate resolution");
    const double mid = 0.5 * (basis.r_in() + basis.r_out());
    const double half = 0.5 * (basis.r_out() - basis.r_in());
    std::vector<double> radial(static_cast<std::size_t>(n_radial));
    if (n_radial == 1) {
        radial[0] = mid;
    } else {
        for (int j = 0; j < n_radial; ++j)
            radial[static_cast<std::size_t>(j)] =
                mid - half * std::cos(j * std::numbers::pi / (n_radial - 1));
    }
    std::vector<SphPoint> angular;
    angular.reserve(static_cast<std::size_t>(n_theta) * n_phi);
    for (int i = 0; i < n_theta; ++i) {
        const double theta = i * std::numbers::pi / (n_theta - 1);
        for (int j = 0; j < n_phi; ++j)
            angular.emplace_back(theta, kTwoPi * j / n_phi);
    }
    return EvalGrid::tensor(std::move(radial), std::move(angular));
}

EvalGrid random_shell_points(const JacobiBasis& basis, std::size_t n,
                             std::uint64_t seed) {
    if (n == 0) throw std::invalid_argument("random_shell_points: n must be > 0");
    std::mt19937_64 gen(seed);
    // Bit-specified mapping to (0,1); no library distributions, so the
    // stream is identical on every platform.
    auto u01 = [&gen] {
        return (static_cast<double>(gen() >> 11) + 0.5) * 0x1p-53;
    };
    auto normal_pair = [&](double& g1, double& g2) {
        const double u = u01();
        const double v = u01();
        const double rho = std::sqrt(-2.0 * std::log(u));
        g1 = rho * std::cos(kTwoPi * v);
        g2 = rho * std::sin(kTwoPi * v);
    };

    std::vector<double> radial(n);
    std::vector<SphPoint> angular;
    angular.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        radial[i] = basis.r_in() + (basis.r_out() - basis.r_in()) * u01();
        double g1, g2, g3, g4;
        do {
            normal_pair(g1, g2);
            normal_pair(g3, g4);
        } while (g1 * g1 + g2 * g2 + g3 * g3 < 1e-24);
        angular.push_back(SphPoint::from_unit_vector({g1, g2, g3}));
    }
    return EvalGrid::scattered(std::move(radial), std::move(angular));
}

SupResult sup_error(const ShellFunction& f, const ShellFunction& approx,
                    const EvalGrid& grid) {
    SupResult best;
    best.value = -1.0;
    auto consider = [&](double r, const SphPoint& sigma) {
        const ShellPoint p(r, sigma);
        const double err = std::abs(f(p) - approx(p));
        if (err > best.value) {
            best.value = err;
            best.argmax = p;
        }
    };
    if (grid.mode == EvalGrid::Mode::tensor) {
        for (const SphPoint& sigma : grid.angular)
            for (double r : grid.radial) consider(r, sigma);
    } else {
        for (std::size_t i = 0; i < grid.radial.size(); ++i)
            consider(grid.radial[i], grid.angular[i]);
    }
    if (best.value < 0.0) best.value = 0.0;
    return best;
}

namespace {

template <class Approx>
ShellFunction make_cached(Approx approx) {
    struct State {
        Approx approx;
        std::optional<SphPoint> sigma;
        std::vector<double> profile;
        explicit State(Approx a) : approx(std::move(a)) {}
    };
    auto state = std::make_shared<State>(std::move(approx));
    return [state](const ShellPoint& p) {
        if (!state->sigma || state->sigma->theta != p.sigma.theta ||
            state->sigma->phi != p.sigma.phi) {
            state->profile = state->approx.angular_profile(p.sigma);
            state->sigma = p.sigma;
        }
        return state->approx.evaluate_with_profile(state->profile, p.r);
    };
}

} // namespace

ShellFunction cached_evaluator(ShellApproximant approx) {
    return make_cached(std::move(approx));
}

ShellFunction cached_evaluator(BaselineApproximant approx) {
    return make_cached(std::move(approx));
}

double log_log_slope(const std::vector<double>& degrees,
                     const std::vector<double>& errors) {
    if (degrees.size() != errors.size() || degrees.size() < 2)
        return std::numeric_limits<double>::quiet_NaN();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(degrees.size());
    for (std::size_t i = 0; i < degrees.size(); ++i) {
        const double x = std::log10(degrees[i]);
        const double y = std::log10(std::max(errors[i], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return (n * sxy - sx * sy) / denom;
}

StudyConfig StudyConfig::from_json(std::istream& in) {
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("study config parse error: ") + e.what());
    }
    static const std::vector<std::string> known = {
        "function", "K_schedule", "L_schedule", "filter", "filter_rad",
        "filter_ang", "alpha", "beta", "r_in", "r_out",
        "a", "b", "designs", "grid", "output"};
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw std::invalid_argument("study config: unknown key '" + it.key() + "'");
    }
    StudyConfig cfg;
    try {
        cfg.function = doc.value("function", cfg.function);
        if (doc.contains("K_schedule"))
            cfg.k_schedule = doc.at("K_schedule").get<std::vector<int>>();
        if (doc.contains("L_schedule"))
            cfg.l_schedule = doc.at("L_schedule").get<std::vector<int>>();
        if (doc.contains("filter")) {
            cfg.filter_rad = doc.at("filter").get<std::string>();
            cfg.filter_ang = cfg.filter_rad;
        }
        cfg.filter_rad = doc.value("filter_rad", cfg.filter_rad);
        cfg.filter_ang = doc.value("filter_ang", cfg.filter_ang);
        cfg.alpha = doc.value("alpha", cfg.alpha);
        cfg.beta = doc.value("beta", cfg.beta);
        cfg.r_in = doc.value("r_in", cfg.r_in);
        cfg.r_out = doc.value("r_out", cfg.r_out);
        cfg.a = doc.value("a", cfg.a);
        cfg.b = doc.value("b", cfg.b);
        cfg.designs = doc.value("designs", cfg.designs);
        cfg.output = doc.value("output", cfg.output);
        if (doc.contains("grid")) {
            const auto& g = doc.at("grid");
            static const std::vector<std::string> grid_known = {
                "radial_points", "theta_points", "phi_points", "random_points", "seed"};
            for (auto it = g.begin(); it != g.end(); ++it) {
                if (std::find(grid_known.begin(), grid_known.end(), it.key()) ==
                    grid_known.end())
                    throw std::invalid_argument("study config: unknown grid key '" +
                                                it.key() + "'");
            }
            cfg.grid.radial_points = g.value("radial_points", cfg.grid.radial_points);
            cfg.grid.theta_points = g.value("theta_points", cfg.grid.theta_points);
            cfg.grid.phi_points = g.value("phi_points", cfg.grid.phi_points);
            cfg.grid.random_points = g.value("random_points", cfg.grid.random_points);
            cfg.grid.seed = g.value("seed", cfg.grid.seed);
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("study config: bad value: ") + e.what());
    }
    return cfg;
}

StudyConfig StudyConfig::from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open study config: " + path.string());
    return from_json(in);
}

StudyResult convergence_study(const StudyConfig& cfg) {
    if (cfg.k_schedule.empty() || cfg.l_schedule.empty())
        throw std::invalid_argument("convergence_study: empty schedule");
    if (cfg.k_schedule.size() > 1 && cfg.l_schedule.size() > 1)
        throw std::invalid_argument(
            "convergence_study: only one of K_schedule, L_schedule may vary");
    for (int k : cfg.k_schedule)
        if (k < 1) throw std::invalid_argument("convergence_study: K must be >= 1");
    for (int l : cfg.l_schedule)
        if (l < 1) throw std::invalid_argument("convergence_study: L must be >= 1");

    const ShellFunction f = test_function(cfg.function);
    // The built-in functions are defined on the shell [1, 1.001].
    if (cfg.r_in != 1.0 || cfg.r_out != 1.001)
        throw precondition_error("convergence_study: " + cfg.function +
                                 " is defined on the shell [1, 1.001]");

    const JacobiBasis basis(cfg.alpha, cfg.beta, cfg.r_in, cfg.r_out);
    const FilterPair filter = FilterPair::make(cfg.filter_rad, cfg.a, cfg.filter_ang, cfg.b);
    std::optional<DesignLibrary> designs;
    if (!cfg.designs.empty()) designs.emplace(cfg.designs);

    const EvalGrid lattice = tensor_grid(basis, cfg.grid.radial_points,
                                         cfg.grid.theta_points, cfg.grid.phi_points);
    std::optional<EvalGrid> random_points;
    if (cfg.grid.random_points > 0)
        random_points = random_shell_points(basis, cfg.grid.random_points, cfg.grid.seed);

    StudyResult result;
    result.vary = cfg.l_schedule.size() > 1 ? 'L' : 'K';
    const std::size_t n_entries =
        std::max(cfg.k_schedule.size(), cfg.l_schedule.size());

    std::ofstream csv;
    if (!cfg.output.empty()) {
        csv.open(cfg.output);
        if (!csv)
            throw precondition_error("cannot open study output: " + cfg.output);
        csv << "# shellfh convergence study\n";
        csv << "# function=" << cfg.function << " vary=" << result.vary
            << " filter=" << cfg.filter_rad << "/" << cfg.filter_ang
            << " alpha=" << fmt(cfg.alpha) << " beta=" << fmt(cfg.beta)
            << " r_in=" << fmt(cfg.r_in) << " r_out=" << fmt(cfg.r_out)
            << " a=" << fmt(cfg.a) << " b=" << fmt(cfg.b) << "\n";
        csv << "# grid: radial=" << cfg.grid.radial_points
            << " theta=" << cfg.grid.theta_points << " phi=" << cfg.grid.phi_points
            << " random=" << cfg.grid.random_points << " seed=" << cfg.grid.seed
            << "\n";
        csv << "degree,n_radial_nodes,n_angular_nodes,sup_error_filtered,"
               "sup_error_baseline,fit_seconds\n";
        csv.flush();
    }

    for (std::size_t i = 0; i < n_entries; ++i) {
        const int K = cfg.k_schedule[std::min(i, cfg.k_schedule.size() - 1)];
        const int L = cfg.l_schedule[std::min(i, cfg.l_schedule.size() - 1)];
        const DegreeCaps caps = DegreeCaps::make(K, L, cfg.a, cfg.b);
        const RadialRule radial = radial_rule_for(basis, caps);
        const SphericalRule angular =
            angular_rule_for(caps, designs ? &*designs : nullptr);

        const auto t0 = std::chrono::steady_clock::now();
        ShellApproximant approx = fit(f, caps, basis, filter, radial, angular);
        BaselineApproximant base = baseline_nonfiltered(f, K, L, basis, angular);
        const auto t1 = std::chrono::steady_clock::now();

        const ShellFunction fast = cached_evaluator(std::move(approx));
        const ShellFunction fast_base = cached_evaluator(std::move(base));
        double err_f = sup_error(f, fast, lattice).value;
        double err_b = sup_error(f, fast_base, lattice).value;
        if (random_points) {
            err_f = std::max(err_f, sup_error(f, fast, *random_points).value);
            err_b = std::max(err_b, sup_error(f, fast_base, *random_points).value);
        }

        StudyRow row;
        row.degree = result.vary == 'L' ? L : K;
        row.n_radial_nodes = radial.size();
        row.n_angular_nodes = angular.size();
        row.sup_error_filtered = err_f;
        row.sup_error_baseline = err_b;
        row.fit_seconds = std::chrono::duration<double>(t1 - t0).count();
        result.rows.push_back(row);

        if (csv.is_open()) {
            char secs[32];
            std::snprintf(secs, sizeof(secs), "%.3f", row.fit_seconds);
            csv << row.degree << "," << row.n_radial_nodes << ","
                << row.n_angular_nodes << "," << fmt(row.sup_error_filtered) << ","
                << fmt(row.sup_error_baseline) << "," << secs << "\n";
            csv.flush();
        }
    }

    // Slope over the tail: the first entry is treated as pre-asymptotic.
    std::vector<double> deg, ef, eb;
    for (std::size_t i = 1; i < result.rows.size(); ++i) {
        deg.push_back(result.rows[i].degree);
        ef.push_back(result.rows[i].sup_error_filtered);
        eb.push_back(result.rows[i].sup_error_baseline);
    }
    auto tail_slope = [&deg](const std::vector<double>& errs) {
        bool rounding_level = true;
        for (double e : errs) rounding_level = rounding_level && e < 1e-12;
        if (rounding_level) return std::numeric_limits<double>::quiet_NaN();
        return log_log_slope(deg, errs);
    };
    result.slope_filtered = tail_slope(ef);
    result.slope_baseline = tail_slope(eb);

    if (csv.is_open()) {
        csv << "# slope_filtered=" << fmt(result.slope_filtered)
            << " slope_baseline=" << fmt(result.slope_baseline)
            << " (least squares over entries after the first)\n";
        csv.flush();
    }
    return result;
}

LayerField layer_field(const ShellFunction& f, const ShellFunction& approx,
                       double r, int n_theta, int n_phi) {
    if (n_theta < 2 || n_phi < 1)
        throw std::invalid_argument("layer_field: degenerate resolution");
    LayerField field;
    field.r = r;
    field.thetas.resize(static_cast<std::size_t>(n_theta));
    field.phis.resize(static_cast<std::size_t>(n_phi));
    for (int i = 0; i < n_theta; ++i)
        field.thetas[static_cast<std::size_t>(i)] = i * std::numbers::pi / (n_theta - 1);
    for (int j = 0; j < n_phi; ++j)
        field.phis[static_cast<std::size_t>(j)] = kTwoPi * j / n_phi;
    field.values.reserve(static_cast<std::size_t>(n_theta) * n_phi);
    for (int i = 0; i < n_theta; ++i) {
        for (int j = 0; j < n_phi; ++j) {
            const ShellPoint p(r, SphPoint(field.thetas[static_cast<std::size_t>(i)],
                                           field.phis[static_cast<std::size_t>(j)]));
            field.values.push_back(std::abs(f(p) - approx(p)));
        }
    }
    return field;
}

void write_layer_field(const LayerField& field, const std::string& prefix) {
    auto write_vector = [](const std::string& path, const std::vector<double>& v) {
        std::ofstream out(path);
        if (!out) throw precondition_error("cannot open output file: " + path);
        for (double x : v) out << fmt(x) << "\n";
    };
    write_vector(prefix + "_theta.txt", field.thetas);
    write_vector(prefix + "_phi.txt", field.phis);

    std::ofstream out(prefix + "_error.txt");
    if (!out) throw precondition_error("cannot open output file: " + prefix + "_error.txt");
    const std::size_t n_phi = field.phis.size();
    for (std::size_t i = 0; i < field.thetas.size(); ++i) {
        for (std::size_t j = 0; j < n_phi; ++j)
            out << fmt(field.values[i * n_phi + j]) << (j + 1 < n_phi ? " " : "");
        out << "\n";
    }
}

RadialLine radial_line(const ShellFunction& f, const ShellFunction& approx,
                       const SphPoint& sigma, int n, const JacobiBasis& basis) {
    if (n < 2) throw std::invalid_argument("radial_line: need at least 2 samples");
    RadialLine line;
    line.sigma = sigma;
    line.radii.resize(static_cast<std::size_t>(n));
    line.values.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double r = basis.r_in() +
                         (basis.r_out() - basis.r_in()) * i / (n - 1);
        const ShellPoint p(r, sigma);
        line.radii[static_cast<std::size_t>(i)] = r;
        line.values[static_cast<std::size_t>(i)] = std::abs(f(p) - approx(p));
    }
    return line;
}

void write_radial_line(const RadialLine& line, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw precondition_error("cannot open output file: " + path);
    out << "# theta=" << fmt(line.sigma.theta) << " phi=" << fmt(line.sigma.phi) << "\n";
    out << "# r abs_error\n";
    for (std::size_t i = 0; i < line.radii.size(); ++i)
        out << fmt(line.radii[i]) << " " << fmt(line.values[i]) << "\n";
}

} // namespace shellfh
