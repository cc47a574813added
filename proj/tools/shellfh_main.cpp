// Command line front end: fit approximants, evaluate them at points,
// run convergence studies, extract error fields, certify rules.

#include "shellfh/approximant.hpp"
#include "shellfh/errors.hpp"
#include "shellfh/harness.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <unordered_map>

namespace {

using namespace shellfh;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct FitOptions {
    std::string function;
    std::string samples;
    std::string emit_nodes;
    int K = 4;
    int L = 4;
    double alpha = -0.5;
    double beta = -0.5;
    double r_in = 1.0;
    double r_out = 1.001;
    double a = 2.0;
    double b = 2.0;
    std::string filter = "exp";
    std::string filter_rad;
    std::string filter_ang;
    std::string designs;
    std::string out;
};

void add_basis_options(CLI::App* cmd, FitOptions& opt) {
    cmd->add_option("--K", opt.K, "radial degree (>= 1)");
    cmd->add_option("--L", opt.L, "angular degree (>= 1)");
    cmd->add_option("--alpha", opt.alpha, "Jacobi parameter alpha (> -1)");
    cmd->add_option("--beta", opt.beta, "Jacobi parameter beta (> -1)");
    cmd->add_option("--r-in", opt.r_in, "inner radius (0 < r_in <= 1)");
    cmd->add_option("--r-out", opt.r_out, "outer radius (>= 1)");
    cmd->add_option("--a", opt.a, "radial filter cap in (1,2]");
    cmd->add_option("--b", opt.b, "angular filter cap in (1,2]");
    cmd->add_option("--filter", opt.filter, "filter for both directions: exp | indicator");
    cmd->add_option("--filter-rad", opt.filter_rad, "radial filter override");
    cmd->add_option("--filter-ang", opt.filter_ang, "angular filter override");
    cmd->add_option("--designs", opt.designs, "spherical design manifest file");
}

FilterPair make_filter(const FitOptions& opt) {
    const std::string rad = opt.filter_rad.empty() ? opt.filter : opt.filter_rad;
    const std::string ang = opt.filter_ang.empty() ? opt.filter : opt.filter_ang;
    return FilterPair::make(rad, opt.a, ang, opt.b);
}

ShellFunction reference_function(const std::string& id, double r_in, double r_out) {
    if (r_in != 1.0 || r_out != 1.001)
        throw precondition_error(id + " is defined on the shell [1, 1.001]; got [" +
                                 fmt(r_in) + ", " + fmt(r_out) + "]");
    return test_function(id);
}

// Sample-file fitting: values are looked up by node identity, so the fit
// may sample in any order.
ShellFunction sample_table_function(const RadialRule& radial,
                                    const SphericalRule& angular,
                                    const std::string& path) {
    std::ifstream in(path);
    if (!in) throw precondition_error("cannot open samples file: " + path);
    std::vector<double> values;
    double v;
    while (in >> v) values.push_back(v);
    const std::size_t expected = radial.size() * angular.size();
    if (values.size() != expected)
        throw precondition_error("samples file has " + std::to_string(values.size()) +
                                 " values, expected " + std::to_string(expected) +
                                 " (radial-major node order; see fit --emit-nodes)");

    auto key = [](double r, const SphPoint& s) {
        std::ostringstream os;
        os.precision(17);
        os << r << "|" << s.theta << "|" << s.phi;
        return os.str();
    };
    auto table = std::make_shared<std::unordered_map<std::string, double>>();
    for (std::size_t j = 0; j < radial.size(); ++j)
        for (std::size_t n = 0; n < angular.size(); ++n)
            (*table)[key(radial.nodes[j], angular.angles()[n])] =
                values[j * angular.size() + n];
    return [table, key](const ShellPoint& p) {
        const auto it = table->find(key(p.r, p.sigma));
        if (it == table->end())
            throw precondition_error("sample lookup miss: fit asked for a point "
                                     "outside the emitted node set");
        return it->second;
    };
}

int run_fit(const FitOptions& opt) {
    const JacobiBasis basis(opt.alpha, opt.beta, opt.r_in, opt.r_out);
    const DegreeCaps caps = DegreeCaps::make(opt.K, opt.L, opt.a, opt.b);
    const FilterPair filter = make_filter(opt);
    std::optional<DesignLibrary> designs;
    if (!opt.designs.empty()) designs.emplace(opt.designs);
    const RadialRule radial = radial_rule_for(basis, caps);
    const SphericalRule angular = angular_rule_for(caps, designs ? &*designs : nullptr);

    if (!opt.emit_nodes.empty()) {
        std::ofstream out(opt.emit_nodes);
        if (!out) throw precondition_error("cannot open output file: " + opt.emit_nodes);
        out << "# quadrature nodes, radial-major: r theta phi\n";
        for (std::size_t j = 0; j < radial.size(); ++j)
            for (std::size_t n = 0; n < angular.size(); ++n)
                out << fmt(radial.nodes[j]) << " " << fmt(angular.angles()[n].theta)
                    << " " << fmt(angular.angles()[n].phi) << "\n";
        std::cout << "wrote " << radial.size() * angular.size() << " nodes to "
                  << opt.emit_nodes << "\n";
        return 0;
    }

    if (opt.function.empty() == opt.samples.empty())
        throw std::invalid_argument("fit: give exactly one of --function, --samples");
    if (opt.out.empty()) throw std::invalid_argument("fit: --out is required");

    const ShellFunction f =
        opt.function.empty()
            ? sample_table_function(radial, angular, opt.samples)
            : reference_function(opt.function, opt.r_in, opt.r_out);

    const ShellApproximant approx = fit(f, caps, basis, filter, radial, angular);
    approx.save_file(opt.out);
    std::cout << "fit: K=" << opt.K << " L=" << opt.L << " (" << radial.size()
              << " radial x " << angular.size() << " angular nodes) -> " << opt.out
              << "\n";
    return 0;
}

int run_eval(const std::string& approx_path, const std::string& points_path,
             const std::string& out_path) {
    const ShellApproximant approx = ShellApproximant::load_file(approx_path);
    std::ifstream in(points_path);
    if (!in) throw precondition_error("cannot open points file: " + points_path);

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw precondition_error("cannot open output file: " + out_path);
        out = &file;
    }

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        double r, theta, phi;
        if (!(ls >> r)) continue;
        if (!(ls >> theta >> phi))
            throw precondition_error("points file line " + std::to_string(line_no) +
                                     ": expected \"r theta phi\"");
        (*out) << fmt(approx.evaluate(ShellPoint(r, SphPoint(theta, phi)))) << "\n";
    }
    return 0;
}

int run_study(const std::string& config_path) {
    const StudyConfig cfg = StudyConfig::from_json_file(config_path);
    const StudyResult result = convergence_study(cfg);
    std::cout << "degree  sup_error_filtered  sup_error_baseline\n";
    for (const auto& row : result.rows)
        std::cout << row.degree << "  " << fmt(row.sup_error_filtered) << "  "
                  << fmt(row.sup_error_baseline) << "\n";
    std::cout << "slope(" << result.vary << ", tail): filtered "
              << fmt(result.slope_filtered) << ", baseline "
              << fmt(result.slope_baseline) << "\n";
    if (!cfg.output.empty()) std::cout << "csv written to " << cfg.output << "\n";
    return 0;
}

struct FieldOptions {
    FitOptions fit;
    std::string approx_file;
    std::string method = "both";
    double layer_r = std::nan("");
    std::vector<double> line_dir;
    int n_theta = 40;
    int n_phi = 80;
    int n_line = 100;
    std::string out_prefix;
};

int run_field(const FieldOptions& opt) {
    if (opt.fit.function.empty())
        throw std::invalid_argument("field: --function is required");
    if (opt.out_prefix.empty())
        throw std::invalid_argument("field: --out-prefix is required");
    const bool layer_mode = !std::isnan(opt.layer_r);
    if (layer_mode == !opt.line_dir.empty())
        throw std::invalid_argument("field: give exactly one of --layer, --line");

    const ShellFunction f =
        reference_function(opt.fit.function, opt.fit.r_in, opt.fit.r_out);
    const JacobiBasis basis(opt.fit.alpha, opt.fit.beta, opt.fit.r_in, opt.fit.r_out);
    const DegreeCaps caps = DegreeCaps::make(opt.fit.K, opt.fit.L, opt.fit.a, opt.fit.b);
    std::optional<DesignLibrary> designs;
    if (!opt.fit.designs.empty()) designs.emplace(opt.fit.designs);
    const SphericalRule angular =
        angular_rule_for(caps, designs ? &*designs : nullptr);

    std::vector<std::pair<std::string, ShellFunction>> approximants;
    const bool want_filtered = opt.method == "filtered" || opt.method == "both";
    const bool want_baseline = opt.method == "baseline" || opt.method == "both";
    if (!want_filtered && !want_baseline)
        throw std::invalid_argument("field: --method must be filtered, baseline or both");

    if (want_filtered) {
        if (!opt.approx_file.empty()) {
            approximants.emplace_back(
                "filtered", cached_evaluator(ShellApproximant::load_file(opt.approx_file)));
        } else {
            const FilterPair filter = make_filter(opt.fit);
            const RadialRule radial = radial_rule_for(basis, caps);
            approximants.emplace_back(
                "filtered", cached_evaluator(fit(f, caps, basis, filter, radial, angular)));
        }
    }
    if (want_baseline)
        approximants.emplace_back(
            "baseline",
            cached_evaluator(baseline_nonfiltered(f, opt.fit.K, opt.fit.L, basis, angular)));

    for (const auto& [name, approx] : approximants) {
        if (layer_mode) {
            const LayerField field =
                layer_field(f, approx, opt.layer_r, opt.n_theta, opt.n_phi);
            write_layer_field(field, opt.out_prefix + "_" + name);
            std::cout << "wrote " << opt.out_prefix << "_" << name
                      << "_{theta,phi,error}.txt (r=" << fmt(opt.layer_r) << ")\n";
        } else {
            const SphPoint sigma = SphPoint::from_unit_vector(
                {opt.line_dir[0], opt.line_dir[1], opt.line_dir[2]});
            const RadialLine line = radial_line(f, approx, sigma, opt.n_line, basis);
            const std::string path = opt.out_prefix + "_line_" + name + ".txt";
            write_radial_line(line, path);
            std::cout << "wrote " << path << "\n";
        }
    }
    return 0;
}

struct CertifyOptions {
    std::string design;
    int t = -1;
    std::string manifest;
    int product_t = -1;
    int max_degree = -1;
};

int run_certify(const CertifyOptions& opt) {
    const int given = (!opt.design.empty()) + (!opt.manifest.empty()) + (opt.product_t >= 0);
    if (given != 1)
        throw std::invalid_argument(
            "certify: give exactly one of --design, --manifest, --product");

    if (!opt.manifest.empty()) {
        const DesignLibrary lib(opt.manifest);
        if (lib.entries().empty())
            throw precondition_error("manifest lists no designs");
        bool all_pass = true;
        for (const auto& entry : lib.entries()) {
            try {
                const auto rule = lib.rule_for(entry.t);
                const CertReport report = certify(*rule, entry.t);
                std::cout << "[" << (report.pass ? "PASS" : "FAIL") << "] t="
                          << entry.t << " n=" << entry.n << " " << entry.filename
                          << " worst residual " << fmt(report.worst()) << "\n";
                all_pass = all_pass && report.pass;
            } catch (const precondition_error& e) {
                std::cout << "[FAIL] t=" << entry.t << " " << entry.filename << ": "
                          << e.what() << "\n";
                all_pass = false;
            }
        }
        if (!all_pass) throw precondition_error("manifest certification failed");
        return 0;
    }

    SphericalRule rule = [&] {
        if (opt.product_t >= 0) return product_rule(opt.product_t);
        if (opt.t < 0)
            throw std::invalid_argument("certify: --design needs --t (declared precision)");
        return load_design_file(opt.design, opt.t);
    }();
    const int declared = opt.product_t >= 0 ? opt.product_t : opt.t;
    const int max_degree = opt.max_degree >= 0 ? opt.max_degree : declared;
    const CertReport report = certify(rule, max_degree);
    std::cout << report.summary();
    if (!report.pass)
        throw precondition_error("certification failed at degree " +
                                 std::to_string(report.first_failed_degree));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Filtered hyperinterpolation on spherical shells"};
    app.require_subcommand(1);

    FitOptions fit_opt;
    CLI::App* cmd_fit = app.add_subcommand("fit", "fit an approximant");
    cmd_fit->add_option("--function", fit_opt.function, "built-in function: f1 | f2 | f3");
    cmd_fit->add_option("--samples", fit_opt.samples,
                        "file of sample values at the quadrature nodes");
    cmd_fit->add_option("--emit-nodes", fit_opt.emit_nodes,
                        "write the quadrature node list and exit");
    add_basis_options(cmd_fit, fit_opt);
    cmd_fit->add_option("--out", fit_opt.out, "output approximant (JSON)");

    std::string eval_approx, eval_points, eval_out;
    CLI::App* cmd_eval = app.add_subcommand("eval", "evaluate an approximant at points");
    cmd_eval->add_option("--approx", eval_approx, "approximant file")->required();
    cmd_eval->add_option("--points", eval_points, "points file: r theta phi per line")
        ->required();
    cmd_eval->add_option("--out", eval_out, "output file (default stdout)");

    std::string study_config;
    CLI::App* cmd_study = app.add_subcommand("study", "run a convergence study");
    cmd_study->add_option("--config", study_config, "study config (JSON)")->required();

    FieldOptions field_opt;
    CLI::App* cmd_field = app.add_subcommand("field", "extract error fields");
    cmd_field->add_option("--function", field_opt.fit.function,
                          "reference function: f1 | f2 | f3");
    cmd_field->add_option("--approx", field_opt.approx_file,
                          "evaluate this approximant instead of fitting");
    add_basis_options(cmd_field, field_opt.fit);
    cmd_field->add_option("--method", field_opt.method, "filtered | baseline | both");
    cmd_field->add_option("--layer", field_opt.layer_r, "layer mode: fixed radius");
    cmd_field->add_option("--line", field_opt.line_dir, "line mode: direction x y z")
        ->expected(3);
    cmd_field->add_option("--ntheta", field_opt.n_theta, "layer rows");
    cmd_field->add_option("--nphi", field_opt.n_phi, "layer columns");
    cmd_field->add_option("--n", field_opt.n_line, "line samples");
    cmd_field->add_option("--out-prefix", field_opt.out_prefix, "output path prefix");

    CertifyOptions cert_opt;
    CLI::App* cmd_cert = app.add_subcommand("certify", "certify quadrature rules");
    cmd_cert->add_option("--design", cert_opt.design, "design point file");
    cmd_cert->add_option("--t", cert_opt.t, "declared design precision");
    cmd_cert->add_option("--manifest", cert_opt.manifest, "certify every manifest entry");
    cmd_cert->add_option("--product", cert_opt.product_t, "certify product_rule(t)");
    cmd_cert->add_option("--max-degree", cert_opt.max_degree,
                         "probe exactness up to this degree");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (cmd_fit->parsed()) return run_fit(fit_opt);
        if (cmd_eval->parsed()) return run_eval(eval_approx, eval_points, eval_out);
        if (cmd_study->parsed()) return run_study(study_config);
        if (cmd_field->parsed()) return run_field(field_opt);
        if (cmd_cert->parsed()) return run_certify(cert_opt);
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const shellfh::numerical_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const shellfh::precondition_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
