#include "shellfh/harness.hpp"

#include "shellfh/errors.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace shellfh;

namespace {
const JacobiBasis cheb(-0.5, -0.5, 1.0, 1.001);

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}
} // namespace

TEST_CASE("f1 point values") {
    CHECK(f1(ShellPoint(1.0005, SphPoint(0.3, 0.2))) == 0.0);
    CHECK(f1(ShellPoint(1.0, SphPoint(0.0, 0.0))) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f1(ShellPoint(1.0, SphPoint(std::numbers::pi / 2.0, 0.0))) ==
          doctest::Approx(0.0).epsilon(1e-30));
}

TEST_CASE("f2 point values") {
    CHECK(f2(ShellPoint(1.0, SphPoint(0.3, 0.2))) == 0.0);
    CHECK(f2(ShellPoint(1.001, SphPoint(0.0, 0.0))) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f2(ShellPoint(1.001, SphPoint(std::numbers::pi / 2.0, 0.0))) ==
          doctest::Approx(0.0).epsilon(1e-30));
}

TEST_CASE("f3: cone support and centre value") {
    const SphPoint centre = SphPoint::from_unit_vector(
        {-0.5, -0.5, std::numbers::sqrt2 / 2.0});

    // At r = 1.0005 the radial factor kills the cone; Franke remains.
    const ShellPoint on_mid(1.0005, centre);
    const ShellPoint off_cap(1.0, SphPoint::from_unit_vector({0.5, 0.5, std::numbers::sqrt2 / 2.0}));
    const ShellPoint at_centre(1.0, centre);

    // Franke alone, computed here from the displayed form.
    auto franke_only = [](const ShellPoint& p) {
        const auto x = p.cartesian();
        return 0.75 * std::exp(-((9 * x[0] - 2) * (9 * x[0] - 2) +
                                 (9 * x[1] - 2) * (9 * x[1] - 2) +
                                 (9 * x[2] - 2) * (9 * x[2] - 2)) / 4.0) +
               0.75 * std::exp(-(9 * x[0] + 1) * (9 * x[0] + 1) / 49.0 -
                               (9 * x[1] + 1 + 9 * x[2] + 1) / 10.0) +
               0.5 * std::exp(-((9 * x[0] - 7) * (9 * x[0] - 7) +
                                (9 * x[1] - 3) * (9 * x[1] - 3) +
                                (9 * x[2] - 5) * (9 * x[2] - 5)) / 4.0) -
               0.2 * std::exp(-(9 * x[0] - 4) * (9 * x[0] - 4) -
                              (9 * x[1] - 7) * (9 * x[1] - 7) -
                              (9 * x[2] - 5) * (9 * x[2] - 5));
    };

    CHECK(f3(on_mid) == doctest::Approx(franke_only(on_mid)).epsilon(1e-12));
    CHECK(f3(off_cap) == doctest::Approx(franke_only(off_cap)).epsilon(1e-12));
    // Cone at its centre on the inner sphere: 1000 * 0.0005 * 1 = 0.5.
    CHECK(f3(at_centre) - franke_only(at_centre) ==
          doctest::Approx(0.5).epsilon(1e-9));

    CHECK_THROWS_AS((void)test_function("f4"), std::invalid_argument);
}

TEST_CASE("sup_error trivial contracts") {
    const EvalGrid grid = tensor_grid(cheb, 5, 7, 8);
    const ShellFunction f = f3;
    CHECK(sup_error(f, f, grid).value == 0.0);

    const ShellFunction shifted = [](const ShellPoint& p) { return f3(p) + 0.5; };
    const SupResult r = sup_error(f, shifted, grid);
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("random shell points are reproducible and on the shell") {
    const EvalGrid a = random_shell_points(cheb, 500, 424242);
    const EvalGrid b = random_shell_points(cheb, 500, 424242);
    REQUIRE(a.radial.size() == 500);
    CHECK(a.point_count() == 500);
    for (std::size_t i = 0; i < a.radial.size(); ++i) {
        CHECK(a.radial[i] == b.radial[i]);
        CHECK(a.angular[i].theta == b.angular[i].theta);
        CHECK(a.angular[i].phi == b.angular[i].phi);
        CHECK(a.radial[i] >= 1.0);
        CHECK(a.radial[i] <= 1.001);
    }
    const EvalGrid c = random_shell_points(cheb, 500, 7);
    bool any_different = false;
    for (std::size_t i = 0; i < c.radial.size(); ++i)
        any_different = any_different || c.radial[i] != a.radial[i];
    CHECK(any_different);
}

TEST_CASE("cached evaluator equals direct evaluation") {
    const DegreeCaps caps = DegreeCaps::make(3, 3, 2.0, 2.0);
    const FilterPair filter = FilterPair::make("exp", 2.0, "exp", 2.0);
    const auto approx = fit(f3, caps, cheb, filter, radial_rule_for(cheb, caps),
                            angular_rule_for(caps));
    const ShellFunction fast = cached_evaluator(approx);
    oracles::Rng rng(9);
    for (int i = 0; i < 25; ++i) {
        const ShellPoint p(rng.uniform(1.0, 1.001),
                           SphPoint(rng.uniform(0.0, std::numbers::pi),
                                    rng.uniform(0.0, 2.0 * std::numbers::pi)));
        CHECK(fast(p) == approx.evaluate(p));
    }
}

TEST_CASE("convergence study on a constant sits at rounding level") {
    StudyConfig cfg;
    cfg.function = "f1";
    cfg.k_schedule = {2, 4};
    cfg.l_schedule = {2};
    cfg.grid = GridSpec{5, 7, 8, 50, 424242};
    // f1 is not constant; use a tiny schedule but verify the plumbing on a
    // constant via the harness invariants below instead.
    const StudyResult r = convergence_study(cfg);
    REQUIRE(r.rows.size() == 2);
    CHECK(r.vary == 'K');
    CHECK(r.rows[0].degree == 2);
    CHECK(r.rows[1].degree == 4);
    CHECK(r.rows[0].n_radial_nodes == 3);
    CHECK(r.rows[1].sup_error_filtered <= r.rows[0].sup_error_filtered);
}

TEST_CASE("errors at rounding level report a not-applicable slope") {
    // At K = 64 the radial factor of f1 is resolved to ~1e-13, below the
    // 1e-12 rounding-level threshold for both schemes.
    StudyConfig cfg;
    cfg.function = "f1";
    cfg.k_schedule = {64, 64};
    cfg.l_schedule = {4};
    cfg.grid = GridSpec{9, 13, 14, 100, 424242};
    const StudyResult result = convergence_study(cfg);
    REQUIRE(result.rows.size() == 2);
    CHECK(result.rows[1].sup_error_filtered < 1e-12);
    CHECK(std::isnan(result.slope_filtered));
    CHECK(std::isnan(result.slope_baseline));
}

TEST_CASE("study rows match a direct fit + sup_error on the same grids") {
    StudyConfig cfg;
    cfg.function = "f1";
    cfg.k_schedule = {16};
    cfg.l_schedule = {4};
    cfg.grid = GridSpec{9, 13, 14, 200, 424242};
    const StudyResult result = convergence_study(cfg);
    REQUIRE(result.rows.size() == 1);
    CHECK(result.rows[0].sup_error_filtered > 0.0);

    const DegreeCaps caps = DegreeCaps::make(16, 4, 2.0, 2.0);
    const FilterPair filter = FilterPair::make("exp", 2.0, "exp", 2.0);
    const auto approx = fit(f1, caps, cheb, filter, radial_rule_for(cheb, caps),
                            angular_rule_for(caps));
    const EvalGrid lattice = tensor_grid(cheb, 9, 13, 14);
    const EvalGrid scattered = random_shell_points(cheb, 200, 424242);
    const double direct =
        std::max(sup_error(f1, cached_evaluator(approx), lattice).value,
                 sup_error(f1, cached_evaluator(approx), scattered).value);
    CHECK(result.rows[0].sup_error_filtered == direct);
}

TEST_CASE("study CSV output is deterministic apart from timing") {
    const auto dir = std::filesystem::temp_directory_path() / "shellfh_test_study";
    std::filesystem::create_directories(dir);
    StudyConfig cfg;
    cfg.function = "f2";
    cfg.k_schedule = {2};
    cfg.l_schedule = {2, 4};
    cfg.grid = GridSpec{5, 9, 10, 100, 424242};

    auto run = [&](const std::string& name) {
        cfg.output = (dir / name).string();
        const StudyResult r = convergence_study(cfg);
        CHECK(r.vary == 'L');
        return slurp(cfg.output);
    };
    auto strip_timing = [](std::string text) {
        // drop the last comma-separated field of each data row
        std::istringstream in(text);
        std::ostringstream out;
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line[0] != '#' &&
                line.find(',') != std::string::npos &&
                line.find("degree") == std::string::npos)
                line.erase(line.rfind(','));
            out << line << "\n";
        }
        return out.str();
    };
    const std::string first = strip_timing(run("study1.csv"));
    const std::string second = strip_timing(run("study2.csv"));
    CHECK(first == second);
    CHECK(first.find("degree,n_radial_nodes,n_angular_nodes,sup_error_filtered,"
                     "sup_error_baseline,fit_seconds") != std::string::npos);
    CHECK(first.find("slope_filtered=") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("study config parsing") {
    std::istringstream in(R"({
        "function": "f2",
        "K_schedule": [2],
        "L_schedule": [4, 8],
        "filter": "exp",
        "grid": {"radial_points": 9, "random_points": 100, "seed": 7},
        "output": ""
    })");
    const StudyConfig cfg = StudyConfig::from_json(in);
    CHECK(cfg.function == "f2");
    CHECK(cfg.l_schedule.size() == 2);
    CHECK(cfg.grid.radial_points == 9);
    CHECK(cfg.grid.seed == 7);
    CHECK(cfg.grid.theta_points == 61);

    std::istringstream bad(R"({"functoin": "f2"})");
    CHECK_THROWS_AS((void)StudyConfig::from_json(bad), std::invalid_argument);

    std::istringstream both(R"({"K_schedule": [1,2], "L_schedule": [1,2]})");
    const StudyConfig cfg_both = StudyConfig::from_json(both);
    CHECK_THROWS_AS((void)convergence_study(cfg_both), std::invalid_argument);
}

TEST_CASE("slope helper") {
    // exact power law error = deg^-3
    const std::vector<double> deg{2, 4, 8, 16};
    std::vector<double> err;
    for (double d : deg) err.push_back(std::pow(d, -3.0));
    CHECK(log_log_slope(deg, err) == doctest::Approx(-3.0).epsilon(1e-12));
    CHECK(std::isnan(log_log_slope({2.0}, {1.0})));
}

TEST_CASE("layer field shape and exact-approximation case") {
    const ShellFunction f = f3;
    const LayerField zero = layer_field(f, f, 1.0, 2, 2);
    REQUIRE(zero.values.size() == 4);
    for (double v : zero.values) CHECK(v == 0.0);
    CHECK(zero.thetas.front() == 0.0);
    CHECK(zero.thetas.back() == doctest::Approx(std::numbers::pi));

    const auto dir = std::filesystem::temp_directory_path() / "shellfh_test_field";
    std::filesystem::create_directories(dir);
    const ShellFunction off = [](const ShellPoint& p) { return f3(p) + 1.0; };
    const LayerField field = layer_field(f, off, 1.0005, 3, 4);
    write_layer_field(field, (dir / "probe").string());
    const std::string matrix = slurp(dir / "probe_error.txt");
    int rows = 0;
    for (char ch : matrix) rows += ch == '\n';
    CHECK(rows == 3);
    CHECK(slurp(dir / "probe_theta.txt").find("1.5707963267948966") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("f3 layer at r = 1: filtered error field stays below the baseline") {
    const DegreeCaps caps = DegreeCaps::make(20, 20, 2.0, 2.0);
    const FilterPair filter = FilterPair::make("exp", 2.0, "exp", 2.0);
    const SphericalRule angular = angular_rule_for(caps);
    const auto approx = fit(f3, caps, cheb, filter, radial_rule_for(cheb, caps), angular);
    const auto base = baseline_nonfiltered(f3, 20, 20, cheb, angular);

    const LayerField filtered =
        layer_field(f3, cached_evaluator(approx), 1.0, 24, 48);
    const LayerField nonfiltered =
        layer_field(f3, cached_evaluator(base), 1.0, 24, 48);
    const double max_f = *std::max_element(filtered.values.begin(), filtered.values.end());
    const double max_b =
        *std::max_element(nonfiltered.values.begin(), nonfiltered.values.end());
    CHECK(max_f <= max_b);
}

TEST_CASE("radial line shape") {
    const SphPoint sigma = SphPoint::from_unit_vector(
        {-0.5, -0.5, std::numbers::sqrt2 / 2.0});
    const ShellFunction f = f3;
    const RadialLine line = radial_line(f, f, sigma, 9, cheb);
    REQUIRE(line.radii.size() == 9);
    CHECK(line.radii.front() == 1.0);
    CHECK(line.radii.back() == 1.001);
    for (double v : line.values) CHECK(v == 0.0);
}
