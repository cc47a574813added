#include "shellfh/approximant.hpp"

#include "shellfh/errors.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

using namespace shellfh;

namespace {

const JacobiBasis cheb(-0.5, -0.5, 1.0, 1.001);
const FilterPair exp_pair = FilterPair::make("exp", 2.0, "exp", 2.0);

ShellPoint random_point(oracles::Rng& rng) {
    return ShellPoint(rng.uniform(1.0, 1.001),
                      SphPoint(rng.uniform(0.0, std::numbers::pi),
                               rng.uniform(0.0, 2.0 * std::numbers::pi)));
}

ShellFunction basis_product(int k, int ell, int m) {
    return [k, ell, m](const ShellPoint& p) {
        return cheb.radial_basis_eval(k, p.r) *
               sph_harm_real(HarmonicIndex(ell, m), p.sigma);
    };
}

ShellApproximant fit_default(const ShellFunction& f, int K, int L) {
    const DegreeCaps caps = DegreeCaps::make(K, L, 2.0, 2.0);
    return fit(f, caps, cheb, exp_pair, radial_rule_for(cheb, caps),
               angular_rule_for(caps));
}

} // namespace

TEST_CASE("fitting a constant isolates c_000") {
    const auto approx = fit_default([](const ShellPoint&) { return 1.0; }, 2, 2);
    const double expected = std::sqrt(4.0 * std::numbers::pi); // sqrt(4pi) Sum_w / gamma_0^2
    CHECK(approx.coeff(0, 0, 0) == doctest::Approx(expected).epsilon(1e-12));
    const auto& caps = approx.caps();
    for (int k = 0; k <= caps.Kbar; ++k)
        for (int l = 0; l <= caps.Lbar; ++l)
            for (int m = -l; m <= l; ++m)
                if (k != 0 || l != 0)
                    CHECK(std::abs(approx.coeff(k, l, m)) < 1e-10);

    oracles::Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        const ShellPoint p = random_point(rng);
        CHECK(approx.evaluate(p) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("a basis product maps to a single unit coefficient") {
    const auto approx = fit_default(basis_product(2, 3, 1), 2, 3);
    const auto& caps = approx.caps();
    for (int k = 0; k <= caps.Kbar; ++k)
        for (int l = 0; l <= caps.Lbar; ++l)
            for (int m = -l; m <= l; ++m) {
                const double expected = (k == 2 && l == 3 && m == 1) ? 1.0 : 0.0;
                CHECK(std::abs(approx.coeff(k, l, m) - expected) < 1e-10);
            }
}

TEST_CASE("radial degrees beyond the window alias to zero under an oversized rule") {
    // With K = 2 (Kbar = 3) and an 8-point rule (precision 15), J_k for
    // k in (Kbar, precision - Kbar] is discretely orthogonal to every
    // retained J_k'.
    const DegreeCaps caps = DegreeCaps::make(2, 2, 2.0, 2.0);
    const RadialRule big_rule = gauss_jacobi_rule(cheb, 8);
    const SphericalRule ang = angular_rule_for(caps);
    for (int k : {4, 8, 12}) {
        const auto approx = fit(
            [k](const ShellPoint& p) {
                return cheb.radial_basis_eval(k, p.r) *
                       sph_harm_real(HarmonicIndex(1, 0), p.sigma);
            },
            caps, cheb, exp_pair, big_rule, ang);
        for (int kk = 0; kk <= caps.Kbar; ++kk)
            for (int l = 0; l <= caps.Lbar; ++l)
                for (int m = -l; m <= l; ++m)
                    CHECK(std::abs(approx.coeff(kk, l, m)) < 1e-10);
    }
}

TEST_CASE("polynomial reproduction inside the plateau") {
    oracles::Rng rng(31);
    const int K = 3, L = 3;
    for (int k = 0; k <= K; ++k) {
        for (int l = 0; l <= L; ++l) {
            const int m = (l == 0) ? 0 : -(l - 1);
            const ShellFunction f = basis_product(k, l, m);
            const auto approx = fit_default(f, K, L);
            for (int i = 0; i < 50; ++i) {
                const ShellPoint p = random_point(rng);
                CHECK(approx.evaluate(p) == doctest::Approx(f(p)).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("fit is linear in the sampled function") {
    const ShellFunction f = [](const ShellPoint& p) {
        return std::sin(40.0 * p.r) + std::cos(p.sigma.theta);
    };
    const ShellFunction g = [](const ShellPoint& p) {
        return std::exp(std::sin(p.sigma.phi)) * p.r;
    };
    const double alpha = 1.75, beta = -0.4;
    const ShellFunction combo = [&](const ShellPoint& p) {
        return alpha * f(p) + beta * g(p);
    };
    const auto af = fit_default(f, 3, 3);
    const auto ag = fit_default(g, 3, 3);
    const auto ac = fit_default(combo, 3, 3);
    for (std::size_t i = 0; i < ac.coeffs().size(); ++i)
        CHECK(std::abs(ac.coeffs()[i] -
                       (alpha * af.coeffs()[i] + beta * ag.coeffs()[i])) < 1e-12);
}

TEST_CASE("fit samples the function exactly once per node pair") {
    const DegreeCaps caps = DegreeCaps::make(3, 3, 2.0, 2.0);
    const RadialRule radial = radial_rule_for(cheb, caps);
    const SphericalRule angular = angular_rule_for(caps);
    auto calls = std::make_shared<std::size_t>(0);
    const ShellFunction counted = [calls](const ShellPoint& p) {
        ++*calls;
        return p.r;
    };
    (void)fit(counted, caps, cheb, exp_pair, radial, angular);
    CHECK(*calls == radial.size() * angular.size());
}

TEST_CASE("fit is deterministic bit for bit") {
    const ShellFunction f = [](const ShellPoint& p) {
        return std::sin(3.0 * p.sigma.theta) * std::cos(2.0 * p.sigma.phi) + p.r;
    };
    const auto a1 = fit_default(f, 4, 4);
    const auto a2 = fit_default(f, 4, 4);
    REQUIRE(a1.coeffs().size() == a2.coeffs().size());
    for (std::size_t i = 0; i < a1.coeffs().size(); ++i)
        CHECK(a1.coeffs()[i] == a2.coeffs()[i]);
}

TEST_CASE("indicator filter support zeroes coefficients exactly") {
    const FilterPair ind = FilterPair::make("indicator", 2.0, "indicator", 2.0);
    const DegreeCaps caps = DegreeCaps::make(2, 2, 2.0, 2.0);
    const ShellFunction f = [](const ShellPoint& p) {
        return std::exp(p.r - 1.0) * (1.0 + std::cos(p.sigma.theta));
    };
    const auto approx = fit(f, caps, cheb, ind, radial_rule_for(cheb, caps),
                            angular_rule_for(caps));
    // h(k/K) = 0 for k > K, h(l/L) = 0 for l > L: those slots must be 0.0.
    for (int k = 0; k <= caps.Kbar; ++k)
        for (int l = 0; l <= caps.Lbar; ++l)
            for (int m = -l; m <= l; ++m)
                if (k > caps.K || l > caps.L) CHECK(approx.coeff(k, l, m) == 0.0);
}

TEST_CASE("underpowered or mismatched rules are hard errors") {
    const DegreeCaps caps = DegreeCaps::make(4, 4, 2.0, 2.0);
    const ShellFunction one = [](const ShellPoint&) { return 1.0; };
    const RadialRule weak_rad = gauss_jacobi_rule(cheb, 3);
    const SphericalRule good_ang = angular_rule_for(caps);
    CHECK_THROWS_AS((void)fit(one, caps, cheb, exp_pair, weak_rad, good_ang),
                    precondition_error);
    const RadialRule good_rad = radial_rule_for(cheb, caps);
    const SphericalRule weak_ang = product_rule(5);
    CHECK_THROWS_AS((void)fit(one, caps, cheb, exp_pair, good_rad, weak_ang),
                    precondition_error);
    const FilterPair other = FilterPair::make("indicator", 1.5, "indicator", 1.5);
    CHECK_THROWS_AS((void)fit(one, caps, cheb, other, good_rad, good_ang),
                    std::invalid_argument);
}

TEST_CASE("evaluate: single-coefficient tensors and off-shell points") {
    const DegreeCaps caps = DegreeCaps::make(1, 1, 2.0, 2.0);
    std::vector<double> coeffs(2 * 4, 0.0);
    coeffs[0] = 1.0;
    const ShellApproximant single(cheb, caps, exp_pair, std::move(coeffs));
    const double expected = 1.0 / (2.0 * std::sqrt(std::numbers::pi));
    oracles::Rng rng(77);
    for (int i = 0; i < 20; ++i)
        CHECK(single.evaluate(random_point(rng)) ==
              doctest::Approx(expected).epsilon(1e-14));
    CHECK_THROWS_AS((void)single.evaluate(ShellPoint(1.2, SphPoint(0.3, 0.3))),
                    std::domain_error);
}

TEST_CASE("radial filtered operator reproduces radial polynomials") {
    const DegreeCaps caps = DegreeCaps::make(3, 1, 2.0, 2.0);
    const RadialRule rule = radial_rule_for(cheb, caps);
    oracles::Rng rng(11);

    const auto rk_j3 = radial_filtered(
        [](const ShellPoint& p) { return cheb.radial_basis_eval(3, p.r); }, caps,
        cheb, exp_pair, rule);
    const auto rk_one = radial_filtered([](const ShellPoint&) { return 1.0; }, caps,
                                        cheb, exp_pair, rule);
    const auto rk_y52 = radial_filtered(
        [](const ShellPoint& p) { return sph_harm_real(HarmonicIndex(5, 2), p.sigma); },
        caps, cheb, exp_pair, rule);
    for (int i = 0; i < 30; ++i) {
        const ShellPoint p = random_point(rng);
        CHECK(rk_j3(p) == doctest::Approx(cheb.radial_basis_eval(3, p.r)).epsilon(1e-10));
        CHECK(rk_one(p) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(rk_y52(p) ==
              doctest::Approx(sph_harm_real(HarmonicIndex(5, 2), p.sigma)).epsilon(1e-10));
    }
}

TEST_CASE("angular filtered operator reproduces low degrees, kills high ones") {
    const DegreeCaps caps = DegreeCaps::make(1, 2, 2.0, 2.0);
    const SphericalRule rule = product_rule(12); // enough for l = 9 checks below
    oracles::Rng rng(13);

    const auto al_y = angular_filtered(
        [](const ShellPoint& p) { return sph_harm_real(HarmonicIndex(2, -1), p.sigma); },
        caps, exp_pair, rule);
    const auto al_one =
        angular_filtered([](const ShellPoint&) { return 1.0; }, caps, exp_pair, rule);
    // l = 9 > Lbar = 3 and rule precision 12 >= 9 + 3: exact annihilation.
    const auto al_high = angular_filtered(
        [](const ShellPoint& p) { return sph_harm_real(HarmonicIndex(9, 4), p.sigma); },
        caps, exp_pair, rule);
    for (int i = 0; i < 30; ++i) {
        const ShellPoint p = random_point(rng);
        CHECK(al_y(p) ==
              doctest::Approx(sph_harm_real(HarmonicIndex(2, -1), p.sigma)).epsilon(1e-9));
        CHECK(al_one(p) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(std::abs(al_high(p)) < 1e-9);
    }
}

TEST_CASE("radial and angular operators commute and equal the full fit") {
    const DegreeCaps caps = DegreeCaps::make(3, 3, 2.0, 2.0);
    const RadialRule rad = radial_rule_for(cheb, caps);
    const SphericalRule ang = angular_rule_for(caps);
    const ShellFunction f = [](const ShellPoint& p) {
        const auto x = p.cartesian();
        return std::exp(x[0]) * std::cos(2.0 * x[1]) + std::sin(500.0 * (p.r - 1.0));
    };

    const ShellFunction rk = radial_filtered(f, caps, cheb, exp_pair, rad);
    const ShellFunction al = angular_filtered(f, caps, exp_pair, ang);
    const ShellFunction al_rk = angular_filtered(rk, caps, exp_pair, ang);
    const ShellFunction rk_al = radial_filtered(al, caps, cheb, exp_pair, rad);
    const auto both = fit(f, caps, cheb, exp_pair, rad, ang);

    oracles::Rng rng(23);
    for (int i = 0; i < 50; ++i) {
        const ShellPoint p = random_point(rng);
        const double v1 = al_rk(p);
        const double v2 = rk_al(p);
        const double v3 = both.evaluate(p);
        CHECK(std::abs(v1 - v2) < 1e-10);
        CHECK(std::abs(v1 - v3) < 1e-10);
    }
}

TEST_CASE("serialisation round trip is bit-faithful") {
    const ShellFunction f = [](const ShellPoint& p) {
        const auto x = p.cartesian();
        return std::exp(-x[0] * x[0]) + 0.25 * x[1] * x[2] + std::sqrt(p.r);
    };
    const auto approx = fit_default(f, 3, 2);
    std::ostringstream out;
    approx.save(out);
    std::istringstream in(out.str());
    const auto back = ShellApproximant::load(in);
    REQUIRE(back.coeffs().size() == approx.coeffs().size());
    for (std::size_t i = 0; i < approx.coeffs().size(); ++i)
        CHECK(back.coeffs()[i] == approx.coeffs()[i]);
    CHECK(back.caps().K == approx.caps().K);
    CHECK(back.caps().Lbar == approx.caps().Lbar);
    CHECK(back.basis().alpha() == approx.basis().alpha());
    CHECK(back.filter().rad_name() == "exp");

    std::istringstream garbage("{\"format\": \"other\"}");
    CHECK_THROWS_AS((void)ShellApproximant::load(garbage), precondition_error);
}

TEST_CASE("radial kernel: symmetry and small closed forms") {
    const DegreeCaps caps1 = DegreeCaps::make(1, 1, 2.0, 2.0);
    const double mid = 1.0005;
    // J_1(mid) = 0, so G_1(mid, mid) = 1/gamma_0^2 = 1/pi.
    CHECK(radial_kernel(cheb, caps1, exp_pair, mid, mid) ==
          doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-13));

    const DegreeCaps caps = DegreeCaps::make(4, 1, 2.0, 2.0);
    oracles::Rng rng(3);
    for (int i = 0; i < 25; ++i) {
        const double s = rng.uniform(1.0, 1.001);
        const double r = rng.uniform(1.0, 1.001);
        CHECK(radial_kernel(cheb, caps, exp_pair, s, r) ==
              radial_kernel(cheb, caps, exp_pair, r, s));
    }
}

TEST_CASE("baseline reproduces bidegree polynomials and constants") {
    const int K = 3, L = 2;
    const SphericalRule ang = product_rule(2 * L);
    const ShellFunction poly = [](const ShellPoint& p) {
        const double x = cheb.map_to_reference(p.r);
        return (1.0 + 0.5 * x + x * x * x) *
               (0.3 + sph_harm_real(HarmonicIndex(2, 1), p.sigma));
    };
    const BaselineApproximant base = baseline_nonfiltered(poly, K, L, cheb, ang);
    const BaselineApproximant one = baseline_nonfiltered(
        [](const ShellPoint&) { return 1.0; }, K, L, cheb, ang);
    oracles::Rng rng(41);
    for (int i = 0; i < 50; ++i) {
        const ShellPoint p = random_point(rng);
        CHECK(base.evaluate(p) == doctest::Approx(poly(p)).epsilon(1e-9));
        CHECK(one.evaluate(p) == doctest::Approx(1.0).epsilon(1e-10));
    }
    CHECK_THROWS_AS(
        (void)baseline_nonfiltered(poly, K, L, cheb, product_rule(2 * L - 1)),
        precondition_error);
}
