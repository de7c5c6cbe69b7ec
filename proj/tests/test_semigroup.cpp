#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "besovq/meyer.hpp"
#include "besovq/random.hpp"
#include "besovq/semigroup.hpp"

using namespace besovq;

TEST_CASE("multiplier acts per mode") {
    const Grid g{2, 32, 2};
    SpectralField f(g, 1);
    const std::size_t lin = g.ravel({1, 0, 0});
    f.at(0, lin) = 1.0;
    for (double beta : {0.6, 1.0, 1.25})
        for (double t : {0.01, 1.0}) {
            const SpectralField out = apply_semigroup(f, beta, t);
            const double xi = 2.0 * kPi / 4.0;
            const double expect = std::exp(-t * std::pow(xi, 2.0 * beta));
            CHECK(std::abs(out.at(0, lin) - expect) <= 1e-15 * expect);
        }
    CHECK((apply_semigroup(f, 1.0, 0.0) - f).max_coefficient() == 0.0);
    CHECK_THROWS_AS(apply_semigroup(f, 1.0, -1.0), Error);
    SpectralField c(g, 1);
    c.at(0, 0) = 2.5;
    CHECK(apply_semigroup(c, 0.8, 3.0).at(0, 0) == cplx(2.5));
}

TEST_CASE("semigroup property and contraction") {
    const Grid g{2, 32, 2};
    Rng rng(1);
    const SpectralField f = random_band_limited(g, 2, 10, rng);
    const SpectralField a = apply_semigroup(apply_semigroup(f, 0.75, 0.3), 0.75, 0.2);
    const SpectralField b = apply_semigroup(f, 0.75, 0.5);
    CHECK((a - b).max_coefficient() <= 1e-12 * f.max_coefficient());
    double prev = f.l2_norm();
    for (double t : {0.01, 0.1, 1.0, 10.0}) {
        const double now = apply_semigroup(f, 0.75, t).l2_norm();
        CHECK(now <= prev);
        prev = now;
    }
}

TEST_CASE("coefficient evolution is near-diagonal in scale") {
    const BasisSpec spec = BasisSpec::for_grid(Grid{2, 64, 2});
    for (int j = spec.j_min; j <= spec.j_max; ++j) {
        CoefficientSet one(spec, 1);
        one.set(0, WaveletIndex{1u, j, {0, 0, 0}}, 1.0);
        CHECK((evolve_coefficients(one, 1.0, 0.0) - one).max_abs() <= 1e-12);
        for (double t : {1e-3, 0.1, 1.0}) {
            const CoefficientSet out = evolve_coefficients(one, 1.0, t);
            CHECK(scale_leakage(one, out) <= 1e-10);
        }
    }
}

TEST_CASE("two-regime decay bound") {
    const BasisSpec coarse = BasisSpec::for_grid(Grid{2, 32, 2});
    const BasisSpec fine = BasisSpec::for_grid(Grid{2, 64, 2});
    const double beta = 1.0;
    const std::vector<double> times = log_time_grid(1e-3, 20.0, 8, false);
    CoefficientSet zero(coarse, 1);
    const DecayReport z = decay_bound_check(zero, beta, times, 5);
    CHECK(z.c_upper == 0.0);
    CoefficientSet a(coarse, 1), b(fine, 1);
    a.set(0, WaveletIndex{1u, 0, {1, 1, 0}}, 1.0);
    b.set(0, WaveletIndex{1u, 0, {1, 1, 0}}, 1.0);
    const DecayReport ra = decay_bound_check(a, beta, times, 5);
    const DecayReport rb = decay_bound_check(b, beta, times, 5);
    CHECK(ra.c_tilde > 0.0);
    CHECK(!ra.partial);
    CHECK(std::isfinite(ra.c_upper));
    CHECK(ra.c_upper / rb.c_upper <= 2.0);
    CHECK(rb.c_upper / ra.c_upper <= 2.0);
    CHECK(ra.c_lower / rb.c_lower <= 2.0);
    CHECK(rb.c_lower / ra.c_lower <= 2.0);
    // a heavier spatial weight can only raise the constant
    double prev = 0.0;
    for (int N : {5, 6, 7, 8}) {
        const DecayReport r = decay_bound_check(a, beta, times, N);
        CHECK(r.c_upper >= prev * (1 - 1e-12));
        prev = r.c_upper;
    }
    CHECK_THROWS_AS(decay_bound_check(a, beta, times, 4), Error);
}

TEST_CASE("time grids") {
    const auto t = log_time_grid(0.25, 4.0, 4, true);
    CHECK(t.front() == 0.0);
    CHECK(t[1] == 0.25);
    CHECK(t.back() == doctest::Approx(4.0));
    CHECK(t.size() == 18);
    const BasisSpec spec = BasisSpec::for_grid(Grid{2, 64, 2});
    const auto tt = tent_time_grid(spec, 0.6, 1e-3, 10.0, 4);
    for (int j = spec.j_min; j <= spec.j_max; ++j) {
        const double b = std::exp2(-1.2 * j);
        bool hit = false;
        for (double v : tt) hit = hit || std::abs(v - b) <= 1e-12 * b;
        CHECK(hit);
    }
}
