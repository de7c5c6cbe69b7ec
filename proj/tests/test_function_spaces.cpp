#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "besovq/function_spaces.hpp"
#include "besovq/meyer.hpp"
#include "besovq/random.hpp"
#include "besovq/semigroup.hpp"

using namespace besovq;

namespace {

BasisSpec spec2(int size = 64, int J = 2) { return BasisSpec::for_grid(Grid{2, size, J}); }

CoefficientSet random_set(const BasisSpec& spec, Rng& rng, int count) {
    CoefficientSet a(spec, 1);
    for (int i = 0; i < count; ++i) {
        const int j = rng.integer(spec.j_min, spec.j_max);
        const int m = spec.translations(j);
        WaveletIndex idx{static_cast<unsigned>(rng.integer(1, static_cast<int>(spec.eps_count()) - 1)), j,
                         {rng.integer(0, m - 1), rng.integer(0, m - 1), 0}};
        a.set(0, idx, rng.normal());
    }
    return a;
}

CoefficientTrajectory constant_trajectory(const CoefficientSet& a, const std::vector<double>& times) {
    CoefficientTrajectory tr;
    for (double t : times) {
        tr.times.push_back(t);
        tr.sets.push_back(a);
    }
    return tr;
}

SpaceParams params(double g1, double g2, double p, double q) {
    SpaceParams s;
    s.gamma1 = g1;
    s.gamma2 = g2;
    s.p = p;
    s.q = q;
    return s;
}

}  // namespace

TEST_CASE("besov norm closed forms") {
    const BasisSpec spec = spec2();
    const double s = 0.3, p = 3.0, q = 1.5;
    CoefficientSet a(spec, 1);
    a.set(0, WaveletIndex{1u, 1, {2, 3, 0}}, 1.0);
    const double w = std::exp2(1 * (s + 1.0 - 2.0 / p));
    CHECK(besov_norm(a, s, p, q).value == doctest::Approx(w).epsilon(1e-14));
    a.set(0, WaveletIndex{2u, 1, {0, 3, 0}}, -1.0);
    CHECK(besov_norm(a, s, p, q).value == doctest::Approx(std::pow(2.0, 1.0 / p) * w).epsilon(1e-14));
    CHECK(besov_norm(CoefficientSet(spec, 1), s, p, q).value == 0.0);
    Rng rng(11);
    const CoefficientSet r = random_set(spec, rng, 30);
    CoefficientSet low(spec, 1);
    r.for_each([&](int, const WaveletIndex& idx, cplx v) {
        if (idx.j < spec.j_max) low.set(0, idx, v);
    });
    const double ratio = besov_norm(reindex_scales(low, 1), s, p, q).value / besov_norm(low, s, p, q).value;
    CHECK(ratio == doctest::Approx(std::exp2(s + 1.0 - 2.0 / p)).epsilon(1e-12));
}

TEST_CASE("besov-q single coefficient picks the cube by the sign of gamma2/n - 1/p") {
    const BasisSpec spec = spec2();
    CoefficientSet a(spec, 1);
    const int j = 1;
    a.set(0, WaveletIndex{3u, j, {5, 2, 0}}, 1.0);
    // gamma2/n < 1/p: the prefactor grows as the cube shrinks, sup at Q_{j,k}
    SpaceParams lo = params(0.2, 0.5, 2.0, 2.0);
    NormReport r = besovq_norm(a, lo);
    CHECK(r.value == doctest::Approx(std::exp2(j * (0.2 + 1.0 - 1.0)) * std::exp2(-2 * j * (0.5 / 2 - 0.5))).epsilon(1e-14));
    REQUIRE(r.witness);
    CHECK(r.witness->j0 == j);
    CHECK(r.witness->k0[0] == 5);
    CHECK(r.witness->k0[1] == 2);
    // gamma2/n > 1/p: sup at the largest cube
    SpaceParams hi = params(0.2, 1.5, 2.0, 2.0);
    r = besovq_norm(a, hi);
    CHECK(r.witness->j0 == spec.j_min);
    CHECK(r.value == doctest::Approx(std::exp2(j * 0.2) * std::exp2(-2 * spec.j_min * (1.5 / 2 - 0.5))).epsilon(1e-14));
    CHECK(besovq_norm(CoefficientSet(spec, 1), lo).value == 0.0);
}

TEST_CASE("besov-q with gamma2 = n/p and p = q equals the besov norm") {
    const BasisSpec spec = spec2();
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const CoefficientSet a = random_set(spec, rng, 40);
        const SpaceParams prm = params(0.4, 1.0, 2.0, 2.0);
        CHECK(besovq_norm(a, prm).value == doctest::Approx(besov_norm(a, 0.4, 2.0, 2.0).value).epsilon(1e-12));
    }
}

TEST_CASE("witness, homogeneity and l^q monotonicity") {
    const BasisSpec spec = spec2();
    Rng rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        const CoefficientSet a = random_set(spec, rng, 25);
        for (auto [q1, q2] : {std::pair{1.5, 2.0}, std::pair{2.0, 4.0}}) {
            const SpaceParams pa = params(0.1, 0.7, 2.5, q1), pb = params(0.1, 0.7, 2.5, q2);
            const EmbeddingCheck e = check_embedding(a, pa, pb);
            CHECK(e.holds);
            CHECK(besov_norm(a, 0.1, 2.5, q2).value <= besov_norm(a, 0.1, 2.5, q1).value);
        }
        const SpaceParams prm = params(-0.2, 0.6, 2.0, 3.0);
        const NormReport r = besovq_norm(a, prm);
        CHECK(besovq_cube_value(a, prm, *r.witness) == doctest::Approx(r.value).epsilon(1e-12));
        CHECK(besovq_norm(3.0 * a, prm).value == doctest::Approx(3.0 * r.value).epsilon(1e-12));
    }
    CoefficientSet one(spec, 1);
    one.set(0, WaveletIndex{1u, 0, {1, 1, 0}}, 2.0);
    const EmbeddingCheck e = check_embedding(one, params(0, 0.5, 2, 2), params(0, 0.5, 2, 4));
    CHECK(e.norm_a == doctest::Approx(e.norm_b).epsilon(1e-14));
    CHECK_THROWS_AS(check_embedding(one, params(0, 0.5, 2, 2), params(0.1, 0.5, 2, 4)), Error);
}

TEST_CASE("dyadic scaling reindexes exactly") {
    const BasisSpec spec = spec2();
    SpaceParams prm = params(0.0, 0.5, 2.0, 2.0);
    prm.beta = 0.75;
    prm.make_critical();
    CHECK(prm.is_critical());
    CoefficientSet one(spec, 1);
    one.set(0, WaveletIndex{1u, 0, {1, 2, 0}}, 1.0);
    CHECK(scaling_check(one, prm, 0).ratio == 1.0);
    CHECK(scaling_check(one, prm, 1).ratio == doctest::Approx(1.0).epsilon(1e-14));
    Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        CoefficientSet a = random_set(spec, rng, 20);
        CoefficientSet low(spec, 1);
        a.for_each([&](int, const WaveletIndex& idx, cplx v) {
            if (idx.j < spec.j_max) low.set(0, idx, v);
        });
        const double r = scaling_check(low, prm, 1).ratio;
        CHECK(r >= 0.8);
        CHECK(r <= 1.25);
    }
    CoefficientSet top(spec, 1);
    top.set(0, WaveletIndex{1u, spec.j_max, {0, 0, 0}}, 1.0);
    CHECK_THROWS_AS(scaling_check(top, prm, 1), Error);
}

TEST_CASE("log-time product integration") {
    // power laws are integrated exactly
    std::vector<double> t = log_time_grid(1e-3, 4.0, 4, false);
    std::vector<double> f;
    for (double v : t) f.push_back(2.0 * std::sqrt(v));
    const double mu = 1.7, T = 0.5, A = 0.01, B = 3.0;
    const double exact = 2.0 * std::pow(T, -mu) * (std::pow(B, mu + 0.5) - std::pow(A, mu + 0.5)) / (mu + 0.5);
    CHECK(weighted_log_integral(t, f, A, B, T, mu) == doctest::Approx(exact).epsilon(1e-12));
    // sign changes fall back to linear interpolation in log t
    std::vector<double> g;
    for (double v : t) g.push_back(1.0 + std::log(v));
    auto prim = [&](double tt) {
        const double u = std::log(tt), e = std::pow(tt / T, mu);
        return e * ((1.0 + u) / mu - 1.0 / (mu * mu));
    };
    const double lin = weighted_log_integral(t, g, A, B, T, mu);
    CHECK(std::abs(lin - (prim(B) - prim(A))) <= 0.02 * std::abs(prim(B) - prim(A)));
    // constant integrand from zero: (B/T)^mu / mu
    std::vector<double> tz = log_time_grid(1e-3, 4.0, 4, true);
    std::vector<double> one(tz.size(), 1.0);
    CHECK(weighted_log_integral(tz, one, 0.0, 0.5, 0.5, 0.5) == doctest::Approx(2.0).epsilon(1e-13));
    bool clipped = false;
    weighted_log_integral(tz, one, 0.0, 10.0, 0.5, 0.5, &clipped);
    CHECK(clipped);
}

TEST_CASE("tent functionals on closed-form trajectories") {
    const BasisSpec spec = spec2();
    SpaceParams prm = params(0.0, 0.5, 2.0, 2.0);
    prm.beta = 0.75;
    prm.m = 3.0;
    prm.m_prime = 0.5;
    const int j = 1;
    CoefficientSet one(spec, 1);
    one.set(0, WaveletIndex{1u, j, {2, 1, 0}}, 1.0);
    const std::vector<double> times = log_time_grid(1e-4, 64.0, 16, true);

    const CoefficientTrajectory zero = constant_trajectory(CoefficientSet(spec, 1), times);
    CHECK(tent_norm(zero, prm).value == 0.0);

    // constant a = 1: IV integrand integrates to 1/m'
    const CoefficientTrajectory flat = constant_trajectory(one, times);
    const NormReport iv = tent_functional(TentKind::IV, flat, prm);
    const double shell = std::exp2(j * prm.q * (0.0 + 1.0 - 1.0));
    const double pref = std::exp2(-2 * j * prm.q * (0.5 / 2 - 0.5));
    CHECK(iv.value == doctest::Approx(pref * shell * std::pow(1.0 / prm.m_prime, prm.q / prm.p)).epsilon(1e-12));
    CHECK(iv.witness->j0 == j);
    CHECK(tent_cube_value(TentKind::IV, flat, prm, *iv.witness) == doctest::Approx(iv.value).epsilon(1e-12));

    // III at the cube one level up: ((r^{2 beta} / 2^{-2 j beta})^m - 1) / m
    const NormReport iii = tent_functional(TentKind::III, flat, prm);
    double best = 0.0;
    for (int j0 = spec.j_min; j0 < j; ++j0) {
        const double x = std::exp2(2.0 * (j - j0) * prm.beta);
        best = std::max(best, std::exp2(-2 * j0 * prm.q * (0.5 / 2 - 0.5)) * shell * std::pow((std::pow(x, prm.m) - 1.0) / prm.m, 1.0));
    }
    CHECK(iii.value == doctest::Approx(best).epsilon(1e-12));

    // a(t) = exp(-t 2^{2 j beta}): I peaks at x = m/p
    CoefficientTrajectory decay;
    for (double t : times) {
        CoefficientSet s(spec, 1);
        s.set(0, WaveletIndex{1u, j, {2, 1, 0}}, std::exp(-t * std::exp2(2.0 * j * prm.beta)));
        decay.times.push_back(t);
        decay.sets.push_back(s);
    }
    const NormReport i1 = tent_functional(TentKind::I, decay, prm);
    const double xs = prm.m / prm.p;
    const double peak = pref * shell * std::pow(std::pow(xs, prm.m) * std::exp(-prm.p * xs), prm.q / prm.p);
    CHECK(i1.value <= peak * (1 + 1e-12));
    CHECK(i1.value >= 0.99 * peak);
    CHECK(tent_cube_value(TentKind::I, decay, prm, *i1.witness,
                          std::find(times.begin(), times.end(), *i1.witness_time) - times.begin()) ==
          doctest::Approx(i1.value).epsilon(1e-12));

    // II: once t > r^{2 beta} for every cube level the shell range is empty
    CoefficientTrajectory late;
    late.times = {0.0, 100.0};
    late.sets = {one, one};
    const double v0 = tent_cube_value(TentKind::II, late, prm, DyadicCube{j, {2, 1, 0}}, 1);
    CHECK(v0 == 0.0);

    const NormReport all = tent_norm(decay, prm);
    double mx = 0.0;
    for (const auto& [name, v] : all.parts) mx = std::max(mx, v);
    CHECK(all.value == mx);
    CHECK(all.parts.size() == 4);
}

TEST_CASE("tent values converge under refinement for a semigroup orbit") {
    const BasisSpec spec = spec2();
    SpaceParams prm = params(0.0, 0.5, 2.0, 2.0);
    prm.beta = 0.75;
    prm.make_critical();
    CoefficientSet one(spec, 1);
    one.set(0, WaveletIndex{1u, 0, {1, 1, 0}}, 1.0);
    const double tmax = std::pow(spec.grid.box_length(), 2 * prm.beta);
    const auto coarse = semigroup_trajectory(one, prm.beta, tent_time_grid(spec, prm.beta, 1e-4, tmax, 8));
    const auto fine = semigroup_trajectory(one, prm.beta, tent_time_grid(spec, prm.beta, 1e-4, tmax, 16));
    for (TentKind k : {TentKind::III, TentKind::IV}) {
        const double a = tent_functional(k, coarse, prm).value, b = tent_functional(k, fine, prm).value;
        CHECK(std::abs(a - b) <= 0.01 * b);
    }
    for (TentKind k : {TentKind::I, TentKind::II}) {
        const double a = tent_functional(k, coarse, prm).value, b = tent_functional(k, fine, prm).value;
        CHECK(std::abs(a - b) <= 0.02 * b);
    }
    TentOptions opt;
    opt.cube_levels = {0, 9};
    const NormReport r = tent_functional(TentKind::IV, coarse, prm, opt);
    CHECK(!r.warnings.empty());
}

TEST_CASE("besov-infinity two regimes") {
    const BasisSpec spec = spec2();
    const double beta = 1.0, tau = 0.7, gamma = -0.3;
    const int j = 1;
    CoefficientTrajectory tr;
    for (double t : log_time_grid(1e-3, 10.0, 4, true)) {
        const double x = t * std::exp2(2.0 * j * beta);
        CoefficientSet s(spec, 1);
        s.set(0, WaveletIndex{1u, j, {0, 0, 0}}, x >= 1.0 ? std::pow(x, -tau) : 1.0);
        tr.times.push_back(t);
        tr.sets.push_back(s);
    }
    const double unit = std::exp2(2 * j / 2.0 + j * gamma);
    CHECK(besov_infinity_norm(tr, gamma, tau, beta) == doctest::Approx(2.0 * unit).epsilon(1e-13));
    CoefficientTrajectory z;
    z.times = {0.0, 1.0};
    z.sets = {CoefficientSet(spec, 1), CoefficientSet(spec, 1)};
    CHECK(besov_infinity_norm(z, gamma, tau, beta) == 0.0);
    CHECK(besov_infinity_norm(z, gamma, 0.0, beta) == 0.0);
}

TEST_CASE("direct Q-space functional") {
    const Grid g{2, 32, 2};
    SpectralField c(g, 1);
    c.at(0, 0) = 3.0;
    CHECK(qspace_norm_direct(c, 0.5, 0.75) == doctest::Approx(0.0).epsilon(1e-20));
    CoefficientSet one(BasisSpec::for_grid(g), 1);
    one.set(0, WaveletIndex{1u, 0, {1, 1, 0}}, 1.0);
    const double v = qspace_norm_direct(meyer::synthesize(one), 0.5, 0.75);
    CHECK(std::isfinite(v));
    CHECK(v > 0.0);
    CHECK_THROWS_AS(qspace_norm_direct(SpectralField(Grid{2, 128, 2}, 1), 0.5, 0.75), Error);
}

TEST_CASE("norm report json") {
    const BasisSpec spec = spec2();
    CoefficientSet one(spec, 1);
    one.set(0, WaveletIndex{1u, 0, {1, 2, 0}}, 1.0);
    const auto j = besovq_norm(one, params(0, 0.5, 2, 2)).to_json(2);
    CHECK(j["functional"] == "besovq");
    CHECK(j["witness"]["k0"].size() == 2);
    CHECK(j["shells"].contains("0"));
}
