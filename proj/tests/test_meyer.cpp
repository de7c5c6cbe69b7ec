#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "besovq/meyer.hpp"
#include "besovq/random.hpp"

using namespace besovq;

namespace {

// <Phi_{j,k}, Phi_{j',k'}> summed over the Fourier lattice directly from the profile,
// without going through analyze/synthesize.
cplx lattice_inner(const Grid& g, unsigned e1, int j1, int k1, unsigned e2, int j2, int k2) {
    const double L = g.box_length();
    cplx acc = 0.0;
    for (int i = 0; i < g.size; ++i) {
        const double xi = g.k0() * g.mode(i);
        const double x1 = xi / std::ldexp(1.0, j1), x2 = xi / std::ldexp(1.0, j2);
        const cplx a = meyer::wavelet_hat(e1, std::span<const double>(&x1, 1)) * std::polar(1.0, -x1 * k1) / (L * std::sqrt(std::ldexp(1.0, j1)));
        const cplx b = meyer::wavelet_hat(e2, std::span<const double>(&x2, 1)) * std::polar(1.0, -x2 * k2) / (L * std::sqrt(std::ldexp(1.0, j2)));
        acc += a * std::conj(b);
    }
    return acc * L;
}

}  // namespace

TEST_CASE("profile values") {
    CHECK(meyer::psi0(0.0) == 1.0);
    CHECK(meyer::psi0(5.0) == 0.0);
    CHECK(meyer::psi0(kPi) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(meyer::psi0(2.5) == doctest::Approx(0.999536236591615106).epsilon(1e-14));
    CHECK(meyer::psi0(3.5) == doctest::Approx(0.271427799214131149).epsilon(1e-13));
    CHECK(meyer::psi0(-2.5) == meyer::psi0(2.5));
    CHECK(meyer::omega(1.0) == 0.0);
    CHECK(meyer::omega(kPi) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    const double w = meyer::omega(2.5), w2 = meyer::omega(5.0);
    CHECK(std::abs(w * w + w2 * w2 - 1.0) < 1e-14);
    CHECK(meyer::omega(9.0) == 0.0);
}

TEST_CASE("partition of unity on the transition band") {
    double worst = 0.0;
    for (int s = 0; s < 512; ++s) {
        const double xi = 2.0 * kPi / 3.0 + (2.0 * kPi / 3.0) * s / 511.0;
        const double a = meyer::omega(xi), b = meyer::omega(2.0 * xi), c = meyer::omega(2.0 * kPi - xi);
        worst = std::max({worst, std::abs(a * a + b * b - 1.0), std::abs(a * a + c * c - 1.0)});
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("wavelet_hat factorization") {
    double x0 = 0.0;
    CHECK(std::abs(meyer::wavelet_hat(1u, std::span<const double>(&x0, 1))) == 0.0);
    double xs[2] = {0.0, kPi};
    // bit a of eps is axis a: eps=(0,1) means Psi^1 on axis 1
    const cplx v = meyer::wavelet_hat(2u, xs);
    CHECK(std::abs(v - std::polar(1.0 / std::sqrt(2.0), -kPi / 2)) < 1e-14);
}

TEST_CASE("gram matrix of the periodized system is the identity") {
    Grid g{1, 2048, 7};
    double worst = 0.0;
    for (int j1 = -2; j1 <= 2; ++j1)
        for (int j2 = -2; j2 <= 2; ++j2)
            for (int k1 = -8; k1 <= 8; ++k1)
                for (int k2 = -8; k2 <= 8; ++k2) {
                    const cplx v = lattice_inner(g, 1u, j1, k1, 1u, j2, k2);
                    const double target = (j1 == j2 && k1 == k2) ? 1.0 : 0.0;
                    worst = std::max(worst, std::abs(v - target));
                }
    CHECK(worst <= 1e-6);
}

TEST_CASE("unit coefficient survives synthesis and analysis") {
    Grid g{2, 64, 2};
    BasisSpec spec = BasisSpec::for_grid(g);
    CoefficientSet a(spec, 1);
    a.set(0, WaveletIndex{1u, 0, {1, 2, 0}}, 1.0);
    const SpectralField f = meyer::synthesize(a);
    CHECK(f.l2_norm() == doctest::Approx(1.0).epsilon(1e-12));
    const CoefficientSet b = meyer::analyze(f, spec);
    double off = 0.0;
    b.for_each([&](int, const WaveletIndex& idx, cplx v) {
        if (idx == WaveletIndex{1u, 0, {1, 2, 0}}) CHECK(std::abs(v - 1.0) < 1e-10);
        else off = std::max(off, std::abs(v));
    });
    CHECK(off <= 1e-10);
    CHECK(meyer::analyze(SpectralField(g, 1), spec).empty());
    CHECK(meyer::synthesize(CoefficientSet(spec, 1)).max_coefficient() == 0.0);
}

TEST_CASE("round trips") {
    Grid g{2, 128, 2};
    BasisSpec spec = BasisSpec::for_grid(g);
    Rng rng(7);
    const SpectralField f = random_band_limited(g, 1, meyer::covered_mode_bound(spec), rng);
    const SpectralField back = meyer::synthesize(meyer::analyze(f, spec));
    CHECK((back - f).sup_norm() <= 1e-8 * f.sup_norm());
    CoefficientSet a = meyer::analyze(f, spec);
    CoefficientSet a2 = meyer::analyze(meyer::synthesize(a), spec);
    CHECK((a2 - a).max_abs() <= 1e-10);
    const auto rep = meyer::analyze_with_report(f, spec);
    CHECK(rep.truncated_shells.empty());
}

TEST_CASE("truncated shells are reported") {
    Grid g{1, 64, 2};
    BasisSpec spec = BasisSpec::for_grid(g);
    spec.j_max = 1;
    SpectralField f(g, 1);
    f.at(0, 20) = 1.0;
    f.at(0, 64 - 20) = 1.0;
    const auto rep = meyer::analyze_with_report(f, spec);
    CHECK(rep.residual_fraction > 0.5);
    REQUIRE(!rep.truncated_shells.empty());
    CHECK(rep.truncated_shells.front() == 2);
}

TEST_CASE("linearity of synthesis") {
    Grid g{2, 32, 1};
    BasisSpec spec = BasisSpec::for_grid(g);
    CoefficientSet a(spec, 1), b(spec, 1);
    a.set(0, WaveletIndex{3u, 1, {0, 3, 0}}, 0.5);
    b.set(0, WaveletIndex{1u, 0, {1, 0, 0}}, -2.0);
    b.set(0, WaveletIndex{0u, spec.j_min, {0, 0, 0}}, 1.5);
    CHECK((meyer::synthesize(a) + meyer::synthesize(b) - meyer::synthesize(a + b)).max_coefficient() <= 1e-12);
}

TEST_CASE("window rejects foreign indices") {
    Grid g{1, 64, 2};
    CoefficientSet a(BasisSpec::for_grid(g), 1);
    CHECK_THROWS_AS(a.set(0, WaveletIndex{1u, 9, {0, 0, 0}}, 1.0), Error);
    CHECK_THROWS_AS(a.set(0, WaveletIndex{0u, 0, {0, 0, 0}}, 1.0), Error);
    BasisSpec bad = BasisSpec::for_grid(g);
    bad.j_max = 5;
    CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("projections") {
    Grid g{2, 64, 2};
    BasisSpec spec = BasisSpec::for_grid(g);
    CoefficientSet a(spec, 1);
    a.set(0, WaveletIndex{2u, 0, {1, 1, 0}}, 1.0);
    const SpectralField phi = meyer::synthesize(a);
    CHECK((meyer::project_Q(phi, 0) - phi).max_coefficient() <= 1e-12);
    CHECK(meyer::project_Q(phi, 1).max_coefficient() <= 1e-12);
    CHECK(meyer::project_Q(phi, -1).max_coefficient() <= 1e-12);
    Rng rng(3);
    const SpectralField f = random_band_limited(g, 1, 10, rng);
    for (int j = -2; j < spec.j_max; ++j) {
        const SpectralField lhs = meyer::project_P(f, j + 1);
        const SpectralField rhs = meyer::project_P(f, j) + meyer::project_Q(f, j);
        CHECK((lhs - rhs).sup_norm() <= 1e-10);
    }
}
