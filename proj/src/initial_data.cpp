#include "besovq/initial_data.hpp"

#include <cmath>

#include "besovq/meyer.hpp"
#include "besovq/operators.hpp"
#include "besovq/random.hpp"

namespace besovq {

namespace {

SpectralField taylor_green(const Grid& g, double amplitude) {
    if (g.dim < 2) throw Error("taylor-green data need n >= 2");
    const double k = g.k0();
    const double h = g.box_length() / g.size;
    std::vector<std::vector<double>> comp(static_cast<std::size_t>(g.dim), std::vector<double>(g.points(), 0.0));
    for (std::size_t lin = 0; lin < g.points(); ++lin) {
        const IVec idx = g.unravel(lin);
        const double x = k * h * idx[0], y = k * h * idx[1];
        const double z = g.dim == 3 ? std::cos(k * h * idx[2]) : 1.0;
        comp[0][lin] = amplitude * std::sin(x) * std::cos(y) * z;
        comp[1][lin] = -amplitude * std::cos(x) * std::sin(y) * z;
    }
    return SpectralField::from_physical(g, comp);
}

}  // namespace

SpectralField generate_initial_data(const BasisSpec& spec, const InitialDataSpec& init) {
    spec.validate();
    const Grid& g = spec.grid;
    const int n = g.dim;
    const int comps = init.components > 0 ? init.components : n;
    if (comps != 1 && comps != n) throw Error("initial data have 1 or n components");
    if (init.kind == "taylor-green") {
        if (comps != n) throw Error("taylor-green data are vector fields");
        SpectralField f = taylor_green(g, init.amplitude);
        if (init.perturbation != 0.0 && init.amplitude != 0.0) {
            Rng rng(init.seed);
            SpectralField w = leray_project(random_band_limited(g, n, 3, rng));
            w *= init.perturbation * std::abs(init.amplitude) / w.sup_norm();
            f += w;
        }
        return f;
    }
    if (init.kind == "random-besov") {
        init.params.validate();
        SpectralField f(g, comps);
        if (init.amplitude == 0.0) return f;
        Rng rng(init.seed);
        CoefficientSet a(spec, comps);
        const double s = init.params.gamma1 + n / 2.0 - n / init.params.p;
        CoefficientSet probe(spec, 1);
        for (int c = 0; c < comps; ++c)
            for (int j = spec.j_min; j <= spec.j_max; ++j) {
                const double env = std::exp2(-j * s);
                for (unsigned eps = 1; eps < spec.eps_count(); ++eps)
                    for (std::size_t lin = 0; lin < spec.shell_size(j); ++lin)
                        a.set(c, WaveletIndex{eps, j, probe.unravel_k(j, lin)}, env * rng.normal());
            }
        f = meyer::synthesize(a);
        if (comps == n && n >= 2) f = leray_project(f);
        const double norm = besovq_norm(meyer::analyze(f, spec), init.params).value;
        if (!(norm > 0.0)) throw Error("random-besov draw has zero norm");
        f *= init.amplitude / norm;
        return f;
    }
    if (init.kind == "single-wavelet") {
        CoefficientSet a(spec, comps);
        a.set(0, init.wavelet, init.amplitude);
        SpectralField f = meyer::synthesize(a);
        if (comps == n && n >= 2) f = leray_project(f);
        return f;
    }
    throw Error("unknown initial-data kind '" + init.kind + "'");
}

}  // namespace besovq
