#include "besovq/random.hpp"

#include <cmath>

namespace besovq {

double Rng::normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

SpectralField random_band_limited(const Grid& grid, int components, int bound, Rng& rng) {
    SpectralField f(grid, components);
    for (int c = 0; c < components; ++c) {
        for (std::size_t lin = 0; lin < f.points(); ++lin) {
            const IVec idx = grid.unravel(lin);
            bool inside = true;
            for (int a = 0; a < grid.dim; ++a)
                if (std::abs(grid.mode(idx[a])) > bound || grid.is_nyquist(idx[a])) inside = false;
            const double re = rng.normal();
            const double im = rng.normal();
            if (inside && lin != 0) f.at(c, lin) = cplx(re, im);
        }
        // symmetrize: f_{-m} = conj(f_m)
        for (std::size_t lin = 0; lin < f.points(); ++lin) {
            IVec idx = grid.unravel(lin);
            IVec neg{0, 0, 0};
            for (int a = 0; a < grid.dim; ++a) neg[a] = grid.slot(-grid.mode(idx[a])) % grid.size;
            const std::size_t nl = grid.ravel(neg);
            if (nl < lin) continue;
            if (nl == lin) {
                f.at(c, lin) = f.at(c, lin).real();
                continue;
            }
            const cplx v = 0.5 * (f.at(c, lin) + std::conj(f.at(c, nl)));
            f.at(c, lin) = v;
            f.at(c, nl) = std::conj(v);
        }
    }
    return f;
}

}  // namespace besovq
