#pragma once

#include <cstdint>
#include <random>

#include "besovq/spectral_field.hpp"

namespace besovq {

/// Seeded generator with platform-independent draws (the standard
/// distributions are implementation-defined, the raw engine is not).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Standard normal by Box-Muller.
    double normal();
    int integer(int lo, int hi) { return lo + static_cast<int>(uniform() * (hi - lo + 1)); }
    std::uint64_t bits() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

/// Real random field whose modes satisfy |m_a| <= bound on every axis and
/// have zero mean; Gaussian coefficients, Hermitian-symmetric.
SpectralField random_band_limited(const Grid& grid, int components, int bound, Rng& rng);

}  // namespace besovq
