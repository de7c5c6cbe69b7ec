#pragma once

#include <cstdint>
#include <string>

#include "besovq/coefficient_set.hpp"
#include "besovq/function_spaces.hpp"
#include "besovq/spectral_field.hpp"

namespace besovq {

struct InitialDataSpec {
    /// taylor-green | random-besov | single-wavelet
    std::string kind = "taylor-green";
    /// 0 means one component per axis.
    int components = 0;
    double amplitude = 1.0;
    std::uint64_t seed = 0;
    /// single-wavelet: the wavelet placed in component 0.
    WaveletIndex wavelet{1u, 0, {0, 0, 0}};
    /// random-besov: coefficient envelope 2^{-j(gamma1 + n/2 - n/p)} and the Besov-Q
    /// norm the field is rescaled to.
    SpaceParams params{};
    /// taylor-green: relative size of an added random divergence-free low-mode field.
    double perturbation = 0.0;
};

/// taylor-green: A (sin kx cos ky, -cos kx sin ky) with k = 2 pi / L (n = 2; n = 3 adds a
/// cos kz factor and a zero third component).
/// random-besov: Gaussian coefficients under the envelope, synthesized, Leray-projected
/// for vector fields and rescaled so that besovq_norm equals the amplitude.
/// single-wavelet: amplitude times the wavelet; vector fields are Leray-projected.
SpectralField generate_initial_data(const BasisSpec& spec, const InitialDataSpec& init);

}  // namespace besovq
