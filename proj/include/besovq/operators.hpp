#pragma once

#include <string>
#include <vector>

#include "besovq/coefficient_set.hpp"
#include "besovq/spectral_field.hpp"

namespace besovq {

/// R_l: multiplier -i xi_l / |xi| on every component; the zero mode maps to 0.
SpectralField riesz(const SpectralField& field, int axis);
/// d/dx_l: multiplier i xi_l (Nyquist entries zeroed).
SpectralField partial_derivative(const SpectralField& field, int axis);
/// sum_l d_l u_l of an n-component field, as a scalar field.
SpectralField divergence(const SpectralField& field);
/// n-component gradient of a scalar field.
SpectralField gradient(const SpectralField& scalar);
/// v - xi (xi . v) / |xi|^2 mode by mode; the zero mode is kept.
SpectralField leray_project(const SpectralField& field);

struct CzoOperator {
    enum class Kind { identity, riesz } kind = Kind::identity;
    int axis = 0;
    std::string name() const { return kind == Kind::identity ? "identity" : "riesz_" + std::to_string(axis); }
};

struct CzoMatrixEntry {
    WaveletIndex row;
    WaveletIndex col;
    double value = 0.0;
};

/// Entries <T Phi_col, Phi_row> for every pair of `indices` (real for real wavelets).
/// More than 10^4 pairs is rejected.
std::vector<CzoMatrixEntry> czo_matrix(const CzoOperator& op, const BasisSpec& spec, const std::vector<WaveletIndex>& indices);

/// All detail indices of the window with j in [j_lo, j_hi] and every k (periodic lattice).
std::vector<WaveletIndex> window_indices(const BasisSpec& spec, int j_lo, int j_hi);

struct CzoDecayReport {
    double constant = 0.0;
    CzoMatrixEntry argmax{};
    std::size_t entries_used = 0;
};

/// max over entries of |a| 2^{|j-j'|(n/2+N0)} ((2^-j + 2^-j' + |k 2^-j - k' 2^-j'|) / (2^-j + 2^-j'))^{n+N0},
/// with the position difference taken periodically in the box. Entries below
/// `floor` times the largest |a| are skipped as round-off.
CzoDecayReport czo_decay_check(const std::vector<CzoMatrixEntry>& entries, const BasisSpec& spec, double N0, double floor = 1e-12);

/// Least-squares slope of -log(max |a|) against log(1 + d) over same-scale entries,
/// d the periodic lattice distance |k - k'|; the envelope maximum is taken per d.
double czo_decay_power(const std::vector<CzoMatrixEntry>& entries, const BasisSpec& spec, double floor = 1e-12);

}  // namespace besovq
