#pragma once

#include <vector>

#include "besovq/coefficient_set.hpp"
#include "besovq/spectral_field.hpp"

namespace besovq {

/// e^{-t |xi|^{2 beta}}.
double heat_multiplier(double xi_norm, double beta, double t);

/// Multiplies every mode by e^{-t |xi|^{2 beta}}; t < 0 is rejected.
SpectralField apply_semigroup(const SpectralField& field, double beta, double t);

/// analyze(apply_semigroup(synthesize(coeffs))).
CoefficientSet evolve_coefficients(const CoefficientSet& coeffs, double beta, double t);

/// Coefficients of the semigroup orbit of `coeffs` at each of `times`.
CoefficientTrajectory semigroup_trajectory(const CoefficientSet& coeffs, double beta, const std::vector<double>& times);

/// t_min 2^{k / per_octave} for k = 0, 1, ... up to t_max (t_max itself is appended
/// when it is not hit), optionally preceded by t = 0.
std::vector<double> log_time_grid(double t_min, double t_max, int per_octave = 4, bool include_zero = true);

/// log_time_grid(t_min, t_max, per_octave) merged with the regime boundaries
/// 2^{-2 j beta} of every window scale that fall inside [t_min, t_max].
std::vector<double> tent_time_grid(const BasisSpec& spec, double beta, double t_min, double t_max, int per_octave = 4);

/// max |out| on shells more than one scale away from every shell carrying input,
/// relative to max |out|.
double scale_leakage(const CoefficientSet& input, const CoefficientSet& output);

struct DecayReport {
    int weight_power = 0;
    /// Fitted rate in |a| <~ C e^{-c t 2^{2 j beta}} over t 2^{2 j beta} in [1, 10].
    double c_tilde = 0.0;
    /// Largest |a(t)| / (e^{-c_tilde x} S) over samples with x = t 2^{2 j beta} >= 1.
    double c_upper = 0.0;
    /// Largest |a(t)| / S over samples with 0 < x < 1.
    double c_lower = 0.0;
    std::size_t upper_samples = 0;
    std::size_t lower_samples = 0;
    std::size_t fit_points = 0;
    /// Set when one of the two regimes has no samples.
    bool partial = false;
};

/// Checks |a_{j,k}(t)| against the spatially weighted sum
///     S_{j,k} = sum_{|j - j'| <= 1} sum_{eps', k'} |a_{j',k'}(0)| (1 + |2^{j-j'} k' - k|)^{-N}
/// (periodic distance on the level-j lattice), in both time regimes.
/// Values below 1e-13 of the initial maximum are treated as round-off and skipped.
DecayReport decay_bound_check(const CoefficientSet& coeffs, double beta, const std::vector<double>& times, int weight_power);

}  // namespace besovq
