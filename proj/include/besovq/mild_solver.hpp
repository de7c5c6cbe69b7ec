#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "besovq/coefficient_set.hpp"
#include "besovq/function_spaces.hpp"
#include "besovq/spectral_field.hpp"
#include "json.hpp"

namespace besovq {

struct SolverConfig {
    double beta = 1.0;
    SpaceParams space{};
    BasisSpec spec{};
    double t_final = 0.1;
    /// Gauss-Legendre nodes per quadrature block.
    int quad_points = 8;
    int max_iter = 20;
    /// Stop once a successive difference falls below this fraction of the first.
    double contraction_tol = 1e-10;
    double smallness_threshold = 1e300;
    /// Samples per octave of the log-uniform time grid.
    int samples_per_octave = 4;
    /// false drops the nonlinear term (B = 0).
    bool nonlinear = true;

    void validate() const;
    /// Diffusive time of the grid's highest resolved wavenumber, (2 pi / L * N / 2)^(-2 beta).
    double t_min() const;
    /// 0, then t_min 2^{k / samples_per_octave} up to t_final.
    std::vector<double> sample_times() const;
};

/// Fields at increasing sample times.
struct Trajectory {
    std::vector<double> times;
    std::vector<SpectralField> fields;

    std::size_t size() const { return times.size(); }
    const SpectralField& back() const { return fields.back(); }
    CoefficientTrajectory coefficients(const BasisSpec& spec) const;
    void validate() const;
};

/// e^{-t(-Delta)^beta} a at each time.
Trajectory semigroup_orbit(const SpectralField& a, double beta, const std::vector<double>& times);

/// P div(u (x) v): component i is P[sum_l d_l (u_l v_i)], computed pseudo-spectrally with the
/// 2/3 rule applied to both inputs and to the output.
SpectralField nonlinear_term(const SpectralField& u, const SpectralField& v);

/// Pointwise product of component ca of a and component cb of b, transformed back
/// (no dealiasing).
SpectralField pointwise_product(const SpectralField& a, int ca, const SpectralField& b, int cb);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights);

/// Quadrature blocks [lo, hi] for int_0^t: dyadic blocks of [0, t/2] refined towards 0
/// and blocks of [t/2, t] refined towards t, down to about t_min.
std::vector<std::array<double, 2>> duhamel_blocks(double t, double t_min);

/// Per-mode interpolant of a sampled field history: cubic Hermite in log t with
/// three-point slopes between positive samples (linear in the samples, so B stays
/// bilinear) and linear in t before the first positive sample.
class FieldInterpolant {
public:
    FieldInterpolant(const std::vector<double>& times, const std::vector<SpectralField>& values);
    SpectralField operator()(double t) const;
    /// Adds w e^{-(t_target - s) lambda} F(s) into `out`, lambda given per mode.
    void accumulate(double s, double weight, double t_target, std::span<const double> lambda, SpectralField& out) const;

private:
    // Evaluation weights: value = sum of c[i] * values_[idx[i]] + d[i] * slopes_[idx[i]].
    struct Stencil {
        std::size_t lo = 0, hi = 0;
        double c_lo = 0.0, c_hi = 0.0, d_lo = 0.0, d_hi = 0.0;
    };
    Stencil stencil(double t) const;

    std::vector<double> times_;
    std::vector<double> logt_;
    std::vector<SpectralField> values_;
    std::vector<SpectralField> slopes_;  // d/d(log t)
};

/// |xi|^{2 beta} per slot of the grid.
std::vector<double> dissipation_rates(const Grid& grid, double beta);

/// B(u, v)(t) = int_0^t e^{-(t-s)(-Delta)^beta} P div(u (x) v)(s) ds at every sample time
/// of `u` (which must share v's times); entry 0 (t = 0) is zero.
Trajectory duhamel_bilinear(const Trajectory& u, const Trajectory& v, const SolverConfig& cfg);
/// The same at a single time t inside the sampled range.
SpectralField duhamel_bilinear_at(const Trajectory& u, const Trajectory& v, double t, const SolverConfig& cfg);

struct ParaproductSplit {
    /// sum P_{j-3}u Q_j v, sum Q_j u Q_j v, sum_{0<j-j'<=3} Q_j u Q_j' v,
    /// sum_{0<j'-j<=3} Q_j u Q_j' v, sum Q_j u P_{j-3} v.
    std::array<SpectralField, 5> parts;
    /// mean(u) mean(v); the five parts plus this equal uv.
    SpectralField mean_term;
    /// Grid the parts live on: the input grid, or a padded one when the inputs exceed
    /// the window or their product exceeds the grid band.
    Grid grid{};
    /// Empty when no padding was needed. aliasing_fraction is the L^2 share of the product
    /// that would fold back on the input grid.
    std::vector<std::string> warnings;
    double aliasing_fraction = 0.0;

    SpectralField total() const;
};

/// Five-term split of the product of two scalar fields over the window scales.
/// The mean term and the five parts reconstruct uv on `grid`.
/// Requires j_min == -box_exponent so that P_{j_min} is the box mean.
ParaproductSplit paraproduct_split(const SpectralField& u, const SpectralField& v, const BasisSpec& spec);

struct IterationDiagnostics {
    std::vector<double> iterate_norms;
    std::vector<double> difference_norms;
    double initial_norm = 0.0;
    double contraction_factor = 0.0;
    double residual = 0.0;
    double initial_besovq = 0.0;
    int iterations = 0;
    bool converged = false;
    bool aborted = false;
    bool above_smallness_threshold = false;
    std::string message;

    nlohmann::json to_json() const;
};

struct SolveResult {
    Trajectory trajectory;
    IterationDiagnostics diagnostics;
};

/// Tent norm with the outer q-th root, the homogeneous size used by the iteration.
double trajectory_size(const Trajectory& tr, const SolverConfig& cfg);

/// Picard iteration u^{k+1} = u^0 - B(u^k, u^k) on the sample grid.
/// Rejects data that are not divergence-free; aborts (without throwing) when an
/// iterate grows past ten times the linear orbit.
SolveResult picard_solve(const SpectralField& a, const SolverConfig& cfg);

/// Exponential time differencing RK2 (Cox-Matthews) with `steps` uniform steps to t_final;
/// returns the field at every step.
Trajectory etd_march(const SpectralField& a, const SolverConfig& cfg, int steps);

struct BilinearStats {
    std::vector<double> samples;
    std::vector<double> swapped;
    double sup = 0.0;
    double median = 0.0;
    double q90 = 0.0;
    double swapped_sup = 0.0;
};

/// tent size of B(u, v) over random pairs of semigroup orbits scaled to unit tent size
/// (u = 0 pairs contribute 0); `swapped` holds B(v, u) for the same pairs.
BilinearStats bilinear_constant_estimate(const SolverConfig& cfg, int trials, std::uint64_t seed);

struct ScanRow {
    double amplitude = 0.0;
    bool converged = false;
    /// Not aborted and every successive difference smaller than the one before.
    bool contractive = false;
    double contraction_factor = 0.0;
    int iterations = 0;
};

struct ScanResult {
    std::vector<ScanRow> rows;
    /// Smallest amplitude found non-contractive, to 1% (0 when every amplitude contracts).
    double boundary = 0.0;
};

/// picard_solve on amplitude * direction for each amplitude, then bisection between the
/// last contractive and first non-contractive amplitude.
ScanResult iteration_smallness_scan(const SpectralField& direction, const SolverConfig& cfg, const std::vector<double>& amplitudes);

}  // namespace besovq
