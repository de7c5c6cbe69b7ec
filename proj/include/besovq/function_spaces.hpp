#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "besovq/coefficient_set.hpp"
#include "besovq/spectral_field.hpp"
#include "json.hpp"

namespace besovq {

/// Index bundle (gamma1, gamma2, p, q, m, m', beta) selecting a norm.
struct SpaceParams {
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double p = 2.0;
    double q = 2.0;
    double beta = 1.0;
    double m = 3.0;
    double m_prime = 0.5;

    /// p, q > 1, beta > 0, m' > 0.
    void validate() const;
    /// gamma1 == gamma2 - 2 beta + 1.
    bool is_critical(double tol = 1e-12) const;
    /// m > max(p, n/(2 beta)), 0 < m' < min(1, p/(2 beta)) and the gamma2 range for p.
    bool is_admissible(int dim) const;
    /// Sets gamma1 from gamma2 and beta on the critical line.
    SpaceParams& make_critical() {
        gamma1 = gamma2 - 2.0 * beta + 1.0;
        return *this;
    }
};

/// Q_{j0,k0}: side 2^-j0, corner 2^-j0 k0, corners wrapped into the box.
struct DyadicCube {
    int j0 = 0;
    IVec k0{0, 0, 0};
    bool operator==(const DyadicCube&) const = default;
};

/// Whether Q_{j,k} lies inside cube (both on the same periodic lattice).
bool cube_contains(const BasisSpec& spec, const DyadicCube& cube, int j, const IVec& k);

struct NormReport {
    std::string functional;
    double value = 0.0;
    std::optional<DyadicCube> witness;
    std::optional<double> witness_time;
    /// Shell contributions at the witness, keyed by j.
    std::map<int, double> shells;
    /// Sub-functional values (tent_norm only).
    std::map<std::string, double> parts;
    std::vector<std::string> warnings;

    nlohmann::json to_json(int dim) const;
};

/// [sum_j 2^{qj(s+n/2-n/p)} (sum_{eps != 0, k, c} |a|^p)^{q/p}]^{1/q}.
NormReport besov_norm(const CoefficientSet& coeffs, double s, double p, double q);

/// sup over dyadic cubes Q of |Q|^{gamma2/n-1/p} [sum_{j>=j0} 2^{jq(gamma1+n/2-n/p)} (sum_{Q_{j,k} in Q} |a|^p)^{q/p}]^{1/q}.
/// Cubes range over every level of the window and every corner; ties go to the
/// smallest j0, then the lexicographically smallest k0.
NormReport besovq_norm(const CoefficientSet& coeffs, const SpaceParams& params);
/// The same functional at one cube, by direct enumeration of the coefficients.
double besovq_cube_value(const CoefficientSet& coeffs, const SpaceParams& params, const DyadicCube& cube);

enum class TentKind { I, II, III, IV };
std::string to_string(TentKind k);

/// Cube levels to scan; empty means every level of the window. Levels finer
/// than j_max are skipped with a warning.
struct TentOptions {
    std::vector<int> cube_levels;
};

/// Tent functionals, reported as the raw q-homogeneous quantity (no outer root).
/// I and II take the sup over the sampled times; III and IV integrate in time
/// by product integration (see weighted_log_integral).
NormReport tent_functional(TentKind kind, const CoefficientTrajectory& tc, const SpaceParams& params, const TentOptions& opt = {});
/// Maximum of the four functionals; `parts` holds each and `functional` names the largest.
NormReport tent_norm(const CoefficientTrajectory& tc, const SpaceParams& params, const TentOptions& opt = {});
/// One functional at one cube (and one sample for I/II), by direct enumeration.
double tent_cube_value(TentKind kind, const CoefficientTrajectory& tc, const SpaceParams& params, const DyadicCube& cube,
                       std::size_t time_index = 0);

/// int_A^B f(t) (t / T)^mu dt / t for samples f(times[i]): linear in t on the first
/// interval when times[0] == 0; elsewhere a power law in t between positive samples
/// and linear in log t otherwise. The weight is integrated exactly. B beyond the last sample
/// is clipped (and `clipped` set).
double weighted_log_integral(const std::vector<double>& times, const std::vector<double>& f, double A, double B, double T,
                             double mu, bool* clipped = nullptr);

/// sup_{t 2^{2j beta} >= 1} (t 2^{2j beta})^tau 2^{nj/2} 2^{j gamma} |a| + sup_{0 < t 2^{2j beta} < 1} 2^{nj/2} 2^{j gamma} |a|.
/// For tau == 0: sup over t > 0, j, k of t^{-gamma/(2 beta)} 2^{nj/2} |<a(t), Phi^0_{j,k}>|.
double besov_infinity_norm(const CoefficientTrajectory& tc, double gamma, double tau, double beta);

struct EmbeddingCheck {
    double norm_a = 0.0;
    double norm_b = 0.0;
    bool holds = false;
};
/// Parameters differ only in q with qA <= qB; checks besovq(qB) <= besovq(qA).
EmbeddingCheck check_embedding(const CoefficientSet& coeffs, const SpaceParams& a, const SpaceParams& b);

/// Reindexes (j, k) -> (j + shift, k) and multiplies every coefficient by `factor`.
/// Throws when a shifted index leaves the window.
CoefficientSet reindex_scales(const CoefficientSet& coeffs, int shift, double factor = 1.0);

struct ScalingResult {
    double ratio = 0.0;
    double original = 0.0;
    double scaled = 0.0;
};
/// besovq(2^{(gamma2-gamma1) l - n l / 2} reindexed by l) / besovq(original), the
/// coefficient form of lambda^{gamma2-gamma1} f(lambda x) with lambda = 2^l.
ScalingResult scaling_check(const CoefficientSet& coeffs, const SpaceParams& params, int lambda_exp);

/// sup over dyadic cubes of r^{2(alpha+beta-1)-n} int_Q int_Q |f(x)-f(y)|^2 / |x-y|^{n+2(alpha-beta+1)} dx dy,
/// as a double sum over grid points (x != y). Scalar fields with at most 64^n points.
double qspace_norm_direct(const SpectralField& field, double alpha, double beta);

}  // namespace besovq
