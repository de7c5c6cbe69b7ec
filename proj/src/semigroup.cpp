#include "besovq/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "besovq/meyer.hpp"

namespace besovq {

double heat_multiplier(double xi_norm, double beta, double t) { return std::exp(-t * std::pow(xi_norm, 2.0 * beta)); }

SpectralField apply_semigroup(const SpectralField& field, double beta, double t) {
    if (t < 0.0) throw Error("semigroup time must be nonnegative, got " + std::to_string(t));
    if (!(beta > 0.0)) throw Error("beta must be positive");
    SpectralField out = field;
    if (t == 0.0) return out;
    for (std::size_t lin = 0; lin < field.points(); ++lin) {
        const auto xi = field.wavevector(lin);
        const double mult = heat_multiplier(std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]), beta, t);
        for (int c = 0; c < field.components(); ++c) out.at(c, lin) *= mult;
    }
    return out;
}

CoefficientSet evolve_coefficients(const CoefficientSet& coeffs, double beta, double t) {
    CoefficientSet out = meyer::analyze(apply_semigroup(meyer::synthesize(coeffs), beta, t), coeffs.spec());
    out.time = (coeffs.time ? *coeffs.time : 0.0) + t;
    return out;
}

CoefficientTrajectory semigroup_trajectory(const CoefficientSet& coeffs, double beta, const std::vector<double>& times) {
    CoefficientTrajectory tr;
    const SpectralField f = meyer::synthesize(coeffs);
    for (double t : times) {
        CoefficientSet a = meyer::analyze(apply_semigroup(f, beta, t), coeffs.spec());
        a.time = t;
        tr.times.push_back(t);
        tr.sets.push_back(std::move(a));
    }
    tr.validate();
    return tr;
}

std::vector<double> log_time_grid(double t_min, double t_max, int per_octave, bool include_zero) {
    if (!(t_min > 0.0) || !(t_max >= t_min)) throw Error("time grid needs 0 < t_min <= t_max");
    if (per_octave < 1) throw Error("time grid needs at least one sample per octave");
    std::vector<double> t;
    if (include_zero) t.push_back(0.0);
    for (int k = 0;; ++k) {
        const double v = t_min * std::exp2(static_cast<double>(k) / per_octave);
        if (v > t_max * (1.0 + 1e-12)) break;
        t.push_back(v);
    }
    if (t.back() < t_max * (1.0 - 1e-12)) t.push_back(t_max);
    return t;
}

std::vector<double> tent_time_grid(const BasisSpec& spec, double beta, double t_min, double t_max, int per_octave) {
    std::vector<double> t = log_time_grid(t_min, t_max, per_octave, true);
    for (int j = spec.j_min; j <= spec.j_max + 1; ++j) {
        const double b = std::exp2(-2.0 * j * beta);
        if (b >= t_min && b <= t_max) t.push_back(b);
    }
    std::sort(t.begin(), t.end());
    std::vector<double> out;
    for (double v : t)
        if (out.empty() || v > out.back() * (1.0 + 1e-9) || (out.back() == 0.0 && v > 0.0)) out.push_back(v);
    return out;
}

double scale_leakage(const CoefficientSet& input, const CoefficientSet& output) {
    std::set<int> src;
    input.for_each([&](int, const WaveletIndex& idx, cplx) { src.insert(idx.j); });
    double total = 0.0, far = 0.0;
    output.for_each([&](int, const WaveletIndex& idx, cplx v) {
        total = std::max(total, std::abs(v));
        bool near = false;
        for (int j : src)
            if (std::abs(j - idx.j) <= 1) near = true;
        if (!near) far = std::max(far, std::abs(v));
    });
    return total > 0.0 ? far / total : 0.0;
}

namespace {

double lattice_distance(const BasisSpec& spec, int j, const IVec& k, int jp, const IVec& kp) {
    const double m = spec.translations(j);
    const double scale = std::exp2(j - jp);
    double d2 = 0.0;
    for (int a = 0; a < spec.dim(); ++a) {
        double d = std::fmod(scale * kp[a] - k[a], m);
        if (d > m / 2) d -= m;
        if (d < -m / 2) d += m;
        d2 += d * d;
    }
    return std::sqrt(d2);
}

}  // namespace

DecayReport decay_bound_check(const CoefficientSet& coeffs, double beta, const std::vector<double>& times, int weight_power) {
    const BasisSpec& spec = coeffs.spec();
    DecayReport rep;
    rep.weight_power = weight_power;
    if (weight_power < 2 * spec.dim() + 1) throw Error("weight power N must be at least 2n + 1");
    struct Source {
        int j;
        IVec k;
        double mag;
    };
    std::vector<Source> sources;
    double a0max = 0.0;
    coeffs.for_each([&](int, const WaveletIndex& idx, cplx v) {
        if (idx.eps == 0) return;
        sources.push_back({idx.j, idx.k, std::abs(v)});
        a0max = std::max(a0max, std::abs(v));
    });
    if (sources.empty()) return rep;
    const double floor = 1e-13 * a0max;

    // S_{j,k} for every (j, k) in the window; independent of t and eps.
    std::map<int, std::vector<double>> weight;
    for (int j = spec.j_min; j <= spec.j_max; ++j) {
        std::vector<double> s(spec.shell_size(j), 0.0);
        bool any = false;
        CoefficientSet probe(spec, 1);
        for (std::size_t lin = 0; lin < s.size(); ++lin) {
            const IVec k = probe.unravel_k(j, lin);
            for (const auto& src : sources) {
                if (std::abs(src.j - j) > 1) continue;
                any = true;
                s[lin] += src.mag * std::pow(1.0 + lattice_distance(spec, j, k, src.j, src.k), -weight_power);
            }
        }
        if (any) weight[j] = std::move(s);
    }

    struct Sample {
        double x;
        double ratio;
    };
    std::vector<Sample> upper;
    std::map<std::pair<int, std::size_t>, double> envelope;  // (j, time index) -> max ratio in fit window
    const SpectralField f0 = meyer::synthesize(coeffs);
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
        const double t = times[ti];
        if (t <= 0.0) continue;
        const CoefficientSet a = meyer::analyze(apply_semigroup(f0, beta, t), spec);
        a.for_each([&](int c, const WaveletIndex& idx, cplx v) {
            (void)c;
            if (idx.eps == 0) return;
            const double mag = std::abs(v);
            if (mag <= floor) return;
            auto it = weight.find(idx.j);
            if (it == weight.end()) return;
            const double s = it->second[a.linear_k(idx.j, idx.k)];
            if (s <= 0.0) return;
            const double x = t * std::exp2(2.0 * idx.j * beta);
            const double r = mag / s;
            if (x >= 1.0) {
                upper.push_back({x, r});
                ++rep.upper_samples;
                if (x <= 10.0) {
                    double& e = envelope[{idx.j, ti}];
                    e = std::max(e, r);
                }
            } else {
                rep.c_lower = std::max(rep.c_lower, r);
                ++rep.lower_samples;
            }
        });
    }
    // pooled least squares of log(envelope) against x
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [key, r] : envelope) {
        const double x = times[key.second] * std::exp2(2.0 * key.first * beta);
        const double y = std::log(r);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++rep.fit_points;
    }
    if (rep.fit_points >= 2) {
        const double np = static_cast<double>(rep.fit_points);
        const double den = np * sxx - sx * sx;
        if (den > 0.0) rep.c_tilde = -(np * sxy - sx * sy) / den;
    }
    for (const auto& s : upper) rep.c_upper = std::max(rep.c_upper, s.ratio * std::exp(rep.c_tilde * s.x));
    rep.partial = rep.upper_samples == 0 || rep.lower_samples == 0;
    return rep;
}

}  // namespace besovq
