#include "besovq/function_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "besovq/meyer.hpp"

namespace besovq {

void SpaceParams::validate() const {
    if (!(p > 1.0) || !(q > 1.0)) throw Error("integrability indices p, q must exceed 1");
    if (!(beta > 0.0)) throw Error("beta must be positive");
    if (!(m_prime > 0.0)) throw Error("m' must be positive");
}

bool SpaceParams::is_critical(double tol) const { return std::abs(gamma1 - (gamma2 - 2.0 * beta + 1.0)) <= tol; }

bool SpaceParams::is_admissible(int dim) const {
    const double n = dim;
    if (!(m > std::max(p, n / (2.0 * beta)))) return false;
    if (!(m_prime > 0.0 && m_prime < std::min(1.0, p / (2.0 * beta)))) return false;
    if (p <= 2.0) return (2.0 * beta - 2.0) / p < gamma2 && gamma2 <= n / p;
    return beta - 1.0 < gamma2 && gamma2 <= n / p;
}

std::string to_string(TentKind k) {
    switch (k) {
        case TentKind::I: return "tent_I";
        case TentKind::II: return "tent_II";
        case TentKind::III: return "tent_III";
        case TentKind::IV: return "tent_IV";
    }
    return "tent";
}

bool cube_contains(const BasisSpec& spec, const DyadicCube& cube, int j, const IVec& k) {
    if (j < cube.j0) return false;
    const int mj = spec.translations(j);
    const int m0 = spec.translations(cube.j0);
    for (int a = 0; a < spec.dim(); ++a) {
        int kk = k[a] % mj;
        if (kk < 0) kk += mj;
        int c = cube.k0[a] % m0;
        if (c < 0) c += m0;
        if ((kk >> (j - cube.j0)) != c) return false;
    }
    return true;
}

nlohmann::json NormReport::to_json(int dim) const {
    nlohmann::json j;
    j["functional"] = functional;
    j["value"] = value;
    nlohmann::json w = nlohmann::json::object();
    if (witness) {
        w["j0"] = witness->j0;
        w["k0"] = std::vector<int>(witness->k0.begin(), witness->k0.begin() + dim);
    }
    if (witness_time) w["t"] = *witness_time;
    j["witness"] = w;
    nlohmann::json s = nlohmann::json::object();
    for (const auto& [jj, v] : shells) s[std::to_string(jj)] = v;
    j["shells"] = s;
    if (!parts.empty()) j["parts"] = parts;
    if (!warnings.empty()) j["warnings"] = warnings;
    return j;
}

namespace {

using ShellArrays = std::map<int, std::vector<double>>;

// sum over components and eps != 0 of |a|^p, per shell, indexed by k.
ShellArrays shell_power_sums(const CoefficientSet& coeffs, double p) {
    const BasisSpec& spec = coeffs.spec();
    ShellArrays out;
    for (int c = 0; c < coeffs.components(); ++c) {
        for (const auto& [key, shell] : coeffs.shells(c)) {
            if (key.eps == 0) continue;
            auto& arr = out[key.j];
            if (arr.empty()) arr.assign(spec.shell_size(key.j), 0.0);
            shell.for_each([&](std::size_t lin, cplx v) { arr[lin] += std::pow(std::abs(v), p); });
        }
    }
    return out;
}

// Sums a level-j array onto the cubes of level j0 <= j.
std::vector<double> coarsen(const BasisSpec& spec, int j, const std::vector<double>& fine, int j0) {
    if (j0 == j) return fine;
    const int mj = spec.translations(j);
    const int m0 = spec.translations(j0);
    const int shift = j - j0;
    const int n = spec.dim();
    std::vector<double> out(ipow(static_cast<std::size_t>(m0), n), 0.0);
    for (std::size_t lin = 0; lin < fine.size(); ++lin) {
        if (fine[lin] == 0.0) continue;
        std::size_t rest = lin;
        IVec k{0, 0, 0};
        for (int a = n - 1; a >= 0; --a) {
            k[a] = static_cast<int>(rest % static_cast<std::size_t>(mj));
            rest /= static_cast<std::size_t>(mj);
        }
        std::size_t cl = 0;
        for (int a = 0; a < n; ++a) cl = cl * static_cast<std::size_t>(m0) + static_cast<std::size_t>(k[a] >> shift);
        out[cl] += fine[lin];
    }
    return out;
}

IVec unravel_corner(const BasisSpec& spec, int j0, std::size_t lin) {
    const std::size_t m = static_cast<std::size_t>(spec.translations(j0));
    IVec k{0, 0, 0};
    for (int a = spec.dim() - 1; a >= 0; --a) {
        k[a] = static_cast<int>(lin % m);
        lin /= m;
    }
    return k;
}

struct CubeScan {
    double value = 0.0;
    std::optional<DyadicCube> cube;
    std::map<int, double> shells;
};

// sup over cubes of 2^{-n j0 pref_exp} sum_j 2^{j shell_exp} inner_j(j0)[k0]^{q_over_p}.
// inner(j0) returns, per shell j, the bracket contents summed onto level j0.
CubeScan scan_cubes(const BasisSpec& spec, const std::vector<int>& levels, double pref_exp, double shell_exp, double q_over_p,
                    const std::function<ShellArrays(int)>& inner) {
    CubeScan best;
    const int n = spec.dim();
    for (int j0 : levels) {
        const ShellArrays terms = inner(j0);
        if (terms.empty()) continue;
        const std::size_t cubes = spec.shell_size(j0);
        std::vector<double> total(cubes, 0.0);
        for (const auto& [j, arr] : terms) {
            const double w = std::exp2(j * shell_exp);
            for (std::size_t i = 0; i < cubes; ++i)
                if (arr[i] > 0.0) total[i] += w * std::pow(arr[i], q_over_p);
        }
        const double pref = std::exp2(-n * j0 * pref_exp);
        for (std::size_t i = 0; i < cubes; ++i) {
            const double v = pref * total[i];
            if (v > best.value) {
                best.value = v;
                best.cube = DyadicCube{j0, unravel_corner(spec, j0, i)};
                best.shells.clear();
                for (const auto& [j, arr] : terms)
                    if (arr[i] > 0.0) best.shells[j] = pref * std::exp2(j * shell_exp) * std::pow(arr[i], q_over_p);
            }
        }
    }
    return best;
}

std::vector<int> all_levels(const BasisSpec& spec) {
    std::vector<int> v;
    for (int j = spec.j_min; j <= spec.j_max; ++j) v.push_back(j);
    return v;
}

std::vector<int> checked_levels(const BasisSpec& spec, const TentOptions& opt, std::vector<std::string>& warnings) {
    if (opt.cube_levels.empty()) return all_levels(spec);
    std::vector<int> v;
    for (int j0 : opt.cube_levels) {
        if (j0 > spec.j_max) {
            warnings.push_back("cube level " + std::to_string(j0) + " is finer than the finest shell " + std::to_string(spec.j_max) +
                               "; skipped");
            continue;
        }
        if (j0 < spec.j_min) {
            warnings.push_back("cube level " + std::to_string(j0) + " is coarser than the window; skipped");
            continue;
        }
        v.push_back(j0);
    }
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    if (v.empty()) throw Error("no usable cube levels");
    return v;
}

double shell_exponent(const SpaceParams& prm, int n) { return prm.q * (prm.gamma1 + n / 2.0 - n / prm.p); }
double prefactor_exponent(const SpaceParams& prm, int n) { return prm.q * (prm.gamma2 / n - 1.0 / prm.p); }

// Per-(j, k) time series of sum_{c, eps != 0} |a(t)|^p.
struct PowerSeries {
    std::map<int, std::vector<std::vector<double>>> by_shell;  // j -> [k][t]
};

PowerSeries power_series(const CoefficientTrajectory& tc, double p) {
    PowerSeries ps;
    const std::size_t nt = tc.size();
    for (std::size_t t = 0; t < nt; ++t) {
        const ShellArrays s = shell_power_sums(tc.sets[t], p);
        for (const auto& [j, arr] : s) {
            auto& series = ps.by_shell[j];
            if (series.empty()) series.assign(arr.size(), std::vector<double>(nt, 0.0));
            for (std::size_t i = 0; i < arr.size(); ++i) series[i][t] = arr[i];
        }
    }
    return ps;
}

}  // namespace

NormReport besov_norm(const CoefficientSet& coeffs, double s, double p, double q) {
    NormReport rep;
    rep.functional = "besov";
    const int n = coeffs.spec().dim();
    const ShellArrays sums = shell_power_sums(coeffs, p);
    double acc = 0.0;
    for (const auto& [j, arr] : sums) {
        double inner = 0.0;
        for (double v : arr) inner += v;
        if (inner == 0.0) continue;
        const double term = std::exp2(q * j * (s + n / 2.0 - n / p)) * std::pow(inner, q / p);
        rep.shells[j] = std::pow(term, 1.0 / q);
        acc += term;
    }
    rep.value = std::pow(acc, 1.0 / q);
    return rep;
}

NormReport besovq_norm(const CoefficientSet& coeffs, const SpaceParams& params) {
    params.validate();
    const BasisSpec& spec = coeffs.spec();
    const int n = spec.dim();
    const ShellArrays sums = shell_power_sums(coeffs, params.p);
    const CubeScan scan = scan_cubes(spec, all_levels(spec), prefactor_exponent(params, n), shell_exponent(params, n),
                                     params.q / params.p, [&](int j0) {
                                         ShellArrays t;
                                         for (const auto& [j, arr] : sums)
                                             if (j >= j0) t[j] = coarsen(spec, j, arr, j0);
                                         return t;
                                     });
    NormReport rep;
    rep.functional = "besovq";
    rep.value = std::pow(scan.value, 1.0 / params.q);
    rep.witness = scan.cube;
    for (const auto& [j, v] : scan.shells) rep.shells[j] = v;
    return rep;
}

double besovq_cube_value(const CoefficientSet& coeffs, const SpaceParams& params, const DyadicCube& cube) {
    const int n = coeffs.spec().dim();
    std::map<int, double> inner;
    coeffs.for_each([&](int, const WaveletIndex& idx, cplx v) {
        if (idx.eps == 0 || !cube_contains(coeffs.spec(), cube, idx.j, idx.k)) return;
        inner[idx.j] += std::pow(std::abs(v), params.p);
    });
    double acc = 0.0;
    for (const auto& [j, s] : inner) acc += std::exp2(j * shell_exponent(params, n)) * std::pow(s, params.q / params.p);
    return std::pow(std::exp2(-n * cube.j0 * prefactor_exponent(params, n)) * acc, 1.0 / params.q);
}

double weighted_log_integral(const std::vector<double>& times, const std::vector<double>& f, double A, double B, double T, double mu,
                             bool* clipped) {
    if (times.empty() || times.size() != f.size()) throw Error("integrand samples do not match the time grid");
    if (!(mu > 0.0)) throw Error("time weight exponent must be positive");
    if (B > times.back()) {
        B = times.back();
        if (clipped) *clipped = true;
    }
    A = std::max(A, 0.0);
    if (!(B > A)) return 0.0;
    auto pw = [&](double t, double e) { return std::pow(t / T, e); };
    double acc = 0.0;
    if (times.front() > 0.0 && A < times.front()) {
        const double hi = std::min(B, times.front());
        acc += f.front() / mu * (pw(hi, mu) - pw(A, mu));
    }
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        const double t0 = times[i], t1 = times[i + 1];
        const double lo = std::max(A, t0), hi = std::min(B, t1);
        if (!(hi > lo)) continue;
        if (t0 == 0.0) {
            const double slope = (f[i + 1] - f[i]) / t1;
            acc += f[i] / mu * (pw(hi, mu) - pw(lo, mu)) + slope * T / (mu + 1.0) * (pw(hi, mu + 1.0) - pw(lo, mu + 1.0));
            continue;
        }
        const double span = std::log(t1 / t0);
        const double h = std::log(hi / lo);
        if (f[i] > 0.0 && f[i + 1] > 0.0) {
            // geometric interpolation: exact for power laws in t
            const double slope = std::log(f[i + 1] / f[i]) / span;
            const double fl = f[i] * std::exp(slope * std::log(lo / t0));
            const double kappa = slope + mu;
            const double kh = kappa * h;
            acc += pw(lo, mu) * fl * (std::abs(kh) < 1e-6 ? h * (1.0 + kh / 2.0) : std::expm1(kh) / kappa);
            continue;
        }
        const double fl = f[i] + (f[i + 1] - f[i]) * std::log(lo / t0) / span;
        const double fh = f[i] + (f[i + 1] - f[i]) * std::log(hi / t0) / span;
        const double s = mu * h;
        double c0, c1;
        if (s < 1e-6) {
            c0 = h * (1.0 + s / 2.0);
            c1 = h * (0.5 + s / 3.0);
        } else {
            c0 = std::expm1(s) / mu;
            c1 = (std::exp(s) * (s - 1.0) + 1.0) / (mu * s);
        }
        acc += pw(lo, mu) * (fl * c0 + (fh - fl) * c1);
    }
    return acc;
}

NormReport tent_functional(TentKind kind, const CoefficientTrajectory& tc, const SpaceParams& params, const TentOptions& opt) {
    params.validate();
    tc.validate();
    const BasisSpec& spec = tc.spec();
    const int n = spec.dim();
    NormReport rep;
    rep.functional = to_string(kind);
    const std::vector<int> levels = checked_levels(spec, opt, rep.warnings);
    const double pe = prefactor_exponent(params, n), se = shell_exponent(params, n), qp = params.q / params.p;
    const double beta = params.beta;
    auto dyadic_time = [&](int j) { return std::exp2(-2.0 * j * beta); };

    if (kind == TentKind::I || kind == TentKind::II) {
        CubeScan best;
        for (std::size_t ti = 0; ti < tc.size(); ++ti) {
            const double t = tc.times[ti];
            if (kind == TentKind::I && t == 0.0) continue;
            const ShellArrays sums = shell_power_sums(tc.sets[ti], params.p);
            const CubeScan scan = scan_cubes(spec, levels, pe, se, qp, [&](int j0) {
                ShellArrays out;
                for (const auto& [j, arr] : sums) {
                    if (j < j0) continue;
                    const double x = t / dyadic_time(j);  // t 2^{2 j beta}
                    if (kind == TentKind::I) {
                        if (x < 1.0) continue;
                        auto c = coarsen(spec, j, arr, j0);
                        const double w = std::pow(x, params.m);
                        for (auto& v : c) v *= w;
                        out[j] = std::move(c);
                    } else {
                        if (x >= 1.0) continue;
                        out[j] = coarsen(spec, j, arr, j0);
                    }
                }
                return out;
            });
            if (scan.value > best.value) {
                best = scan;
                rep.witness_time = t;
            }
        }
        rep.value = best.value;
        rep.witness = best.cube;
        rep.shells = best.shells;
        return rep;
    }

    const PowerSeries ps = power_series(tc, params.p);
    const double t_end = tc.times.back();
    bool clipped = false;
    std::map<int, ShellArrays> by_level;  // j0 -> j -> integrals at level j
    for (const auto& [j, series] : ps.by_shell) {
        const double tj = dyadic_time(j);
        if (kind == TentKind::IV) {
            std::vector<double> integ(series.size(), 0.0);
            for (std::size_t i = 0; i < series.size(); ++i)
                integ[i] = weighted_log_integral(tc.times, series[i], 0.0, tj, tj, params.m_prime, &clipped);
            for (int j0 : levels)
                if (j0 <= j) by_level[j0][j] = coarsen(spec, j, integ, j0);
        } else {
            for (int j0 : levels) {
                if (j0 >= j) continue;  // the interval [2^{-2j beta}, r^{2 beta}] is empty
                const double upper = dyadic_time(j0);
                std::vector<double> integ(series.size(), 0.0);
                for (std::size_t i = 0; i < series.size(); ++i)
                    integ[i] = weighted_log_integral(tc.times, series[i], tj, upper, tj, params.m, &clipped);
                by_level[j0][j] = coarsen(spec, j, integ, j0);
            }
        }
    }
    if (clipped)
        rep.warnings.push_back("time integrals truncated at the last sample t=" + std::to_string(t_end));
    const CubeScan scan = scan_cubes(spec, levels, pe, se, qp, [&](int j0) {
        auto it = by_level.find(j0);
        return it == by_level.end() ? ShellArrays{} : it->second;
    });
    rep.value = scan.value;
    rep.witness = scan.cube;
    rep.shells = scan.shells;
    return rep;
}

NormReport tent_norm(const CoefficientTrajectory& tc, const SpaceParams& params, const TentOptions& opt) {
    NormReport best;
    best.functional = "tent";
    for (TentKind k : {TentKind::I, TentKind::II, TentKind::III, TentKind::IV}) {
        NormReport r = tent_functional(k, tc, params, opt);
        best.parts[r.functional] = r.value;
        for (auto& w : r.warnings)
            if (std::find(best.warnings.begin(), best.warnings.end(), w) == best.warnings.end()) best.warnings.push_back(w);
        if (r.value > best.value || !best.witness) {
            best.value = r.value;
            best.witness = r.witness;
            best.witness_time = r.witness_time;
            best.shells = r.shells;
            best.functional = r.functional;
        }
    }
    return best;
}

double tent_cube_value(TentKind kind, const CoefficientTrajectory& tc, const SpaceParams& params, const DyadicCube& cube,
                       std::size_t time_index) {
    const BasisSpec& spec = tc.spec();
    const int n = spec.dim();
    const double beta = params.beta;
    std::map<int, double> inner;
    if (kind == TentKind::I || kind == TentKind::II) {
        const double t = tc.times.at(time_index);
        tc.sets[time_index].for_each([&](int, const WaveletIndex& idx, cplx v) {
            if (idx.eps == 0 || !cube_contains(spec, cube, idx.j, idx.k)) return;
            const double x = t * std::exp2(2.0 * idx.j * beta);
            if (kind == TentKind::I && x >= 1.0 && t > 0.0) inner[idx.j] += std::pow(std::abs(v), params.p) * std::pow(x, params.m);
            if (kind == TentKind::II && x < 1.0) inner[idx.j] += std::pow(std::abs(v), params.p);
        });
    } else {
        // collect every coefficient that is ever nonzero, then integrate its series
        std::map<std::pair<int, std::vector<int>>, std::vector<double>> series;
        for (std::size_t ti = 0; ti < tc.size(); ++ti) {
            tc.sets[ti].for_each([&](int c, const WaveletIndex& idx, cplx v) {
                if (idx.eps == 0 || !cube_contains(spec, cube, idx.j, idx.k)) return;
                std::vector<int> key{c, static_cast<int>(idx.eps), idx.k[0], idx.k[1], idx.k[2]};
                auto& s = series[{idx.j, key}];
                if (s.empty()) s.assign(tc.size(), 0.0);
                s[ti] = std::pow(std::abs(v), params.p);
            });
        }
        for (const auto& [key, s] : series) {
            const int j = key.first;
            const double tj = std::exp2(-2.0 * j * beta);
            if (kind == TentKind::IV) inner[j] += weighted_log_integral(tc.times, s, 0.0, tj, tj, params.m_prime);
            else if (j > cube.j0) inner[j] += weighted_log_integral(tc.times, s, tj, std::exp2(-2.0 * cube.j0 * beta), tj, params.m);
        }
    }
    double acc = 0.0;
    for (const auto& [j, s] : inner)
        if (s > 0.0) acc += std::exp2(j * shell_exponent(params, n)) * std::pow(s, params.q / params.p);
    return std::exp2(-n * cube.j0 * prefactor_exponent(params, n)) * acc;
}

double besov_infinity_norm(const CoefficientTrajectory& tc, double gamma, double tau, double beta) {
    tc.validate();
    const BasisSpec& spec = tc.spec();
    const int n = spec.dim();
    if (tau < 0.0) throw Error("tau must be nonnegative");
    if (tau == 0.0) {
        double sup = 0.0;
        for (std::size_t ti = 0; ti < tc.size(); ++ti) {
            const double t = tc.times[ti];
            if (t <= 0.0) continue;
            const SpectralField f = meyer::synthesize(tc.sets[ti]);
            const double tw = std::pow(t, -gamma / (2.0 * beta));
            for (int c = 0; c < f.components(); ++c)
                for (int j = spec.j_min; j <= spec.j_max; ++j) {
                    const auto a0 = meyer::analyze_shell(f, c, j, 0u);
                    for (const auto& v : a0) sup = std::max(sup, tw * std::exp2(n * j / 2.0) * std::abs(v));
                }
        }
        return sup;
    }
    double upper = 0.0, lower = 0.0;
    for (std::size_t ti = 0; ti < tc.size(); ++ti) {
        const double t = tc.times[ti];
        if (t <= 0.0) continue;
        tc.sets[ti].for_each([&](int, const WaveletIndex& idx, cplx v) {
            if (idx.eps == 0) return;
            const double x = t * std::exp2(2.0 * idx.j * beta);
            const double base = std::exp2(n * idx.j / 2.0 + idx.j * gamma) * std::abs(v);
            if (x >= 1.0) upper = std::max(upper, std::pow(x, tau) * base);
            else lower = std::max(lower, base);
        });
    }
    return upper + lower;
}

EmbeddingCheck check_embedding(const CoefficientSet& coeffs, const SpaceParams& a, const SpaceParams& b) {
    if (a.gamma1 != b.gamma1 || a.gamma2 != b.gamma2 || a.p != b.p || a.beta != b.beta || a.m != b.m || a.m_prime != b.m_prime)
        throw Error("embedding check compares parameter sets that differ only in q");
    if (a.q > b.q) throw Error("embedding check needs qA <= qB");
    EmbeddingCheck r;
    r.norm_a = besovq_norm(coeffs, a).value;
    r.norm_b = besovq_norm(coeffs, b).value;
    r.holds = r.norm_b <= r.norm_a * (1.0 + 1e-14);
    return r;
}

CoefficientSet reindex_scales(const CoefficientSet& coeffs, int shift, double factor) {
    const BasisSpec& spec = coeffs.spec();
    CoefficientSet out(spec, coeffs.components());
    out.time = coeffs.time;
    coeffs.for_each([&](int c, const WaveletIndex& idx, cplx v) {
        if (idx.eps == 0) throw Error("scaling-function coefficients cannot be reindexed across scales");
        WaveletIndex to{idx.eps, idx.j + shift, idx.k};
        if (!spec.contains(to)) throw Error("reindexed coefficient " + to.str(spec.dim()) + " leaves the window");
        const int m = spec.translations(to.j);
        for (int a = 0; a < spec.dim(); ++a)
            if (to.k[a] >= m) throw Error("reindexed coefficient " + to.str(spec.dim()) + " has no lattice position at the coarser scale");
        out.set(c, to, factor * v);
    });
    return out;
}

ScalingResult scaling_check(const CoefficientSet& coeffs, const SpaceParams& params, int lambda_exp) {
    const int n = coeffs.spec().dim();
    ScalingResult r;
    r.original = besovq_norm(coeffs, params).value;
    const double factor = std::exp2(lambda_exp * (params.gamma2 - params.gamma1 - n / 2.0));
    r.scaled = besovq_norm(reindex_scales(coeffs, lambda_exp, factor), params).value;
    r.ratio = r.original > 0.0 ? r.scaled / r.original : (r.scaled == 0.0 ? 1.0 : INFINITY);
    return r;
}

double qspace_norm_direct(const SpectralField& field, double alpha, double beta) {
    const Grid& g = field.grid();
    if (g.dim > 2) throw Error("direct Q-space norm is limited to n <= 2");
    if (g.size > 64) throw Error("direct Q-space norm is limited to 64 points per axis");
    if (field.components() != 1) throw Error("direct Q-space norm takes a scalar field");
    const std::vector<double> f = field.to_physical_real(0);
    const int n = g.dim;
    const double h = g.box_length() / g.size;
    const double s = alpha - beta + 1.0;
    const double dist_exp = 0.5 * (n + 2.0 * s);  // applied to |x-y|^2
    double best = 0.0;
    for (int j0 = -g.box_exponent;; ++j0) {
        const int cubes = 1 << (j0 + g.box_exponent);
        const int side = g.size / cubes;
        if (side < 2) break;
        const double r = std::exp2(-j0);
        const double pref = std::pow(r, 2.0 * (alpha + beta - 1.0) - n);
        const int ncubes = n == 1 ? cubes : cubes * cubes;
        const int npts = n == 1 ? side : side * side;
        for (int cube = 0; cube < ncubes; ++cube) {
            const int c0 = n == 1 ? cube : cube / cubes;
            const int c1 = n == 1 ? 0 : cube % cubes;
            std::vector<double> vals(npts);
            std::vector<std::array<int, 2>> pos(npts);
            for (int i = 0; i < npts; ++i) {
                const int a = n == 1 ? i : i / side;
                const int b = n == 1 ? 0 : i % side;
                pos[i] = {a, b};
                const std::size_t lin = n == 1 ? static_cast<std::size_t>(c0 * side + a)
                                               : static_cast<std::size_t>((c0 * side + a) * g.size + (c1 * side + b));
                vals[i] = f[lin];
            }
            double acc = 0.0;
            for (int x = 0; x < npts; ++x)
                for (int y = x + 1; y < npts; ++y) {
                    const double dx = pos[x][0] - pos[y][0], dy = pos[x][1] - pos[y][1];
                    const double d2 = (dx * dx + dy * dy) * h * h;
                    const double df = vals[x] - vals[y];
                    acc += 2.0 * df * df / std::pow(d2, dist_exp);
                }
            best = std::max(best, pref * acc * std::pow(h, 2 * n));
        }
    }
    return best;
}

}  // namespace besovq
