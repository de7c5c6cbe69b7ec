#include "besovq/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "besovq/fft.hpp"
#include "besovq/random.hpp"

namespace besovq {

nlohmann::json InequalityCheck::to_json() const {
    return {{"name", name},   {"statement", statement}, {"constant", constant},     {"bound", bound},
            {"cases", cases}, {"holds", holds},         {"worst_case", worst_case}};
}

namespace {

long floor_div(long a, long b) {
    long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

double decay(double d, double N) { return std::pow(1.0 + std::abs(d), -N); }

// Lattice indices at relative level s = j' - j covered by level-(j-8) cube c.
long cube_first(long c, int s) { return c << (8 + s); }
long cube_len(int s) { return 1L << (8 + s); }

struct Tracker {
    InequalityCheck& out;
    void record(double lhs, double rhs, const std::string& where) {
        ++out.cases;
        if (lhs == 0.0) return;
        const double ratio = rhs > 0.0 ? lhs / rhs : std::numeric_limits<double>::infinity();
        if (ratio > out.constant) {
            out.constant = ratio;
            out.worst_case = where;
        }
    }
};

// Random nonnegative sequence: dense |normal| for even trials, a few spikes for odd ones.
std::vector<double> draw(std::size_t len, int trial, Rng& rng) {
    std::vector<double> a(len, 0.0);
    if (trial % 2 == 0) {
        for (auto& v : a) v = std::abs(rng.normal());
    } else {
        for (int i = 0; i < 5; ++i) a[static_cast<std::size_t>(rng.uniform() * len) % len] = std::abs(rng.normal()) + 0.1;
    }
    return a;
}

// out[i] = sum_m a[m] (1 + |i - m|)^{-N}, by zero-padded FFT convolution.
std::vector<double> decay_convolution(const std::vector<double>& a, double N) {
    const std::size_t len = a.size();
    std::size_t size = 1;
    while (size < 2 * len) size <<= 1;
    std::vector<cplx> fa(size), fk(size);
    for (std::size_t i = 0; i < len; ++i) fa[i] = a[i];
    for (std::size_t d = 0; d < len; ++d) {
        fk[d] = decay(static_cast<double>(d), N);
        if (d > 0) fk[size - d] = fk[d];
    }
    fft::forward(fa, 1, static_cast<int>(size));
    fft::forward(fk, 1, static_cast<int>(size));
    for (std::size_t i = 0; i < size; ++i) fa[i] *= fk[i];
    fft::backward(fa, 1, static_cast<int>(size));
    std::vector<double> out(len);
    for (std::size_t i = 0; i < len; ++i) out[i] = fa[i].real() / static_cast<double>(size);
    return out;
}

std::string describe(const std::vector<std::pair<std::string, double>>& kv) {
    std::ostringstream os;
    for (std::size_t i = 0; i < kv.size(); ++i) os << (i ? " " : "") << kv[i].first << "=" << kv[i].second;
    return os.str();
}

}  // namespace

InequalityCheck check_cube_separation(const CombinatoricsOptions& opt) {
    InequalityCheck out{"cube_separation", "(1+|2^{j-j'}k'-k|)^{-N} <= C (1+|w|)^{-N} for Q_{j',k'} in Q^w_{j,k}", 0.0, 0.0, 0, false, {}};
    out.bound = std::pow(2.0, opt.N);
    Tracker tr{out};
    for (int k = -opt.k_bound; k <= opt.k_bound; ++k)
        for (int s = -opt.scale_gap; s <= opt.scale_gap; ++s)
            for (int w = -opt.w_bound; w <= opt.w_bound; ++w) {
                const long c = floor_div(k, 256) + w;
                const double rhs = decay(w, opt.N);
                double best = 0.0;
                long arg = 0;
                for (long kp = cube_first(c, s); kp < cube_first(c + 1, s); ++kp) {
                    const double lhs = decay(std::ldexp(static_cast<double>(kp), -s) - k, opt.N);
                    if (lhs > best) {
                        best = lhs;
                        arg = kp;
                    }
                }
                tr.record(best, rhs, describe({{"k", k}, {"j'-j", s}, {"w", w}, {"k'", static_cast<double>(arg)}}));
                out.cases += static_cast<std::size_t>(cube_len(s)) - 1;
            }
    out.holds = std::isfinite(out.constant) && out.constant <= out.bound;
    return out;
}

InequalityCheck check_cross_cube_separation(const CombinatoricsOptions& opt) {
    InequalityCheck out{"cross_cube_separation",
                        "(1+|2^{j'-j''}k''-k'|)^{-N} <= C 2^{N(j-j')} (1+|w-w'|)^{-N}, 0<j'-j''<=3, |w-w'|>2", 0.0, 0.0, 0, false, {}};
    out.bound = 1.0;
    Tracker tr{out};
    for (int k = -opt.k_bound; k <= opt.k_bound; ++k)
        for (int s1 = -opt.scale_gap; s1 <= opt.scale_gap; ++s1)
            for (int d = 1; d <= 3; ++d) {
                const int s2 = s1 - d;
                if (8 + s2 < 0) continue;
                for (int w = -opt.w_bound; w <= opt.w_bound; ++w)
                    for (int w2 = -opt.w_bound; w2 <= opt.w_bound; ++w2) {
                        if (std::abs(w - w2) <= 2) continue;
                        const long c1 = floor_div(k, 256) + w, c2 = floor_div(k, 256) + w2;
                        // k' in [a1, b1], 2^d k'' in 2^d [a2, b2]; the cubes are disjoint
                        const long a1 = cube_first(c1, s1), b1 = cube_first(c1 + 1, s1) - 1;
                        const long a2 = cube_first(c2, s2) << d, b2 = (cube_first(c2 + 1, s2) - 1) << d;
                        const long gap = c2 > c1 ? a2 - b1 : a1 - b2;
                        const double lhs = decay(static_cast<double>(gap), opt.N);
                        const double rhs = std::pow(2.0, -opt.N * s1) * decay(w - w2, opt.N);
                        tr.record(lhs, rhs, describe({{"k", k}, {"j'-j", s1}, {"j'-j''", d}, {"w", w}, {"w'", w2}}));
                    }
            }
    out.holds = std::isfinite(out.constant) && out.constant <= out.bound;
    return out;
}

InequalityCheck check_holder_split(const CombinatoricsOptions& opt) {
    InequalityCheck out{"holder_split",
                        "sum |u_k'| |v_k''|^{p-1} (1+|2^{j-j'}k'-k|)^{-8N} (1+|k'-k''|)^{-8N} <= C sum_{w,w'} decay "
                        "||u||_{l^p(S^w)} ||v||^{p-1}_{l^p(S^w')}", 0.0, 0.0, 0, false, {}};
    Tracker tr{out};
    Rng rng(opt.seed);
    const long c_lo = floor_div(-opt.k_bound, 256), c_hi = floor_div(opt.k_bound, 256);
    const long first_cube = c_hi - opt.w_bound, last_cube = c_lo + opt.w_bound;
    const double M = 8.0 * opt.N;
    const long R = 64;
    for (double p : opt.p_values)
        for (int s = -opt.scale_gap; s <= opt.scale_gap; ++s)
            for (int trial = 0; trial < opt.trials; ++trial) {
                const long base = cube_first(first_cube, s);
                const std::size_t len = static_cast<std::size_t>((last_cube - first_cube + 1) * cube_len(s));
                const auto u = draw(len, trial, rng);
                auto v = draw(len, trial + 1, rng);
                std::vector<double> vp(len);
                for (std::size_t i = 0; i < len; ++i) vp[i] = std::pow(v[i], p - 1.0);
                std::vector<double> G(len, 0.0);  // (1+|d|)^{-8N} is below 1e-28 past R
                for (std::size_t i = 0; i < len; ++i) {
                    if (u[i] == 0.0) continue;
                    const long lo = std::max<long>(0, static_cast<long>(i) - R), hi = std::min<long>(static_cast<long>(len) - 1, static_cast<long>(i) + R);
                    for (long m = lo; m <= hi; ++m) G[i] += vp[m] * decay(static_cast<double>(m - static_cast<long>(i)), M);
                }
                std::vector<double> U, V;
                for (long c = first_cube; c <= last_cube; ++c) {
                    double su = 0.0, sv = 0.0;
                    for (long i = (c - first_cube) * cube_len(s); i < (c - first_cube + 1) * cube_len(s); ++i) {
                        su += std::pow(u[i], p);
                        sv += std::pow(v[i], p);
                    }
                    U.push_back(std::pow(su, 1.0 / p));
                    V.push_back(std::pow(sv, (p - 1.0) / p));
                }
                for (int k = -opt.k_bound; k <= opt.k_bound; ++k) {
                    double lhs = 0.0;
                    for (std::size_t i = 0; i < len; ++i)
                        if (u[i] != 0.0) lhs += u[i] * G[i] * decay(std::ldexp(static_cast<double>(base + static_cast<long>(i)), -s) - k, M);
                    const long c = floor_div(k, 256);
                    double ru = 0.0, rv = 0.0;
                    for (int w = -opt.w_bound; w <= opt.w_bound; ++w) {
                        const long idx = c + w - first_cube;
                        if (idx < 0 || idx >= static_cast<long>(U.size())) continue;
                        ru += decay(w, opt.N) * U[idx];
                        rv += decay(w, opt.N) * V[idx];
                    }
                    tr.record(lhs, ru * rv, describe({{"p", p}, {"j'-j", s}, {"trial", trial}, {"k", k}}));
                }
            }
    out.holds = std::isfinite(out.constant) && out.cases > 0;
    return out;
}

InequalityCheck check_cube_sum(const CombinatoricsOptions& opt) {
    InequalityCheck out{"cube_sum",
                        "sum_{k in Q_r} (sum_{j'} sum_w decay ||a_j'||_{l^p(S^{w,j'}_{j,k})})^p <= C sum_{j'} 2^{delta(j'-j)} "
                        "sum_w decay ||a_j'||^p_{l^p(S^{w,j'}_r)}", 0.0, 0.0, 0, false, {}};
    Tracker tr{out};
    Rng rng(opt.seed + 1);
    // Q_r is the level j-2 cube with index 0, so k runs over [0, 4); its side-2^8 r
    // parent is the level j-10 cube with index 0.
    const int W = opt.w_bound;
    for (double p : opt.p_values)
        for (int trial = 0; trial < 4 * opt.trials; ++trial) {
            double lhs_inner = 0.0, rhs = 0.0;
            for (int s = -opt.scale_gap; s <= opt.scale_gap; ++s) {
                const long big = 1L << (10 + s);
                const long base = -W * big;
                const std::size_t len = static_cast<std::size_t>((2 * W + 1) * big);
                const auto a = draw(len, trial, rng);
                for (int w = -W; w <= W; ++w) {
                    double sum = 0.0;
                    for (long i = cube_first(w, s); i < cube_first(w + 1, s); ++i) sum += std::pow(a[i - base], p);
                    lhs_inner += decay(w, opt.N) * std::pow(sum, 1.0 / p);
                    double bsum = 0.0;
                    for (long i = w * big; i < (w + 1) * big; ++i) bsum += std::pow(a[i - base], p);
                    rhs += std::exp2(opt.delta * s) * decay(w, opt.N) * bsum;
                }
            }
            const double lhs = 4.0 * std::pow(lhs_inner, p);
            tr.record(lhs, rhs, describe({{"p", p}, {"trial", trial}}));
        }
    out.holds = std::isfinite(out.constant) && out.cases > 0;
    return out;
}

InequalityCheck check_product_split(const CombinatoricsOptions& opt) {
    InequalityCheck out{"product_split",
                        "sum |u_k'| |v_k''| (1+|2^{j-j'}k'-k|)^{-N} (1+|k'-k''|)^{-N} <= C sum_{w,w'} (1+|w|)^{-N} (1+|w-w'|)^{-N} "
                        "2^{(j'-j)(1-2/p)} ||u||_{l^p(S^w)} ||v||_{l^p(S^w')}, j < j'+2", 0.0, 0.0, 0, false, {}};
    Tracker tr{out};
    Rng rng(opt.seed + 2);
    const long c_lo = floor_div(-opt.k_bound, 256), c_hi = floor_div(opt.k_bound, 256);
    const long first_cube = c_hi - opt.w_bound, last_cube = c_lo + opt.w_bound;
    for (double p : opt.p_values)
        for (int s = -1; s <= opt.scale_gap; ++s)
            for (int trial = 0; trial < opt.trials; ++trial) {
                const long base = cube_first(first_cube, s);
                const std::size_t len = static_cast<std::size_t>((last_cube - first_cube + 1) * cube_len(s));
                const auto u = draw(len, trial, rng);
                const auto v = draw(len, trial + 1, rng);
                const auto G = decay_convolution(v, opt.N);
                std::vector<double> U, V;
                for (long c = first_cube; c <= last_cube; ++c) {
                    double su = 0.0, sv = 0.0;
                    for (long i = (c - first_cube) * cube_len(s); i < (c - first_cube + 1) * cube_len(s); ++i) {
                        su += std::pow(u[i], p);
                        sv += std::pow(v[i], p);
                    }
                    U.push_back(std::pow(su, 1.0 / p));
                    V.push_back(std::pow(sv, 1.0 / p));
                }
                const double scale = std::exp2(s * (1.0 - 2.0 / p));
                for (int k = -opt.k_bound; k <= opt.k_bound; ++k) {
                    double lhs = 0.0;
                    for (std::size_t i = 0; i < len; ++i)
                        if (u[i] != 0.0) lhs += u[i] * G[i] * decay(std::ldexp(static_cast<double>(base + static_cast<long>(i)), -s) - k, opt.N);
                    const long c = floor_div(k, 256);
                    double rhs = 0.0;
                    for (int w = -opt.w_bound; w <= opt.w_bound; ++w) {
                        const long iu = c + w - first_cube;
                        if (iu < 0 || iu >= static_cast<long>(U.size())) continue;
                        for (int w2 = -opt.w_bound; w2 <= opt.w_bound; ++w2) {
                            const long iv = c + w2 - first_cube;
                            if (iv < 0 || iv >= static_cast<long>(V.size())) continue;
                            rhs += decay(w, opt.N) * decay(w - w2, opt.N) * scale * U[iu] * V[iv];
                        }
                    }
                    tr.record(lhs, rhs, describe({{"p", p}, {"j'-j", s}, {"trial", trial}, {"k", k}}));
                }
            }
    out.holds = std::isfinite(out.constant) && out.cases > 0;
    return out;
}

std::vector<InequalityCheck> run_combinatorics(const CombinatoricsOptions& opt) {
    return {check_cube_separation(opt), check_cross_cube_separation(opt), check_holder_split(opt), check_cube_sum(opt),
            check_product_split(opt)};
}

}  // namespace besovq
