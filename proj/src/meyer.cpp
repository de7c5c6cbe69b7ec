#include "besovq/meyer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <set>

#include "besovq/fft.hpp"

namespace besovq::meyer {

double ramp(double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / x);
    const double b = std::exp(-1.0 / (1.0 - x));
    return a / (a + b);
}

double psi0(double xi) {
    const double ax = std::abs(xi);
    if (ax <= 2.0 * kPi / 3.0) return 1.0;
    if (ax >= 4.0 * kPi / 3.0) return 0.0;
    return std::cos(0.5 * kPi * ramp(3.0 * ax / (2.0 * kPi) - 1.0));
}

double omega(double xi) {
    const double hi = psi0(0.5 * xi);
    const double lo = psi0(xi);
    const double radicand = hi * hi - lo * lo;
    if (radicand < -1e-14) throw Error("frequency profile is not monotone: negative radicand at xi=" + std::to_string(xi));
    return radicand <= 0.0 ? 0.0 : std::sqrt(radicand);
}

cplx psi_hat(int bit, double xi) {
    if (bit == 0) return psi0(xi);
    return omega(xi) * std::polar(1.0, -0.5 * xi);
}

cplx wavelet_hat(unsigned eps, std::span<const double> xi) {
    cplx v = 1.0;
    for (std::size_t a = 0; a < xi.size(); ++a) v *= psi_hat(static_cast<int>((eps >> a) & 1u), xi[a]);
    return v;
}

namespace {

// Nonzero entries of the 1-D factor Psi^bit(2 pi m / M) over the grid's modes.
struct AxisFactor {
    std::vector<int> slot;
    std::vector<int> residue;  // m mod M
    std::vector<cplx> value;
};

const AxisFactor& axis_factor(const Grid& grid, int j, int bit) {
    static std::mutex mu;
    static std::map<std::tuple<int, int, int, int>, AxisFactor> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(grid.size, grid.box_exponent, j, bit);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
    const int m_count = 1 << (j + grid.box_exponent);
    AxisFactor f;
    for (int i = 0; i < grid.size; ++i) {
        const int m = grid.mode(i);
        const cplx v = psi_hat(bit, 2.0 * kPi * m / m_count);
        if (v == cplx{}) continue;
        if (grid.is_nyquist(i)) throw Error("wavelet scale " + std::to_string(j) + " reaches the Nyquist frequency of the grid");
        int r = m % m_count;
        if (r < 0) r += m_count;
        f.slot.push_back(i);
        f.residue.push_back(r);
        f.value.push_back(v);
    }
    return cache.emplace(key, std::move(f)).first->second;
}

template <typename Fn>
void for_each_support(const Grid& grid, int j, unsigned eps, int m_count, Fn&& fn) {
    const AxisFactor* axes[3] = {nullptr, nullptr, nullptr};
    for (int a = 0; a < grid.dim; ++a) axes[a] = &axis_factor(grid, j, static_cast<int>((eps >> a) & 1u));
    const std::size_t n0 = axes[0]->slot.size();
    const std::size_t n1 = grid.dim > 1 ? axes[1]->slot.size() : 1;
    const std::size_t n2 = grid.dim > 2 ? axes[2]->slot.size() : 1;
    const std::size_t gs = static_cast<std::size_t>(grid.size);
    const std::size_t ms = static_cast<std::size_t>(m_count);
    for (std::size_t a = 0; a < n0; ++a) {
        for (std::size_t b = 0; b < n1; ++b) {
            for (std::size_t c = 0; c < n2; ++c) {
                std::size_t lin = static_cast<std::size_t>(axes[0]->slot[a]);
                std::size_t res = static_cast<std::size_t>(axes[0]->residue[a]);
                cplx w = axes[0]->value[a];
                if (grid.dim > 1) {
                    lin = lin * gs + static_cast<std::size_t>(axes[1]->slot[b]);
                    res = res * ms + static_cast<std::size_t>(axes[1]->residue[b]);
                    w *= axes[1]->value[b];
                }
                if (grid.dim > 2) {
                    lin = lin * gs + static_cast<std::size_t>(axes[2]->slot[c]);
                    res = res * ms + static_cast<std::size_t>(axes[2]->residue[c]);
                    w *= axes[2]->value[c];
                }
                fn(lin, res, w);
            }
        }
    }
}

}  // namespace

std::vector<cplx> analyze_shell(const SpectralField& field, int c, int j, unsigned eps) {
    const Grid& grid = field.grid();
    if (j < -grid.box_exponent) throw Error("scale coarser than the box");
    const int m_count = 1 << (j + grid.box_exponent);
    std::vector<cplx> folded(ipow(static_cast<std::size_t>(m_count), grid.dim));
    const auto comp = field.component(c);
    for_each_support(grid, j, eps, m_count, [&](std::size_t lin, std::size_t res, cplx w) {
        folded[res] += comp[lin] * std::conj(w);
    });
    fft::backward(folded, grid.dim, m_count);
    const double scale = std::pow(2.0, -0.5 * grid.dim * j);
    for (auto& v : folded) v *= scale;
    return folded;
}

void synthesize_shell(std::span<const cplx> coeffs, int j, unsigned eps, SpectralField& out, int c) {
    const Grid& grid = out.grid();
    const int m_count = 1 << (j + grid.box_exponent);
    std::vector<cplx> spectrum(coeffs.begin(), coeffs.end());
    if (spectrum.size() != ipow(static_cast<std::size_t>(m_count), grid.dim)) throw Error("shell coefficient count mismatch");
    fft::forward(spectrum, grid.dim, m_count);
    const double scale = std::pow(2.0, -0.5 * grid.dim * j) / std::pow(grid.box_length(), grid.dim);
    auto comp = out.component(c);
    for_each_support(grid, j, eps, m_count, [&](std::size_t lin, std::size_t res, cplx w) {
        comp[lin] += scale * w * spectrum[res];
    });
}

CoefficientSet analyze(const SpectralField& field, const BasisSpec& spec) {
    if (!(field.grid() == spec.grid)) throw Error("field grid does not match basis grid");
    CoefficientSet out(spec, field.components());
    for (int c = 0; c < field.components(); ++c) {
        out.set_shell(c, 0u, spec.j_min, analyze_shell(field, c, spec.j_min, 0u));
        for (int j = spec.j_min; j <= spec.j_max; ++j)
            for (unsigned eps = 1; eps < spec.eps_count(); ++eps) out.set_shell(c, eps, j, analyze_shell(field, c, j, eps));
    }
    return out;
}

SpectralField synthesize(const CoefficientSet& coeffs) {
    const BasisSpec& spec = coeffs.spec();
    SpectralField out(spec.grid, coeffs.components());
    for (int c = 0; c < coeffs.components(); ++c) {
        for (const auto& [key, shell] : coeffs.shells(c)) {
            const auto values = shell.to_dense();
            synthesize_shell(values, key.j, key.eps, out, c);
        }
    }
    return out;
}

int covered_mode_bound(const BasisSpec& spec) {
    const int m_next = 1 << (spec.j_max + 1 + spec.grid.box_exponent);
    return m_next / 3;
}

AnalysisReport analyze_with_report(const SpectralField& field, const BasisSpec& spec) {
    AnalysisReport rep{analyze(field, spec), {}, 0.0};
    SpectralField residual = field - synthesize(rep.coeffs);
    const double norm = field.l2_norm();
    rep.residual_fraction = norm > 0.0 ? residual.l2_norm() / norm : 0.0;
    if (rep.residual_fraction <= 1e-12) return rep;
    const Grid& grid = spec.grid;
    const double floor = 1e-14 * residual.max_coefficient();
    std::set<int> shells;
    for (int c = 0; c < residual.components(); ++c) {
        const auto comp = residual.component(c);
        for (std::size_t lin = 0; lin < comp.size(); ++lin) {
            if (std::abs(comp[lin]) <= floor) continue;
            const IVec idx = grid.unravel(lin);
            int mmax = 0;
            for (int a = 0; a < grid.dim; ++a) mmax = std::max(mmax, std::abs(grid.mode(idx[a])));
            // shell j carries |m|_inf in (M_j / 3, 4 M_j / 3), M_j = 2^(j + J)
            for (int j = spec.j_max + 1; (1 << (j + grid.box_exponent)) < 3 * mmax; ++j)
                if (3 * mmax < 4 * (1 << (j + grid.box_exponent))) shells.insert(j);
        }
    }
    rep.truncated_shells.assign(shells.begin(), shells.end());
    return rep;
}

SpectralField project_P(const SpectralField& field, int j) {
    const Grid& grid = field.grid();
    SpectralField out(grid, field.components());
    for (int c = 0; c < field.components(); ++c) {
        if (j <= -grid.box_exponent) {
            out.at(c, 0) = field.at(c, 0);
            continue;
        }
        const auto coeffs = analyze_shell(field, c, j, 0u);
        synthesize_shell(coeffs, j, 0u, out, c);
    }
    return out;
}

SpectralField project_Q(const SpectralField& field, int j) {
    const Grid& grid = field.grid();
    SpectralField out(grid, field.components());
    const unsigned eps_count = 1u << grid.dim;
    for (int c = 0; c < field.components(); ++c) {
        for (unsigned eps = 1; eps < eps_count; ++eps) {
            const auto coeffs = analyze_shell(field, c, j, eps);
            synthesize_shell(coeffs, j, eps, out, c);
        }
    }
    return out;
}

}  // namespace besovq::meyer
