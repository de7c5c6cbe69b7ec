#include "besovq/mild_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "besovq/fft.hpp"
#include "besovq/initial_data.hpp"
#include "besovq/meyer.hpp"
#include "besovq/operators.hpp"
#include "besovq/parallel.hpp"
#include "besovq/semigroup.hpp"

namespace besovq {

void SolverConfig::validate() const {
    if (!(beta > 0.5)) throw Error("solver needs beta > 1/2");
    if (quad_points < 4) throw Error("solver needs quad_points >= 4");
    if (max_iter < 1) throw Error("solver needs max_iter >= 1");
    if (samples_per_octave < 1) throw Error("solver needs samples_per_octave >= 1");
    if (!(t_final > 0.0)) throw Error("solver needs t_final > 0");
    spec.validate();
    space.validate();
    if (!(t_final > t_min())) throw Error("t_final lies below the finest diffusive time " + std::to_string(t_min()));
}

double SolverConfig::t_min() const { return std::pow(spec.grid.k0() * spec.grid.size / 2.0, -2.0 * beta); }

std::vector<double> SolverConfig::sample_times() const { return tent_time_grid(spec, beta, t_min(), t_final, samples_per_octave); }

CoefficientTrajectory Trajectory::coefficients(const BasisSpec& spec) const {
    CoefficientTrajectory tc;
    tc.times = times;
    tc.sets.resize(fields.size());
    parallel_for(fields.size(), [&](std::size_t i) {
        tc.sets[i] = meyer::analyze(fields[i], spec);
        tc.sets[i].time = times[i];
    });
    return tc;
}

void Trajectory::validate() const {
    if (times.empty() || times.size() != fields.size()) throw Error("trajectory times and fields differ in length");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < 0.0 || (i > 0 && !(times[i] > times[i - 1]))) throw Error("trajectory times must be increasing and >= 0");
        const SpectralField& f = fields[i];
        if (f.components() == f.grid().dim && f.grid().dim >= 2) {
            const double div = divergence(f).sup_norm();
            if (div > 1e-8 * std::max(1.0, f.sup_norm() * f.grid().k0() * f.grid().size))
                throw Error("trajectory field at t=" + std::to_string(times[i]) + " is not divergence-free");
        }
    }
}

Trajectory semigroup_orbit(const SpectralField& a, double beta, const std::vector<double>& times) {
    Trajectory tr;
    tr.times = times;
    tr.fields.resize(times.size());
    parallel_for(times.size(), [&](std::size_t i) { tr.fields[i] = apply_semigroup(a, beta, times[i]); });
    return tr;
}

std::vector<double> dissipation_rates(const Grid& grid, double beta) {
    SpectralField probe(grid, 1);
    std::vector<double> lambda(grid.points());
    for (std::size_t lin = 0; lin < lambda.size(); ++lin) {
        const auto xi = probe.wavevector(lin);
        const double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        lambda[lin] = r2 == 0.0 ? 0.0 : std::pow(r2, beta);
    }
    return lambda;
}

namespace {

bool dealiased(const Grid& g, std::size_t lin) {
    const int keep = (g.size - 1) / 3;
    const IVec idx = g.unravel(lin);
    for (int a = 0; a < g.dim; ++a)
        if (std::abs(g.mode(idx[a])) > keep || g.is_nyquist(idx[a])) return false;
    return true;
}

SpectralField truncate_two_thirds(const SpectralField& f) {
    SpectralField out = f;
    for (int c = 0; c < f.components(); ++c) {
        auto comp = out.component(c);
        for (std::size_t lin = 0; lin < comp.size(); ++lin)
            if (!dealiased(f.grid(), lin)) comp[lin] = 0.0;
    }
    return out;
}

std::vector<std::vector<cplx>> physical(const SpectralField& f) {
    std::vector<std::vector<cplx>> out(static_cast<std::size_t>(f.components()));
    for (int c = 0; c < f.components(); ++c) out[c] = f.to_physical(c);
    return out;
}

SpectralField from_physical_complex(const Grid& g, std::vector<cplx> values) {
    SpectralField f(g, 1);
    fft::forward(values, g.dim, g.size);
    const double scale = 1.0 / static_cast<double>(g.points());
    auto comp = f.component(0);
    for (std::size_t i = 0; i < values.size(); ++i) comp[i] = values[i] * scale;
    return f;
}

}  // namespace

SpectralField pointwise_product(const SpectralField& a, int ca, const SpectralField& b, int cb) {
    if (!(a.grid() == b.grid())) throw Error("product of fields on different grids");
    auto x = a.to_physical(ca);
    const auto y = b.to_physical(cb);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] *= y[i];
    return from_physical_complex(a.grid(), std::move(x));
}

SpectralField nonlinear_term(const SpectralField& u, const SpectralField& v) {
    const Grid& g = u.grid();
    const int n = g.dim;
    if (!(g == v.grid()) || u.components() != n || v.components() != n) throw Error("nonlinear term needs two n-component fields on one grid");
    const auto pu = physical(truncate_two_thirds(u));
    const auto pv = physical(truncate_two_thirds(v));
    SpectralField out(g, n);
    std::vector<cplx> w(g.points());
    for (int l = 0; l < n; ++l) {
        for (int i = 0; i < n; ++i) {
            for (std::size_t p = 0; p < w.size(); ++p) w[p] = pu[l][p] * pv[i][p];
            const SpectralField prod = from_physical_complex(g, w);
            auto dst = out.component(i);
            const auto src = prod.component(0);
            for (std::size_t lin = 0; lin < dst.size(); ++lin) {
                if (!dealiased(g, lin)) continue;
                dst[lin] += cplx(0.0, out.wavevector(lin, true)[l]) * src[lin];
            }
        }
    }
    return leray_project(out);
}

void gauss_legendre(int count, std::vector<double>& nodes, std::vector<double>& weights) {
    if (count < 1) throw Error("Gauss-Legendre needs at least one node");
    nodes.assign(static_cast<std::size_t>(count), 0.0);
    weights.assign(static_cast<std::size_t>(count), 0.0);
    for (int i = 0; i < count; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (count + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= count; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (count == 1) p0 = 1.0;
            dp = count * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        nodes[i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

std::vector<std::array<double, 2>> duhamel_blocks(double t, double t_min) {
    if (!(t > 0.0)) return {};
    const int K = std::max(1, static_cast<int>(std::ceil(std::log2(t / t_min))) + 3);
    std::vector<std::array<double, 2>> blocks;
    blocks.push_back({0.0, std::ldexp(t, -(K + 1))});
    for (int k = K; k >= 1; --k) blocks.push_back({std::ldexp(t, -(k + 1)), std::ldexp(t, -k)});
    for (int k = 1; k <= K; ++k) blocks.push_back({t - std::ldexp(t, -k), t - std::ldexp(t, -(k + 1))});
    blocks.push_back({t - std::ldexp(t, -(K + 1)), t});
    return blocks;
}

FieldInterpolant::FieldInterpolant(const std::vector<double>& times, const std::vector<SpectralField>& values)
    : times_(times), values_(values) {
    if (times_.empty() || times_.size() != values_.size()) throw Error("interpolant needs matching samples");
    for (std::size_t i = 1; i < times_.size(); ++i)
        if (!(times_[i] > times_[i - 1])) throw Error("interpolant times must be increasing");
    logt_.resize(times_.size(), -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < times_.size(); ++i)
        if (times_[i] > 0.0) logt_[i] = std::log(times_[i]);
    const std::size_t first = times_[0] > 0.0 ? 0 : 1;
    slopes_.assign(times_.size(), SpectralField(values_[0].grid(), values_[0].components()));
    const std::size_t m = times_.size();
    if (m < first + 2) return;
    const std::size_t len = values_[0].raw().size();
    // Three-point slopes in log t: linear in the samples, exact for a + b log t.
    parallel_for(len, [&](std::size_t s) {
        auto val = [&](std::size_t i) { return values_[i].raw()[s]; };
        auto delta = [&](std::size_t i) { return (val(i + 1) - val(i)) / (logt_[i + 1] - logt_[i]); };
        for (std::size_t i = first; i < m; ++i) {
            cplx d;
            if (m == first + 2) {
                d = delta(first);
            } else if (i == first) {
                const double h0 = logt_[i + 1] - logt_[i], h1 = logt_[i + 2] - logt_[i + 1];
                d = ((2.0 * h0 + h1) * delta(i) - h0 * delta(i + 1)) / (h0 + h1);
            } else if (i + 1 == m) {
                const double h0 = logt_[i - 1] - logt_[i - 2], h1 = logt_[i] - logt_[i - 1];
                d = ((2.0 * h1 + h0) * delta(i - 1) - h1 * delta(i - 2)) / (h0 + h1);
            } else {
                const double h0 = logt_[i] - logt_[i - 1], h1 = logt_[i + 1] - logt_[i];
                d = (h1 * delta(i - 1) + h0 * delta(i)) / (h0 + h1);
            }
            slopes_[i].raw()[s] = d;
        }
    });
}

FieldInterpolant::Stencil FieldInterpolant::stencil(double t) const {
    if (t < 0.0 || t > times_.back() * (1.0 + 1e-12)) throw Error("interpolation time " + std::to_string(t) + " outside the sampled range");
    Stencil st;
    const std::size_t first = times_[0] > 0.0 ? 0 : 1;
    if (first >= times_.size() || t <= times_[first]) {
        const std::size_t p = std::min(first, times_.size() - 1);
        if (first == 0 || p == 0) {
            st.lo = st.hi = p;
            st.c_lo = 1.0;
            return st;
        }
        const double x = t / times_[p];
        st.lo = 0;
        st.hi = p;
        st.c_lo = 1.0 - x;
        st.c_hi = x;
        return st;
    }
    std::size_t hi = static_cast<std::size_t>(std::upper_bound(times_.begin(), times_.end(), t) - times_.begin());
    if (hi >= times_.size()) hi = times_.size() - 1;
    const std::size_t lo = hi - 1;
    const double h = logt_[hi] - logt_[lo];
    const double x = (std::log(t) - logt_[lo]) / h;
    const double x2 = x * x, x3 = x2 * x;
    st.lo = lo;
    st.hi = hi;
    st.c_lo = 2.0 * x3 - 3.0 * x2 + 1.0;
    st.c_hi = -2.0 * x3 + 3.0 * x2;
    st.d_lo = h * (x3 - 2.0 * x2 + x);
    st.d_hi = h * (x3 - x2);
    return st;
}

SpectralField FieldInterpolant::operator()(double t) const {
    const Stencil st = stencil(t);
    SpectralField out(values_[0].grid(), values_[0].components());
    auto dst = out.raw();
    const auto v0 = values_[st.lo].raw(), v1 = values_[st.hi].raw();
    const auto d0 = slopes_[st.lo].raw(), d1 = slopes_[st.hi].raw();
    for (std::size_t s = 0; s < dst.size(); ++s) dst[s] = st.c_lo * v0[s] + st.c_hi * v1[s] + st.d_lo * d0[s] + st.d_hi * d1[s];
    return out;
}

void FieldInterpolant::accumulate(double s, double weight, double t_target, std::span<const double> lambda, SpectralField& out) const {
    const Stencil st = stencil(s);
    const std::size_t pts = out.points();
    const double lag = t_target - s;
    for (int c = 0; c < out.components(); ++c) {
        auto dst = out.component(c);
        const auto v0 = values_[st.lo].component(c), v1 = values_[st.hi].component(c);
        const auto d0 = slopes_[st.lo].component(c), d1 = slopes_[st.hi].component(c);
        for (std::size_t p = 0; p < pts; ++p) {
            const double decay = lag * lambda[p];
            if (decay > 745.0) continue;
            const cplx v = st.c_lo * v0[p] + st.c_hi * v1[p] + st.d_lo * d0[p] + st.d_hi * d1[p];
            if (v == cplx{}) continue;
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw Error("non-finite Duhamel integrand at node s=" + std::to_string(s));
            dst[p] += weight * std::exp(-decay) * v;
        }
    }
}

namespace {

SpectralField duhamel_integral(const FieldInterpolant& F, const SpectralField& shape, double t, const std::vector<double>& lambda,
                               const SolverConfig& cfg) {
    SpectralField out(shape.grid(), shape.components());
    if (t <= 0.0) return out;
    std::vector<double> x, w;
    gauss_legendre(cfg.quad_points, x, w);
    for (const auto& [lo, hi] : duhamel_blocks(t, cfg.t_min())) {
        const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
        for (std::size_t q = 0; q < x.size(); ++q) F.accumulate(mid + half * x[q], half * w[q], t, lambda, out);
    }
    return out;
}

std::vector<SpectralField> nonlinear_samples(const Trajectory& u, const Trajectory& v) {
    if (u.times != v.times) throw Error("bilinear form needs trajectories on the same times");
    std::vector<SpectralField> F(u.size());
    parallel_for(u.size(), [&](std::size_t i) { F[i] = nonlinear_term(u.fields[i], v.fields[i]); });
    return F;
}

}  // namespace

Trajectory duhamel_bilinear(const Trajectory& u, const Trajectory& v, const SolverConfig& cfg) {
    const std::vector<SpectralField> F = nonlinear_samples(u, v);
    const FieldInterpolant interp(u.times, F);
    const auto lambda = dissipation_rates(u.fields[0].grid(), cfg.beta);
    Trajectory out;
    out.times = u.times;
    out.fields.resize(u.size());
    parallel_for(u.size(), [&](std::size_t i) { out.fields[i] = duhamel_integral(interp, F[0], u.times[i], lambda, cfg); });
    return out;
}

SpectralField duhamel_bilinear_at(const Trajectory& u, const Trajectory& v, double t, const SolverConfig& cfg) {
    if (t < 0.0 || t > u.times.back() * (1.0 + 1e-12)) throw Error("Duhamel time " + std::to_string(t) + " beyond the trajectory range");
    const std::vector<SpectralField> F = nonlinear_samples(u, v);
    const FieldInterpolant interp(u.times, F);
    return duhamel_integral(interp, F[0], t, dissipation_rates(u.fields[0].grid(), cfg.beta), cfg);
}

SpectralField ParaproductSplit::total() const {
    SpectralField out = mean_term;
    for (const auto& p : parts) out += p;
    return out;
}

namespace {

int max_mode(const SpectralField& f) {
    const Grid& g = f.grid();
    const double floor = 1e-14 * f.max_coefficient();
    int m = 0;
    for (int c = 0; c < f.components(); ++c) {
        const auto comp = f.component(c);
        for (std::size_t lin = 0; lin < comp.size(); ++lin) {
            if (std::abs(comp[lin]) <= floor) continue;
            const IVec idx = g.unravel(lin);
            for (int a = 0; a < g.dim; ++a) m = std::max(m, std::abs(g.mode(idx[a])));
        }
    }
    return m;
}

SpectralField resample(const SpectralField& f, const Grid& target) {
    SpectralField out(target, f.components());
    const Grid& g = f.grid();
    for (int c = 0; c < f.components(); ++c) {
        const auto src = f.component(c);
        for (std::size_t lin = 0; lin < src.size(); ++lin) {
            if (src[lin] == cplx{}) continue;
            const IVec idx = g.unravel(lin);
            IVec t{0, 0, 0};
            bool fits = true;
            for (int a = 0; a < g.dim; ++a) {
                const int m = g.mode(idx[a]);
                if (2 * std::abs(m) >= target.size) fits = false;
                t[a] = target.slot(m);
            }
            if (fits) out.at(c, target.ravel(t)) += src[lin];
        }
    }
    return out;
}

}  // namespace

ParaproductSplit paraproduct_split(const SpectralField& u, const SpectralField& v, const BasisSpec& spec) {
    if (u.components() != 1 || v.components() != 1) throw Error("paraproduct split takes scalar fields");
    if (!(u.grid() == spec.grid) || !(v.grid() == spec.grid)) throw Error("paraproduct fields do not match the basis grid");
    if (spec.j_min != -spec.grid.box_exponent) throw Error("paraproduct split needs j_min equal to -box_exponent");
    ParaproductSplit out;
    const int mmax = std::max(max_mode(u), max_mode(v));
    const Grid& g0 = spec.grid;
    Grid work = g0;
    BasisSpec wspec = spec;
    while (mmax > meyer::covered_mode_bound(wspec) || 2 * mmax >= work.size / 2) {
        work.size *= 2;
        wspec = BasisSpec::for_grid(work);
    }
    out.grid = work;
    const SpectralField uw = work == g0 ? u : resample(u, work);
    const SpectralField vw = work == g0 ? v : resample(v, work);
    if (!(work == g0)) {
        out.warnings.push_back("inputs exceed the window or the product band; split computed on a " + std::to_string(work.size) +
                               "-point grid");
    }
    if (2 * mmax >= g0.size / 2) {
        const SpectralField exact = pointwise_product(uw, 0, vw, 0);
        double total = 0.0, lost = 0.0;
        const auto comp = exact.component(0);
        for (std::size_t lin = 0; lin < comp.size(); ++lin) {
            const IVec idx = work.unravel(lin);
            total += std::norm(comp[lin]);
            for (int a = 0; a < work.dim; ++a)
                if (2 * std::abs(work.mode(idx[a])) >= g0.size) {
                    lost += std::norm(comp[lin]);
                    break;
                }
        }
        out.aliasing_fraction = total > 0.0 ? std::sqrt(lost / total) : 0.0;
        if (out.aliasing_fraction > 0.0)
            out.warnings.push_back("product aliases on the input grid: fraction " + std::to_string(out.aliasing_fraction));
    }

    const int J = work.box_exponent;
    const std::size_t pts = work.points();
    std::vector<std::vector<cplx>> qu, qv;
    for (int j = wspec.j_min; j <= wspec.j_max; ++j) {
        qu.push_back(meyer::project_Q(uw, j).to_physical(0));
        qv.push_back(meyer::project_Q(vw, j).to_physical(0));
    }
    const cplx mu = u.mean(0), mv = v.mean(0);
    const int count = wspec.j_max - wspec.j_min + 1;
    std::array<std::vector<cplx>, 5> acc;
    for (auto& a : acc) a.assign(pts, 0.0);
    // low parts P_{j-3} u, P_{j-3} v as running sums over coarser shells
    std::vector<cplx> low_u(pts, mu), low_v(pts, mv);
    for (int jj = 0; jj < count; ++jj) {
        const int j = wspec.j_min + jj;
        if (j - 3 > -J && jj >= 4) {
            for (std::size_t p = 0; p < pts; ++p) {
                low_u[p] += qu[jj - 4][p];
                low_v[p] += qv[jj - 4][p];
            }
        }
        for (std::size_t p = 0; p < pts; ++p) {
            acc[0][p] += low_u[p] * qv[jj][p];
            acc[1][p] += qu[jj][p] * qv[jj][p];
            acc[4][p] += qu[jj][p] * low_v[p];
        }
        for (int d = 1; d <= 3; ++d) {
            if (jj - d >= 0)
                for (std::size_t p = 0; p < pts; ++p) acc[2][p] += qu[jj][p] * qv[jj - d][p];
            if (jj + d < count)
                for (std::size_t p = 0; p < pts; ++p) acc[3][p] += qu[jj][p] * qv[jj + d][p];
        }
    }
    for (int i = 0; i < 5; ++i) out.parts[i] = from_physical_complex(work, std::move(acc[i]));
    out.mean_term = SpectralField(work, 1);
    out.mean_term.at(0, 0) = mu * mv;
    return out;
}

nlohmann::json IterationDiagnostics::to_json() const {
    return {{"iterate_norms", iterate_norms},
            {"difference_norms", difference_norms},
            {"initial_norm", initial_norm},
            {"contraction_factor", contraction_factor},
            {"residual", residual},
            {"initial_besovq", initial_besovq},
            {"iterations", iterations},
            {"converged", converged},
            {"aborted", aborted},
            {"above_smallness_threshold", above_smallness_threshold},
            {"message", message}};
}

double trajectory_size(const Trajectory& tr, const SolverConfig& cfg) {
    SpaceParams sp = cfg.space;
    sp.beta = cfg.beta;
    const double raw = tent_norm(tr.coefficients(cfg.spec), sp).value;
    return std::pow(raw, 1.0 / sp.q);
}

namespace {

Trajectory difference(const Trajectory& a, const Trajectory& b) {
    Trajectory d = a;
    for (std::size_t i = 0; i < d.size(); ++i) d.fields[i] -= b.fields[i];
    return d;
}

}  // namespace

SolveResult picard_solve(const SpectralField& a, const SolverConfig& cfg) {
    cfg.validate();
    const Grid& g = cfg.spec.grid;
    if (!(a.grid() == g) || a.components() != g.dim) throw Error("initial data must be an n-component field on the solver grid");
    const double div = divergence(a).sup_norm();
    if (div > 1e-10 * std::max(1.0, a.sup_norm())) throw Error("initial data are not divergence-free (sup |div a| = " + std::to_string(div) + ")");

    SolveResult res;
    IterationDiagnostics& d = res.diagnostics;
    SpaceParams sp = cfg.space;
    sp.beta = cfg.beta;
    d.initial_besovq = besovq_norm(meyer::analyze(a, cfg.spec), sp).value;
    d.above_smallness_threshold = d.initial_besovq > cfg.smallness_threshold;

    const Trajectory u0 = semigroup_orbit(a, cfg.beta, cfg.sample_times());
    d.initial_norm = trajectory_size(u0, cfg);
    d.iterate_norms.push_back(d.initial_norm);
    const double floor = 1e-13 * d.initial_norm;

    Trajectory u = u0;
    bool stopped = false;
    for (int k = 1; k <= cfg.max_iter; ++k) {
        Trajectory next = u0;
        if (cfg.nonlinear) {
            const Trajectory b = duhamel_bilinear(u, u, cfg);
            for (std::size_t i = 0; i < next.size(); ++i) next.fields[i] -= b.fields[i];
        }
        const double dk = trajectory_size(difference(next, u), cfg);
        const double nk = trajectory_size(next, cfg);
        d.difference_norms.push_back(dk);
        d.iterate_norms.push_back(nk);
        d.iterations = k;
        u = std::move(next);
        if (!std::isfinite(nk) || nk > 10.0 * d.initial_norm) {
            d.aborted = true;
            d.message = "iterate " + std::to_string(k) + " grew past ten times the linear orbit";
            break;
        }
        if (dk <= floor || dk <= cfg.contraction_tol * d.difference_norms.front()) {
            stopped = true;
            break;
        }
    }
    const auto& dn = d.difference_norms;
    if (dn.size() >= 2 && dn[0] > floor) d.contraction_factor = dn[1] / dn[0];
    d.residual = d.initial_norm > 0.0 ? dn.back() / d.initial_norm : 0.0;
    d.converged = stopped && !d.aborted && d.contraction_factor < 1.0;
    if (d.message.empty()) {
        if (d.contraction_factor >= 1.0)
            d.message = "non-contractive: difference ratio " + std::to_string(d.contraction_factor);
        else if (!stopped)
            d.message = "max_iter reached before the difference tolerance";
        else
            d.message = "converged";
    }
    res.trajectory = std::move(u);
    return res;
}

namespace {

double phi1(double z) { return std::abs(z) < 1e-300 ? 1.0 : std::expm1(z) / z; }

double phi2(double z) {
    if (std::abs(z) < 1e-2) return 0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z * (1.0 / 120.0 + z / 720.0)));
    return (std::expm1(z) - z) / (z * z);
}

}  // namespace

Trajectory etd_march(const SpectralField& a, const SolverConfig& cfg, int steps) {
    cfg.validate();
    if (steps < 1) throw Error("ETD march needs at least one step");
    const Grid& g = a.grid();
    const double dt = cfg.t_final / steps;
    const auto lambda = dissipation_rates(g, cfg.beta);
    std::vector<double> e(lambda.size()), p1(lambda.size()), p2(lambda.size());
    for (std::size_t i = 0; i < lambda.size(); ++i) {
        const double z = -lambda[i] * dt;
        e[i] = std::exp(z);
        p1[i] = phi1(z) * dt;
        p2[i] = phi2(z) * dt;
    }
    auto forcing = [&](const SpectralField& u) {
        SpectralField f(g, u.components());
        if (cfg.nonlinear) f -= nonlinear_term(u, u);
        return f;
    };
    Trajectory tr;
    tr.times.push_back(0.0);
    tr.fields.push_back(a);
    const double start = std::max(a.l2_norm(), 1e-300);
    SpectralField u = a;
    for (int s = 1; s <= steps; ++s) {
        const SpectralField fu = forcing(u);
        SpectralField stage(g, u.components());
        for (int c = 0; c < u.components(); ++c) {
            auto st = stage.component(c);
            const std::span<const cplx> uc = u.component(c), fc = fu.component(c);
            for (std::size_t i = 0; i < st.size(); ++i) st[i] = e[i] * uc[i] + p1[i] * fc[i];
        }
        const SpectralField fa = forcing(stage);
        for (int c = 0; c < u.components(); ++c) {
            auto st = stage.component(c);
            const auto fac = fa.component(c);
            const auto fc = fu.component(c);
            for (std::size_t i = 0; i < st.size(); ++i) st[i] += p2[i] * (fac[i] - fc[i]);
        }
        u = std::move(stage);
        if (!std::isfinite(u.l2_norm()) || (a.l2_norm() > 0.0 && u.l2_norm() > 10.0 * start))
            throw Error("ETD march blew up at step " + std::to_string(s));
        tr.times.push_back(s == steps ? cfg.t_final : s * dt);
        tr.fields.push_back(u);
    }
    return tr;
}

BilinearStats bilinear_constant_estimate(const SolverConfig& cfg, int trials, std::uint64_t seed) {
    cfg.validate();
    if (trials < 1) throw Error("bilinear estimate needs at least one trial");
    const auto times = cfg.sample_times();
    BilinearStats st;
    auto unit_orbit = [&](std::uint64_t s) {
        InitialDataSpec init;
        init.kind = "random-besov";
        init.seed = s;
        init.params = cfg.space;
        init.params.beta = cfg.beta;
        Trajectory tr = semigroup_orbit(generate_initial_data(cfg.spec, init), cfg.beta, times);
        const double size = trajectory_size(tr, cfg);
        for (auto& f : tr.fields) f *= 1.0 / size;
        return tr;
    };
    for (int i = 0; i < trials; ++i) {
        const Trajectory u = unit_orbit(seed + 2 * static_cast<std::uint64_t>(i));
        const Trajectory v = unit_orbit(seed + 2 * static_cast<std::uint64_t>(i) + 1);
        st.samples.push_back(trajectory_size(duhamel_bilinear(u, v, cfg), cfg));
        st.swapped.push_back(trajectory_size(duhamel_bilinear(v, u, cfg), cfg));
    }
    std::vector<double> sorted = st.samples;
    std::sort(sorted.begin(), sorted.end());
    auto quantile = [&](double q) {
        const double pos = q * (sorted.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
        const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
        return sorted[lo] + (pos - lo) * (sorted[hi] - sorted[lo]);
    };
    st.sup = sorted.back();
    st.median = quantile(0.5);
    st.q90 = quantile(0.9);
    st.swapped_sup = *std::max_element(st.swapped.begin(), st.swapped.end());
    return st;
}

ScanResult iteration_smallness_scan(const SpectralField& direction, const SolverConfig& cfg, const std::vector<double>& amplitudes) {
    ScanResult out;
    auto run = [&](double amp) {
        const SolveResult r = picard_solve(amp * direction, cfg);
        const auto& d = r.diagnostics;
        bool contractive = !d.aborted && d.contraction_factor < 1.0;
        for (std::size_t k = 1; k < d.difference_norms.size(); ++k)
            if (!(d.difference_norms[k] < d.difference_norms[k - 1])) contractive = false;
        return ScanRow{amp, d.converged, contractive || d.converged, d.contraction_factor, d.iterations};
    };
    std::vector<double> amps = amplitudes;
    std::sort(amps.begin(), amps.end());
    double lo = -1.0, hi = -1.0;
    for (double a : amps) {
        out.rows.push_back(run(a));
        if (out.rows.back().contractive) {
            if (hi < 0.0) lo = a;
        } else if (hi < 0.0) {
            hi = a;
        }
    }
    if (hi < 0.0) return out;
    if (lo < 0.0) {
        out.boundary = hi;
        return out;
    }
    while ((hi - lo) > 0.01 * hi) {
        const double mid = 0.5 * (lo + hi);
        (run(mid).contractive ? lo : hi) = mid;
    }
    out.boundary = hi;
    return out;
}

}  // namespace besovq
