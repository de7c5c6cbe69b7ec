#include "besovq/operators.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "besovq/meyer.hpp"
#include "besovq/parallel.hpp"

namespace besovq {

namespace {

double norm3(const std::array<double, 3>& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

void check_axis(const SpectralField& f, int axis) {
    if (axis < 0 || axis >= f.grid().dim) throw Error("axis " + std::to_string(axis) + " outside the grid dimension");
}

}  // namespace

SpectralField riesz(const SpectralField& field, int axis) {
    check_axis(field, axis);
    SpectralField out(field.grid(), field.components());
    for (std::size_t lin = 0; lin < field.points(); ++lin) {
        const auto xi = field.wavevector(lin, true);
        const double r = norm3(xi);
        if (r == 0.0) continue;
        const cplx mult(0.0, -xi[axis] / r);
        for (int c = 0; c < field.components(); ++c) out.at(c, lin) = mult * field.at(c, lin);
    }
    return out;
}

SpectralField partial_derivative(const SpectralField& field, int axis) {
    check_axis(field, axis);
    SpectralField out(field.grid(), field.components());
    for (std::size_t lin = 0; lin < field.points(); ++lin) {
        const cplx mult(0.0, field.wavevector(lin, true)[axis]);
        for (int c = 0; c < field.components(); ++c) out.at(c, lin) = mult * field.at(c, lin);
    }
    return out;
}

SpectralField divergence(const SpectralField& field) {
    const int n = field.grid().dim;
    if (field.components() != n) throw Error("divergence needs an n-component field");
    SpectralField out(field.grid(), 1);
    for (std::size_t lin = 0; lin < field.points(); ++lin) {
        const auto xi = field.wavevector(lin, true);
        cplx acc = 0.0;
        for (int a = 0; a < n; ++a) acc += cplx(0.0, xi[a]) * field.at(a, lin);
        out.at(0, lin) = acc;
    }
    return out;
}

SpectralField gradient(const SpectralField& scalar) {
    if (scalar.components() != 1) throw Error("gradient needs a scalar field");
    const int n = scalar.grid().dim;
    SpectralField out(scalar.grid(), n);
    for (std::size_t lin = 0; lin < scalar.points(); ++lin) {
        const auto xi = scalar.wavevector(lin, true);
        for (int a = 0; a < n; ++a) out.at(a, lin) = cplx(0.0, xi[a]) * scalar.at(0, lin);
    }
    return out;
}

SpectralField leray_project(const SpectralField& field) {
    const int n = field.grid().dim;
    if (field.components() != n) throw Error("Leray projection needs an n-component field");
    SpectralField out = field;
    for (std::size_t lin = 0; lin < field.points(); ++lin) {
        const auto xi = field.wavevector(lin, true);
        const double r2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        if (r2 == 0.0) continue;
        cplx dot = 0.0;
        for (int a = 0; a < n; ++a) dot += xi[a] * field.at(a, lin);
        for (int a = 0; a < n; ++a) out.at(a, lin) -= xi[a] * dot / r2;
    }
    return out;
}

std::vector<WaveletIndex> window_indices(const BasisSpec& spec, int j_lo, int j_hi) {
    std::vector<WaveletIndex> out;
    CoefficientSet probe(spec, 1);
    for (int j = j_lo; j <= j_hi; ++j)
        for (unsigned eps = 1; eps < spec.eps_count(); ++eps)
            for (std::size_t lin = 0; lin < spec.shell_size(j); ++lin) out.push_back(WaveletIndex{eps, j, probe.unravel_k(j, lin)});
    return out;
}

std::vector<CzoMatrixEntry> czo_matrix(const CzoOperator& op, const BasisSpec& spec, const std::vector<WaveletIndex>& indices) {
    const std::size_t pairs = indices.size() * indices.size();
    if (pairs > 10000) throw Error("CZO window has " + std::to_string(pairs) + " pairs; the limit is 10000");
    if (op.kind == CzoOperator::Kind::riesz && (op.axis < 0 || op.axis >= spec.dim())) throw Error("Riesz axis out of range");
    std::map<std::pair<unsigned, int>, std::vector<std::size_t>> rows_by_shell;
    for (std::size_t r = 0; r < indices.size(); ++r) {
        if (!spec.contains(indices[r])) throw Error("index " + indices[r].str(spec.dim()) + " lies outside the window");
        rows_by_shell[{indices[r].eps, indices[r].j}].push_back(r);
    }
    std::vector<CzoMatrixEntry> out(pairs);
    parallel_for(indices.size(), [&](std::size_t ci) {
        CoefficientSet unit(spec, 1);
        unit.set(0, indices[ci], 1.0);
        SpectralField f = meyer::synthesize(unit);
        if (op.kind == CzoOperator::Kind::riesz) f = riesz(f, op.axis);
        CoefficientSet probe(spec, 1);
        for (const auto& [shell, rows] : rows_by_shell) {
            const auto vals = meyer::analyze_shell(f, 0, shell.second, shell.first);
            for (std::size_t r : rows) {
                const std::size_t lin = probe.linear_k(indices[r].j, indices[r].k);
                out[r * indices.size() + ci] = CzoMatrixEntry{indices[r], indices[ci], vals[lin].real()};
            }
        }
    });
    return out;
}

namespace {

double periodic_position_gap(const BasisSpec& spec, const CzoMatrixEntry& e) {
    const double L = spec.grid.box_length();
    double d2 = 0.0;
    for (int a = 0; a < spec.dim(); ++a) {
        double d = std::fmod(e.row.k[a] * std::exp2(-e.row.j) - e.col.k[a] * std::exp2(-e.col.j), L);
        if (d > L / 2) d -= L;
        if (d < -L / 2) d += L;
        d2 += d * d;
    }
    return std::sqrt(d2);
}

double max_abs(const std::vector<CzoMatrixEntry>& entries) {
    double m = 0.0;
    for (const auto& e : entries) m = std::max(m, std::abs(e.value));
    return m;
}

}  // namespace

CzoDecayReport czo_decay_check(const std::vector<CzoMatrixEntry>& entries, const BasisSpec& spec, double N0, double floor) {
    CzoDecayReport rep;
    const double n = spec.dim();
    const double cut = floor * max_abs(entries);
    for (const auto& e : entries) {
        const double a = std::abs(e.value);
        if (a <= cut || a == 0.0) continue;
        ++rep.entries_used;
        const double s = std::exp2(-e.row.j) + std::exp2(-e.col.j);
        const double v = a * std::exp2(std::abs(e.row.j - e.col.j) * (n / 2 + N0)) *
                         std::pow((s + periodic_position_gap(spec, e)) / s, n + N0);
        if (v > rep.constant) {
            rep.constant = v;
            rep.argmax = e;
        }
    }
    return rep;
}

double czo_decay_power(const std::vector<CzoMatrixEntry>& entries, const BasisSpec& spec, double floor) {
    const double cut = floor * max_abs(entries);
    std::map<long, double> envelope;  // rounded distance * 1000 -> max |a|
    for (const auto& e : entries) {
        if (e.row.j != e.col.j) continue;
        const double a = std::abs(e.value);
        if (a <= cut || a == 0.0) continue;
        const double d = periodic_position_gap(spec, e) * std::exp2(e.row.j);
        if (d < 1.0) continue;
        double& slot = envelope[std::lround(d * 1000.0)];
        slot = std::max(slot, a);
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0, np = 0;
    for (const auto& [key, a] : envelope) {
        const double x = std::log(1.0 + key / 1000.0);
        const double y = -std::log(a);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        np += 1.0;
    }
    if (np < 2) return 0.0;
    const double den = np * sxx - sx * sx;
    return den > 0.0 ? (np * sxy - sx * sy) / den : 0.0;
}

}  // namespace besovq
