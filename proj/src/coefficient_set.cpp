#include "besovq/coefficient_set.hpp"

#include <algorithm>
#include <sstream>

namespace besovq {

std::string WaveletIndex::str(int dim) const {
    std::ostringstream os;
    os << "(eps=" << eps << ", j=" << j << ", k=(";
    for (int a = 0; a < dim; ++a) os << (a ? "," : "") << k[a];
    os << "))";
    return os.str();
}

BasisSpec BasisSpec::for_grid(const Grid& grid) {
    grid.validate();
    BasisSpec s;
    s.grid = grid;
    s.j_min = -grid.box_exponent;
    s.j_max = finest_scale(grid);
    s.validate();
    return s;
}

void BasisSpec::validate() const {
    grid.validate();
    if (j_min > j_max) throw Error("basis window has j_min > j_max");
    if (j_min < -grid.box_exponent) throw Error("j_min below the coarsest periodic scale -" + std::to_string(grid.box_exponent));
    if (j_max > finest_scale(grid))
        throw Error("grid of " + std::to_string(grid.size) + " points cannot resolve scale " + std::to_string(j_max) +
                    " (finest is " + std::to_string(finest_scale(grid)) + ")");
}

bool BasisSpec::contains(const WaveletIndex& idx) const {
    if (idx.j < j_min || idx.j > j_max) return false;
    if (idx.eps >= eps_count()) return false;
    if (idx.eps == 0 && idx.j != j_min) return false;
    return true;
}

// ---------------------------------------------------------------- Shell

std::size_t Shell::nonzeros() const {
    if (!dense_) return sparse_values_.size();
    return static_cast<std::size_t>(std::count_if(dense_values_.begin(), dense_values_.end(), [](cplx v) { return v != cplx{}; }));
}

cplx Shell::get(std::size_t lin) const {
    if (dense_) return dense_values_[lin];
    auto it = sparse_values_.find(lin);
    return it == sparse_values_.end() ? cplx{} : it->second;
}

void Shell::set(std::size_t lin, cplx v) {
    if (dense_) {
        dense_values_[lin] = v;
        return;
    }
    if (v == cplx{}) {
        sparse_values_.erase(lin);
        return;
    }
    sparse_values_[lin] = v;
    maybe_densify();
}

void Shell::add(std::size_t lin, cplx v) { set(lin, get(lin) + v); }

void Shell::maybe_densify() {
    if (dense_ || 2 * sparse_values_.size() <= count_) return;
    dense_values_.assign(count_, cplx{});
    for (const auto& [lin, v] : sparse_values_) dense_values_[lin] = v;
    sparse_values_.clear();
    dense_ = true;
}

void Shell::assign_dense(std::vector<cplx> values) {
    std::size_t nz = static_cast<std::size_t>(std::count_if(values.begin(), values.end(), [](cplx v) { return v != cplx{}; }));
    sparse_values_.clear();
    if (2 * nz > count_) {
        dense_values_ = std::move(values);
        dense_ = true;
        return;
    }
    dense_ = false;
    dense_values_.clear();
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] != cplx{}) sparse_values_.emplace(i, values[i]);
}

std::vector<cplx> Shell::to_dense() const {
    if (dense_) return dense_values_;
    std::vector<cplx> out(count_);
    for (const auto& [lin, v] : sparse_values_) out[lin] = v;
    return out;
}

void Shell::for_each(const std::function<void(std::size_t, cplx)>& fn) const {
    if (dense_) {
        for (std::size_t i = 0; i < dense_values_.size(); ++i)
            if (dense_values_[i] != cplx{}) fn(i, dense_values_[i]);
        return;
    }
    for (const auto& [lin, v] : sparse_values_) fn(lin, v);
}

void Shell::scale(double s) {
    for (auto& v : dense_values_) v *= s;
    for (auto& [lin, v] : sparse_values_) v *= s;
}

// ---------------------------------------------------------------- CoefficientSet

CoefficientSet::CoefficientSet(const BasisSpec& spec, int components) : spec_(spec), shells_(static_cast<std::size_t>(components)) {
    spec.validate();
    if (components < 1) throw Error("coefficient set needs at least one component");
}

void CoefficientSet::check_index(const WaveletIndex& idx) const {
    if (!spec_.contains(idx))
        throw Error("wavelet index " + idx.str(spec_.dim()) + " lies outside the window [" + std::to_string(spec_.j_min) + ", " +
                    std::to_string(spec_.j_max) + "]");
}

std::size_t CoefficientSet::linear_k(int j, const IVec& k) const {
    const int m = spec_.translations(j);
    std::size_t lin = 0;
    for (int a = 0; a < spec_.dim(); ++a) {
        int r = k[a] % m;
        if (r < 0) r += m;
        lin = lin * static_cast<std::size_t>(m) + static_cast<std::size_t>(r);
    }
    return lin;
}

IVec CoefficientSet::unravel_k(int j, std::size_t lin) const {
    const std::size_t m = static_cast<std::size_t>(spec_.translations(j));
    IVec k{0, 0, 0};
    for (int a = spec_.dim() - 1; a >= 0; --a) {
        k[a] = static_cast<int>(lin % m);
        lin /= m;
    }
    return k;
}

cplx CoefficientSet::get(int c, const WaveletIndex& idx) const {
    if (!spec_.contains(idx)) return {};
    const Shell* s = find_shell(c, idx.eps, idx.j);
    return s ? s->get(linear_k(idx.j, idx.k)) : cplx{};
}

void CoefficientSet::set(int c, const WaveletIndex& idx, cplx v) {
    check_index(idx);
    auto& shell = shells_.at(c).try_emplace(ShellKey{idx.eps, idx.j}, Shell(spec_.shell_size(idx.j))).first->second;
    shell.set(linear_k(idx.j, idx.k), v);
}

void CoefficientSet::add(int c, const WaveletIndex& idx, cplx v) {
    check_index(idx);
    auto& shell = shells_.at(c).try_emplace(ShellKey{idx.eps, idx.j}, Shell(spec_.shell_size(idx.j))).first->second;
    shell.add(linear_k(idx.j, idx.k), v);
}

const Shell* CoefficientSet::find_shell(int c, unsigned eps, int j) const {
    const auto& m = shells_.at(c);
    auto it = m.find(ShellKey{eps, j});
    return it == m.end() ? nullptr : &it->second;
}

std::vector<cplx> CoefficientSet::shell_values(int c, unsigned eps, int j) const {
    const Shell* s = find_shell(c, eps, j);
    return s ? s->to_dense() : std::vector<cplx>(spec_.shell_size(j));
}

void CoefficientSet::set_shell(int c, unsigned eps, int j, std::vector<cplx> values) {
    check_index(WaveletIndex{eps, j, {}});
    if (values.size() != spec_.shell_size(j)) throw Error("shell size mismatch");
    Shell shell(spec_.shell_size(j));
    shell.assign_dense(std::move(values));
    auto& m = shells_.at(c);
    if (shell.nonzeros() == 0) {
        m.erase(ShellKey{eps, j});
        return;
    }
    m.insert_or_assign(ShellKey{eps, j}, std::move(shell));
}

void CoefficientSet::for_each(const std::function<void(int, const WaveletIndex&, cplx)>& fn) const {
    for (int c = 0; c < components(); ++c) {
        for (const auto& [key, shell] : shells_[c]) {
            shell.for_each([&](std::size_t lin, cplx v) { fn(c, WaveletIndex{key.eps, key.j, unravel_k(key.j, lin)}, v); });
        }
    }
}

std::size_t CoefficientSet::nonzeros() const {
    std::size_t n = 0;
    for (const auto& comp : shells_)
        for (const auto& [key, shell] : comp) n += shell.nonzeros();
    return n;
}

double CoefficientSet::max_abs() const {
    double m = 0.0;
    for_each([&](int, const WaveletIndex&, cplx v) { m = std::max(m, std::abs(v)); });
    return m;
}

CoefficientSet& CoefficientSet::operator*=(double s) {
    for (auto& comp : shells_)
        for (auto& [key, shell] : comp) shell.scale(s);
    return *this;
}

CoefficientSet& CoefficientSet::operator+=(const CoefficientSet& o) {
    if (!(spec_ == o.spec_) || components() != o.components()) throw Error("incompatible coefficient sets");
    o.for_each([&](int c, const WaveletIndex& idx, cplx v) { add(c, idx, v); });
    return *this;
}

CoefficientSet& CoefficientSet::operator-=(const CoefficientSet& o) {
    if (!(spec_ == o.spec_) || components() != o.components()) throw Error("incompatible coefficient sets");
    o.for_each([&](int c, const WaveletIndex& idx, cplx v) { add(c, idx, -v); });
    return *this;
}

void CoefficientTrajectory::validate() const {
    if (times.empty()) throw Error("empty coefficient trajectory");
    if (times.size() != sets.size()) throw Error("trajectory times and samples differ in length");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (times[i] < 0.0) throw Error("negative sample time");
        if (i > 0 && !(times[i] > times[i - 1])) throw Error("trajectory times must be strictly increasing");
        if (!(sets[i].spec() == sets[0].spec())) throw Error("trajectory samples use different windows");
    }
}

}  // namespace besovq
