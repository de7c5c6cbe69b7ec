#pragma once

#include <compare>
#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "besovq/grid.hpp"

namespace besovq {

using cplx = std::complex<double>;

/// (eps, j, k): wavelet type bit-vector, dyadic scale, lattice position.
/// Bit a of eps selects the Psi^1 factor on axis a; eps == 0 is the scaling function.
struct WaveletIndex {
    unsigned eps = 1;
    int j = 0;
    IVec k{0, 0, 0};

    auto operator<=>(const WaveletIndex&) const = default;
    std::string str(int dim) const;
};

/// Scale window and grid of a periodized Meyer system.
struct BasisSpec {
    Grid grid{};
    int j_min = 0;
    int j_max = 0;

    /// Default window: j_min = -box_exponent (one translate per axis, the
    /// scaling part is then the box average) and the finest scale whose
    /// frequency support |xi| <= (8 pi / 3) 2^j stays strictly below Nyquist.
    static BasisSpec for_grid(const Grid& grid);
    static int finest_scale(const Grid& grid) { return ilog2(grid.size) - grid.box_exponent - 2; }

    int dim() const { return grid.dim; }
    /// Number of translates per axis at scale j: 2^(j + box_exponent).
    int translations(int j) const {
        if (j < -grid.box_exponent) throw Error("scale " + std::to_string(j) + " is coarser than the box");
        return 1 << (j + grid.box_exponent);
    }
    std::size_t shell_size(int j) const { return ipow(static_cast<std::size_t>(translations(j)), grid.dim); }
    unsigned eps_count() const { return 1u << grid.dim; }

    void validate() const;
    bool contains(const WaveletIndex& idx) const;
    bool operator==(const BasisSpec& o) const { return grid == o.grid && j_min == o.j_min && j_max == o.j_max; }
};

/// Coefficients of one shell (eps, j): M^n values, sparse until more than half filled.
class Shell {
public:
    Shell() = default;
    explicit Shell(std::size_t count) : count_(count) {}

    std::size_t count() const { return count_; }
    bool is_dense() const { return dense_; }
    std::size_t nonzeros() const;

    cplx get(std::size_t lin) const;
    void set(std::size_t lin, cplx v);
    void add(std::size_t lin, cplx v);
    void assign_dense(std::vector<cplx> values);
    std::vector<cplx> to_dense() const;
    void for_each(const std::function<void(std::size_t, cplx)>& fn) const;
    void scale(double s);

private:
    void maybe_densify();

    std::size_t count_ = 0;
    bool dense_ = false;
    std::vector<cplx> dense_values_;
    std::map<std::size_t, cplx> sparse_values_;
};

/// Sparse map WaveletIndex -> coefficient, one map per field component.
class CoefficientSet {
public:
    struct ShellKey {
        unsigned eps;
        int j;
        auto operator<=>(const ShellKey&) const = default;
    };

    CoefficientSet() = default;
    CoefficientSet(const BasisSpec& spec, int components);

    const BasisSpec& spec() const { return spec_; }
    int components() const { return static_cast<int>(shells_.size()); }
    std::optional<double> time;

    cplx get(int c, const WaveletIndex& idx) const;
    void set(int c, const WaveletIndex& idx, cplx v);
    void add(int c, const WaveletIndex& idx, cplx v);

    /// Dense values of shell (eps, j) of component c; zeros when absent.
    std::vector<cplx> shell_values(int c, unsigned eps, int j) const;
    void set_shell(int c, unsigned eps, int j, std::vector<cplx> values);
    const Shell* find_shell(int c, unsigned eps, int j) const;
    const std::map<ShellKey, Shell>& shells(int c) const { return shells_.at(c); }

    void for_each(const std::function<void(int, const WaveletIndex&, cplx)>& fn) const;
    std::size_t nonzeros() const;
    bool empty() const { return nonzeros() == 0; }
    double max_abs() const;

    CoefficientSet& operator*=(double s);
    CoefficientSet& operator+=(const CoefficientSet& o);
    CoefficientSet& operator-=(const CoefficientSet& o);
    friend CoefficientSet operator+(CoefficientSet a, const CoefficientSet& b) { return a += b; }
    friend CoefficientSet operator-(CoefficientSet a, const CoefficientSet& b) { return a -= b; }
    friend CoefficientSet operator*(double s, CoefficientSet a) { return a *= s; }

    /// Lattice index of k within its shell; k is reduced modulo the translate count.
    std::size_t linear_k(int j, const IVec& k) const;
    IVec unravel_k(int j, std::size_t lin) const;

    /// Throws when idx lies outside the window, naming it.
    void check_index(const WaveletIndex& idx) const;

private:
    BasisSpec spec_{};
    std::vector<std::map<ShellKey, Shell>> shells_;
};

/// Samples of a coefficient trajectory a(t); times strictly increasing, t >= 0.
struct CoefficientTrajectory {
    std::vector<double> times;
    std::vector<CoefficientSet> sets;

    const BasisSpec& spec() const { return sets.at(0).spec(); }
    std::size_t size() const { return times.size(); }
    void validate() const;
};

}  // namespace besovq
