#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace besovq {

/// Error raised for rejected inputs (bad windows, malformed files, ...).
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kPi = 3.14159265358979323846;

using IVec = std::array<int, 3>;

/// Periodic box [0, L)^n sampled by grid_size points per axis.
///
/// The box side is dyadic, L = 2^box_exponent, so that every wavelet scale
/// j >= -box_exponent has an integer number 2^j L of translates per axis and
/// the periodized Meyer system is exactly orthonormal on the lattice.
struct Grid {
    int dim = 2;
    int size = 64;
    int box_exponent = 2;

    double box_length() const { return std::ldexp(1.0, box_exponent); }
    std::size_t points() const {
        std::size_t p = 1;
        for (int a = 0; a < dim; ++a) p *= static_cast<std::size_t>(size);
        return p;
    }
    /// Fundamental wavenumber 2*pi/L.
    double k0() const { return 2.0 * kPi / box_length(); }

    /// Signed Fourier index of FFT slot i (Nyquist maps to -N/2).
    int mode(int i) const { return i < size / 2 ? i : i - size; }
    int slot(int m) const { return m >= 0 ? m : m + size; }
    bool is_nyquist(int i) const { return i == size / 2; }

    /// Multi-index of a linear slot, axis 0 slowest.
    IVec unravel(std::size_t lin) const {
        IVec idx{0, 0, 0};
        for (int a = dim - 1; a >= 0; --a) {
            idx[a] = static_cast<int>(lin % static_cast<std::size_t>(size));
            lin /= static_cast<std::size_t>(size);
        }
        return idx;
    }
    std::size_t ravel(const IVec& idx) const {
        std::size_t lin = 0;
        for (int a = 0; a < dim; ++a) lin = lin * static_cast<std::size_t>(size) + static_cast<std::size_t>(idx[a]);
        return lin;
    }

    bool operator==(const Grid& o) const {
        return dim == o.dim && size == o.size && box_exponent == o.box_exponent;
    }

    void validate() const {
        if (dim < 1 || dim > 3) throw Error("grid dimension must be 1, 2 or 3");
        if (size < 4 || (size & (size - 1)) != 0) throw Error("grid size must be a power of two >= 4, got " + std::to_string(size));
        if (box_exponent < 0 || box_exponent > 20) throw Error("box exponent out of range");
    }
};

inline int ilog2(int v) {
    int r = 0;
    while ((1 << (r + 1)) <= v) ++r;
    return r;
}

inline std::size_t ipow(std::size_t base, int e) {
    std::size_t r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

}  // namespace besovq
