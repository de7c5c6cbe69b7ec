#pragma once

#include <complex>
#include <span>
#include <vector>

#include "besovq/grid.hpp"

namespace besovq {

using cplx = std::complex<double>;

/// Vector field on the periodic box stored as Fourier coefficients,
///     f(x) = sum_m f_m exp(i xi_m . x),   xi_m = (2 pi / L) m.
/// Component c occupies slots [c * points, (c + 1) * points).
class SpectralField {
public:
    SpectralField() = default;
    SpectralField(const Grid& grid, int components);

    static SpectralField zeros(const Grid& grid, int components) { return SpectralField(grid, components); }

    /// Builds a field from samples at x_i = L i / N (one vector per component).
    static SpectralField from_physical(const Grid& grid, const std::vector<std::vector<double>>& samples);

    const Grid& grid() const { return grid_; }
    int components() const { return components_; }
    std::size_t points() const { return points_; }

    std::span<cplx> component(int c) { return {data_.data() + c * points_, points_}; }
    std::span<const cplx> component(int c) const { return {data_.data() + c * points_, points_}; }
    cplx& at(int c, std::size_t lin) { return data_[c * points_ + lin]; }
    const cplx& at(int c, std::size_t lin) const { return data_[c * points_ + lin]; }
    std::span<cplx> raw() { return data_; }
    std::span<const cplx> raw() const { return data_; }

    /// Grid-point values of component c (complex; imaginary part is round-off for real fields).
    std::vector<cplx> to_physical(int c) const;
    std::vector<double> to_physical_real(int c) const;

    /// Wave vector of slot `lin`. With odd_derivative the Nyquist entries are zeroed,
    /// which keeps first-order multipliers real-symmetric.
    std::array<double, 3> wavevector(std::size_t lin, bool odd_derivative = false) const;

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double s);
    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

    /// L^2(box) norm over all components, via Parseval.
    double l2_norm() const;
    /// max over grid points and components.
    double sup_norm() const;
    /// largest |f_m| over all slots.
    double max_coefficient() const;

    /// Zero-mode value of component c (the box average).
    cplx mean(int c) const { return at(c, 0); }

    /// Extract a single component as a one-component field.
    SpectralField extract(int c) const;
    void assign_component(int c, const SpectralField& scalar);

private:
    void check_compatible(const SpectralField& o) const;

    Grid grid_{};
    int components_ = 0;
    std::size_t points_ = 0;
    std::vector<cplx> data_;
};

/// Discrete L^2 distance relative to the norm of `ref`.
double relative_l2_error(const SpectralField& value, const SpectralField& ref);

}  // namespace besovq
