#include "besovq/spectral_field.hpp"

#include <algorithm>
#include <cmath>

#include "besovq/fft.hpp"

namespace besovq {

SpectralField::SpectralField(const Grid& grid, int components)
    : grid_(grid), components_(components), points_(grid.points()), data_(points_ * static_cast<std::size_t>(components)) {
    grid.validate();
    if (components < 1) throw Error("a field needs at least one component");
}

SpectralField SpectralField::from_physical(const Grid& grid, const std::vector<std::vector<double>>& samples) {
    SpectralField f(grid, static_cast<int>(samples.size()));
    const double scale = 1.0 / static_cast<double>(f.points_);
    for (int c = 0; c < f.components_; ++c) {
        if (samples[c].size() != f.points_) throw Error("sample count does not match grid");
        auto comp = f.component(c);
        for (std::size_t i = 0; i < f.points_; ++i) comp[i] = samples[c][i];
        fft::forward(comp, grid.dim, grid.size);
        for (auto& v : comp) v *= scale;
    }
    return f;
}

std::vector<cplx> SpectralField::to_physical(int c) const {
    std::vector<cplx> out(component(c).begin(), component(c).end());
    fft::backward(out, grid_.dim, grid_.size);
    return out;
}

std::vector<double> SpectralField::to_physical_real(int c) const {
    auto v = to_physical(c);
    std::vector<double> out(v.size());
    std::transform(v.begin(), v.end(), out.begin(), [](cplx z) { return z.real(); });
    return out;
}

std::array<double, 3> SpectralField::wavevector(std::size_t lin, bool odd_derivative) const {
    std::array<double, 3> xi{0.0, 0.0, 0.0};
    const IVec idx = grid_.unravel(lin);
    const double k0 = grid_.k0();
    for (int a = 0; a < grid_.dim; ++a) {
        if (odd_derivative && grid_.is_nyquist(idx[a])) continue;
        xi[a] = k0 * grid_.mode(idx[a]);
    }
    return xi;
}

void SpectralField::check_compatible(const SpectralField& o) const {
    if (!(grid_ == o.grid_) || components_ != o.components_) throw Error("incompatible spectral fields");
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    check_compatible(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (auto& v : data_) v *= s;
    return *this;
}

double SpectralField::l2_norm() const {
    double acc = 0.0;
    for (const auto& v : data_) acc += std::norm(v);
    return std::sqrt(acc * std::pow(grid_.box_length(), grid_.dim));
}

double SpectralField::sup_norm() const {
    double m = 0.0;
    for (int c = 0; c < components_; ++c)
        for (const auto& v : to_physical(c)) m = std::max(m, std::abs(v));
    return m;
}

double SpectralField::max_coefficient() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
}

SpectralField SpectralField::extract(int c) const {
    SpectralField out(grid_, 1);
    std::copy(component(c).begin(), component(c).end(), out.component(0).begin());
    return out;
}

void SpectralField::assign_component(int c, const SpectralField& scalar) {
    if (!(scalar.grid_ == grid_)) throw Error("grid mismatch in assign_component");
    std::copy(scalar.component(0).begin(), scalar.component(0).end(), component(c).begin());
}

double relative_l2_error(const SpectralField& value, const SpectralField& ref) {
    const double denom = ref.l2_norm();
    const double num = (value - ref).l2_norm();
    return denom > 0.0 ? num / denom : num;
}

}  // namespace besovq
