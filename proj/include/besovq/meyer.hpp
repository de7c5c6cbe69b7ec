#pragma once

#include <span>
#include <vector>

#include "besovq/coefficient_set.hpp"
#include "besovq/spectral_field.hpp"

namespace besovq::meyer {

// Frequency profile. The flat-top function Psi^0 is
//     cos((pi/2) theta(3|xi|/(2 pi) - 1)),  theta(x) = rho(x) / (rho(x) + rho(1-x)),  rho(x) = exp(-1/x),
// so that Psi^0(xi)^2 + Psi^0(2 pi - xi)^2 = 1 on [2pi/3, 4pi/3].

/// Smooth step on [0,1]: 0 below, 1 above, theta(x) + theta(1-x) = 1.
double ramp(double x);
/// Even, equals 1 on |xi| <= 2pi/3 and 0 on |xi| >= 4pi/3.
double psi0(double xi);
/// sqrt(psi0(xi/2)^2 - psi0(xi)^2); throws if the radicand is below -1e-14.
double omega(double xi);
/// Psi^0 for bit 0, Psi^1(xi) = Omega(xi) exp(-i xi / 2) for bit 1.
cplx psi_hat(int bit, double xi);
/// Tensor product prod_a Psi^{eps_a}(xi_a).
cplx wavelet_hat(unsigned eps, std::span<const double> xi);

/// Coefficients <f_c, Phi^eps_{j,k}> for every k of shell (eps, j), row-major over k.
/// Computed as a fold of the Fourier coefficients modulo 2^j L followed by an inverse FFT.
std::vector<cplx> analyze_shell(const SpectralField& field, int c, int j, unsigned eps);
/// Adds sum_k a_k Phi^eps_{j,k} to component c of `out`.
void synthesize_shell(std::span<const cplx> coeffs, int j, unsigned eps, SpectralField& out, int c);

struct AnalysisReport {
    CoefficientSet coeffs;
    /// Scales above j_max holding energy the window does not capture.
    std::vector<int> truncated_shells;
    /// ||f - synthesize(analyze(f))|| / ||f||.
    double residual_fraction = 0.0;
};

CoefficientSet analyze(const SpectralField& field, const BasisSpec& spec);
AnalysisReport analyze_with_report(const SpectralField& field, const BasisSpec& spec);
SpectralField synthesize(const CoefficientSet& coeffs);

/// Scaling-function projection P_j (box average for j at or below -box_exponent).
SpectralField project_P(const SpectralField& field, int j);
/// Detail projection Q_j = sum over eps != 0 of the shell-j wavelet parts.
SpectralField project_Q(const SpectralField& field, int j);

/// Largest |m|_inf carried exactly by the window: fields whose modes satisfy
/// |m_a| <= this bound are reproduced by analyze followed by synthesize.
int covered_mode_bound(const BasisSpec& spec);

}  // namespace besovq::meyer
