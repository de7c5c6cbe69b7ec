#pragma once

#include <string>
#include <vector>

#include "besovq/coefficient_set.hpp"
#include "besovq/operators.hpp"
#include "besovq/spectral_field.hpp"
#include "json.hpp"

namespace besovq::io {

// Binary layouts are little-endian regardless of the host.
//
// Coefficient set: "BQCS", u32 version, i32 dim, size, box_exponent, j_min, j_max,
// components, u8 has_time, f64 time, u64 entry count, then per entry
// i32 component, u32 eps, i32 j, i32 k[3], f64 re, f64 im.
void write_coefficients(const std::string& path, const CoefficientSet& coeffs);
CoefficientSet read_coefficients(const std::string& path);

nlohmann::json coefficients_to_json(const CoefficientSet& coeffs);
CoefficientSet coefficients_from_json(const nlohmann::json& j);

struct Checkpoint {
    SpectralField field;
    double beta = 0.0;
    double time = 0.0;
};

// Checkpoint: "BQCK", u32 version, i32 dim, size, box_exponent, components, f64 beta, f64 t,
// then each component's Fourier coefficients as (re, im) f64 pairs in slot order.
void write_checkpoint(const std::string& path, const Checkpoint& ck);
Checkpoint read_checkpoint(const std::string& path);

/// Rows t,component,eps,j,k0[,k1[,k2]],re,im,abs for every coefficient with |a| above `floor`.
void write_trajectory_csv(const std::string& path, const CoefficientTrajectory& tc, double floor = 0.0);
/// Rows of a CZO matrix: row and column indices, value.
void write_czo_csv(const std::string& path, const std::vector<CzoMatrixEntry>& entries, int dim);

void write_text(const std::string& path, const std::string& text);
void write_json(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json(const std::string& path);

}  // namespace besovq::io
