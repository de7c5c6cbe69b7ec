#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace besovq {

// Index inequalities behind the bilinear estimates, checked in one dimension.
// Q^w_{j,k} is the dyadic cube of side 2^{8-j} containing Q_{j,k}, shifted by w cubes;
// S^{w,j'}_{j,k} are the lattice indices k' with Q_{j',k'} inside it.

struct CombinatoricsOptions {
    int j = 0;
    int scale_gap = 3;     // |j - j'| <= scale_gap
    int k_bound = 16;      // |k| <= k_bound
    int w_bound = 8;       // |w| <= w_bound
    double N = 2.0;        // decay power
    double delta = 0.1;
    std::vector<double> p_values{1.5, 2.0, 3.0};
    int trials = 4;        // random sequences per (p, j') for the sum inequalities
    std::uint64_t seed = 1;
};

struct InequalityCheck {
    std::string name;
    std::string statement;
    /// Largest observed LHS / RHS.
    double constant = 0.0;
    /// Analytic bound on the constant where one is known (0 otherwise).
    double bound = 0.0;
    std::size_t cases = 0;
    bool holds = false;
    std::string worst_case;

    nlohmann::json to_json() const;
};

/// (1 + |2^{j-j'} k' - k|)^{-N} <= C (1 + |w|)^{-N} for every k' in S^{w,j'}_{j,k}.
InequalityCheck check_cube_separation(const CombinatoricsOptions& opt);
/// (1 + |2^{j'-j''} k'' - k'|)^{-N} <= C 2^{N(j-j')} (1 + |w - w'|)^{-N} for k' in S^{w,j'},
/// k'' in S^{w',j''}, 0 < j' - j'' <= 3, j <= j' + 5, |w - w'| > 2.
InequalityCheck check_cross_cube_separation(const CombinatoricsOptions& opt);
/// Weighted double sum with |v|^{p-1} against the cube-localized l^p / l^{p'} split (8N decay).
InequalityCheck check_holder_split(const CombinatoricsOptions& opt);
/// l^p sum over Q_r of the cube-localized sums against the 2^{delta(j'-j)}-weighted total.
InequalityCheck check_cube_sum(const CombinatoricsOptions& opt);
/// Weighted double sum against the split with 2^{n(j'-j)(1-2/p)} for j < j' + 2.
InequalityCheck check_product_split(const CombinatoricsOptions& opt);

std::vector<InequalityCheck> run_combinatorics(const CombinatoricsOptions& opt = {});

}  // namespace besovq
