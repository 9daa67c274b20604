#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "qwalk/core.hpp"

namespace qwalk {

/// Largest step count for which the 2^T paths are enumerated.
inline constexpr int kMaxEnumeratedSteps = 20;

/// Beyond this |beta| T (or fwhm T) the path sum is outside its validity window.
inline constexpr double kValidityLimit = 0.1;

struct GaussianInt {
    long long re = 0;
    long long im = 0;

    friend GaussianInt operator+(GaussianInt a, GaussianInt b) { return {a.re + b.re, a.im + b.im}; }
    friend GaussianInt operator*(GaussianInt a, GaussianInt b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    GaussianInt& operator+=(GaussianInt o) { return *this = *this + o; }
    friend bool operator==(GaussianInt, GaussianInt) = default;
    cplx value() const { return {static_cast<double>(re), static_cast<double>(im)}; }
};

using GaussianMatrix = std::array<std::array<GaussianInt, 2>, 2>;

/// One monomial of R_T = M(m_T) ... M(m_1), M(m) = [[(-1)^m, i], [i (-1)^m, 1]].
/// Bit l-1 of `bits` is c_l: set when step l contributes the (-1)^{m_l} factor.
struct ChainTerm {
    std::uint32_t bits = 0;
    /// Coefficient of prod_l (-1)^{c_l m_l}; rank one with a single nonzero column.
    GaussianMatrix matrix{};
    /// Row sums, i.e. the term's contribution to (R_T (1, 1)^T)_row.
    GaussianInt phase1;
    GaussianInt phase2;
};

/// All 2^T monomials, by direct multiplication of the selected 2x2 factors.
std::vector<ChainTerm> expand_coin_chain(int T);

/// sum_l (-1)^{c_l} e^{-i tau beta (T - l)}; the last step carries no phase.
cplx effective_kick_factor(std::uint32_t bits, int T, double tau, double beta);

struct WalkPath {
    std::uint32_t bits = 0;
    Level column = Level::kOne;  ///< input level feeding this path
    int alpha1 = 0;              ///< output phase on level 1 is i^alpha1
    int alpha2 = 0;
    cplx k_eff;
};

std::vector<WalkPath> enumerate_paths(const WalkConfig& config);

/// Paths with equal k_eff at beta = 0, keyed by sum_l (-1)^{c_l}.
/// sums[row][column] adds the unit phases of the group's paths.
struct PathGroup {
    long long count = 0;
    GaussianMatrix sums{};
};

/// Grouped phase sums, built by multiplying out [[1/u, i u], [i/u, u]]^T
/// in O(T^2); any T >= 1. Throws DomainError when called with beta != 0
/// through the config overload.
std::map<int, PathGroup> group_paths_resonant(int T);
std::map<int, PathGroup> group_paths_resonant(const WalkConfig& config);

/// Same groups, by enumerating all 2^T paths.
std::map<int, PathGroup> group_paths_enumerated(int T);

enum class PathSumMode { kAuto, kEnumerate, kGrouped };

/// Both levels of the path-sum distribution. The result is not normalised
/// away from beta = 0; its validity_product is |beta| T.
MomentumDistribution near_resonant_distribution(const WalkConfig& config, const RatchetSpec& ratchet,
                                                PathSumMode mode = PathSumMode::kAuto);

std::vector<double> near_resonant_level_distribution(const WalkConfig& config, const RatchetSpec& ratchet,
                                                     Level level);

bool within_validity(double beta_spread, int steps);

}  // namespace qwalk
