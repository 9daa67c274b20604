#pragma once

#include <set>
#include <utility>
#include <vector>

#include "qwalk/core.hpp"

namespace qwalk {

/// Local maxima below this fraction of the global maximum are not peaks.
inline constexpr double kPeakThreshold = 0.5;

/// The initial momentum classes of the default ratchet; deviations of the
/// near-resonant route concentrate there.
inline const std::set<int> kInitialClasses{0, 1};

/// Least-squares line std_dev(T) = slope T + intercept.
struct BallisticFit {
    double slope = 0.0;
    double intercept = 0.0;
    /// In [0, 1]; 0 by convention when the fit is degenerate.
    double r_squared = 0.0;
    std::pair<int, int> T_range{0, 0};
};

/// Sum_n n P(n) over integer classes. Throws DomainError when unnormalised.
double mean_momentum(const MomentumDistribution& dist);

/// Standard deviation of n under P. Throws DomainError when unnormalised.
double std_dev(const MomentumDistribution& dist);

/// Classes n with P(n) > P(n-1), P(n) >= P(n+1) and P(n) >= threshold * max P,
/// ascending. A flat top reports its leftmost class.
std::vector<int> peak_positions(const MomentumDistribution& dist, double threshold = kPeakThreshold);

/// Sum over n not in exclude of |P_a(n) - P_b(n)|. Grids must match.
double l1_distance(const MomentumDistribution& a, const MomentumDistribution& b,
                   const std::set<int>& exclude = {});

/// max over n not in exclude of |P_a(n) - P_b(n)|. Grids must match.
double max_abs_difference(const MomentumDistribution& a, const MomentumDistribution& b,
                          const std::set<int>& exclude = {});

/// Class with the largest |P_a(n) - P_b(n)|; the lowest such n on ties.
int argmax_abs_difference(const MomentumDistribution& a, const MomentumDistribution& b);

/// Fits std_dev against T over walks of `config` with config.steps replaced by
/// each T. Route is the simulation or the resonant formula. Needs at least
/// four T values.
BallisticFit ballistic_fit(const WalkConfig& config, const RatchetSpec& ratchet, const std::vector<int>& T_values,
                           Route route = Route::kSimulation);

/// Least-squares fit of y on x; exposed for tests.
BallisticFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace qwalk
