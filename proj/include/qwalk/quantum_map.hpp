#pragma once

#include <array>
#include <vector>

#include "qwalk/core.hpp"

namespace qwalk {

/// 2x2 complex matrix acting on (level 1, level 2); row-major.
using Coin = std::array<std::array<cplx, 2>, 2>;

/// (1/sqrt 2) [[1, i], [i, 1]]
Coin balanced_coin();
Coin multiply(const Coin& a, const Coin& b);
/// max |(A^dagger A - 1)_ij|
double unitarity_defect(const Coin& c);

/// Smallest band half-width m with sum_{|j| <= m} J_j(k)^2 >= 1 - 1e-16,
/// never below ceil|k| + 25.
int kick_band_width(double k);

/// Everything needed to apply one step F C K without recomputing Bessel
/// values: kick weights per level, the coin, and the free-evolution mode.
struct StepOperatorPlan {
    int band = 0;
    /// kick[l][m + band] multiplies the shift |j> -> |j + m> on level l.
    std::array<std::vector<cplx>, 2> kick;
    Coin coin = balanced_coin();

    /// Kick e^{-ik cos} on level 1 and e^{+ik cos} on level 2, balanced coin.
    static StepOperatorPlan ideal(double k);

    /// sum_m |kick[l][m]|^2 for the given level.
    double band_weight(Level level) const;
    void scale_level(Level level, cplx factor);
};

/// In-place kick. Returns the probability pushed off the grid.
double apply_kick(SpinorState& state, const StepOperatorPlan& plan);
void apply_coin(SpinorState& state, const Coin& coin);
void apply_free(SpinorState& state, const WalkConfig& config);

/// Value-returning forms. The kick throws TruncationError when more than
/// kLeakageTolerance leaves the grid.
SpinorState apply_kick(const SpinorState& state, double k);
SpinorState apply_coin(const SpinorState& state);
SpinorState apply_free(const SpinorState& state, const WalkConfig& config);

/// Free-evolution factor for class n.
cplx free_phase(int n, const WalkConfig& config);

struct WalkResult {
    SpinorState state;
    double leakage = 0.0;
};

/// T applications of F C K to the given state. Throws TruncationError once
/// the accumulated leakage passes kLeakageTolerance.
WalkResult propagate(SpinorState state, const WalkConfig& config, const StepOperatorPlan& plan);

MomentumDistribution walk(const WalkConfig& config, const RatchetSpec& ratchet);
MomentumDistribution walk(const WalkConfig& config, const RatchetSpec& ratchet, const StepOperatorPlan& plan);

}  // namespace qwalk
