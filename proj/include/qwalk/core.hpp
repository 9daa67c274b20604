#pragma once

#include <array>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qwalk/errors.hpp"

namespace qwalk {

using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};

/// Probability allowed to leave the truncated grid before a walk is rejected.
inline constexpr double kLeakageTolerance = 1e-10;

/// Extra momentum classes added on top of the ballistic reach when the
/// cutoff is resolved automatically.
inline constexpr int kCutoffMargin = 20;

enum class FreeEvolution {
    kSimplified,  ///< e^{-i tau n beta}
    kFull,        ///< e^{-i tau (n + beta)^2 / 2}
};

enum class Level : int { kOne = 0, kTwo = 1 };

enum class Route { kSimulation, kResonant, kNearResonant };

std::string_view to_string(Route route);
std::string_view to_string(FreeEvolution mode);
Route parse_route(std::string_view text);
FreeEvolution parse_free_evolution(std::string_view text);

struct WalkConfig {
    double kick_strength = 2.0;
    double kick_period = 4.0 * std::numbers::pi;
    double quasimomentum = 0.0;
    int steps = 1;
    /// Grid half-width; the basis is n in [-cutoff, cutoff]. Zero selects
    /// the default derived from the kick strength, steps and ratchet.
    int momentum_cutoff = 0;
    FreeEvolution free_evolution = FreeEvolution::kSimplified;

    void validate() const;

    /// True when e^{-i tau n^2 / 2} = 1 for every integer n.
    bool is_resonant_period() const;
};

/// Initial momentum classes {s} with amplitude b_l e^{i s phi} / sqrt(S) on
/// level l. The default phi = -pi/2 gives the e^{-i s pi/2} ratchet ladder.
struct RatchetSpec {
    std::vector<int> classes{0, 1};
    std::array<double, 2> level_weights{std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0};
    double relative_phase = -std::numbers::pi / 2.0;

    void validate() const;
    int max_abs_class() const;
};

/// Grid half-width used for (config, ratchet): the explicit cutoff when set,
/// otherwise max|s| + ceil(|k| (T + 1)) + kCutoffMargin.
int resolved_cutoff(const WalkConfig& config, const RatchetSpec& ratchet);

/// Amplitudes over (level, n) on the grid n in [-cutoff, cutoff].
class SpinorState {
public:
    explicit SpinorState(int cutoff);

    int cutoff() const { return cutoff_; }
    std::size_t grid_size() const { return levels_[0].size(); }

    cplx amplitude(Level level, int n) const;
    void set_amplitude(Level level, int n, cplx value);

    std::span<const cplx> level(Level level) const { return levels_[index(level)]; }
    std::span<cplx> level(Level level) { return levels_[index(level)]; }

    double norm_squared() const;

private:
    static std::size_t index(Level level) { return static_cast<std::size_t>(level); }
    std::size_t offset(int n) const;

    int cutoff_;
    std::array<std::vector<cplx>, 2> levels_;
};

/// Per-level and total momentum probabilities on a symmetric integer grid.
struct MomentumDistribution {
    int cutoff = 0;
    std::vector<double> p1;
    std::vector<double> p2;
    std::vector<double> total;

    WalkConfig config;
    RatchetSpec ratchet;
    Route route = Route::kSimulation;
    /// Probability lost at the grid edges (simulation route only).
    double leakage = 0.0;
    /// |beta| * T; the path-sum approximation degrades once this exceeds 0.1.
    double validity_product = 0.0;

    std::size_t size() const { return total.size(); }
    int n_at(std::size_t i) const { return static_cast<int>(i) - cutoff; }
    double at(int n) const;
    double level_at(Level level, int n) const;
    double sum() const;

    /// Builds the distribution from two level arrays; total = p1 + p2.
    static MomentumDistribution from_levels(int cutoff, std::vector<double> p1, std::vector<double> p2);
};

/// Throws DomainError unless |sum P - 1| stays within the leakage tolerance.
void require_normalized(const MomentumDistribution& dist, double tolerance = kLeakageTolerance);

/// e^{i angle}; exact when the angle is a whole number of quarter turns.
cplx unit_phase(double angle);

/// Weight of class s in momentum-space sums, e^{i s phi} i^{-s}. Equals (-1)^s
/// for the default ladder.
cplx ratchet_momentum_weight(const RatchetSpec& ratchet, int s);

SpinorState build_initial_state(const WalkConfig& config, const RatchetSpec& ratchet);

MomentumDistribution distribution_of(const SpinorState& state);

}  // namespace qwalk
