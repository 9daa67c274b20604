#include "qwalk/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace qwalk {

std::string_view to_string(Route route) {
    switch (route) {
    case Route::kSimulation: return "simulate";
    case Route::kResonant: return "resonant";
    case Route::kNearResonant: return "near-resonant";
    }
    return "unknown";
}

std::string_view to_string(FreeEvolution mode) {
    return mode == FreeEvolution::kFull ? "full" : "simplified";
}

Route parse_route(std::string_view text) {
    if (text == "simulate" || text == "simulation") return Route::kSimulation;
    if (text == "resonant") return Route::kResonant;
    if (text == "near-resonant" || text == "near_resonant") return Route::kNearResonant;
    throw ConfigError("unknown route '" + std::string(text) + "'");
}

FreeEvolution parse_free_evolution(std::string_view text) {
    if (text == "simplified") return FreeEvolution::kSimplified;
    if (text == "full") return FreeEvolution::kFull;
    throw ConfigError("unknown free-evolution mode '" + std::string(text) + "'");
}

void WalkConfig::validate() const {
    if (!std::isfinite(kick_strength)) throw ConfigError("kick strength must be finite");
    if (!(kick_period > 0.0) || !std::isfinite(kick_period)) throw ConfigError("kick period must be positive");
    if (!std::isfinite(quasimomentum)) throw ConfigError("quasimomentum must be finite");
    if (steps < 0) throw ConfigError("step count must be non-negative");
    if (momentum_cutoff < 0) throw ConfigError("momentum cutoff must be non-negative (0 = automatic)");
}

bool WalkConfig::is_resonant_period() const {
    // tau n^2 / 2 in 2 pi Z for all n  <=>  tau / (4 pi) integer.
    const double ratio = kick_period / (4.0 * std::numbers::pi);
    return std::abs(ratio - std::round(ratio)) < 1e-12 && std::round(ratio) >= 1.0;
}

void RatchetSpec::validate() const {
    if (classes.empty()) throw ConfigError("ratchet needs at least one momentum class");
    std::set<int> unique(classes.begin(), classes.end());
    if (unique.size() != classes.size()) throw ConfigError("ratchet classes must be distinct");
    const double b1 = level_weights[0];
    const double b2 = level_weights[1];
    if (!std::isfinite(b1) || !std::isfinite(b2)) throw ConfigError("level weights must be finite");
    if (std::abs(b1 * b1 + b2 * b2 - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg << "level weights must satisfy b1^2 + b2^2 = 1 (got " << b1 << ", " << b2 << ")";
        throw ConfigError(msg.str());
    }
    if (!std::isfinite(relative_phase)) throw ConfigError("relative phase must be finite");
}

int RatchetSpec::max_abs_class() const {
    int m = 0;
    for (int s : classes) m = std::max(m, std::abs(s));
    return m;
}

int resolved_cutoff(const WalkConfig& config, const RatchetSpec& ratchet) {
    if (config.momentum_cutoff > 0) return config.momentum_cutoff;
    const double reach = std::ceil(std::abs(config.kick_strength) * (config.steps + 1));
    return ratchet.max_abs_class() + static_cast<int>(reach) + kCutoffMargin;
}

SpinorState::SpinorState(int cutoff) : cutoff_(cutoff) {
    if (cutoff < 0) throw ConfigError("cutoff must be non-negative");
    const auto size = static_cast<std::size_t>(2 * cutoff + 1);
    levels_[0].assign(size, cplx{});
    levels_[1].assign(size, cplx{});
}

std::size_t SpinorState::offset(int n) const {
    if (n < -cutoff_ || n > cutoff_) {
        throw ConfigError("momentum class " + std::to_string(n) + " outside grid [-" + std::to_string(cutoff_) +
                          ", " + std::to_string(cutoff_) + "]");
    }
    return static_cast<std::size_t>(n + cutoff_);
}

cplx SpinorState::amplitude(Level level, int n) const {
    if (n < -cutoff_ || n > cutoff_) return {};
    return levels_[index(level)][offset(n)];
}

void SpinorState::set_amplitude(Level level, int n, cplx value) {
    levels_[index(level)][offset(n)] = value;
}

double SpinorState::norm_squared() const {
    double acc = 0.0;
    for (const auto& lv : levels_) {
        for (const cplx& a : lv) acc += std::norm(a);
    }
    return acc;
}

double MomentumDistribution::at(int n) const {
    if (n < -cutoff || n > cutoff) return 0.0;
    return total[static_cast<std::size_t>(n + cutoff)];
}

double MomentumDistribution::level_at(Level level, int n) const {
    if (n < -cutoff || n > cutoff) return 0.0;
    const auto& arr = level == Level::kOne ? p1 : p2;
    return arr[static_cast<std::size_t>(n + cutoff)];
}

double MomentumDistribution::sum() const {
    return std::accumulate(total.begin(), total.end(), 0.0);
}

MomentumDistribution MomentumDistribution::from_levels(int cutoff, std::vector<double> p1, std::vector<double> p2) {
    MomentumDistribution d;
    d.cutoff = cutoff;
    d.total.resize(p1.size());
    for (std::size_t i = 0; i < p1.size(); ++i) d.total[i] = p1[i] + p2[i];
    d.p1 = std::move(p1);
    d.p2 = std::move(p2);
    return d;
}

void require_normalized(const MomentumDistribution& dist, double tolerance) {
    const double s = dist.sum();
    if (!(std::abs(s - 1.0) <= tolerance)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "distribution is not normalized (sum = " << s << ")";
        throw DomainError(msg.str());
    }
}

cplx unit_phase(double angle) {
    const double quarters = angle / (std::numbers::pi / 2.0);
    if (quarters == std::round(quarters) && std::abs(quarters) < 1e15) {
        switch (((static_cast<long long>(quarters) % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
        }
    }
    return std::polar(1.0, angle);
}

cplx ratchet_momentum_weight(const RatchetSpec& ratchet, int s) {
    return unit_phase(s * (ratchet.relative_phase - std::numbers::pi / 2.0));
}

SpinorState build_initial_state(const WalkConfig& config, const RatchetSpec& ratchet) {
    config.validate();
    ratchet.validate();
    const int cutoff = resolved_cutoff(config, ratchet);
    if (ratchet.max_abs_class() > cutoff) {
        throw ConfigError("ratchet class outside the truncated grid (cutoff " + std::to_string(cutoff) + ")");
    }
    SpinorState state(cutoff);
    const double inv_sqrt_s = 1.0 / std::sqrt(static_cast<double>(ratchet.classes.size()));
    for (int s : ratchet.classes) {
        const cplx phase = inv_sqrt_s * unit_phase(s * ratchet.relative_phase);
        state.set_amplitude(Level::kOne, s, ratchet.level_weights[0] * phase);
        state.set_amplitude(Level::kTwo, s, ratchet.level_weights[1] * phase);
    }
    return state;
}

MomentumDistribution distribution_of(const SpinorState& state) {
    const auto a1 = state.level(Level::kOne);
    const auto a2 = state.level(Level::kTwo);
    std::vector<double> p1(a1.size());
    std::vector<double> p2(a2.size());
    std::transform(a1.begin(), a1.end(), p1.begin(), [](cplx a) { return std::norm(a); });
    std::transform(a2.begin(), a2.end(), p2.begin(), [](cplx a) { return std::norm(a); });
    return MomentumDistribution::from_levels(state.cutoff(), std::move(p1), std::move(p2));
}

}  // namespace qwalk
