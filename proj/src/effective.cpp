#include "qwalk/effective.hpp"

#include <algorithm>
#include <cmath>

#include "qwalk/bessel.hpp"

namespace qwalk {

void LaserParams::validate() const {
    if (!(detuning_1 > 0.0) || !(detuning_2 > 0.0)) throw ConfigError("detunings must be positive magnitudes");
    if (!std::isfinite(rabi_frequency) || !std::isfinite(pulse_duration) || pulse_duration < 0.0) {
        throw ConfigError("Rabi frequency and pulse duration must be finite, duration non-negative");
    }
    if (!(period > 0.0)) throw ConfigError("period must be positive");
}

double kick_strength(double rabi_frequency, double pulse_duration, double detuning) {
    if (detuning == 0.0) throw DomainError("kick strength is undefined at zero detuning");
    return rabi_frequency * rabi_frequency * pulse_duration / (8.0 * detuning);
}

double dimensionless_detuning(double detuning_rad_per_s, double lab_period_s, double tau) {
    if (!(tau > 0.0)) throw DomainError("tau must be positive");
    return detuning_rad_per_s * lab_period_s / tau;
}

double light_shift_phase(double k1, double k2, double delta1, double delta2, double tau) {
    return k1 + k2 + (delta1 + delta2) * tau;
}

double light_shift_phase(const LaserParams& laser, double lab_period_s) {
    laser.validate();
    const double k1 = kick_strength(laser.rabi_frequency, laser.pulse_duration, laser.detuning_1);
    const double k2 = kick_strength(laser.rabi_frequency, laser.pulse_duration, laser.detuning_2);
    const double d1 = dimensionless_detuning(laser.detuning_1, lab_period_s, laser.period);
    const double d2 = dimensionless_detuning(laser.detuning_2, lab_period_s, laser.period);
    return light_shift_phase(k1, k2, d1, d2, laser.period);
}

Coin phase_gate(double phi) {
    return {{{unit_phase(phi / 2.0), cplx{}}, {cplx{}, unit_phase(-phi / 2.0)}}};
}

Coin effective_coin(double phi) {
    return multiply(balanced_coin(), phase_gate(phi));
}

StepOperatorPlan effective_step_plan(double k, double kick_phase, double coin_phase) {
    StepOperatorPlan plan = StepOperatorPlan::ideal(k);
    plan.scale_level(Level::kOne, unit_phase(-kick_phase / 2.0));
    plan.scale_level(Level::kTwo, unit_phase(kick_phase / 2.0));
    plan.coin = effective_coin(coin_phase);
    return plan;
}

double verify_compensation(double k, double kick_phase, double coin_phase, int cutoff) {
    if (cutoff < 0) throw ConfigError("cutoff must be non-negative");
    const StepOperatorPlan ideal = StepOperatorPlan::ideal(k);
    const StepOperatorPlan eff = effective_step_plan(k, kick_phase, coin_phase);
    const int band = ideal.band;
    double worst = 0.0;
    // Block (r, c) of C K is C_rc K_c; K_c is Toeplitz with entries kick[c][i - j].
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            const auto& wi = ideal.kick[static_cast<std::size_t>(c)];
            const auto& we = eff.kick[static_cast<std::size_t>(c)];
            for (int i = -cutoff; i <= cutoff; ++i) {
                for (int j = std::max(-cutoff, i - band); j <= std::min(cutoff, i + band); ++j) {
                    const auto m = static_cast<std::size_t>(i - j + band);
                    const cplx lhs = eff.coin[r][c] * we[m];
                    const cplx rhs = ideal.coin[r][c] * wi[m];
                    worst = std::max(worst, std::abs(lhs - rhs));
                }
            }
        }
    }
    return worst;
}

}  // namespace qwalk
