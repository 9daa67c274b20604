#pragma once

#include "qwalk/quantum_map.hpp"

namespace qwalk {

/// Physical laser parameters of one kick. Detunings are magnitudes; the
/// opposite signs seen by the two levels are applied structurally.
struct LaserParams {
    double rabi_frequency = 0.0;  ///< Omega [rad/s]
    double pulse_duration = 0.0;  ///< tau_p [s]
    double detuning_1 = 1.0;      ///< Delta_1 [rad/s]
    double detuning_2 = 1.0;      ///< Delta_2 [rad/s]
    double period = 4.0 * std::numbers::pi;  ///< dimensionless tau

    void validate() const;
};

/// Omega^2 tau_p / (8 Delta). Throws DomainError for Delta = 0.
double kick_strength(double rabi_frequency, double pulse_duration, double detuning);

/// Dimensionless detuning whose product with the dimensionless period tau
/// equals the phase Delta * T_period accumulated over one lab period.
/// Contract: detuning in rad/s, lab period in s, tau dimensionless.
double dimensionless_detuning(double detuning_rad_per_s, double lab_period_s, double tau);

/// k1 + k2 + (Delta1 + Delta2) tau, all dimensionless.
double light_shift_phase(double k1, double k2, double delta1, double delta2, double tau);

/// Light-shift phase of a laser configuration (k1 from Delta1, k2 from Delta2).
/// Detunings are converted with dimensionless_detuning.
double light_shift_phase(const LaserParams& laser, double lab_period_s);

/// diag(e^{i Phi/2}, e^{-i Phi/2})
Coin phase_gate(double phi);

/// (1/sqrt 2) [[e^{i Phi/2}, i e^{-i Phi/2}], [i e^{i Phi/2}, e^{-i Phi/2}]],
/// the balanced coin with its columns rescaled by the phase gate.
Coin effective_coin(double phi);

/// Kick e^{-i Phi/2} e^{-ik cos} on level 1 and e^{i Phi/2} e^{ik cos} on
/// level 2, followed by effective_coin(coin_phase).
StepOperatorPlan effective_step_plan(double k, double kick_phase, double coin_phase);
inline StepOperatorPlan effective_step_plan(double k, double phi) {
    return effective_step_plan(k, phi, phi);
}

/// Max element deviation between C_eff(coin_phase) K_eff(kick_phase) and
/// C K on the (2 cutoff + 1)-class basis of each level.
double verify_compensation(double k, double kick_phase, double coin_phase, int cutoff);
inline double verify_compensation(double k, double phi, int cutoff) {
    return verify_compensation(k, phi, phi, cutoff);
}

}  // namespace qwalk
