#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qwalk/core.hpp"

namespace qwalk {

/// Default number of quasimomentum samples per ensemble average.
inline constexpr int kDefaultEnsembleSamples = 10000;

/// Gaussian quasimomentum ensemble centred on the resonance beta = 0.
///
/// Sampling is fixed so that a seed reproduces the same betas anywhere:
/// std::mt19937_64 seeded with `seed`; each pair of 64-bit outputs x1, x2
/// becomes u1 = ((x1 >> 11) + 1) 2^-53 in (0, 1] and u2 = (x2 >> 11) 2^-53
/// in [0, 1); Box-Muller then gives sqrt(-2 ln u1) cos(2 pi u2) and
/// sqrt(-2 ln u1) sin(2 pi u2), scaled by sigma, in that order.
struct EnsembleSpec {
    double fwhm = 0.0;
    int n_samples = kDefaultEnsembleSamples;
    std::uint64_t seed = 1;
    Route route = Route::kSimulation;

    /// fwhm / (2 sqrt(2 ln 2))
    double sigma() const;
    void validate() const;
};

std::vector<double> sample_betas(const EnsembleSpec& spec);

/// Element-wise mean by a fixed pairwise tree over the input order.
/// All inputs must share one grid.
MomentumDistribution average_distributions(std::span<const MomentumDistribution> parts);

/// Incoherent average over sampled betas of the simulation or near-resonant
/// route. The betas replace config.quasimomentum; any per-beta failure aborts
/// the whole average. validity_product carries fwhm * T.
MomentumDistribution averaged_distribution(const WalkConfig& config, const RatchetSpec& ratchet,
                                           const EnsembleSpec& spec, unsigned threads = 0);

}  // namespace qwalk
