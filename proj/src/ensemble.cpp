#include "qwalk/ensemble.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "qwalk/near_resonant.hpp"
#include "qwalk/parallel.hpp"
#include "qwalk/quantum_map.hpp"

namespace qwalk {

namespace {

void add_into(std::vector<double>& acc, const std::vector<double>& v) {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += v[i];
}

struct Sums {
    std::vector<double> p1;
    std::vector<double> p2;
};

Sums pairwise(std::span<const MomentumDistribution> parts) {
    if (parts.size() == 1) return {parts[0].p1, parts[0].p2};
    const std::size_t mid = parts.size() / 2;
    Sums left = pairwise(parts.first(mid));
    const Sums right = pairwise(parts.subspan(mid));
    add_into(left.p1, right.p1);
    add_into(left.p2, right.p2);
    return left;
}

}  // namespace

double EnsembleSpec::sigma() const {
    return fwhm / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
}

void EnsembleSpec::validate() const {
    if (!(fwhm >= 0.0) || !std::isfinite(fwhm)) throw ConfigError("fwhm must be finite and non-negative");
    if (n_samples < 1) throw ConfigError("ensemble needs at least one sample");
    if (route == Route::kResonant) {
        throw ConfigError("ensembles run the simulation or near-resonant route; the resonant route has beta = 0");
    }
}

std::vector<double> sample_betas(const EnsembleSpec& spec) {
    spec.validate();
    const double sigma = spec.sigma();
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(spec.n_samples));
    std::mt19937_64 engine(spec.seed);
    constexpr double kTwoPow53 = 0x1p-53;
    while (out.size() < static_cast<std::size_t>(spec.n_samples)) {
        const double u1 = static_cast<double>((engine() >> 11) + 1) * kTwoPow53;
        const double u2 = static_cast<double>(engine() >> 11) * kTwoPow53;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        out.push_back(sigma * r * std::cos(angle));
        if (out.size() < static_cast<std::size_t>(spec.n_samples)) out.push_back(sigma * r * std::sin(angle));
    }
    return out;
}

MomentumDistribution average_distributions(std::span<const MomentumDistribution> parts) {
    if (parts.empty()) throw DomainError("nothing to average");
    for (const auto& p : parts) {
        if (p.cutoff != parts[0].cutoff) throw DomainError("distributions on different grids cannot be averaged");
    }
    Sums s = pairwise(parts);
    const double inv = 1.0 / static_cast<double>(parts.size());
    for (double& v : s.p1) v *= inv;
    for (double& v : s.p2) v *= inv;
    auto out = MomentumDistribution::from_levels(parts[0].cutoff, std::move(s.p1), std::move(s.p2));
    out.config = parts[0].config;
    out.ratchet = parts[0].ratchet;
    out.route = parts[0].route;
    for (const auto& p : parts) out.leakage = std::max(out.leakage, p.leakage);
    return out;
}

MomentumDistribution averaged_distribution(const WalkConfig& config, const RatchetSpec& ratchet,
                                           const EnsembleSpec& spec, unsigned threads) {
    config.validate();
    ratchet.validate();
    const auto betas = sample_betas(spec);
    std::vector<MomentumDistribution> parts(betas.size());
    parallel_for(
        betas.size(),
        [&](std::size_t i) {
            WalkConfig c = config;
            c.quasimomentum = betas[i];
            parts[i] = spec.route == Route::kNearResonant ? near_resonant_distribution(c, ratchet) : walk(c, ratchet);
        },
        threads);
    auto out = average_distributions(parts);
    out.config = config;
    out.config.quasimomentum = 0.0;
    out.route = spec.route;
    out.validity_product = spec.fwhm * config.steps;
    return out;
}

}  // namespace qwalk
