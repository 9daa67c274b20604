#include "qwalk/quantum_map.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qwalk/bessel.hpp"

namespace qwalk {

namespace {

cplx i_pow(int m) {
    return unit_phase(m * (std::numbers::pi / 2.0));
}

void raise_leakage(double leaked) {
    std::ostringstream msg;
    msg.precision(3);
    msg << "probability " << leaked << " left the momentum grid; increase momentum_cutoff";
    throw TruncationError(msg.str());
}

// Nonzero index range [lo, hi] of both levels; lo > hi when empty.
std::pair<std::ptrdiff_t, std::ptrdiff_t> support(const SpinorState& state) {
    const auto size = static_cast<std::ptrdiff_t>(state.grid_size());
    std::ptrdiff_t lo = size;
    std::ptrdiff_t hi = -1;
    for (Level l : {Level::kOne, Level::kTwo}) {
        const auto a = state.level(l);
        for (std::ptrdiff_t i = 0; i < size; ++i) {
            if (a[static_cast<std::size_t>(i)] != cplx{}) {
                lo = std::min(lo, i);
                break;
            }
        }
        for (std::ptrdiff_t i = size - 1; i >= 0; --i) {
            if (a[static_cast<std::size_t>(i)] != cplx{}) {
                hi = std::max(hi, i);
                break;
            }
        }
    }
    return {lo, hi};
}

}  // namespace

Coin balanced_coin() {
    const double r = std::numbers::sqrt2 / 2.0;
    return {{{cplx(r, 0.0), cplx(0.0, r)}, {cplx(0.0, r), cplx(r, 0.0)}}};
}

Coin multiply(const Coin& a, const Coin& b) {
    Coin c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return c;
}

double unitarity_defect(const Coin& c) {
    double worst = 0.0;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const cplx g = std::conj(c[0][i]) * c[0][j] + std::conj(c[1][i]) * c[1][j];
            worst = std::max(worst, std::abs(g - cplx(i == j ? 1.0 : 0.0, 0.0)));
        }
    }
    return worst;
}

int kick_band_width(double k) {
    const int base = static_cast<int>(std::ceil(std::abs(k))) + 25;
    int m = base;
    // Large kicks have tails wider than 25 classes past |k|.
    while (std::abs(bessel_j(m, k)) > 1e-17 && m < base + 400) ++m;
    return m;
}

StepOperatorPlan StepOperatorPlan::ideal(double k) {
    StepOperatorPlan plan;
    plan.band = kick_band_width(k);
    const auto row = bessel_row(k, -plan.band, plan.band);
    for (auto& w : plan.kick) w.resize(row.size());
    for (int m = -plan.band; m <= plan.band; ++m) {
        const auto i = static_cast<std::size_t>(m + plan.band);
        plan.kick[0][i] = i_pow(-m) * row[i];
        plan.kick[1][i] = i_pow(m) * row[i];
    }
    return plan;
}

double StepOperatorPlan::band_weight(Level level) const {
    double acc = 0.0;
    for (const cplx& w : kick[static_cast<std::size_t>(level)]) acc += std::norm(w);
    return acc;
}

void StepOperatorPlan::scale_level(Level level, cplx factor) {
    for (cplx& w : kick[static_cast<std::size_t>(level)]) w *= factor;
}

double apply_kick(SpinorState& state, const StepOperatorPlan& plan) {
    const auto [lo, hi] = support(state);
    if (lo > hi) return 0.0;
    const double before = state.norm_squared();
    const auto size = static_cast<std::ptrdiff_t>(state.grid_size());
    const std::ptrdiff_t band = plan.band;
    const std::ptrdiff_t out_lo = std::max<std::ptrdiff_t>(0, lo - band);
    const std::ptrdiff_t out_hi = std::min<std::ptrdiff_t>(size - 1, hi + band);

    std::vector<cplx> buffer(static_cast<std::size_t>(size));
    for (Level l : {Level::kOne, Level::kTwo}) {
        const auto& w = plan.kick[static_cast<std::size_t>(l)];
        auto amp = state.level(l);
        std::fill(buffer.begin(), buffer.end(), cplx{});
        for (std::ptrdiff_t i = out_lo; i <= out_hi; ++i) {
            const std::ptrdiff_t j_lo = std::max(lo, i - band);
            const std::ptrdiff_t j_hi = std::min(hi, i + band);
            cplx acc{};
            for (std::ptrdiff_t j = j_lo; j <= j_hi; ++j) {
                acc += w[static_cast<std::size_t>(i - j + band)] * amp[static_cast<std::size_t>(j)];
            }
            buffer[static_cast<std::size_t>(i)] = acc;
        }
        std::copy(buffer.begin(), buffer.end(), amp.begin());
    }
    return std::max(0.0, before - state.norm_squared());
}

void apply_coin(SpinorState& state, const Coin& coin) {
    auto a = state.level(Level::kOne);
    auto b = state.level(Level::kTwo);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const cplx x = a[i];
        const cplx y = b[i];
        a[i] = coin[0][0] * x + coin[0][1] * y;
        b[i] = coin[1][0] * x + coin[1][1] * y;
    }
}

cplx free_phase(int n, const WalkConfig& config) {
    const double beta = config.quasimomentum;
    const double tau = config.kick_period;
    if (config.free_evolution == FreeEvolution::kSimplified) return unit_phase(-tau * n * beta);
    // Turns of -tau (n + beta)^2 / (4 pi); the n^2 part is reduced mod 1
    // first so that resonant periods give exactly 1.
    const double r = tau / (2.0 * std::numbers::pi);
    const double nn = static_cast<double>(n) * static_cast<double>(n);
    const double whole = std::fmod(r * 0.5 * nn, 1.0);
    const double rest = r * (n * beta + 0.5 * beta * beta);
    return unit_phase(-2.0 * std::numbers::pi * (whole + rest));
}

void apply_free(SpinorState& state, const WalkConfig& config) {
    auto a = state.level(Level::kOne);
    auto b = state.level(Level::kTwo);
    const int c = state.cutoff();
    for (int n = -c; n <= c; ++n) {
        const cplx f = free_phase(n, config);
        const auto i = static_cast<std::size_t>(n + c);
        a[i] *= f;
        b[i] *= f;
    }
}

SpinorState apply_kick(const SpinorState& state, double k) {
    SpinorState out = state;
    const double leaked = apply_kick(out, StepOperatorPlan::ideal(k));
    if (leaked > kLeakageTolerance) raise_leakage(leaked);
    return out;
}

SpinorState apply_coin(const SpinorState& state) {
    SpinorState out = state;
    apply_coin(out, balanced_coin());
    return out;
}

SpinorState apply_free(const SpinorState& state, const WalkConfig& config) {
    SpinorState out = state;
    apply_free(out, config);
    return out;
}

WalkResult propagate(SpinorState state, const WalkConfig& config, const StepOperatorPlan& plan) {
    config.validate();
    double leaked = 0.0;
    for (int t = 0; t < config.steps; ++t) {
        leaked += apply_kick(state, plan);
        if (leaked > kLeakageTolerance) raise_leakage(leaked);
        apply_coin(state, plan.coin);
        apply_free(state, config);
    }
    return {std::move(state), leaked};
}

MomentumDistribution walk(const WalkConfig& config, const RatchetSpec& ratchet, const StepOperatorPlan& plan) {
    auto result = propagate(build_initial_state(config, ratchet), config, plan);
    auto dist = distribution_of(result.state);
    dist.config = config;
    dist.ratchet = ratchet;
    dist.route = Route::kSimulation;
    dist.leakage = result.leakage;
    dist.validity_product = std::abs(config.quasimomentum) * config.steps;
    return dist;
}

MomentumDistribution walk(const WalkConfig& config, const RatchetSpec& ratchet) {
    config.validate();
    return walk(config, ratchet, StepOperatorPlan::ideal(config.kick_strength));
}

}  // namespace qwalk
