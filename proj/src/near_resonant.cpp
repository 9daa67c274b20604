#include "qwalk/near_resonant.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>

#include "qwalk/bessel.hpp"
#include "qwalk/parallel.hpp"
#include "qwalk/resonant.hpp"

namespace qwalk {

namespace {

constexpr GaussianInt kOneG{1, 0};
constexpr GaussianInt kIG{0, 1};

// M(m) = (-1)^m P0 + P1
constexpr GaussianMatrix kP0{{{kOneG, GaussianInt{}}, {kIG, GaussianInt{}}}};
constexpr GaussianMatrix kP1{{{GaussianInt{}, kIG}, {GaussianInt{}, kOneG}}};
constexpr GaussianMatrix kIdentity{{{kOneG, GaussianInt{}}, {GaussianInt{}, kOneG}}};

GaussianMatrix mul(const GaussianMatrix& a, const GaussianMatrix& b) {
    GaussianMatrix c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return c;
}

void check_enumerable(int T) {
    if (T < 1 || T > kMaxEnumeratedSteps) {
        throw DomainError("path enumeration needs 1 <= T <= " + std::to_string(kMaxEnumeratedSteps) + " (got " +
                          std::to_string(T) + ")");
    }
}

// Depth-first expansion of M(m_T) ... M(m_1), step 1 innermost.
void for_each_term(int T, const std::function<void(std::uint32_t, const GaussianMatrix&)>& fn) {
    std::function<void(int, std::uint32_t, const GaussianMatrix&)> rec = [&](int step, std::uint32_t bits,
                                                                             const GaussianMatrix& prod) {
        if (step > T) {
            fn(bits, prod);
            return;
        }
        rec(step + 1, bits, mul(kP1, prod));
        rec(step + 1, bits | (1u << (step - 1)), mul(kP0, prod));
    };
    rec(1, 0u, kIdentity);
}

// Exponent a with i^a = g, for a unit g.
int unit_exponent(GaussianInt g) {
    if (g == GaussianInt{1, 0}) return 0;
    if (g == GaussianInt{0, 1}) return 1;
    if (g == GaussianInt{-1, 0}) return 2;
    if (g == GaussianInt{0, -1}) return 3;
    throw Error("coin-chain entry is not a unit");
}

cplx i_pow(int a) {
    return unit_phase(a * (std::numbers::pi / 2.0));
}

void validate_route(const WalkConfig& config, const RatchetSpec& ratchet) {
    config.validate();
    ratchet.validate();
    if (config.steps < 1) throw DomainError("the path sum needs at least one step");
    if (config.free_evolution == FreeEvolution::kFull && !config.is_resonant_period()) {
        throw DomainError("the path sum assumes e^{-i tau n^2/2} = 1; use tau = 4 pi j or simplified free evolution");
    }
}

struct Amplitudes {
    std::vector<cplx> level1;
    std::vector<cplx> level2;

    explicit Amplitudes(std::size_t n = 0) : level1(n), level2(n) {}
    void add(const Amplitudes& o) {
        for (std::size_t i = 0; i < level1.size(); ++i) {
            level1[i] += o.level1[i];
            level2[i] += o.level2[i];
        }
    }
};

struct Grid {
    int cutoff;
    int reach;  // Bessel orders needed: |n - s| <= reach
    std::vector<int> classes;
    std::vector<cplx> weights;  // w_s e^{-i tau beta (T-1) s}
};

Grid make_grid(const WalkConfig& config, const RatchetSpec& ratchet) {
    Grid g;
    g.cutoff = resolved_cutoff(config, ratchet);
    g.reach = g.cutoff + ratchet.max_abs_class();
    g.classes = ratchet.classes;
    const double drift = config.kick_period * config.quasimomentum * (config.steps - 1);
    for (int s : ratchet.classes) g.weights.push_back(ratchet_momentum_weight(ratchet, s) * unit_phase(-drift * s));
    return g;
}

// X(n) = sum_s v_s J_{n-s}(z) and Y(n) = sum_s v_s (-1)^s J_{n-s}(z).
void ratchet_sums(const Grid& g, cplx z, std::vector<cplx>& x, std::vector<cplx>& y) {
    const auto row = bessel_row(z, -g.reach, g.reach);
    const auto size = static_cast<std::size_t>(2 * g.cutoff + 1);
    x.assign(size, cplx{});
    y.assign(size, cplx{});
    for (int n = -g.cutoff; n <= g.cutoff; ++n) {
        cplx ax{};
        cplx ay{};
        for (std::size_t i = 0; i < g.classes.size(); ++i) {
            const int s = g.classes[i];
            const cplx v = g.weights[i] * row[static_cast<std::size_t>(n - s + g.reach)];
            ax += v;
            ay += (s % 2 == 0) ? v : -v;
        }
        x[static_cast<std::size_t>(n + g.cutoff)] = ax;
        y[static_cast<std::size_t>(n + g.cutoff)] = ay;
    }
}

Amplitudes enumerated_amplitudes(const WalkConfig& config, const RatchetSpec& ratchet, const Grid& g) {
    const int T = config.steps;
    check_enumerable(T);
    const auto paths = enumerate_paths(config);
    const std::uint32_t mask = (1u << T) - 1u;
    const auto size = static_cast<std::size_t>(2 * g.cutoff + 1);
    const auto b = ratchet.level_weights;

    auto coefs = [&](const WalkPath& p) {
        const double bw = b[static_cast<std::size_t>(p.column)];
        return std::pair{bw * i_pow(p.alpha1), bw * i_pow(p.alpha2)};
    };

    // Complement pairs share |k_eff|: k_eff(~c) = -k_eff(c). The
    // representative has c_T = 0.
    const std::size_t pairs = paths.size() / 2;
    constexpr std::size_t kChunks = 64;
    const std::size_t n_chunks = std::min(kChunks, pairs);
    std::vector<Amplitudes> partial(n_chunks, Amplitudes(size));

    auto work = [&](std::size_t chunk) {
        std::vector<cplx> x;
        std::vector<cplx> y;
        Amplitudes& acc = partial[chunk];
        const std::size_t lo = chunk * pairs / n_chunks;
        const std::size_t hi = (chunk + 1) * pairs / n_chunks;
        for (std::size_t r = lo; r < hi; ++r) {
            // paths[] is indexed by bits; representatives are those without bit T-1.
            const auto& p = paths[r];
            const auto& q = paths[p.bits ^ mask];
            ratchet_sums(g, p.k_eff, x, y);
            const auto [p1, p2] = coefs(p);
            const auto [q1, q2] = coefs(q);
            for (int n = -g.cutoff; n <= g.cutoff; ++n) {
                const auto i = static_cast<std::size_t>(n + g.cutoff);
                const cplx xbar = (n % 2 == 0) ? y[i] : -y[i];
                acc.level1[i] += p1 * x[i] + q1 * xbar;
                acc.level2[i] += p2 * x[i] + q2 * xbar;
            }
        }
    };

    parallel_for(n_chunks, work);
    Amplitudes total(size);
    for (const auto& p : partial) total.add(p);
    return total;
}

Amplitudes grouped_amplitudes(const WalkConfig& config, const RatchetSpec& ratchet, const Grid& g) {
    const auto groups = group_paths_resonant(config);
    const auto size = static_cast<std::size_t>(2 * g.cutoff + 1);
    const auto b = ratchet.level_weights;
    Amplitudes amp(size);
    std::vector<cplx> x;
    std::vector<cplx> y;
    for (const auto& [j, group] : groups) {
        const cplx c1 = b[0] * group.sums[0][0].value() + b[1] * group.sums[0][1].value();
        const cplx c2 = b[0] * group.sums[1][0].value() + b[1] * group.sums[1][1].value();
        if (c1 == cplx{} && c2 == cplx{}) continue;
        ratchet_sums(g, cplx(j * config.kick_strength, 0.0), x, y);
        for (std::size_t i = 0; i < size; ++i) {
            amp.level1[i] += c1 * x[i];
            amp.level2[i] += c2 * x[i];
        }
    }
    return amp;
}

}  // namespace

std::vector<ChainTerm> expand_coin_chain(int T) {
    check_enumerable(T);
    std::vector<ChainTerm> out(std::size_t{1} << T);
    for_each_term(T, [&](std::uint32_t bits, const GaussianMatrix& m) {
        ChainTerm& t = out[bits];
        t.bits = bits;
        t.matrix = m;
        t.phase1 = m[0][0] + m[0][1];
        t.phase2 = m[1][0] + m[1][1];
    });
    return out;
}

cplx effective_kick_factor(std::uint32_t bits, int T, double tau, double beta) {
    cplx acc{};
    for (int l = 1; l <= T; ++l) {
        const cplx phase = unit_phase(-tau * beta * (T - l));
        acc += ((bits >> (l - 1)) & 1u) ? -phase : phase;
    }
    return acc;
}

std::vector<WalkPath> enumerate_paths(const WalkConfig& config) {
    const int T = config.steps;
    check_enumerable(T);
    std::vector<WalkPath> out(std::size_t{1} << T);
    for_each_term(T, [&](std::uint32_t bits, const GaussianMatrix& m) {
        WalkPath& p = out[bits];
        p.bits = bits;
        const int col = (m[0][0] == GaussianInt{} && m[1][0] == GaussianInt{}) ? 1 : 0;
        p.column = col == 0 ? Level::kOne : Level::kTwo;
        p.alpha1 = unit_exponent(m[0][col]);
        p.alpha2 = unit_exponent(m[1][col]);
        p.k_eff = config.kick_strength * effective_kick_factor(bits, T, config.kick_period, config.quasimomentum);
    });
    return out;
}

std::map<int, PathGroup> group_paths_resonant(int T) {
    if (T < 1) throw DomainError("path groups need T >= 1");
    using Poly = std::map<int, GaussianInt>;
    std::array<std::array<Poly, 2>, 2> cur;
    cur[0][0][0] = kOneG;
    cur[1][1][0] = kOneG;
    for (int step = 0; step < T; ++step) {
        std::array<std::array<Poly, 2>, 2> next;
        for (int c = 0; c < 2; ++c) {
            // Row 0 of [[1/u, i u], [i/u, u]] applied to column c.
            for (const auto& [e, v] : cur[0][c]) {
                next[0][c][e - 1] += v;
                next[1][c][e - 1] += kIG * v;
            }
            for (const auto& [e, v] : cur[1][c]) {
                next[0][c][e + 1] += kIG * v;
                next[1][c][e + 1] += v;
            }
        }
        cur = std::move(next);
    }
    std::map<int, PathGroup> out;
    for (int j = -T; j <= T; j += 2) {
        PathGroup& g = out[j];
        g.count = binomial(T, (T - j) / 2).convert_to<long long>();
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) {
                const auto it = cur[r][c].find(j);
                if (it != cur[r][c].end()) g.sums[r][c] = it->second;
            }
    }
    return out;
}

std::map<int, PathGroup> group_paths_resonant(const WalkConfig& config) {
    if (config.quasimomentum != 0.0) {
        throw DomainError("paths share an effective kick only at beta = 0");
    }
    return group_paths_resonant(config.steps);
}

std::map<int, PathGroup> group_paths_enumerated(int T) {
    check_enumerable(T);
    std::map<int, PathGroup> out;
    for_each_term(T, [&](std::uint32_t bits, const GaussianMatrix& m) {
        const int j = T - 2 * std::popcount(bits);
        PathGroup& g = out[j];
        ++g.count;
        for (int r = 0; r < 2; ++r)
            for (int c = 0; c < 2; ++c) g.sums[r][c] += m[r][c];
    });
    return out;
}

MomentumDistribution near_resonant_distribution(const WalkConfig& config, const RatchetSpec& ratchet,
                                                PathSumMode mode) {
    validate_route(config, ratchet);
    const Grid g = make_grid(config, ratchet);
    if (mode == PathSumMode::kAuto) {
        mode = config.quasimomentum == 0.0 ? PathSumMode::kGrouped : PathSumMode::kEnumerate;
    }
    const Amplitudes amp = mode == PathSumMode::kGrouped ? grouped_amplitudes(config, ratchet, g)
                                                         : enumerated_amplitudes(config, ratchet, g);
    const double norm = std::ldexp(1.0, -config.steps) / static_cast<double>(ratchet.classes.size());
    std::vector<double> p1(amp.level1.size());
    std::vector<double> p2(amp.level2.size());
    for (std::size_t i = 0; i < p1.size(); ++i) {
        p1[i] = norm * std::norm(amp.level1[i]);
        p2[i] = norm * std::norm(amp.level2[i]);
    }
    auto dist = MomentumDistribution::from_levels(g.cutoff, std::move(p1), std::move(p2));
    dist.config = config;
    dist.ratchet = ratchet;
    dist.route = Route::kNearResonant;
    dist.validity_product = std::abs(config.quasimomentum) * config.steps;
    return dist;
}

std::vector<double> near_resonant_level_distribution(const WalkConfig& config, const RatchetSpec& ratchet,
                                                     Level level) {
    auto d = near_resonant_distribution(config, ratchet);
    return level == Level::kOne ? std::move(d.p1) : std::move(d.p2);
}

bool within_validity(double beta_spread, int steps) {
    return std::abs(beta_spread) * steps <= kValidityLimit;
}

}  // namespace qwalk
