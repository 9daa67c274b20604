#include "qwalk/resonant.hpp"

#include <cmath>
#include <unordered_map>

#include "qwalk/bessel.hpp"

namespace qwalk {

LaurentPoly LaurentPoly::monomial(int exponent, BigInt c) {
    LaurentPoly p;
    p.add_term(exponent, c);
    return p;
}

void LaurentPoly::add_term(int exponent, const BigInt& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(exponent, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

BigInt LaurentPoly::coefficient(int exponent) const {
    const auto it = terms_.find(exponent);
    return it == terms_.end() ? BigInt(0) : it->second;
}

int LaurentPoly::min_exponent() const {
    return terms_.empty() ? 0 : terms_.begin()->first;
}

int LaurentPoly::max_exponent() const {
    return terms_.empty() ? 0 : terms_.rbegin()->first;
}

LaurentPoly LaurentPoly::reflected() const {
    LaurentPoly r;
    for (const auto& [e, c] : terms_) r.terms_.emplace(-e, c);
    return r;
}

LaurentPoly LaurentPoly::shifted(int shift) const {
    LaurentPoly r;
    for (const auto& [e, c] : terms_) r.terms_.emplace(e + shift, c);
    return r;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& other) {
    for (const auto& [e, c] : other.terms_) add_term(e, c);
    return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& other) {
    for (const auto& [e, c] : other.terms_) add_term(e, -c);
    return *this;
}

LaurentPoly& LaurentPoly::operator*=(const BigInt& factor) {
    if (factor == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, c] : terms_) c *= factor;
    return *this;
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r;
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) r.add_term(ea + eb, ca * cb);
    return r;
}

LaurentPoly dickson_z() {
    return LaurentPoly::monomial(-1) + LaurentPoly::monomial(1);
}

LaurentPoly dickson_z_tilde() {
    return LaurentPoly::monomial(-1) - LaurentPoly::monomial(1);
}

double DicksonCoefficients::a1(int l) const {
    return std::ldexp(a1_scaled.at(static_cast<std::size_t>(l)).convert_to<double>(), -order);
}

double DicksonCoefficients::a2(int l) const {
    return std::ldexp(a2_scaled.at(static_cast<std::size_t>(l)).convert_to<double>(), -order);
}

std::pair<LaurentPoly, LaurentPoly> dickson_polynomials(int N) {
    if (N < 0) throw DomainError("Dickson order must be non-negative");
    const LaurentPoly z = dickson_z();
    const LaurentPoly one = LaurentPoly::monomial(0);
    auto run = [&](const LaurentPoly& first) {
        if (N == 0) return one;
        LaurentPoly prev = one;
        LaurentPoly cur = first;
        for (int i = 2; i <= N; ++i) {
            LaurentPoly next = z * cur - prev * BigInt(2);
            prev = std::move(cur);
            cur = std::move(next);
        }
        return cur;
    };
    return {run(dickson_z_tilde()), run(z)};
}

DicksonCoefficients dickson_recursive(int N) {
    const auto [p1, p2] = dickson_polynomials(N);
    const BigInt scale = BigInt(1) << N;
    DicksonCoefficients out;
    out.order = N;
    for (int l = 0; l <= N; ++l) {
        out.a1_scaled.push_back(p1.coefficient(N - 2 * l) * scale);
        out.a2_scaled.push_back(p2.coefficient(N - 2 * l) * scale);
    }
    return out;
}

BigInt binomial(int n, int r) {
    if (n < 0 || r < 0 || r > n) return 0;
    r = std::min(r, n - r);
    BigInt acc = 1;
    for (int i = 1; i <= r; ++i) {
        acc *= n - r + i;
        acc /= i;
    }
    return acc;
}

DicksonCoefficients dickson_closed_form(int N) {
    if (N < 0) throw DomainError("Dickson order must be non-negative");
    // inner(j, l, d, off) = sum_{m=0}^{l-off} (-8)^m C(j,m) C(N-2m-d, l-m-off)
    auto inner = [N](int j, int l, int d, int off) {
        BigInt acc = 0;
        BigInt pow8 = 1;
        for (int m = 0; m <= l - off; ++m) {
            acc += pow8 * binomial(j, m) * binomial(N - 2 * m - d, l - m - off);
            pow8 *= -8;
        }
        return acc;
    };
    DicksonCoefficients out;
    out.order = N;
    for (int l = 0; l <= N; ++l) {
        BigInt s1 = 0;
        BigInt s2 = 0;
        for (int j = 0; j <= N / 2; ++j) {
            const BigInt even = binomial(N, 2 * j);
            const BigInt odd = binomial(N, 2 * j + 1);
            s1 += (even - odd) * inner(j, l, 0, 0);
            s1 -= 2 * odd * inner(j, l, 1, 0);
            s1 += 2 * odd * inner(j, l, 1, 1);
            s2 += binomial(N + 1, 2 * j + 1) * inner(j, l, 0, 0);
        }
        out.a1_scaled.push_back(std::move(s1));
        out.a2_scaled.push_back(std::move(s2));
    }
    return out;
}

WalkOperatorEntries walk_operator_entries(int T) {
    if (T < 1) throw DomainError("walk operator entries need T >= 1");
    const auto [p1, p2] = dickson_polynomials(T - 1);
    WalkOperatorEntries e;
    e.a1 = p1.shifted(-1);
    e.a2_over_i = p2.shifted(1);
    e.a3_over_i = p2.reflected().shifted(-1);
    e.a4 = p1.reflected().shifted(1);
    return e;
}

MomentumDistribution resonant_distribution(const WalkConfig& config, const RatchetSpec& ratchet,
                                           const DicksonCoefficients& coefficients) {
    config.validate();
    ratchet.validate();
    if (config.quasimomentum != 0.0) {
        throw DomainError("resonant route needs quasimomentum 0; use the near-resonant route for beta != 0");
    }
    if (config.steps < 1) throw DomainError("resonant route needs at least one step");
    if (config.free_evolution == FreeEvolution::kFull && !config.is_resonant_period()) {
        throw DomainError("full free evolution is only trivial at tau = 4 pi j");
    }
    const int N = config.steps - 1;
    if (coefficients.order != N) throw DomainError("coefficient order does not match T - 1");

    const int cutoff = resolved_cutoff(config, ratchet);
    const int reach = cutoff + ratchet.max_abs_class();
    const double k = config.kick_strength;
    const double b1 = ratchet.level_weights[0];
    const double b2 = ratchet.level_weights[1];

    std::vector<cplx> weights;
    for (int s : ratchet.classes) weights.push_back(ratchet_momentum_weight(ratchet, s));

    // W(g)(n) = sum_s w_s J_{n-s}(g k) on the grid, one Bessel row per g.
    std::unordered_map<int, std::vector<cplx>> ladder;
    auto ladder_for = [&](int g) -> const std::vector<cplx>& {
        auto it = ladder.find(g);
        if (it != ladder.end()) return it->second;
        const auto row = bessel_row(g * k, -reach, reach);
        std::vector<cplx> w(static_cast<std::size_t>(2 * cutoff + 1));
        for (int n = -cutoff; n <= cutoff; ++n) {
            cplx acc{};
            for (std::size_t i = 0; i < weights.size(); ++i) {
                acc += weights[i] * row[static_cast<std::size_t>(n - ratchet.classes[i] + reach)];
            }
            w[static_cast<std::size_t>(n + cutoff)] = acc;
        }
        return ladder.emplace(g, std::move(w)).first->second;
    };

    const auto size = static_cast<std::size_t>(2 * cutoff + 1);
    std::vector<cplx> a1_up(size), a2_up(size), a1_down(size), a2_down(size);
    for (int l = 0; l <= N; ++l) {
        const double c1 = coefficients.a1(l);
        const double c2 = coefficients.a2(l);
        const int g1 = N - 2 * l - 1;
        const int g2 = N - 2 * l + 1;
        if (c1 != 0.0) {
            const auto& up = ladder_for(g1);
            const auto& down = ladder_for(-g1);
            for (std::size_t i = 0; i < size; ++i) {
                a1_up[i] += c1 * up[i];
                a1_down[i] += c1 * down[i];
            }
        }
        if (c2 != 0.0) {
            const auto& up = ladder_for(g2);
            const auto& down = ladder_for(-g2);
            for (std::size_t i = 0; i < size; ++i) {
                a2_up[i] += c2 * up[i];
                a2_down[i] += c2 * down[i];
            }
        }
    }

    const double norm = std::ldexp(1.0, -config.steps) / static_cast<double>(ratchet.classes.size());
    std::vector<double> p1(size), p2(size);
    for (std::size_t i = 0; i < size; ++i) {
        p1[i] = norm * std::norm(b1 * a1_up[i] + kI * b2 * a2_up[i]);
        p2[i] = norm * std::norm(b2 * a1_down[i] + kI * b1 * a2_down[i]);
    }
    auto dist = MomentumDistribution::from_levels(cutoff, std::move(p1), std::move(p2));
    dist.config = config;
    dist.ratchet = ratchet;
    dist.route = Route::kResonant;
    return dist;
}

MomentumDistribution resonant_distribution(const WalkConfig& config, const RatchetSpec& ratchet) {
    if (config.steps < 1) throw DomainError("resonant route needs at least one step");
    return resonant_distribution(config, ratchet, dickson_recursive(config.steps - 1));
}

}  // namespace qwalk
