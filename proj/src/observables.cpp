#include "qwalk/observables.hpp"

#include <algorithm>
#include <cmath>

#include "qwalk/quantum_map.hpp"
#include "qwalk/resonant.hpp"

namespace qwalk {

namespace {

void require_same_grid(const MomentumDistribution& a, const MomentumDistribution& b) {
    if (a.cutoff != b.cutoff || a.size() != b.size()) {
        throw DomainError("distributions live on different momentum grids");
    }
}

template <class F>
void for_each_difference(const MomentumDistribution& a, const MomentumDistribution& b, const std::set<int>& exclude,
                         F&& f) {
    require_same_grid(a, b);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const int n = a.n_at(i);
        if (!exclude.contains(n)) f(n, std::abs(a.total[i] - b.total[i]));
    }
}

}  // namespace

double mean_momentum(const MomentumDistribution& dist) {
    require_normalized(dist);
    double m = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) m += dist.n_at(i) * dist.total[i];
    return m;
}

double std_dev(const MomentumDistribution& dist) {
    const double mean = mean_momentum(dist);
    double var = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
        const double d = dist.n_at(i) - mean;
        var += d * d * dist.total[i];
    }
    return std::sqrt(std::max(var, 0.0));
}

std::vector<int> peak_positions(const MomentumDistribution& dist, double threshold) {
    std::vector<int> peaks;
    if (dist.total.empty()) return peaks;
    const double top = *std::max_element(dist.total.begin(), dist.total.end());
    if (!(top > 0.0)) return peaks;
    const auto& p = dist.total;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double left = i == 0 ? 0.0 : p[i - 1];
        const double right = i + 1 == p.size() ? 0.0 : p[i + 1];
        if (p[i] > left && p[i] >= right && p[i] >= threshold * top) peaks.push_back(dist.n_at(i));
    }
    return peaks;
}

double l1_distance(const MomentumDistribution& a, const MomentumDistribution& b, const std::set<int>& exclude) {
    double s = 0.0;
    for_each_difference(a, b, exclude, [&](int, double d) { s += d; });
    return s;
}

double max_abs_difference(const MomentumDistribution& a, const MomentumDistribution& b,
                          const std::set<int>& exclude) {
    double m = 0.0;
    for_each_difference(a, b, exclude, [&](int, double d) { m = std::max(m, d); });
    return m;
}

int argmax_abs_difference(const MomentumDistribution& a, const MomentumDistribution& b) {
    double m = -1.0;
    int where = 0;
    for_each_difference(a, b, {}, [&](int n, double d) {
        if (d > m) {
            m = d;
            where = n;
        }
    });
    return where;
}

BallisticFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw DomainError("fit needs matching samples, at least two");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    BallisticFit fit;
    if (sxx == 0.0) {
        fit.intercept = my;
        return fit;
    }
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    // A constant response is fitted perfectly but carries no trend.
    if (syy > 0.0) fit.r_squared = std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
    return fit;
}

BallisticFit ballistic_fit(const WalkConfig& config, const RatchetSpec& ratchet, const std::vector<int>& T_values,
                           Route route) {
    if (T_values.size() < 4) throw ConfigError("ballistic fit needs at least four step counts");
    if (route == Route::kNearResonant) throw ConfigError("ballistic fit needs a normalised route");
    std::vector<double> x, y;
    for (int T : T_values) {
        WalkConfig c = config;
        c.steps = T;
        const auto dist = route == Route::kResonant ? resonant_distribution(c, ratchet) : walk(c, ratchet);
        x.push_back(T);
        y.push_back(std_dev(dist));
    }
    BallisticFit fit = fit_line(x, y);
    const auto [lo, hi] = std::minmax_element(T_values.begin(), T_values.end());
    fit.T_range = {*lo, *hi};
    return fit;
}

}  // namespace qwalk
