#include "qwalk/observables.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qwalk/quantum_map.hpp"
#include "qwalk/resonant.hpp"

namespace {

using namespace qwalk;

MomentumDistribution make(int cutoff, std::vector<double> p) {
    std::vector<double> zero(p.size(), 0.0);
    return MomentumDistribution::from_levels(cutoff, std::move(p), std::move(zero));
}

MomentumDistribution padded(const MomentumDistribution& d, int extra) {
    std::vector<double> p(d.size() + 2 * static_cast<std::size_t>(extra), 0.0);
    std::copy(d.total.begin(), d.total.end(), p.begin() + extra);
    return make(d.cutoff + extra, std::move(p));
}

MomentumDistribution random_dist(std::mt19937_64& rng, int cutoff) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> p(2 * static_cast<std::size_t>(cutoff) + 1);
    for (double& x : p) x = u(rng);
    return make(cutoff, std::move(p));
}

std::vector<int> range(int lo, int hi) {
    std::vector<int> v;
    for (int t = lo; t <= hi; ++t) v.push_back(t);
    return v;
}

TEST(Moments, InitialRatchet) {
    WalkConfig c;
    c.steps = 0;
    const auto d = walk(c, RatchetSpec{});
    EXPECT_NEAR(mean_momentum(d), 0.5, 1e-15);
    EXPECT_NEAR(std_dev(d), 0.5, 1e-15);
}

TEST(Moments, OneKickCurrent) {
    WalkConfig c;
    c.kick_strength = 2.0;
    RatchetSpec r;
    r.level_weights = {1.0, 0.0};
    r.relative_phase = std::numbers::pi / 2.0;
    EXPECT_NEAR(mean_momentum(walk(c, r)), -0.5, 1e-12);
}

TEST(Moments, SymmetricAboutHalf) {
    const auto d = make(3, {0.0, 0.1, 0.2, 0.2, 0.1, 0.0, 0.0});
    const auto s = make(3, {0.0, 0.05, 0.2, 0.25, 0.25, 0.2, 0.05});
    EXPECT_NEAR(mean_momentum(s), 0.5, 1e-15);
    EXPECT_THROW(mean_momentum(d), DomainError);
    EXPECT_THROW(std_dev(d), DomainError);
}

TEST(Moments, PaddingInvariant) {
    for (int T : {3, 9}) {
        WalkConfig c;
        c.kick_strength = 2.0;
        c.steps = T;
        const auto d = walk(c, RatchetSpec{});
        for (int extra : {1, 7, 40}) {
            const auto e = padded(d, extra);
            EXPECT_NEAR(mean_momentum(e), mean_momentum(d), 1e-13);
            EXPECT_NEAR(std_dev(e), std_dev(d), 1e-13);
        }
    }
}

TEST(Distances, Basics) {
    const auto a = make(1, {0.2, 0.5, 0.3});
    const auto b = make(1, {0.1, 0.7, 0.2});
    EXPECT_EQ(l1_distance(a, a), 0.0);
    EXPECT_NEAR(l1_distance(a, b), 0.4, 1e-15);
    EXPECT_NEAR(l1_distance(a, b, {0}), 0.2, 1e-15);
    EXPECT_NEAR(l1_distance(a, b, kInitialClasses), 0.1, 1e-15);
    EXPECT_NEAR(max_abs_difference(a, b), 0.2, 1e-15);
    EXPECT_NEAR(max_abs_difference(a, b, {0}), 0.1, 1e-15);
    EXPECT_EQ(argmax_abs_difference(a, b), 0);
    // Excluded classes outside the grid are harmless.
    EXPECT_NEAR(l1_distance(a, b, {99}), 0.4, 1e-15);
    EXPECT_THROW(l1_distance(a, make(2, {0, 0, 1, 0, 0})), DomainError);
    EXPECT_THROW(max_abs_difference(a, make(2, {0, 0, 1, 0, 0})), DomainError);
}

TEST(Distances, MetricProperties) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = random_dist(rng, 6);
        const auto b = random_dist(rng, 6);
        const auto c = random_dist(rng, 6);
        const std::set<int> ex = trial % 2 ? kInitialClasses : std::set<int>{};
        EXPECT_EQ(l1_distance(a, b, ex), l1_distance(b, a, ex));
        EXPECT_GT(l1_distance(a, b, ex), 0.0);
        EXPECT_LE(l1_distance(a, c, ex), l1_distance(a, b, ex) + l1_distance(b, c, ex) + 1e-15);
        EXPECT_LE(max_abs_difference(a, c, ex), max_abs_difference(a, b, ex) + max_abs_difference(b, c, ex) + 1e-15);
        EXPECT_LE(max_abs_difference(a, b, ex), l1_distance(a, b, ex));
    }
}

TEST(Peaks, ThresholdAndPlateaus) {
    EXPECT_EQ(peak_positions(make(3, {0.0, 0.3, 0.1, 0.05, 0.1, 0.4, 0.0})), (std::vector<int>{-2, 2}));
    EXPECT_EQ(peak_positions(make(3, {0.0, 0.3, 0.1, 0.05, 0.1, 0.4, 0.0}), 0.8), (std::vector<int>{2}));
    EXPECT_EQ(peak_positions(make(2, {0.1, 0.3, 0.3, 0.2, 0.1})), (std::vector<int>{-1}));
    EXPECT_EQ(peak_positions(make(1, {0.5, 0.2, 0.3})), (std::vector<int>{-1, 1}));
    EXPECT_EQ(peak_positions(make(1, {0.5, 0.2, 0.2})), (std::vector<int>{-1}));
    EXPECT_TRUE(peak_positions(make(1, {0.0, 0.0, 0.0})).empty());
}

TEST(Peaks, BallisticFronts) {
    // Outermost dominant maxima sit at mirror positions n, 1 - n and move
    // outward linearly in T.
    std::vector<double> Ts, fronts;
    for (int T : {4, 8, 12, 16, 20}) {
        WalkConfig c;
        c.kick_strength = 2.0;
        c.steps = T;
        const auto peaks = peak_positions(resonant_distribution(c, RatchetSpec{}));
        ASSERT_GE(peaks.size(), 2u) << T;
        EXPECT_EQ(peaks.front(), 1 - peaks.back()) << T;
        EXPECT_GE(peaks.back(), T / 2) << T;
        Ts.push_back(T);
        fronts.push_back(peaks.back());
    }
    const auto fit = fit_line(Ts, fronts);
    EXPECT_GT(fit.slope, 0.8);
    EXPECT_GE(fit.r_squared, 0.95);
}

TEST(Fit, ExactLineAndDegenerateCases) {
    const auto f = fit_line({1, 2, 3, 4}, {3, 5, 7, 9});
    EXPECT_NEAR(f.slope, 2.0, 1e-14);
    EXPECT_NEAR(f.intercept, 1.0, 1e-14);
    EXPECT_NEAR(f.r_squared, 1.0, 1e-14);
    const auto flat = fit_line({1, 2, 3, 4}, {2, 2, 2, 2});
    EXPECT_EQ(flat.slope, 0.0);
    EXPECT_EQ(flat.r_squared, 0.0);
    EXPECT_EQ(fit_line({5, 5, 5, 5}, {1, 2, 3, 4}).r_squared, 0.0);
    const auto noisy = fit_line({1, 2, 3, 4, 5}, {1, 3, 2, 5, 4});
    EXPECT_GE(noisy.r_squared, 0.0);
    EXPECT_LE(noisy.r_squared, 1.0);
}

TEST(Fit, BallisticExpansion) {
    WalkConfig c;
    c.kick_strength = 2.0;
    const auto fast = ballistic_fit(c, RatchetSpec{}, range(5, 20));
    EXPECT_GE(fast.r_squared, 0.99);
    EXPECT_EQ(fast.T_range, std::make_pair(5, 20));
    const auto same = ballistic_fit(c, RatchetSpec{}, range(5, 20), Route::kResonant);
    EXPECT_NEAR(same.slope, fast.slope, 1e-10);
    c.kick_strength = 0.5;
    const auto slow = ballistic_fit(c, RatchetSpec{}, range(5, 20));
    EXPECT_LT(slow.slope, 0.2 * fast.slope);
}

TEST(Fit, StrongKickDestroysWalk) {
    // The second moment still grows linearly at k = 100 (r^2 is not a
    // discriminator); what disappears are the outward-moving fronts.
    WalkConfig c;
    c.kick_strength = 100.0;
    for (int T : {8, 12, 20}) {
        c.steps = T;
        const auto peaks = peak_positions(walk(c, RatchetSpec{}));
        ASSERT_FALSE(peaks.empty());
        for (int n : peaks) EXPECT_TRUE(kInitialClasses.contains(n)) << T << " " << n;
        // Many spurious local maxima: the distribution is noisy.
        EXPECT_GT(peak_positions(walk(c, RatchetSpec{}), 0.0).size(), 100u);
    }
}

// Stated expectation that the k = 100 fit is worse than k = 2. It is not
// (both r^2 ~ 0.99995); kept disabled, see StrongKickDestroysWalk.
TEST(Fit, DISABLED_StrongKickDegradesFit) {
    std::vector<int> Ts = range(5, 20);
    WalkConfig c;
    c.kick_strength = 2.0;
    const double r2 = ballistic_fit(c, RatchetSpec{}, Ts).r_squared;
    c.kick_strength = 100.0;
    EXPECT_LT(ballistic_fit(c, RatchetSpec{}, Ts).r_squared, r2);
}

TEST(Fit, Rejections) {
    WalkConfig c;
    EXPECT_THROW(ballistic_fit(c, RatchetSpec{}, {1, 2, 3}), ConfigError);
    EXPECT_THROW(ballistic_fit(c, RatchetSpec{}, {1, 2, 3, 4}, Route::kNearResonant), ConfigError);
}

}  // namespace
