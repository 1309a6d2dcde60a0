#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fwsim/angles.hpp"
#include "fwsim/metrics.hpp"

using namespace fwsim;

TEST(ImageError, RollOnlyAtHighReference) {
    EXPECT_NEAR(total_image_error(0, deg2rad(10), 450), 79.35, 0.005);
    EXPECT_NEAR(total_image_error(0, deg2rad(10), 150), 150 * std::tan(deg2rad(10)), 1e-12);
}

TEST(ImageError, LateralOnly) {
    EXPECT_DOUBLE_EQ(total_image_error(12.5, 0, 450), 12.5);
}

TEST(ImageError, RollCanCancelLateral) {
    const double phi = std::atan(10.0 / 150.0);
    EXPECT_NEAR(total_image_error(-10, phi, 150), 0.0, 1e-12);
}

TEST(ImageError, VerticalBankIsDomainError) {
    EXPECT_THROW(total_image_error(0, kPi / 2, 150), DomainError);
    EXPECT_THROW(total_image_error(0, -2.0, 150), DomainError);
}

TEST(ImageError, RecordDecomposesProperty) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> lat(-100, 100), phi(-1.4, 1.4), h(10, 1000);
    for (int i = 0; i < 2000; ++i) {
        const double l = lat(rng), p = phi(rng), hr = h(rng);
        const ImageErrorRecord r = make_image_record(1.0, l, p, hr, 0.01, 3);
        EXPECT_NEAR(r.e_total, r.e_lateral + r.e_roll, 1e-9 * std::max(1.0, std::abs(r.e_total)));
        EXPECT_NEAR(std::atan(r.e_roll / hr), p, 1e-12);
        EXPECT_EQ(r.segment_id, 3u);
    }
}

TEST(ImageError, HigherReferenceAmplifiesRoll) {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> phi(-1.4, 1.4);
    for (int i = 0; i < 1000; ++i) {
        const double p = phi(rng);
        const double lo = total_image_error(0, p, 150), hi = total_image_error(0, p, 450);
        EXPECT_NEAR(hi, 3 * lo, 1e-9 * std::max(1.0, std::abs(hi)));
    }
}

TEST(LateralSelect, UsesActiveSegmentKind) {
    EXPECT_EQ(lateral_error_select(3, 7, SegmentKind::Line), 3);
    EXPECT_EQ(lateral_error_select(3, 7, SegmentKind::Orbit), 7);
}

TEST(BetaEstimate, WrappedDifference) {
    EXPECT_NEAR(beta_estimate(deg2rad(12), deg2rad(10)), deg2rad(2), 1e-15);
    EXPECT_NEAR(beta_estimate(deg2rad(-179), deg2rad(179)), deg2rad(2), 1e-12);
}

TEST(Stats, HandExample) {
    const std::vector<double> v{1, 2, 3};
    const ErrorStats s = series_stats(v);
    EXPECT_DOUBLE_EQ(s.mean, 2.0);
    EXPECT_NEAR(s.rms, std::sqrt(14.0 / 3.0), 1e-15);
    EXPECT_NEAR(s.std_1sigma, std::sqrt(2.0 / 3.0), 1e-15);
    EXPECT_EQ(s.count, 3u);
}

TEST(Stats, SymmetricPair) {
    const std::vector<double> v{-1, 1};
    const ErrorStats s = series_stats(v);
    EXPECT_DOUBLE_EQ(s.mean, 0.0);
    EXPECT_DOUBLE_EQ(s.rms, 1.0);
    EXPECT_DOUBLE_EQ(s.std_1sigma, 1.0);
}

TEST(Stats, TooFewSamples) {
    EXPECT_THROW(series_stats(std::vector<double>{}), DomainError);
    EXPECT_THROW(series_stats(std::vector<double>{1.0}), DomainError);
}

TEST(Stats, PythagoreanIdentityProperty) {
    std::mt19937_64 rng(47);
    std::normal_distribution<double> x(5, 20);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> v(2 + rng() % 500);
        for (double& e : v) e = x(rng);
        const ErrorStats s = series_stats(v);
        EXPECT_NEAR(s.rms * s.rms, s.mean * s.mean + s.std_1sigma * s.std_1sigma,
                    1e-9 * s.rms * s.rms);
        EXPECT_GE(s.std_1sigma, 0.0);
        EXPECT_LE(std::abs(s.mean), s.rms + 1e-12);
    }
}

TEST(Stats, TotalVarianceDecomposesProperty) {
    // var(lat + roll) = var(lat) + var(roll) + 2 cov(lat, roll)
    std::mt19937_64 rng(53);
    std::normal_distribution<double> n(0, 1);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t N = 1000;
        std::vector<double> lat(N), roll(N), tot(N);
        double ml = 0, mr = 0;
        for (std::size_t i = 0; i < N; ++i) {
            lat[i] = 10 * n(rng);
            const double phi = 0.2 * n(rng) + 0.01 * lat[i];
            roll[i] = 450 * std::tan(phi);
            tot[i] = total_image_error(lat[i], phi, 450);
            ml += lat[i];
            mr += roll[i];
        }
        ml /= N;
        mr /= N;
        double cov = 0;
        for (std::size_t i = 0; i < N; ++i) cov += (lat[i] - ml) * (roll[i] - mr);
        cov /= N;
        const double sl = series_stats(lat).std_1sigma, sr = series_stats(roll).std_1sigma;
        const double st = series_stats(tot).std_1sigma;
        EXPECT_NEAR(st * st, sl * sl + sr * sr + 2 * cov, 1e-8 * st * st);
    }
}
