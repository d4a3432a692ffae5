#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "wrsn/stats.hpp"

namespace st = wrsn::stats;

TEST(Poisson, PmfMatchesProductForm) {
    for (double lambda : {0.05, 0.3, 1.0, 4.5, 17.0, 60.0})
        for (long k = 0; k <= 120; k += 3) {
            const double expected = static_cast<double>(oracle::poisson_pmf(k, lambda));
            EXPECT_NEAR(st::poisson_pmf(k, lambda), expected, 1e-12 + 1e-10 * expected) << k << " " << lambda;
        }
}

TEST(Poisson, CentralMassMatchesBruteForce) {
    for (double lambda : {0.1, 0.286, 1.0, 2.5, 9.0, 31.0})
        for (long c = 0; c <= 60; ++c)
            EXPECT_NEAR(st::poisson_central_mass(c, lambda),
                        static_cast<double>(oracle::poisson_central_mass(c, lambda)), 1e-12)
                << c << " " << lambda;
}

TEST(Poisson, TailAndCentralMassSumToOne) {
    for (double lambda : {0.2, 3.0, 40.0})
        for (long c = 0; c <= 90; c += 7)
            EXPECT_NEAR(st::poisson_central_mass(c, lambda) + st::poisson_two_sided_tail(c, lambda), 1.0, 1e-13);
}

TEST(Poisson, CountAtTheMeanIsNeverAnomalous) {
    EXPECT_EQ(st::poisson_central_mass(3, 3.0), 0.0);
    EXPECT_NEAR(st::poisson_two_sided_tail(3, 3.0), 1.0, 1e-15);
}

TEST(Normal, CentralMassMatchesQuadrature) {
    for (int i = 0; i <= 160; ++i) {
        const double z = -8.0 + 0.1 * i;
        EXPECT_NEAR(st::normal_central_mass(z), static_cast<double>(oracle::normal_central_mass(z)), 1e-12) << z;
    }
}

TEST(Normal, CdfSymmetry) {
    for (double z : {0.0, 0.3, 1.7, 4.2}) EXPECT_NEAR(st::normal_cdf(z) + st::normal_cdf(-z), 1.0, 1e-15);
    EXPECT_DOUBLE_EQ(st::normal_cdf(0.0), 0.5);
}

TEST(Normal, PdfAtMean) {
    EXPECT_NEAR(st::normal_pdf(2.0, 2.0, 4.0), 1.0 / std::sqrt(8.0 * M_PI), 1e-15);
}

TEST(IncompleteBeta, MatchesSeries) {
    for (double a : {0.5, 1.0, 1.5, 2.0, 7.5, 30.0})
        for (double b : {0.7, 1.0, 3.0, 12.0, 41.0})
            for (int i = 1; i < 20; ++i) {
                const double x = i / 20.0;
                EXPECT_NEAR(st::regularized_incomplete_beta(x, a, b),
                            static_cast<double>(oracle::incomplete_beta(x, a, b)), 1e-11)
                    << x << " " << a << " " << b;
            }
}

TEST(IncompleteBeta, MatchesBinomialSumForIntegers) {
    for (int a = 1; a <= 12; a += 3)
        for (int b = 1; b <= 12; b += 2)
            for (double x : {0.01, 0.2, 0.5, 0.77, 0.99})
                EXPECT_NEAR(st::regularized_incomplete_beta(x, a, b),
                            static_cast<double>(oracle::incomplete_beta_binomial(x, a, b)), 1e-12);
}

TEST(IncompleteBeta, Endpoints) {
    EXPECT_EQ(st::regularized_incomplete_beta(0.0, 2.0, 3.0), 0.0);
    EXPECT_EQ(st::regularized_incomplete_beta(1.0, 2.0, 3.0), 1.0);
}

TEST(BetaPdf, MatchesClosedForm) {
    for (double x : {0.1, 0.4, 0.9})
        EXPECT_NEAR(st::beta_pdf(x, 3.0, 2.0), static_cast<double>(oracle::beta_density(x, 3.0, 2.0)), 1e-13);
    EXPECT_NEAR(st::beta_pdf(0.5, 1.0, 1.0), 1.0, 1e-15);
}

TEST(BetaMode, InteriorAndBoundary) {
    EXPECT_DOUBLE_EQ(st::beta_mode(3.0, 3.0), 0.5);
    EXPECT_DOUBLE_EQ(st::beta_mode(11.0, 1.0), 1.0);
    EXPECT_DOUBLE_EQ(st::beta_mode(1.0, 4.0), 0.0);
    EXPECT_DOUBLE_EQ(st::beta_mode(1.0, 1.0), 0.5);
    EXPECT_DOUBLE_EQ(st::beta_mode(5.0, 2.0), 0.8);
}

TEST(BetaModeTail, OneAtModeAndShrinksAway) {
    const double a = 6.0;
    const double b = 3.0;
    const double mode = st::beta_mode(a, b);
    EXPECT_DOUBLE_EQ(st::beta_mode_tail(mode, a, b), 1.0);
    double prev = 1.0;
    for (double x = mode - 0.05; x > 0.0; x -= 0.05) {
        const double t = st::beta_mode_tail(x, a, b);
        EXPECT_LE(t, prev);
        prev = t;
    }
    prev = 1.0;
    for (double x = mode + 0.02; x < 1.0; x += 0.02) {
        const double t = st::beta_mode_tail(x, a, b);
        EXPECT_LE(t, prev);
        prev = t;
    }
}

TEST(BetaModeTail, MatchesSideNormalizedOracle) {
    const double a = 4.0;
    const double b = 7.0;
    const double mode = (a - 1) / (a + b - 2);
    const auto I = [&](double x) { return oracle::incomplete_beta(x, a, b); };
    for (double x : {0.05, 0.15, 0.25})
        EXPECT_NEAR(st::beta_mode_tail(x, a, b), static_cast<double>(I(x) / I(mode)), 1e-11);
    for (double x : {0.4, 0.6, 0.9})
        EXPECT_NEAR(st::beta_mode_tail(x, a, b), static_cast<double>((1 - I(x)) / (1 - I(mode))), 1e-11);
}
