#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "wigmap/error.hpp"
#include "wigmap/grids.hpp"
#include "wigmap/states.hpp"

using namespace wigmap;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(UniformAxis, NodesAndSpacing) {
    UniformAxis axis(-1.0, 1.0, 5);
    EXPECT_DOUBLE_EQ(axis.spacing(), 0.5);
    EXPECT_EQ(axis.node(4), 1.0);
    EXPECT_EQ(axis.nodes().size(), 5u);
    EXPECT_THROW(UniformAxis(1.0, 1.0, 5), std::invalid_argument);
    EXPECT_THROW(UniformAxis(0.0, 1.0, 1), std::invalid_argument);
}

TEST(PhaseSpaceGrid, RejectsDegenerateRanges) {
    EXPECT_THROW(PhaseSpaceGrid(0.0, 1.0, 2, 1.0, 0.0, 2), std::invalid_argument);
    EXPECT_THROW(PhaseSpaceGrid(0.0, 1.0, 1, 0.0, 1.0, 2), std::invalid_argument);
    PhaseSpaceGrid g(0.0, 1.0, 3, -2.0, 2.0, 5);
    EXPECT_DOUBLE_EQ(g.dq(), 0.5);
    EXPECT_DOUBLE_EQ(g.dp(), 1.0);
    EXPECT_EQ(g.size(), 15u);
}

TEST(PhaseSpaceField, RejectsNonFiniteAndWrongShape) {
    PhaseSpaceGrid g(0.0, 1.0, 2, 0.0, 1.0, 2);
    EXPECT_THROW(PhaseSpaceField(g, {1.0, 2.0, 3.0}), std::invalid_argument);
    EXPECT_THROW(PhaseSpaceField(g, {1.0, 2.0, NAN, 4.0}), std::invalid_argument);
    PhaseSpaceField f(g, {1.0, 2.0, 3.0, 4.0});
    EXPECT_EQ(f.at(1, 0), 3.0);
    EXPECT_EQ(f.row(1)[1], 4.0);
}

TEST(PhaseSpaceField, BilinearInterpolationAndZeroExtension) {
    PhaseSpaceGrid g(0.0, 1.0, 2, 0.0, 1.0, 2);
    PhaseSpaceField f(g, {0.0, 1.0, 2.0, 3.0});  // f = 2q + p
    EXPECT_NEAR(f.interpolate(0.25, 0.5), 1.0, 1e-15);
    EXPECT_EQ(f.interpolate(1.5, 0.5), 0.0);
    EXPECT_TRUE(f.contains(1.0, 1.0));
    EXPECT_FALSE(f.contains(-0.1, 0.5));
}

TEST(RadialProfile, Invariants) {
    EXPECT_THROW(RadialProfile({0.0, 0.0}, {1.0, 1.0}), std::invalid_argument);
    EXPECT_THROW(RadialProfile({-1.0, 0.0}, {1.0, 1.0}), std::invalid_argument);
    EXPECT_THROW(RadialProfile({0.0, 1.0}, {1.0}), std::invalid_argument);
    RadialProfile p({0.0, 0.5}, {1.0, 2.0});
    EXPECT_EQ(p.size(), 2u);
}

TEST(IntegrateField, ConstantIsExact) {
    const auto f = PhaseSpaceField::sample(PhaseSpaceGrid(0.0, 1.0, 11, 0.0, 1.0, 7), [](double, double) { return 1.0; });
    EXPECT_NEAR(integrate_field(f), 1.0, 1e-15);
}

TEST(IntegrateField, GaussianNormalized) {
    const PhaseSpaceGrid g(-6.0, 6.0, 401, -6.0, 6.0, 401);
    const auto f = PhaseSpaceField::sample(g, [](double q, double p) { return std::exp(-q * q - p * p) / kPi; });
    EXPECT_NEAR(integrate_field(f), 1.0, 1e-8);
}

TEST(IntegrateField, FockGroundState) {
    const PhaseSpaceGrid g(-6.0, 6.0, 401, -6.0, 6.0, 401);
    const auto f = PhaseSpaceField::sample(g, [](double q, double p) { return fock_wigner(0, 1.0, std::hypot(q, p)); });
    EXPECT_NEAR(integrate_field(f), 1.0, 1e-8);
}

TEST(IntegrateField, Linear) {
    const PhaseSpaceGrid g(-2.0, 3.0, 31, -1.0, 1.0, 17);
    const auto f = PhaseSpaceField::sample(g, [](double q, double p) { return std::sin(q) * p + 2.0; });
    const auto h = PhaseSpaceField::sample(g, [](double q, double p) { return q * q - std::cos(p); });
    const double a = 1.7;
    const double b = -0.3;
    std::vector<double> mix(g.size());
    for (std::size_t i = 0; i < mix.size(); ++i) {
        mix[i] = a * f.values()[i] + b * h.values()[i];
    }
    const double lhs = integrate_field(PhaseSpaceField(g, mix));
    const double rhs = a * integrate_field(f) + b * integrate_field(h);
    EXPECT_NEAR(lhs, rhs, 1e-13 * std::max(1.0, std::abs(rhs)));
}

TEST(Trapezoid, Basic) {
    const std::vector<double> samples{0.0, 1.0, 2.0};
    EXPECT_DOUBLE_EQ(trapezoid(samples, 0.5), 1.0);
    EXPECT_EQ(trapezoid(std::vector<double>{3.0}, 1.0), 0.0);
}

TEST(AdaptiveIntegrate, Square) { EXPECT_NEAR(adaptive_integrate([](double x) { return x * x; }, 0.0, 1.0, 1e-12), 1.0 / 3.0, 1e-14); }

TEST(AdaptiveIntegrate, CubicsAreExact) {
    for (int i = 0; i < 20; ++i) {
        const double c0 = 0.3 * i - 2.0;
        const double c1 = std::sin(i);
        const double c2 = std::cos(3.0 * i);
        const double c3 = 0.1 * i;
        const double a = -1.0 - 0.1 * i;
        const double b = 2.0 + 0.2 * i;
        const auto poly = [=](double x) { return c0 + x * (c1 + x * (c2 + x * c3)); };
        const auto anti = [=](double x) { return x * (c0 + x * (c1 / 2 + x * (c2 / 3 + x * c3 / 4))); };
        const double exact = anti(b) - anti(a);
        EXPECT_NEAR(adaptive_integrate(poly, a, b, 1e-12), exact, 1e-12 * std::max(1.0, std::abs(exact)));
    }
}

TEST(AdaptiveIntegrate, SemiInfiniteLaguerreExample) {
    // int_0^inf exp(-x/2) x L_1(x) dx = int exp(-x/2)(x - x^2) dx = 4 - 16
    const auto f = [](double x) { return std::exp(-x / 2) * x * laguerre(1, x); };
    EXPECT_NEAR(adaptive_integrate_to_infinity(f, 0.0, 1e-10), -12.0, 1e-9);
    EXPECT_NEAR(oracle::integrate_reference_to_infinity(f, 0.0), -12.0, 1e-9);
}

TEST(AdaptiveIntegrate, SemiInfiniteAgreesWithReference) {
    const auto f = [](double x) { return laguerre_weighted(10, x); };
    const QuadratureOptions options{1e-10, 0.0, 4000};
    const double ours = adaptive_integrate_to_infinity(f, 0.0, options).value;
    EXPECT_NEAR(ours, oracle::g_exact(10, 0), 1e-9);
}

TEST(AdaptiveIntegrate, AgainstTanhSinh) {
    const auto f = [](double x) { return std::exp(-x * x) * std::cos(5.0 * x); };
    EXPECT_NEAR(adaptive_integrate(f, -3.0, 4.0, 1e-12), oracle::integrate_reference(f, -3.0, 4.0), 1e-11);
}

TEST(AdaptiveIntegrate, NonConvergenceCarriesEstimate) {
    const auto f = [](double x) { return 1.0 / std::sqrt(std::abs(x - 0.3)); };
    const QuadratureOptions options{1e-14, 0.0, 5};
    try {
        adaptive_integrate(f, 0.0, 1.0, options);
        FAIL() << "expected NonConvergenceError";
    } catch (const NonConvergenceError& e) {
        EXPECT_TRUE(std::isfinite(e.best_estimate()));
        EXPECT_GT(e.error_estimate(), 1e-14);
        EXPECT_NEAR(e.best_estimate(), 2.0 * (std::sqrt(0.3) + std::sqrt(0.7)), 0.5);
    }
}

TEST(AdaptiveIntegrate, RejectsBadTolerance) {
    EXPECT_THROW(adaptive_integrate([](double x) { return x; }, 0.0, 1.0, 0.0), std::invalid_argument);
}

TEST(FindZeros, Examples) {
    const auto z1 = find_zeros([](double x) { return x * x - 1.0; }, 0.0, 2.0, 101);
    ASSERT_EQ(z1.size(), 1u);
    EXPECT_NEAR(z1[0], 1.0, 1e-13);

    const auto z2 = find_zeros([](double x) { return laguerre(2, x); }, 0.0, 8.0, 401);
    ASSERT_EQ(z2.size(), 2u);
    EXPECT_NEAR(z2[0], 2.0 - std::sqrt(2.0), 1e-13);
    EXPECT_NEAR(z2[1], 2.0 + std::sqrt(2.0), 1e-13);
}

TEST(FindZeros, ScaledFockCountMatchesJacobiRoots) {
    for (int n : {10, 20, 40}) {
        const auto zeros = find_zeros([n](double r) { return scaled_fock_wigner(n, r); }, 0.0, 1.0, 50 * n + 1);
        const auto roots = oracle::laguerre_roots(n);
        ASSERT_EQ(zeros.size(), static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) {
            EXPECT_NEAR(zeros[k], std::sqrt(roots[k] / (4.0 * n + 2.0)), 1e-9) << "n=" << n << " k=" << k;
        }
    }
}

TEST(FindZeros, StrictlyIncreasingWithAlternatingSigns) {
    const int n = 12;
    const auto f = [n](double x) { return laguerre_weighted(n, x); };
    const auto zeros = find_zeros(f, 0.0, 60.0, 3000);
    ASSERT_EQ(zeros.size(), static_cast<std::size_t>(n));
    for (std::size_t i = 1; i < zeros.size(); ++i) {
        ASSERT_LT(zeros[i - 1], zeros[i]);
    }
    for (std::size_t i = 1; i + 1 < zeros.size(); ++i) {
        const double left = f(0.5 * (zeros[i - 1] + zeros[i]));
        const double right = f(0.5 * (zeros[i] + zeros[i + 1]));
        EXPECT_LT(left * right, 0.0);
    }
}
