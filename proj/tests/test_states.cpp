#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "wigmap/states.hpp"

using namespace wigmap;

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs_diff(const PhaseSpaceField& field, const std::function<double(double, double)>& f) {
    const auto& g = field.grid();
    double err = 0.0;
    for (std::size_t iq = 0; iq < g.n_q(); ++iq) {
        for (std::size_t ip = 0; ip < g.n_p(); ++ip) {
            err = std::max(err, std::abs(field.at(iq, ip) - f(g.q().node(iq), g.p().node(ip))));
        }
    }
    return err;
}

// Kernel lattice with spacing 0.05 on [-10, 10]; grid q nodes sit on it.
const UniformAxis kAxis(-10.0, 10.0, 401);
const PhaseSpaceGrid kGrid(-5.0, 5.0, 101, -6.0, 6.0, 121);

}  // namespace

// -- Laguerre ----------------------------------------------------------------------

TEST(Laguerre, SeedsAndHandValues) {
    EXPECT_EQ(laguerre(0, 3.7), 1.0);
    EXPECT_EQ(laguerre(1, 3.0), -2.0);
    EXPECT_DOUBLE_EQ(laguerre(2, 2.0), -1.0);
    EXPECT_THROW(laguerre(-1, 0.0), std::invalid_argument);
}

TEST(Laguerre, UnitAtOrigin) {
    for (int n = 0; n <= 100; ++n) {
        EXPECT_EQ(laguerre(n, 0.0), 1.0) << n;
    }
}

TEST(Laguerre, AgainstExplicitSum) {
    for (int n : {3, 7, 15, 30}) {
        for (double x : {0.1, 1.0, 2.5, 7.0, 20.0}) {
            const double ref = oracle::laguerre(n, x);
            EXPECT_NEAR(laguerre(n, x), ref, 1e-11 * std::max(1.0, std::abs(ref))) << n << " " << x;
        }
    }
}

TEST(LaguerreWeighted, Examples) {
    EXPECT_DOUBLE_EQ(laguerre_weighted(0, 2.0), std::exp(-1.0));
    const double x = 42.0 * 0.25;
    EXPECT_NEAR(laguerre_weighted(10, x), oracle::laguerre_weighted(10, x), 1e-14);
    const double big = laguerre_weighted(40, 162.0);
    ASSERT_TRUE(std::isfinite(big));
    const double ref = oracle::laguerre_weighted(40, 162.0);
    EXPECT_NEAR(big, ref, 1e-10 * std::abs(ref));
    EXPECT_THROW(laguerre_weighted(3, -1.0), std::domain_error);
}

TEST(LaguerreWeighted, NoOverflowInStatedRange) {
    for (int n : {50, 100, 200}) {
        for (double x : {0.5, 10.0, 100.0, 400.0, 800.0, 1500.0, 4000.0}) {
            const double v = laguerre_weighted(n, x);
            ASSERT_TRUE(std::isfinite(v)) << n << " " << x;
            const double ref = oracle::laguerre_weighted(n, x);
            EXPECT_NEAR(v, ref, 1e-9 * std::abs(ref) + 1e-300) << n << " " << x;
        }
    }
}

// -- Wave functions and kernels ----------------------------------------------------

TEST(WaveFunction, NormChecked) {
    const UniformAxis axis(-1.0, 1.0, 3);
    EXPECT_THROW(WaveFunction(axis, {1.0, 1.0, 1.0}, 1.0), std::invalid_argument);
    EXPECT_THROW(WaveFunction(axis, {1.0, 1.0}, 1.0), std::invalid_argument);
    EXPECT_NO_THROW(WaveFunction(axis, {0.0, 1.0, 0.0}, 1.0));
}

TEST(WaveFunction, FockStatesOrthonormal) {
    const double hbar = 0.5;
    std::vector<WaveFunction> states;
    for (int n = 0; n <= 6; ++n) {
        states.push_back(fock_wavefunction(kAxis, n, hbar));
    }
    std::vector<double> overlap(kAxis.size());
    for (int a = 0; a <= 6; ++a) {
        for (int b = 0; b <= 6; ++b) {
            for (std::size_t i = 0; i < kAxis.size(); ++i) {
                overlap[i] = (std::conj(states[a].samples()[i]) * states[b].samples()[i]).real();
            }
            EXPECT_NEAR(trapezoid(overlap, kAxis.spacing()), a == b ? 1.0 : 0.0, 1e-12);
        }
    }
}

TEST(DensityKernel, ValidatesHermiticityAndTrace) {
    const UniformAxis axis(0.0, 1.0, 2);
    EXPECT_THROW(DensityKernel(axis, {{1.0, 0.0}, {0.5, 0.0}, {0.0, 0.0}, {1.0, 0.0}}, 1.0), std::invalid_argument);
    EXPECT_THROW(DensityKernel(axis, {{2.0, 0.0}, {0.0, 0.0}, {0.0, 0.0}, {2.0, 0.0}}, 1.0), std::invalid_argument);
    DensityKernel ok(axis, {{1.0, 0.0}, {0.0, 0.25}, {0.0, -0.25}, {1.0, 0.0}}, 1.0);
    EXPECT_NEAR(ok.trace(), 1.0, 1e-15);
    EXPECT_EQ(ok.hermiticity_residual(), 0.0);
}

TEST(DensityKernel, MixtureWeights) {
    const auto psi0 = fock_wavefunction(kAxis, 0, 1.0);
    const auto psi1 = fock_wavefunction(kAxis, 1, 1.0);
    const std::vector<WaveFunction> states{psi0, psi1};
    const auto equal = DensityKernel::mixture(states);
    ASSERT_EQ(equal.weights().size(), 2u);
    EXPECT_EQ(equal.weights()[0], 0.5);
    EXPECT_NEAR(equal.trace(), 1.0, 1e-12);
    EXPECT_THROW(DensityKernel::mixture(states, {0.7, 0.7}), std::invalid_argument);
    EXPECT_THROW(DensityKernel::mixture(states, {1.2, -0.2}), std::invalid_argument);
    const auto weighted = DensityKernel::mixture(states, {0.25, 0.75});
    const std::size_t mid = kAxis.size() / 2;
    EXPECT_NEAR(weighted(mid, mid).real(), 0.25 * std::norm(psi0.samples()[mid]), 1e-15);
}

TEST(DensityKernel, ThermalClosedFormHasUnitTrace) {
    const auto k = thermal_kernel(kAxis, 1.0, 1.0, 1.0, 0.3);
    EXPECT_NEAR(k.trace(), 1.0, 1e-10);
    EXPECT_THROW(thermal_kernel(kAxis, 0.0, 1.0, 1.0, 0.3), std::invalid_argument);
}

// -- Weyl transform ------------------------------------------------------------------

TEST(WignerFromKernel, GroundState) {
    for (double hbar : {1.0, 0.5}) {
        const auto w = wigner_from_kernel(fock_kernel(kAxis, 0, hbar), kGrid);
        EXPECT_LE(max_abs_diff(w.field, [hbar](double q, double p) { return std::exp(-(q * q + p * p) / hbar) / (kPi * hbar); }),
                  1e-8);
        EXPECT_LE(w.max_imag, 1e-12);
        EXPECT_TRUE(w.warnings.empty());
    }
}

TEST(WignerFromKernel, FockThreeMatchesClosedForm) {
    const auto w = wigner_from_kernel(fock_kernel(kAxis, 3, 1.0), kGrid);
    EXPECT_LE(max_abs_diff(w.field, [](double q, double p) { return fock_wigner(3, 1.0, std::hypot(q, p)); }), 1e-8);
}

TEST(WignerFromKernel, Normalized) {
    const PhaseSpaceGrid g(-7.0, 7.0, 281, -7.0, 7.0, 281);
    for (int n : {0, 2, 5}) {
        EXPECT_NEAR(integrate_field(wigner_from_kernel(fock_kernel(kAxis, n, 1.0), g).field), 1.0, 1e-7) << n;
    }
    EXPECT_NEAR(integrate_field(wigner_from_kernel(thermal_kernel(kAxis, 1.0, 1.0, 1.0, 0.5), g).field), 1.0, 1e-7);
}

TEST(WignerFromKernel, ThermalKernelMatchesClosedForm) {
    const double hbar = 0.3;
    const auto w = wigner_from_kernel(thermal_kernel(kAxis, 1.0, 1.0, 1.0, hbar), kGrid);
    EXPECT_LE(max_abs_diff(w.field, [hbar](double q, double p) { return thermal_wigner(1.0, 1.0, 1.0, hbar, q, p); }),
              1e-9);
}

TEST(WeylSymbol, MultiplicationOperatorGivesPotential) {
    const auto V = [](double x) { return 0.5 * x * x + std::sin(x); };
    const auto k = multiplication_kernel(kAxis, V, 1.0);
    const auto a = weyl_symbol(k, kGrid);
    EXPECT_LE(max_abs_diff(a.field, [&](double q, double) { return V(q); }), 1e-9);
}

TEST(WeylSymbol, MomentumFunctionGivesKineticSymbol) {
    // T(P) = exp(-P^2) has kernel (2 pi hbar)^{-1} sqrt(pi) exp(-u^2 / (4 hbar^2)).
    const UniformAxis axis(-20.0, 20.0, 401);
    const double hbar = 1.0;
    std::vector<Complex> m(axis.size() * axis.size());
    for (std::size_t a = 0; a < axis.size(); ++a) {
        for (std::size_t b = 0; b < axis.size(); ++b) {
            const double u = axis.node(a) - axis.node(b);
            m[a * axis.size() + b] = std::sqrt(kPi) / (2.0 * kPi * hbar) * std::exp(-u * u / (4.0 * hbar * hbar));
        }
    }
    const auto k = DensityKernel::operator_kernel(axis, std::move(m), hbar);
    const auto a = weyl_symbol(k, PhaseSpaceGrid(-5.0, 5.0, 11, -4.0, 4.0, 81));
    EXPECT_LE(max_abs_diff(a.field, [](double, double p) { return std::exp(-p * p); }), 1e-8);
}

TEST(WeylSymbol, SymbolIsTwoPiHbarTimesWigner) {
    const double hbar = 0.7;
    const auto k = fock_kernel(kAxis, 2, hbar);
    const auto a = weyl_symbol(k, kGrid);
    const auto w = wigner_from_kernel(k, kGrid);
    for (std::size_t i = 0; i < kGrid.size(); ++i) {
        ASSERT_NEAR(a.field.values()[i], 2.0 * kPi * hbar * w.field.values()[i], 1e-14);
    }
}

TEST(WeylSymbol, WarningsAndLatticeCheck) {
    const auto k = fock_kernel(UniformAxis(-4.5, 4.5, 91), 0, 1.0);  // band |p| < 15.7, not decayed at +-4.5
    const auto wide = weyl_symbol(k, PhaseSpaceGrid(-1.0, 1.0, 21, -20.0, 20.0, 41));
    ASSERT_EQ(wide.warnings.size(), 2u);
    EXPECT_THROW(weyl_symbol(k, PhaseSpaceGrid(-1.0, 1.0, 7, -2.0, 2.0, 5)), std::invalid_argument);
}

TEST(KernelFromSymbol, RoundTripOnDualGrid) {
    const UniformAxis axis(-8.0, 8.0, 161);
    const auto k = fock_kernel(axis, 2, 1.0);
    const PhaseSpaceGrid g = dual_grid(axis, 1.0, axis.size());
    const auto a = weyl_symbol(k, g);
    const auto back = kernel_from_symbol(a, axis);
    double err = 0.0;
    for (std::size_t i = 0; i < k.matrix().size(); ++i) {
        err = std::max(err, std::abs(back.matrix()[i] - k.matrix()[i]));
    }
    EXPECT_LE(err, 1e-12);
    const auto again = weyl_symbol(back, g);
    double err2 = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        err2 = std::max(err2, std::abs(again.field.values()[i] - a.field.values()[i]));
    }
    EXPECT_LE(err2, 1e-10);
}

TEST(KernelFromSymbol, GroundStateSymbolGivesGaussianKernel) {
    const UniformAxis axis(-8.0, 8.0, 161);
    const double hbar = 1.0;
    const PhaseSpaceGrid g = dual_grid(axis, hbar, axis.size());
    const WeylSymbol symbol{PhaseSpaceField::sample(g,
                                                    [hbar](double q, double p) {
                                                        return 2.0 * kPi * hbar * fock_wigner(0, hbar, std::hypot(q, p));
                                                    }),
                            hbar};
    const auto k = kernel_from_symbol(symbol, axis);
    const auto psi = [](double x) { return std::pow(kPi, -0.25) * std::exp(-0.5 * x * x); };
    double err = 0.0;
    for (std::size_t a = 0; a < axis.size(); ++a) {
        for (std::size_t b = 0; b < axis.size(); ++b) {
            err = std::max(err, std::abs(k(a, b) - psi(axis.node(a)) * psi(axis.node(b))));
        }
    }
    EXPECT_LE(err, 1e-8);
}

TEST(KernelFromSymbol, ConstantSymbolIsNearDiagonal) {
    const UniformAxis axis(-4.0, 4.0, 81);
    const double hbar = 1.0;
    const PhaseSpaceGrid g = dual_grid(axis, hbar, axis.size());
    const double area = (axis.max() - axis.min()) * (g.p().max() - g.p().min() + g.dp());
    const WeylSymbol symbol{PhaseSpaceField::sample(g, [&](double, double) { return 2.0 * kPi * hbar / area; }), hbar};
    const auto k = kernel_from_symbol(symbol, axis);
    EXPECT_NEAR(k.trace(), 1.0, 0.02);
    const std::size_t mid = axis.size() / 2;
    EXPECT_GT(std::abs(k(mid, mid)), 1e3 * std::abs(k(mid, mid + 4)));
}

TEST(KernelFromSymbol, RejectsWrongAxis) {
    const UniformAxis axis(-6.0, 6.0, 121);
    const auto a = weyl_symbol(fock_kernel(axis, 0, 1.0), dual_grid(axis, 1.0, 121));
    EXPECT_THROW(kernel_from_symbol(a, UniformAxis(-6.0, 6.0, 61)), std::invalid_argument);
}

TEST(TracePair, PurityNormalizationEnergy) {
    const UniformAxis axis(-10.0, 10.0, 201);
    const PhaseSpaceGrid g(-8.0, 8.0, 161, -8.0, 8.0, 321);
    const double hbar = 1.0;
    for (int n : {0, 1, 4}) {
        const auto a = weyl_symbol(fock_kernel(axis, n, hbar), g);
        EXPECT_NEAR(trace_pair(a, a), 1.0, 1e-6);
        const WeylSymbol one{PhaseSpaceField::sample(g, [](double, double) { return 1.0; }), hbar};
        EXPECT_NEAR(trace_pair(a, one), 1.0, 1e-6);
        const WeylSymbol h{PhaseSpaceField::sample(g, [](double q, double p) { return oscillator_energy(q, p); }), hbar};
        EXPECT_NEAR(trace_pair(a, h), (n + 0.5) * hbar, 1e-6);
    }
    const auto a = weyl_symbol(fock_kernel(axis, 0, hbar), g);
    const WeylSymbol other_hbar{a.field, 0.5};
    EXPECT_THROW(trace_pair(a, other_hbar), std::invalid_argument);
}

TEST(Marginals, GroundState) {
    const auto w = PhaseSpaceField::sample(PhaseSpaceGrid(-7.0, 7.0, 141, -7.0, 7.0, 141),
                                           [](double q, double p) { return fock_wigner(0, 1.0, std::hypot(q, p)); });
    const auto m = marginal_q(w);
    for (std::size_t i = 0; i < m.axis.size(); ++i) {
        const double q = m.axis.node(i);
        EXPECT_NEAR(m.density[i], std::exp(-q * q) / std::sqrt(kPi), 1e-10);
    }
    EXPECT_NEAR(trapezoid(m.density, m.axis.spacing()), 1.0, 1e-10);
}

TEST(Marginals, FirstExcitedIsNonnegativeDespiteNegativeW) {
    EXPECT_LT(fock_wigner(1, 1.0, 0.0), 0.0);
    const PhaseSpaceGrid g(-7.0, 7.0, 141, -7.0, 7.0, 141);
    const auto w = PhaseSpaceField::sample(g, [](double q, double p) { return fock_wigner(1, 1.0, std::hypot(q, p)); });
    const auto m = marginal_q(w);
    const auto psi = fock_wavefunction(g.q(), 1, 1.0);
    for (std::size_t i = 0; i < m.density.size(); ++i) {
        EXPECT_GE(m.density[i], -1e-9);
        EXPECT_NEAR(m.density[i], std::norm(psi.samples()[i]), 1e-10);
    }
}

TEST(Marginals, SymmetricExchange) {
    const PhaseSpaceGrid g(-6.0, 6.0, 121, -6.0, 6.0, 121);
    const auto w = PhaseSpaceField::sample(g, [](double q, double p) { return fock_wigner(2, 1.0, std::hypot(q, p)); });
    const auto mq = marginal_q(w);
    const auto mp = marginal_p(w);
    for (std::size_t i = 0; i < mq.density.size(); ++i) {
        EXPECT_NEAR(mq.density[i], mp.density[i], 1e-14);
    }
}

TEST(Marginals, NonnegativeForFockAndThermal) {
    const PhaseSpaceGrid g(-7.0, 7.0, 141, -7.0, 7.0, 281);
    for (int n = 0; n <= 5; ++n) {
        const auto w = PhaseSpaceField::sample(g, [n](double q, double p) { return fock_wigner(n, 1.0, std::hypot(q, p)); });
        for (double v : marginal_q(w).density) {
            EXPECT_GE(v, -1e-9);
        }
        for (double v : marginal_p(w).density) {
            EXPECT_GE(v, -1e-9);
        }
    }
    const AnalyticWigner thermal(ThermalOscillator{2.0, 1.0, 1.0, 0.4});
    for (double v : marginal_q(thermal.sample(g)).density) {
        EXPECT_GE(v, -1e-9);
    }
}

// -- Closed forms ------------------------------------------------------------------------

TEST(ThermalWigner, OriginAndLimit) {
    EXPECT_NEAR(thermal_wigner(1.0, 1.0, 1.0, 1.0, 0.0, 0.0), std::tanh(0.5) / kPi, 1e-15);
    EXPECT_NEAR(thermal_wigner(1.0, 1.0, 1.0, 1e-4, 0.7, -0.4), boltzmann_limit(1.0, 0.7, -0.4), 1e-8);
    EXPECT_THROW(thermal_wigner(1.0, 1.0, 1.0, 0.0, 0.0, 0.0), std::invalid_argument);
}

TEST(ThermalWigner, Normalized) {
    const PhaseSpaceGrid g(-8.0, 8.0, 321, -8.0, 8.0, 321);
    const auto w = PhaseSpaceField::sample(g, [](double q, double p) { return thermal_wigner(1.0, 1.0, 1.0, 0.5, q, p); });
    EXPECT_NEAR(integrate_field(w), 1.0, 1e-8);
    // m omega = 3 stretches the momentum spread.
    const PhaseSpaceGrid wide(-8.0, 8.0, 321, -16.0, 16.0, 641);
    const auto mass =
        PhaseSpaceField::sample(wide, [](double q, double p) { return thermal_wigner(0.8, 1.5, 2.0, 0.5, q, p); });
    EXPECT_NEAR(integrate_field(mass), 1.0, 1e-8);
}

TEST(FockWigner, Examples) {
    const double hbar = 0.4;
    EXPECT_NEAR(fock_wigner(0, hbar, 0.3), std::exp(-0.09 / hbar) / (kPi * hbar), 1e-14);
    for (int n = 0; n < 8; ++n) {
        EXPECT_NEAR(fock_wigner(n, hbar, 0.0), (n % 2 ? -1.0 : 1.0) / (kPi * hbar), 1e-13);
    }
    EXPECT_NEAR(fock_wigner(1, hbar, std::sqrt(hbar / 2.0)), 0.0, 1e-15);
    EXPECT_THROW(fock_wigner(1, -1.0, 0.0), std::invalid_argument);
}

TEST(ScaledFockWigner, OriginZerosAndDecay) {
    EXPECT_NEAR(scaled_fock_wigner(10, 0.0), 21.0 / kPi, 1e-13);
    EXPECT_NEAR(scaled_fock_wigner(10, 0.0), 6.684507, 1e-6);
    double peak = 0.0;
    for (int i = 0; i <= 1000; ++i) {
        peak = std::max(peak, std::abs(scaled_fock_wigner(40, i * 1e-3)));
    }
    // Past the turning radius 1 the decay scale is about hbar^{2/3} ~ 0.05.
    for (double r : {1.3, 1.5, 2.0}) {
        EXPECT_LT(std::abs(scaled_fock_wigner(40, r)), 1e-8 * peak) << r;
    }
    for (int n : {5, 10, 40}) {
        for (double r : {0.1, 0.45, 0.9, 1.1}) {
            const double ref = oracle::scaled_fock_wigner(n, r);
            EXPECT_NEAR(scaled_fock_wigner(n, r), ref, 1e-11 * std::max(1.0, std::abs(ref)));
        }
    }
}

TEST(ScaledFockWigner, SignChangesEqualN) {
    for (int n : {3, 10, 25}) {
        int changes = 0;
        double prev = scaled_fock_wigner(n, 0.0);
        for (int i = 1; i <= 20000; ++i) {
            const double v = scaled_fock_wigner(n, i / 20000.0 - 1e-12);
            if (v * prev < 0.0) {
                ++changes;
            }
            prev = v;
        }
        EXPECT_EQ(changes, n);
    }
}

TEST(BoltzmannLimit, OriginRateAndNormalization) {
    EXPECT_NEAR(boltzmann_limit(1.0, 0.0, 0.0), 1.0 / (2.0 * kPi), 1e-16);
    double previous = 0.0;
    for (double h : {0.2, 0.1, 0.05, 0.025}) {
        const double d = std::abs(thermal_wigner(1.0, 1.0, 1.0, h, 0.6, 0.8) - boltzmann_limit(1.0, 0.6, 0.8));
        if (previous > 0.0) {
            EXPECT_NEAR(std::log2(previous / d), 2.0, 0.1);
        }
        previous = d;
    }
    const PhaseSpaceGrid g(-9.0, 9.0, 361, -9.0, 9.0, 361);
    EXPECT_NEAR(integrate_field(PhaseSpaceField::sample(g, [](double q, double p) { return boltzmann_limit(1.0, q, p); })),
                1.0, 1e-8);
}

TEST(AnalyticWigner, FamiliesAgreeWithFreeFunctions) {
    const AnalyticWigner thermal(ThermalOscillator{1.0, 1.0, 1.0, 0.3});
    const AnalyticWigner fock(Fock{2, 0.5});
    const AnalyticWigner scaled(ScaledFock{10});
    EXPECT_EQ(thermal(0.1, 0.2), thermal_wigner(1.0, 1.0, 1.0, 0.3, 0.1, 0.2));
    EXPECT_DOUBLE_EQ(fock(0.3, 0.4), fock_wigner(2, 0.5, 0.5));
    EXPECT_DOUBLE_EQ(scaled(0.3, 0.4), scaled_fock_wigner(10, 0.5));
    EXPECT_DOUBLE_EQ(scaled.hbar(), 1.0 / 21.0);
    EXPECT_THROW(AnalyticWigner(ThermalOscillator{-1.0, 1.0, 1.0, 1.0}), std::invalid_argument);
    EXPECT_THROW(AnalyticWigner(Fock{-1, 1.0}), std::invalid_argument);
}

TEST(AnalyticWigner, KernelReproducesFunctionAndExtentsBoundDecay) {
    for (const AnalyticWigner& state : {AnalyticWigner(ThermalOscillator{1.0, 1.0, 1.0, 0.3}), AnalyticWigner(Fock{3, 1.0})}) {
        const auto w = wigner_from_kernel(state.kernel(kAxis), kGrid);
        EXPECT_LE(max_abs_diff(w.field, [&](double q, double p) { return state(q, p); }), 1e-8) << state.describe();
        const double peak = std::abs(state(0.0, 0.0)) + 1.0 / (kPi * state.hbar());
        EXPECT_LT(std::abs(state(state.q_extent(), 0.0)), 1e-12 * peak);
        EXPECT_LT(std::abs(state(0.0, state.p_extent())), 1e-12 * peak);
    }
}
