#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "wigmap/grids.hpp"

namespace wigmap {

using Complex = std::complex<double>;

// -- Laguerre polynomials ---------------------------------------------------

// L_n(x) by the forward three-term recursion
// (k+1) L_{k+1} = (2k+1-x) L_k - k L_{k-1}.
double laguerre(int n, double x);

// exp(-x/2) L_n(x). The recursion carries a separate binary exponent so that
// neither the polynomial nor the exponential overflows or underflows on the
// way; only the final product is rounded to double.
double laguerre_weighted(int n, double x);

// -- Wave functions and density kernels --------------------------------------

class WaveFunction {
public:
    WaveFunction(UniformAxis axis, std::vector<Complex> samples, double hbar);

    const UniformAxis& axis() const noexcept { return axis_; }
    std::span<const Complex> samples() const noexcept { return samples_; }
    double hbar() const noexcept { return hbar_; }

private:
    UniformAxis axis_;
    std::vector<Complex> samples_;
    double hbar_;
};

// Oscillator eigenfunction psi_n (m = omega = 1) from the normalized Hermite
// recursion psi_{k+1} = sqrt(2/(k+1)) xi psi_k - sqrt(k/(k+1)) psi_{k-1}.
WaveFunction fock_wavefunction(const UniformAxis& axis, int n, double hbar);

// rho(x, x') = <x|rho|x'> sampled on a uniform position grid.
class DensityKernel {
public:
    // Validates Hermiticity (1e-12) and unit trace (1e-8).
    DensityKernel(UniformAxis axis, std::vector<Complex> matrix, double hbar, std::vector<double> weights = {});

    // Unchecked construction for general operators (e.g. observables).
    static DensityKernel operator_kernel(UniformAxis axis, std::vector<Complex> matrix, double hbar);

    // A state sampled on a position window narrower than its support. Only
    // Hermiticity is validated; the trace over the window falls short of 1.
    static DensityKernel window(UniformAxis axis, std::vector<Complex> matrix, double hbar);

    // sum_j w_j psi_j(x) conj(psi_j(x')); weights default to 1/N.
    static DensityKernel mixture(std::span<const WaveFunction> states, std::vector<double> weights = {});

    const UniformAxis& axis() const noexcept { return axis_; }
    std::size_t size() const noexcept { return axis_.size(); }
    double hbar() const noexcept { return hbar_; }
    std::span<const double> weights() const noexcept { return weights_; }
    std::span<const Complex> matrix() const noexcept { return matrix_; }
    const Complex& operator()(std::size_t a, std::size_t b) const noexcept { return matrix_[a * size() + b]; }

    bool is_window() const noexcept { return window_; }

    double trace() const;
    double hermiticity_residual() const;

private:
    enum class Check { None, Hermitian, Full };
    DensityKernel(UniformAxis axis, std::vector<Complex> matrix, double hbar, std::vector<double> weights, Check check);

    UniformAxis axis_;
    std::vector<Complex> matrix_;
    double hbar_;
    std::vector<double> weights_;
    bool window_ = false;
};

DensityKernel fock_kernel(const UniformAxis& axis, int n, double hbar);

// Canonical ensemble of H = p^2/(2m) + m omega^2 q^2 / 2 in closed form:
// rho(q + y/2, q - y/2) = sqrt(m omega t / (pi hbar)) exp(-m omega t q^2/hbar - m omega y^2/(4 hbar t)),
// t = tanh(beta hbar omega / 2).
DensityKernel thermal_kernel(const UniformAxis& axis, double beta, double omega, double m, double hbar);

// V((x + x')/2) times the half-band delta sin(pi u / (2 dx)) / (pi u), u = x - x'.
// Its Weyl symbol on the kernel's own nodes is exactly V(q).
DensityKernel multiplication_kernel(const UniformAxis& axis, const std::function<double(double)>& potential,
                                    double hbar);

// -- Weyl transform ------------------------------------------------------------

// Sampled Weyl symbol; fields come from the real part, the largest discarded
// imaginary part is recorded.
struct WeylSymbol {
    PhaseSpaceField field;
    double hbar = 1.0;
    double max_imag = 0.0;
    std::vector<std::string> warnings;
};

// A(q, p) = int dy rho(q + y/2, q - y/2) exp(-i p y / hbar), evaluated as a
// Fourier sum along each anti-diagonal of the kernel. Every grid q node must
// lie on the kernel's half-step lattice x_0 + m dx / 2.
WeylSymbol weyl_symbol(const DensityKernel& kernel, const PhaseSpaceGrid& grid);

// W = A / (2 pi hbar).
WeylSymbol wigner_from_kernel(const DensityKernel& kernel, const PhaseSpaceGrid& grid);

// Inverse of weyl_symbol. The symbol's q axis must be the half-step lattice
// of `axis` (2n - 1 nodes over the same range).
DensityKernel kernel_from_symbol(const WeylSymbol& symbol, const UniformAxis& axis);

// Grid on which weyl_symbol and kernel_from_symbol are an exact discrete
// Fourier pair: half-step q lattice, n_p momenta with spacing pi hbar / (n_p dx).
PhaseSpaceGrid dual_grid(const UniformAxis& axis, double hbar, std::size_t n_p);

// (2 pi hbar)^{-1} int int A B dq dp
double trace_pair(const WeylSymbol& a, const WeylSymbol& b);

struct Marginal {
    UniformAxis axis;
    std::vector<double> density;
};

Marginal marginal_q(const PhaseSpaceField& w);
Marginal marginal_p(const PhaseSpaceField& w);

// -- Closed-form Wigner families -----------------------------------------------

double oscillator_energy(double q, double p, double omega = 1.0, double m = 1.0);

double thermal_wigner(double beta, double omega, double m, double hbar, double q, double p);

// [(-1)^n / (pi hbar)] exp(-r^2/hbar) L_n(2 r^2 / hbar), units k = m = 1.
double fock_wigner(int n, double hbar, double r);

// Fock family at fixed energy 1/2, hbar = 1 / (2n + 1).
double scaled_fock_wigner(int n, double r);
inline double scaled_fock_hbar(int n) { return 1.0 / (2.0 * n + 1.0); }

// (beta / 2 pi) exp(-beta H), omega = m = 1.
double boltzmann_limit(double beta, double q, double p);

struct ThermalOscillator {
    double beta = 1.0;
    double omega = 1.0;
    double m = 1.0;
    double hbar = 1.0;
};
struct Fock {
    int n = 0;
    double hbar = 1.0;
};
struct ScaledFock {
    int n = 0;
};

class AnalyticWigner {
public:
    using Family = std::variant<ThermalOscillator, Fock, ScaledFock>;

    AnalyticWigner(Family family);

    const Family& family() const noexcept { return family_; }
    double hbar() const;
    double operator()(double q, double p) const;
    PhaseSpaceField sample(const PhaseSpaceGrid& grid) const;
    // Full density kernel when the axis spans [-q_extent, q_extent], otherwise
    // a window kernel over the axis range.
    DensityKernel kernel(const UniformAxis& axis) const;

    // Position half-width beyond which the kernel is below ~1e-18 of its peak,
    // measured along the kernel diagonal (q) and anti-diagonal (y), and the
    // momentum half-width of the Wigner function.
    double q_extent() const;
    double y_extent() const;
    double p_extent() const;

    std::string describe() const;

private:
    Family family_;
};

}  // namespace wigmap
