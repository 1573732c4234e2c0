#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "wigmap/grids.hpp"
#include "wigmap/states.hpp"
#include "wigmap/symplectic.hpp"

namespace wigmap {

// U = exp(i alpha Q^n / (n hbar)).
struct PhaseGate {
    int degree = 1;
    double alpha = 0.0;
    double hbar = 1.0;
};

void validate(const PhaseGate& gate);

// Classical counterpart p -> p + alpha q^{n-1}.
ElementaryMap classical_map(const PhaseGate& gate);

enum class TransformMethod { ExactShear, KernelPhase, AiryConvolution, Series };

std::string to_string(TransformMethod method);

struct TransformResult {
    PhaseSpaceField field;
    TransformMethod method = TransformMethod::ExactShear;
    int series_order = 0;
    double normalization_residual = 0.0;  // |integral - 1|
    std::size_t out_of_grid = 0;
    double kernel_spacing = 0.0;  // position spacing of the kernel lattice, when one was used
    double kernel_extent = 0.0;   // half-width of the kernel position range, when one was used
    std::vector<std::string> warnings;
};

// |LHS - RHS| of the exponent-addition identity for degree 1, 2 or 3:
//   alpha [(q + y/2)^n - (q - y/2)^n] / (n hbar) - p y / hbar
//     = -(p - alpha q^{n-1}) y / hbar + [alpha y^3 / (12 hbar) for n = 3].
// Only the imaginary coefficients are compared.
double exponent_identity_residual(int degree, double q, double y, double alpha, double hbar, double p = 0.0);

// W'(q, p) = W(q, p - alpha) for n = 1 and W(q, p - alpha q) for n = 2, by the
// same bilinear remap as classical_pushforward.
TransformResult transform_shear(const PhaseSpaceField& w, const PhaseGate& gate);

// K(u) = (2 pi hbar)^{-1} int dy exp(i alpha y^3 / (12 hbar)) exp(-i u y / hbar)
//      = (|c| / hbar) Ai(-c u / hbar),  c = cbrt(4 hbar / alpha).
double cubic_kernel(double u, double alpha, double hbar);

// rho(x, x') exp[i alpha (x^n - x'^n) / (n hbar)], any degree n >= 1.
DensityKernel apply_phase_gate(const DensityKernel& kernel, const PhaseGate& gate);

// Kernel-phase route: gate applied to the kernel, then the Wigner transform on `grid`.
TransformResult transform_kernel_phase(const DensityKernel& kernel, const PhaseGate& gate, const PhaseSpaceGrid& grid);

// Cubic gate, path (a): kernel phase followed by the Wigner transform.
TransformResult transform_cubic_exact(const DensityKernel& kernel, double alpha, double hbar,
                                      const PhaseSpaceGrid& grid);

// Cubic gate, path (b): W'(q, p) = int dp' K(p - alpha q^2 - p') W(q, p') on the
// field's own grid. Throws GridResolutionError when the momentum spacing cannot
// resolve the Airy oscillation across the grid.
TransformResult transform_cubic_exact(const PhaseSpaceField& w, double alpha, double hbar);

// The k-th correction term (alpha hbar^2 / 12)^k / k! d^{3k}/dp^{3k} W(q, p - alpha q^2),
// shift and derivatives evaluated spectrally per q row.
PhaseSpaceField series_term(const PhaseSpaceField& w, double alpha, double hbar, int k);

// Sum of series_term for k = 0..order.
TransformResult transform_series(const PhaseSpaceField& w, double alpha, double hbar, int order);

// Position lattice for the kernel-phase route of `state` under `gate` such that
// every node of `grid` sits on its half-step lattice and the transformed Wigner
// function is alias free on the grid's momentum range.
UniformAxis kernel_axis_for(const AnalyticWigner& state, const PhaseGate& gate, const PhaseSpaceGrid& grid);

// Throws GridResolutionError when the kernel-phase route would need more than
// `max_kernel_points` lattice points.
void check_kernel_budget(const AnalyticWigner& state, const PhaseGate& gate, const PhaseSpaceGrid& grid,
                         std::size_t max_kernel_points);

struct Discrepancy {
    double l_inf = 0.0;
    double l1 = 0.0;
    TransformResult quantum;
    PhaseSpaceField classical;
};

// Exact quantum transform (kernel-phase route) against the classical law
// w(M^{-1} z) evaluated on the closed-form state.
Discrepancy classical_quantum_discrepancy(const AnalyticWigner& state, const PhaseGate& gate,
                                          const PhaseSpaceGrid& grid);

}  // namespace wigmap
