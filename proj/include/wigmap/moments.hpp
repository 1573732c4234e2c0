#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace wigmap {

// Zeros of L_n on (0, 4n + 2), located in the radial variable r with
// x = (4n + 2) r^2 so that the dense roots near x = 0 are spread out.
// Throws std::runtime_error if fewer than n zeros are bracketed.
std::vector<double> laguerre_zeros(int n);

// Zeros of W(n; r) of the scaled-Fock family in (0, 1).
std::vector<double> scaled_fock_zeros(int n);

struct RadialIntegral {
    double value = 0.0;
    double truncation_radius = 0.0;  // upper limit after the tail cut
    std::size_t lobes = 0;
};

// int_from^inf f(r) dr for an integrand whose sign changes are `zeros`.
// Each lobe between consecutive zeros is integrated adaptively; the tail past
// the last zero is cut where |f| drops below 1e-18 of its largest sampled value.
// `length_scale` sets the march step for locating that cut.
RadialIntegral radial_integral(const std::function<double(double)>& f, std::span<const double> zeros, double from,
                               double length_scale, double tol);

// G(n, l) = int_0^inf exp(-x/2) x^l L_n(x) dx. Tolerance is 1e-9 absolute on
// the normalized scale 2 (4n + 2)^l, i.e. 1e-9 on the matching F(n, l).
double g_quadrature(int n, int ell);

// G(n, l) from the three-term recursion over a supplied base row G(m, 0),
// m = 0 .. base_row.size() - 1. Needs base_row.size() > n + ell.
double g_recursion(int n, int ell, std::span<const double> base_row);
// Same with the base row taken from g_quadrature.
double g_recursion(int n, int ell);

// F(n, l) = 2 pi int_0^inf r^{2l+1} W(n; r) dr from the F recursion seeded with F(m, 0) = 1.
double f_recursion(int n, int ell);

// Printed closed forms for l <= 4; throws std::invalid_argument beyond.
double f_closed(int n, int ell);

struct MomentQuadrature {
    double value = 0.0;
    double tolerance = 0.0;
    double truncation_radius = 0.0;
};

MomentQuadrature f_quadrature_detail(int n, int ell, double tol = 1e-7);
double f_quadrature(int n, int ell, double tol = 1e-7);

// 2 pi int r W(n; r) (r^2 / 2)^l dr with W the Fock Wigner function at hbar; l in {0, 1}.
double energy_moment(int n, double hbar, int ell);

enum class MomentMethod { Recursion, Quadrature, ClosedForm };
std::string to_string(MomentMethod method);
MomentMethod parse_moment_method(const std::string& name);

struct MomentTable {
    int n = 0;
    int max_ell = 0;
    std::vector<double> values;  // F(n, 0..max_ell)
    MomentMethod method = MomentMethod::Recursion;
    double tolerance = 0.0;
};

MomentTable moment_table(int n, int max_ell, MomentMethod method);

struct LimitRow {
    int n = 0;
    double value = 0.0;          // F(n, l)
    double scaled_offset = 0.0;  // (2n + 1)^2 (F(n, l) - 1)
};

std::vector<LimitRow> limit_convergence(int ell, std::span<const int> n_list);

struct PeakAreaReport {
    int n = 0;
    std::vector<double> zeros;
    double area_peak_only = 0.0;
    double area_with_preceding_oscillation = 0.0;
    double full_integral = 0.0;
    double truncation_radius = 0.0;
    double tolerance = 0.0;
};

// Lower integration limits for the two peak areas, as zero indices counted
// back from the last zero: 0 -> z_n, 2 -> z_{n-2}.
struct PeakBoundaries {
    int peak_only_back = 0;
    int with_preceding_back = 2;
};

// Evaluates candidate lower limits at n = 10 against the reference areas
// 1.2638 and 1.1387 and returns the ones within 0.002. Throws CalibrationError
// if no candidate qualifies.
PeakBoundaries calibrate_peak_boundaries();

// Frozen result of calibrate_peak_boundaries().
inline constexpr PeakBoundaries kPeakBoundaries{0, 2};

PeakAreaReport peak_areas(int n);

}  // namespace wigmap
