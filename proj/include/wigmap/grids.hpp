#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace wigmap {

using RealFunction = std::function<double(double)>;

// Uniformly spaced nodes min, min + h, ..., max with n >= 2.
class UniformAxis {
public:
    UniformAxis(double min, double max, std::size_t n);

    double min() const noexcept { return min_; }
    double max() const noexcept { return max_; }
    std::size_t size() const noexcept { return n_; }
    double spacing() const noexcept { return (max_ - min_) / static_cast<double>(n_ - 1); }
    double node(std::size_t i) const noexcept {
        return i + 1 == n_ ? max_ : min_ + static_cast<double>(i) * spacing();
    }
    std::vector<double> nodes() const;

    bool operator==(const UniformAxis&) const = default;

private:
    double min_;
    double max_;
    std::size_t n_;
};

// Rectangular (q, p) sampling of the phase plane.
class PhaseSpaceGrid {
public:
    PhaseSpaceGrid(double q_min, double q_max, std::size_t n_q, double p_min, double p_max, std::size_t n_p);
    PhaseSpaceGrid(UniformAxis q, UniformAxis p) : q_(q), p_(p) {}

    const UniformAxis& q() const noexcept { return q_; }
    const UniformAxis& p() const noexcept { return p_; }
    std::size_t n_q() const noexcept { return q_.size(); }
    std::size_t n_p() const noexcept { return p_.size(); }
    std::size_t size() const noexcept { return n_q() * n_p(); }
    double dq() const noexcept { return q_.spacing(); }
    double dp() const noexcept { return p_.spacing(); }

    bool operator==(const PhaseSpaceGrid&) const = default;

private:
    UniformAxis q_;
    UniformAxis p_;
};

// Real samples on a PhaseSpaceGrid, row-major with q as the outer index.
class PhaseSpaceField {
public:
    PhaseSpaceField(PhaseSpaceGrid grid, std::vector<double> values);

    // Samples f(q, p) at every grid node.
    static PhaseSpaceField sample(const PhaseSpaceGrid& grid, const std::function<double(double, double)>& f);

    const PhaseSpaceGrid& grid() const noexcept { return grid_; }
    std::span<const double> values() const noexcept { return values_; }
    std::span<const double> row(std::size_t iq) const noexcept {
        return std::span<const double>(values_).subspan(iq * grid_.n_p(), grid_.n_p());
    }
    double at(std::size_t iq, std::size_t ip) const noexcept { return values_[iq * grid_.n_p() + ip]; }

    // Bilinear interpolation; points outside the grid read as zero.
    double interpolate(double q, double p) const noexcept;
    bool contains(double q, double p) const noexcept;

private:
    PhaseSpaceGrid grid_;
    std::vector<double> values_;
};

class RadialProfile {
public:
    RadialProfile(std::vector<double> r_samples, std::vector<double> values);

    std::span<const double> r() const noexcept { return r_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return r_.size(); }

private:
    std::vector<double> r_;
    std::vector<double> values_;
};

// 2D trapezoid rule over the full grid.
double integrate_field(const PhaseSpaceField& field);

// Composite trapezoid rule for uniformly spaced samples.
double trapezoid(std::span<const double> samples, double spacing);

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
};

struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 0.0;
    std::size_t max_subdivisions = 2000;
};

// Globally adaptive 21-point Gauss-Kronrod quadrature on a finite interval.
// Bisects the interval with the largest error estimate until the summed error
// is below max(abs_tol, rel_tol * |value|). Throws NonConvergenceError
// (carrying the best estimate) when the subdivision budget runs out.
QuadratureResult adaptive_integrate(const RealFunction& f, double a, double b, const QuadratureOptions& options);
double adaptive_integrate(const RealFunction& f, double a, double b, double tol);

// Integral over [a, inf) through the substitution x = a + t / (1 - t), t in [0, 1).
QuadratureResult adaptive_integrate_to_infinity(const RealFunction& f, double a, const QuadratureOptions& options);
double adaptive_integrate_to_infinity(const RealFunction& f, double a, double tol);

// Sign-change scan on scan_points uniform samples followed by bisection.
// Zeros closer together than the scan spacing can be missed.
std::vector<double> find_zeros(const RealFunction& f, double a, double b, std::size_t scan_points);

}  // namespace wigmap
