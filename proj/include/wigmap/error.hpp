#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wigmap {

// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
class NonConvergenceError : public std::runtime_error {
public:
    NonConvergenceError(const std::string& what, double best_estimate, double error_estimate)
        : std::runtime_error(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}

    double best_estimate() const noexcept { return best_estimate_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    double best_estimate_;
    double error_estimate_;
};

// A sampled grid cannot resolve the requested transform (Nyquist or range).
class GridResolutionError : public std::runtime_error {
public:
    GridResolutionError(const std::string& what, std::size_t suggested_points)
        : std::runtime_error(what), suggested_points_(suggested_points) {}

    std::size_t suggested_points() const noexcept { return suggested_points_; }

private:
    std::size_t suggested_points_;
};

// Peak-area boundary calibration failed to reproduce the reference values.
class CalibrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace wigmap
