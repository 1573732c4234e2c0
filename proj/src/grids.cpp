#include "wigmap/grids.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>

#include "wigmap/error.hpp"

namespace wigmap {

UniformAxis::UniformAxis(double min, double max, std::size_t n) : min_(min), max_(max), n_(n) {
    if (!std::isfinite(min) || !std::isfinite(max) || !(min < max)) {
        throw std::invalid_argument("axis requires finite min < max");
    }
    if (n < 2) {
        throw std::invalid_argument("axis requires at least 2 points");
    }
}

std::vector<double> UniformAxis::nodes() const {
    std::vector<double> out(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        out[i] = node(i);
    }
    return out;
}

PhaseSpaceGrid::PhaseSpaceGrid(double q_min, double q_max, std::size_t n_q, double p_min, double p_max, std::size_t n_p)
    : q_(q_min, q_max, n_q), p_(p_min, p_max, n_p) {}

PhaseSpaceField::PhaseSpaceField(PhaseSpaceGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw std::invalid_argument("field size " + std::to_string(values_.size()) + " does not match grid size " +
                                    std::to_string(grid_.size()));
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("field values must be finite");
        }
    }
}

PhaseSpaceField PhaseSpaceField::sample(const PhaseSpaceGrid& grid, const std::function<double(double, double)>& f) {
    std::vector<double> values(grid.size());
    for (std::size_t iq = 0; iq < grid.n_q(); ++iq) {
        const double q = grid.q().node(iq);
        for (std::size_t ip = 0; ip < grid.n_p(); ++ip) {
            values[iq * grid.n_p() + ip] = f(q, grid.p().node(ip));
        }
    }
    return PhaseSpaceField(grid, std::move(values));
}

namespace {

// Fractional node coordinate, snapped onto a node when within round-off of it.
double node_coordinate(const UniformAxis& axis, double x) {
    const double t = (x - axis.min()) / axis.spacing();
    const double nearest = std::round(t);
    return std::abs(t - nearest) < 1e-9 ? nearest : t;
}

}  // namespace

bool PhaseSpaceField::contains(double q, double p) const noexcept {
    const double tq = node_coordinate(grid_.q(), q);
    const double tp = node_coordinate(grid_.p(), p);
    const double last_q = static_cast<double>(grid_.n_q() - 1);
    const double last_p = static_cast<double>(grid_.n_p() - 1);
    return tq >= 0.0 && tq <= last_q && tp >= 0.0 && tp <= last_p;
}

double PhaseSpaceField::interpolate(double q, double p) const noexcept {
    const double tq = node_coordinate(grid_.q(), q);
    const double tp = node_coordinate(grid_.p(), p);
    const double last_q = static_cast<double>(grid_.n_q() - 1);
    const double last_p = static_cast<double>(grid_.n_p() - 1);
    if (!(tq >= 0.0 && tq <= last_q && tp >= 0.0 && tp <= last_p)) {
        return 0.0;
    }
    auto iq = static_cast<std::size_t>(std::floor(tq));
    auto ip = static_cast<std::size_t>(std::floor(tp));
    double fq = tq - static_cast<double>(iq);
    double fp = tp - static_cast<double>(ip);
    if (iq + 1 >= grid_.n_q()) {
        iq = grid_.n_q() - 2;
        fq = 1.0;
    }
    if (ip + 1 >= grid_.n_p()) {
        ip = grid_.n_p() - 2;
        fp = 1.0;
    }
    // Exact node reads keep identity remaps bit-identical.
    if (fq == 0.0 && fp == 0.0) {
        return at(iq, ip);
    }
    if (fq == 0.0) {
        return (1.0 - fp) * at(iq, ip) + fp * at(iq, ip + 1);
    }
    if (fp == 0.0) {
        return (1.0 - fq) * at(iq, ip) + fq * at(iq + 1, ip);
    }
    return (1.0 - fq) * ((1.0 - fp) * at(iq, ip) + fp * at(iq, ip + 1)) +
           fq * ((1.0 - fp) * at(iq + 1, ip) + fp * at(iq + 1, ip + 1));
}

RadialProfile::RadialProfile(std::vector<double> r_samples, std::vector<double> values)
    : r_(std::move(r_samples)), values_(std::move(values)) {
    if (r_.size() != values_.size()) {
        throw std::invalid_argument("radial profile needs one value per radius");
    }
    for (std::size_t i = 0; i < r_.size(); ++i) {
        if (!std::isfinite(r_[i]) || r_[i] < 0.0 || (i > 0 && !(r_[i] > r_[i - 1]))) {
            throw std::invalid_argument("radial samples must be nonnegative and strictly increasing");
        }
        if (!std::isfinite(values_[i])) {
            throw std::invalid_argument("radial profile values must be finite");
        }
    }
}

double trapezoid(std::span<const double> samples, double spacing) {
    if (samples.size() < 2) {
        return 0.0;
    }
    double sum = 0.5 * (samples.front() + samples.back());
    for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
        sum += samples[i];
    }
    return sum * spacing;
}

double integrate_field(const PhaseSpaceField& field) {
    const auto& grid = field.grid();
    std::vector<double> rows(grid.n_q());
    for (std::size_t iq = 0; iq < grid.n_q(); ++iq) {
        rows[iq] = trapezoid(field.row(iq), grid.dp());
    }
    return trapezoid(rows, grid.dq());
}

namespace {

constexpr std::array<double, 11> kKronrodNodes = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452, 0.930157491355708226001207180059508,
    0.865063366688984510732096688423493, 0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784, 0.294392862701460198131126603103866,
    0.148874338981631210884826001129720, 0.0};

constexpr std::array<double, 11> kKronrodWeights = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390, 0.054755896574351996031381300244580,
    0.075039674810919952767043140916190, 0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707, 0.142775938577060080797094273138717,
    0.147739104901338491374841515972068, 0.149445554002916905664936468389821};

// Gauss weights for the even-indexed Kronrod nodes 1, 3, 5, 7, 9.
constexpr std::array<double, 5> kGaussWeights = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697, 0.219086362515982043995534934228163,
    0.269266719309996355091226921569469, 0.295524224714752870173892994651338};

struct Segment {
    double a;
    double b;
    double value;
    double error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod_21(const RealFunction& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = f(center);
    if (!std::isfinite(fc)) {
        throw std::domain_error("integrand is not finite at x = " + std::to_string(center));
    }
    double kronrod = kKronrodWeights[10] * fc;
    double gauss = 0.0;
    for (std::size_t j = 0; j < 10; ++j) {
        const double dx = half * kKronrodNodes[j];
        const double f1 = f(center - dx);
        const double f2 = f(center + dx);
        if (!std::isfinite(f1) || !std::isfinite(f2)) {
            throw std::domain_error("integrand is not finite near x = " + std::to_string(center));
        }
        kronrod += kKronrodWeights[j] * (f1 + f2);
        if (j % 2 == 1) {
            gauss += kGaussWeights[j / 2] * (f1 + f2);
        }
    }
    const double value = kronrod * half;
    const double error = std::abs((kronrod - gauss) * half);
    return {a, b, value, error};
}

}  // namespace

QuadratureResult adaptive_integrate(const RealFunction& f, double a, double b, const QuadratureOptions& options) {
    if (!(options.abs_tol > 0.0) && !(options.rel_tol > 0.0)) {
        throw std::invalid_argument("adaptive_integrate needs a positive tolerance");
    }
    if (a == b) {
        return {};
    }
    if (a > b) {
        auto r = adaptive_integrate(f, b, a, options);
        r.value = -r.value;
        return r;
    }
    std::priority_queue<Segment> heap;
    heap.push(gauss_kronrod_21(f, a, b));
    double value = heap.top().value;
    double error = heap.top().error;
    std::size_t evaluations = 21;
    const auto target = [&] { return std::max(options.abs_tol, options.rel_tol * std::abs(value)); };

    for (std::size_t split = 0; error > target(); ++split) {
        if (split >= options.max_subdivisions) {
            throw NonConvergenceError("adaptive_integrate did not converge on [" + std::to_string(a) + ", " +
                                          std::to_string(b) + "]",
                                      value, error);
        }
        const Segment worst = heap.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            // Interval cannot be bisected further in double precision.
            throw NonConvergenceError("adaptive_integrate reached round-off level", value, error);
        }
        heap.pop();
        const Segment left = gauss_kronrod_21(f, worst.a, mid);
        const Segment right = gauss_kronrod_21(f, mid, worst.b);
        evaluations += 42;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        // Drift in the running sums is removed periodically.
        if (split % 64 == 63) {
            auto copy = heap;
            value = 0.0;
            error = 0.0;
            while (!copy.empty()) {
                value += copy.top().value;
                error += copy.top().error;
                copy.pop();
            }
        }
    }
    return {value, error, evaluations};
}

double adaptive_integrate(const RealFunction& f, double a, double b, double tol) {
    return adaptive_integrate(f, a, b, QuadratureOptions{tol, 0.0, 2000}).value;
}

QuadratureResult adaptive_integrate_to_infinity(const RealFunction& f, double a, const QuadratureOptions& options) {
    const RealFunction mapped = [&f, a](double t) {
        const double s = 1.0 - t;
        const double x = a + t / s;
        if (!std::isfinite(x)) {
            return 0.0;
        }
        const double fx = f(x);
        return fx == 0.0 ? 0.0 : fx / (s * s);
    };
    return adaptive_integrate(mapped, 0.0, 1.0, options);
}

double adaptive_integrate_to_infinity(const RealFunction& f, double a, double tol) {
    return adaptive_integrate_to_infinity(f, a, QuadratureOptions{tol, 0.0, 2000}).value;
}

std::vector<double> find_zeros(const RealFunction& f, double a, double b, std::size_t scan_points) {
    if (!(a < b)) {
        throw std::invalid_argument("find_zeros requires a < b");
    }
    if (scan_points < 2) {
        throw std::invalid_argument("find_zeros requires at least 2 scan points");
    }
    const UniformAxis axis(a, b, scan_points);
    std::vector<double> zeros;
    double x_prev = axis.node(0);
    double f_prev = f(x_prev);
    if (f_prev == 0.0) {
        zeros.push_back(x_prev);
    }
    for (std::size_t i = 1; i < scan_points; ++i) {
        const double x = axis.node(i);
        const double fx = f(x);
        if (fx == 0.0) {
            zeros.push_back(x);
        } else if (f_prev != 0.0 && std::signbit(fx) != std::signbit(f_prev)) {
            double lo = x_prev;
            double hi = x;
            double f_lo = f_prev;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (!(mid > lo && mid < hi)) {
                    break;
                }
                const double fm = f(mid);
                if (fm == 0.0) {
                    lo = hi = mid;
                    break;
                }
                if (std::signbit(fm) == std::signbit(f_lo)) {
                    lo = mid;
                    f_lo = fm;
                } else {
                    hi = mid;
                }
            }
            zeros.push_back(0.5 * (lo + hi));
        }
        x_prev = x;
        f_prev = fx;
    }
    return zeros;
}

}  // namespace wigmap
