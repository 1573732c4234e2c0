#include "wigmap/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "wigmap/error.hpp"
#include "wigmap/grids.hpp"
#include "wigmap/states.hpp"

namespace wigmap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kScanPerOscillation = 50;

void require_index(int n, int ell) {
    if (n < 0 || ell < 0) {
        throw std::invalid_argument("moment indices must be nonnegative");
    }
}

}  // namespace

std::vector<double> laguerre_zeros(int n) {
    if (n < 0) {
        throw std::invalid_argument("laguerre degree must be nonnegative");
    }
    if (n == 0) {
        return {};
    }
    const double width = 4.0 * n + 2.0;
    const auto radial = find_zeros([n, width](double r) { return laguerre_weighted(n, width * r * r); }, 0.0, 1.0,
                                   static_cast<std::size_t>(kScanPerOscillation * n) + 1);
    if (radial.size() != static_cast<std::size_t>(n)) {
        std::ostringstream os;
        os << "zero scan for L_" << n << " bracketed " << radial.size() << " roots";
        throw std::runtime_error(os.str());
    }
    std::vector<double> x(radial.size());
    std::transform(radial.begin(), radial.end(), x.begin(), [width](double r) { return width * r * r; });
    return x;
}

std::vector<double> scaled_fock_zeros(int n) {
    if (n == 0) {
        return {};
    }
    auto zeros = find_zeros([n](double r) { return scaled_fock_wigner(n, r); }, 0.0, 1.0,
                            static_cast<std::size_t>(kScanPerOscillation * n) + 1);
    if (zeros.size() != static_cast<std::size_t>(n)) {
        std::ostringstream os;
        os << "zero scan for W(" << n << "; r) bracketed " << zeros.size() << " roots";
        throw std::runtime_error(os.str());
    }
    return zeros;
}

RadialIntegral radial_integral(const std::function<double(double)>& f, std::span<const double> zeros, double from,
                               double length_scale, double tol) {
    std::vector<double> cuts{from};
    for (double z : zeros) {
        if (z > from) {
            cuts.push_back(z);
        }
    }

    // March past the last zero until the integrand is negligible and falling.
    const double step = length_scale / 8.0;
    double peak = 0.0;
    for (double c : cuts) {
        peak = std::max(peak, std::abs(f(c)));
    }
    double r = cuts.back();
    double previous = std::abs(f(r));
    for (std::size_t i = 0;; ++i) {
        if (i > 100000) {
            throw std::runtime_error("radial_integral could not locate the tail cut");
        }
        r += step;
        const double value = std::abs(f(r));
        peak = std::max(peak, value);
        if (value < 1e-18 * peak && value <= previous) {
            break;
        }
        previous = value;
    }
    cuts.push_back(r);

    const std::size_t lobes = cuts.size() - 1;
    const QuadratureOptions options{tol / static_cast<double>(lobes), 0.0, 4000};
    double total = 0.0;
    for (std::size_t i = 0; i < lobes; ++i) {
        total += adaptive_integrate(f, cuts[i], cuts[i + 1], options).value;
    }
    return {total, r, lobes};
}

double g_quadrature(int n, int ell) {
    require_index(n, ell);
    const auto zeros = laguerre_zeros(n);
    const double scale = 2.0 * std::pow(4.0 * n + 2.0, ell);
    const auto f = [n, ell](double x) { return laguerre_weighted(n, x) * std::pow(x, ell); };
    return radial_integral(f, zeros, 0.0, 1.0, 1e-9 * scale).value;
}

double g_recursion(int n, int ell, std::span<const double> base_row) {
    require_index(n, ell);
    const std::size_t need = static_cast<std::size_t>(n + ell) + 1;
    if (base_row.size() < need) {
        std::ostringstream os;
        os << "G(" << n << ", " << ell << ") needs a base row of width " << need << ", got " << base_row.size();
        throw std::invalid_argument(os.str());
    }
    std::vector<double> row(base_row.begin(), base_row.begin() + static_cast<std::ptrdiff_t>(need));
    for (int l = 0; l < ell; ++l) {
        std::vector<double> next(row.size() - 1);
        for (std::size_t m = 0; m < next.size(); ++m) {
            const double k = static_cast<double>(m);
            const double below = m == 0 ? 0.0 : row[m - 1];
            next[m] = -k * below + (2.0 * k + 1.0) * row[m] - (k + 1.0) * row[m + 1];
        }
        row = std::move(next);
    }
    return row[static_cast<std::size_t>(n)];
}

double g_recursion(int n, int ell) {
    require_index(n, ell);
    std::vector<double> base(static_cast<std::size_t>(n + ell) + 1);
    for (std::size_t m = 0; m < base.size(); ++m) {
        base[m] = g_quadrature(static_cast<int>(m), 0);
    }
    return g_recursion(n, ell, base);
}

double f_recursion(int n, int ell) {
    require_index(n, ell);
    std::vector<double> row(static_cast<std::size_t>(n + ell) + 1, 1.0);
    for (int l = 0; l < ell; ++l) {
        std::vector<double> next(row.size() - 1);
        for (std::size_t m = 0; m < next.size(); ++m) {
            const double k = static_cast<double>(m);
            const double width = 4.0 * k + 2.0;
            // n (4n-2)^l / (4n+2)^{l+1}, written as ratios to keep the powers bounded.
            const double down = m == 0 ? 0.0 : k * std::pow((4.0 * k - 2.0) / width, l) / width;
            const double up = (k + 1.0) * std::pow((4.0 * k + 6.0) / width, l) / width;
            const double below = m == 0 ? 0.0 : row[m - 1];
            next[m] = down * below + 0.5 * row[m] + up * row[m + 1];
        }
        row = std::move(next);
    }
    return row[static_cast<std::size_t>(n)];
}

double f_closed(int n, int ell) {
    require_index(n, ell);
    const double s = 1.0 / ((2.0 * n + 1.0) * (2.0 * n + 1.0));
    switch (ell) {
        case 0:
        case 1:
            return 1.0;
        case 2:
            return 1.0 + s;
        case 3:
            return 1.0 + 5.0 * s;
        case 4:
            return 1.0 + 14.0 * s + 9.0 * s * s;
        default:
            throw std::invalid_argument("closed forms exist for l <= 4 only");
    }
}

MomentQuadrature f_quadrature_detail(int n, int ell, double tol) {
    require_index(n, ell);
    const auto zeros = scaled_fock_zeros(n);
    const auto f = [n, ell](double r) { return 2.0 * kPi * std::pow(r, 2 * ell + 1) * scaled_fock_wigner(n, r); };
    const auto result = radial_integral(f, zeros, 0.0, 1.0 / std::sqrt(2.0 * n + 1.0), tol);
    return {result.value, tol, result.truncation_radius};
}

double f_quadrature(int n, int ell, double tol) { return f_quadrature_detail(n, ell, tol).value; }

double energy_moment(int n, double hbar, int ell) {
    if (ell != 0 && ell != 1) {
        throw std::invalid_argument("energy_moment is defined for l = 0 and 1");
    }
    if (n < 0 || !(hbar > 0.0)) {
        throw std::invalid_argument("energy_moment requires n >= 0 and hbar > 0");
    }
    auto zeros = laguerre_zeros(n);
    for (double& z : zeros) {
        z = std::sqrt(0.5 * hbar * z);
    }
    const auto f = [n, hbar, ell](double r) {
        return 2.0 * kPi * r * fock_wigner(n, hbar, r) * std::pow(0.5 * r * r, ell);
    };
    const double scale = std::pow((n + 0.5) * hbar, ell);
    return radial_integral(f, zeros, 0.0, std::sqrt(hbar), 1e-10 * std::max(1.0, scale)).value;
}

std::string to_string(MomentMethod method) {
    switch (method) {
        case MomentMethod::Recursion:
            return "recursion";
        case MomentMethod::Quadrature:
            return "quadrature";
        case MomentMethod::ClosedForm:
            return "closed";
    }
    return "unknown";
}

MomentMethod parse_moment_method(const std::string& name) {
    if (name == "recursion") {
        return MomentMethod::Recursion;
    }
    if (name == "quadrature") {
        return MomentMethod::Quadrature;
    }
    if (name == "closed") {
        return MomentMethod::ClosedForm;
    }
    throw std::invalid_argument("unknown moment method '" + name + "' (recursion, quadrature, closed)");
}

MomentTable moment_table(int n, int max_ell, MomentMethod method) {
    require_index(n, max_ell);
    if (method == MomentMethod::ClosedForm && max_ell > 4) {
        throw std::invalid_argument("closed forms exist for l <= 4 only");
    }
    MomentTable table{n, max_ell, {}, method, 0.0};
    for (int ell = 0; ell <= max_ell; ++ell) {
        switch (method) {
            case MomentMethod::Recursion:
                table.values.push_back(f_recursion(n, ell));
                table.tolerance = 1e-12;
                break;
            case MomentMethod::Quadrature:
                table.values.push_back(f_quadrature(n, ell));
                table.tolerance = 1e-7;
                break;
            case MomentMethod::ClosedForm:
                table.values.push_back(f_closed(n, ell));
                table.tolerance = 0.0;
                break;
        }
    }
    return table;
}

std::vector<LimitRow> limit_convergence(int ell, std::span<const int> n_list) {
    if (!std::is_sorted(n_list.begin(), n_list.end())) {
        throw std::invalid_argument("n_list must be ascending");
    }
    std::vector<LimitRow> rows;
    for (int n : n_list) {
        const double f = f_recursion(n, ell);
        const double w = 2.0 * n + 1.0;
        rows.push_back({n, f, w * w * (f - 1.0)});
    }
    return rows;
}

namespace {

double tail_area(int n, std::span<const double> zeros, std::size_t back) {
    const double from = zeros[zeros.size() - 1 - back];
    const auto f = [n](double r) { return 2.0 * kPi * r * scaled_fock_wigner(n, r); };
    return radial_integral(f, zeros, from, 1.0 / std::sqrt(2.0 * n + 1.0), 1e-10).value;
}

}  // namespace

PeakBoundaries calibrate_peak_boundaries() {
    constexpr int n = 10;
    constexpr double peak_reference = 1.2638;
    constexpr double preceding_reference = 1.1387;
    constexpr double window = 0.002;
    const auto zeros = scaled_fock_zeros(n);
    std::optional<int> peak_back;
    std::optional<int> preceding_back;
    for (int back = 0; back <= 4; ++back) {
        const double area = tail_area(n, zeros, static_cast<std::size_t>(back));
        if (!peak_back && std::abs(area - peak_reference) <= window) {
            peak_back = back;
        }
        if (!preceding_back && std::abs(area - preceding_reference) <= window) {
            preceding_back = back;
        }
    }
    if (!peak_back || !preceding_back) {
        throw CalibrationError("no candidate lower limit reproduces the n = 10 reference peak areas within 0.002");
    }
    return {*peak_back, *preceding_back};
}

PeakAreaReport peak_areas(int n) {
    if (n < 2) {
        throw std::invalid_argument("peak_areas requires n >= 2");
    }
    static const PeakBoundaries calibrated = calibrate_peak_boundaries();
    if (calibrated.peak_only_back != kPeakBoundaries.peak_only_back ||
        calibrated.with_preceding_back != kPeakBoundaries.with_preceding_back) {
        throw CalibrationError("peak boundary calibration disagrees with the frozen choice");
    }
    PeakAreaReport report;
    report.n = n;
    report.zeros = scaled_fock_zeros(n);
    report.tolerance = 1e-10;
    report.area_peak_only = tail_area(n, report.zeros, static_cast<std::size_t>(kPeakBoundaries.peak_only_back));
    report.area_with_preceding_oscillation =
        tail_area(n, report.zeros, static_cast<std::size_t>(kPeakBoundaries.with_preceding_back));
    const auto full = f_quadrature_detail(n, 0, 1e-10);
    report.full_integral = full.value;
    report.truncation_radius = full.truncation_radius;
    return report;
}

}  // namespace wigmap
