#include "wigmap/transform.hpp"

#include <fftw3.h>

#include <algorithm>
#include <boost/math/special_functions/airy.hpp>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "wigmap/error.hpp"

namespace wigmap {

namespace {

constexpr double kPi = std::numbers::pi;

bool same_hbar(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

double normalization_residual(const PhaseSpaceField& f) { return std::abs(integrate_field(f) - 1.0); }

}  // namespace

void validate(const PhaseGate& gate) {
    if (gate.degree < 1) {
        throw std::invalid_argument("phase gate degree must be at least 1");
    }
    if (!std::isfinite(gate.alpha)) {
        throw std::invalid_argument("phase gate alpha must be finite");
    }
    if (!(gate.hbar > 0.0)) {
        throw std::invalid_argument("phase gate hbar must be positive");
    }
}

ElementaryMap classical_map(const PhaseGate& gate) {
    validate(gate);
    switch (gate.degree) {
        case 1:
            return Translation{gate.alpha};
        case 2:
            return LinearShear{gate.alpha};
        default:
            return MonomialShear{gate.degree, gate.alpha};
    }
}

std::string to_string(TransformMethod method) {
    switch (method) {
        case TransformMethod::ExactShear:
            return "exact-shear";
        case TransformMethod::KernelPhase:
            return "kernel-phase";
        case TransformMethod::AiryConvolution:
            return "airy-convolution";
        case TransformMethod::Series:
            return "series";
    }
    return "unknown";
}

double exponent_identity_residual(int degree, double q, double y, double alpha, double hbar, double p) {
    if (degree < 1 || degree > 3) {
        throw std::invalid_argument("exponent identity is stated for degree 1, 2 or 3");
    }
    if (!(hbar > 0.0)) {
        throw std::invalid_argument("hbar must be positive");
    }
    const double n = degree;
    const double lhs =
        -alpha * std::pow(q - y / 2.0, degree) / (n * hbar) + alpha * std::pow(q + y / 2.0, degree) / (n * hbar) -
        p * y / hbar;
    double rhs = -(p - alpha * std::pow(q, degree - 1)) * y / hbar;
    if (degree == 3) {
        rhs += alpha * y * y * y / (12.0 * hbar);
    }
    return std::abs(lhs - rhs);
}

TransformResult transform_shear(const PhaseSpaceField& w, const PhaseGate& gate) {
    validate(gate);
    if (gate.degree > 2) {
        throw std::invalid_argument("transform_shear handles degree 1 and 2 gates only");
    }
    MapChain chain;
    if (gate.alpha != 0.0) {
        chain.then(classical_map(gate));
    }
    auto pushed = classical_pushforward(w, chain);
    TransformResult out{pushed.field, TransformMethod::ExactShear};
    out.out_of_grid = pushed.out_of_grid;
    out.normalization_residual = normalization_residual(out.field);
    if (pushed.out_of_grid > 0) {
        out.warnings.push_back(std::to_string(pushed.out_of_grid) + " output nodes pulled back outside the grid");
    }
    return out;
}

double cubic_kernel(double u, double alpha, double hbar) {
    if (alpha == 0.0) {
        throw std::invalid_argument("cubic_kernel is a delta function for alpha = 0; use the shear path");
    }
    if (!(hbar > 0.0)) {
        throw std::invalid_argument("hbar must be positive");
    }
    const double c = std::cbrt(4.0 * hbar / alpha);
    return std::abs(c) / hbar * boost::math::airy_ai(-c * u / hbar);
}

DensityKernel apply_phase_gate(const DensityKernel& kernel, const PhaseGate& gate) {
    validate(gate);
    if (!same_hbar(gate.hbar, kernel.hbar())) {
        throw std::invalid_argument("phase gate and kernel must share hbar");
    }
    const auto& axis = kernel.axis();
    const std::size_t n = axis.size();
    std::vector<Complex> matrix(kernel.matrix().begin(), kernel.matrix().end());
    const double scale = gate.alpha / (gate.degree * gate.hbar);
    for (std::size_t a = 0; a < n; ++a) {
        const double x = axis.node(a);
        for (std::size_t b = 0; b < n; ++b) {
            const double xp = axis.node(b);
            // x^n - x'^n factored to avoid cancellation near the diagonal.
            double difference;
            switch (gate.degree) {
                case 1:
                    difference = x - xp;
                    break;
                case 2:
                    difference = (x - xp) * (x + xp);
                    break;
                case 3:
                    difference = (x - xp) * (x * x + x * xp + xp * xp);
                    break;
                default:
                    difference = std::pow(x, gate.degree) - std::pow(xp, gate.degree);
            }
            matrix[a * n + b] *= std::polar(1.0, scale * difference);
        }
    }
    if (kernel.is_window()) {
        return DensityKernel::window(axis, std::move(matrix), kernel.hbar());
    }
    return DensityKernel(axis, std::move(matrix), kernel.hbar(),
                         std::vector<double>(kernel.weights().begin(), kernel.weights().end()));
}

TransformResult transform_kernel_phase(const DensityKernel& kernel, const PhaseGate& gate,
                                       const PhaseSpaceGrid& grid) {
    validate(gate);
    WeylSymbol w = gate.alpha == 0.0 ? wigner_from_kernel(kernel, grid)
                                     : wigner_from_kernel(apply_phase_gate(kernel, gate), grid);
    TransformResult out{std::move(w.field), TransformMethod::KernelPhase};
    out.warnings = std::move(w.warnings);
    out.normalization_residual = normalization_residual(out.field);
    out.kernel_spacing = kernel.axis().spacing();
    out.kernel_extent = std::max(std::abs(kernel.axis().min()), std::abs(kernel.axis().max()));
    return out;
}

TransformResult transform_cubic_exact(const DensityKernel& kernel, double alpha, double hbar,
                                      const PhaseSpaceGrid& grid) {
    return transform_kernel_phase(kernel, PhaseGate{3, alpha, hbar}, grid);
}

TransformResult transform_cubic_exact(const PhaseSpaceField& w, double alpha, double hbar) {
    if (!(hbar > 0.0)) {
        throw std::invalid_argument("hbar must be positive");
    }
    if (alpha == 0.0) {
        TransformResult out{w, TransformMethod::AiryConvolution};
        out.normalization_residual = normalization_residual(w);
        return out;
    }
    const auto& grid = w.grid();
    const std::size_t np = grid.n_p();
    const double dp = grid.dp();
    const double span = grid.p().max() - grid.p().min();
    const double c = std::cbrt(4.0 * hbar / alpha);
    const double sign = c > 0.0 ? 1.0 : -1.0;

    // Local angular frequency of Ai(-c u / hbar) in u is (|c|/hbar) sqrt(c u / hbar).
    double worst_u = 0.0;
    for (std::size_t iq = 0; iq < grid.n_q(); ++iq) {
        const double s = alpha * grid.q().node(iq) * grid.q().node(iq);
        worst_u = std::max(worst_u, sign * (sign > 0 ? span - s : -span - s));
    }
    const double frequency = std::abs(c) / hbar * std::sqrt(std::abs(c) * std::max(worst_u, 0.0) / hbar);
    if (frequency * dp > kPi) {
        const auto suggested = static_cast<std::size_t>(std::ceil(1.25 * frequency * span / kPi)) + 1;
        std::ostringstream os;
        os << "momentum spacing " << dp << " cannot resolve the cubic kernel oscillation (frequency " << frequency
           << "); use at least " << suggested << " momentum points";
        throw GridResolutionError(os.str(), suggested);
    }

    std::vector<double> values(grid.size());
    std::vector<double> table(2 * np - 1);
    std::vector<double> weighted(np);
    for (std::size_t iq = 0; iq < grid.n_q(); ++iq) {
        const double q = grid.q().node(iq);
        const double s = alpha * q * q;
        for (std::size_t d = 0; d < table.size(); ++d) {
            const double u = (static_cast<double>(d) - static_cast<double>(np - 1)) * dp - s;
            table[d] = cubic_kernel(u, alpha, hbar);
        }
        const auto row = w.row(iq);
        for (std::size_t j = 0; j < np; ++j) {
            weighted[j] = row[j] * dp * (j == 0 || j + 1 == np ? 0.5 : 1.0);
        }
        for (std::size_t k = 0; k < np; ++k) {
            double acc = 0.0;
            // u = (k - j) dp - s -> table index k - j + np - 1
            const double* kernel_row = table.data() + k + np - 1;
            for (std::size_t j = 0; j < np; ++j) {
                acc += *(kernel_row - j) * weighted[j];
            }
            values[iq * np + k] = acc;
        }
    }
    TransformResult out{PhaseSpaceField(grid, std::move(values)), TransformMethod::AiryConvolution};
    out.normalization_residual = normalization_residual(out.field);
    return out;
}

namespace {

struct FftwDeleter {
    void operator()(fftw_complex* p) const { fftw_free(p); }
};

class RowTransform {
public:
    explicit RowTransform(std::size_t n)
        : n_(n),
          buffer_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))),
          forward_(fftw_plan_dft_1d(static_cast<int>(n), buffer_.get(), buffer_.get(), FFTW_FORWARD, FFTW_ESTIMATE)),
          backward_(
              fftw_plan_dft_1d(static_cast<int>(n), buffer_.get(), buffer_.get(), FFTW_BACKWARD, FFTW_ESTIMATE)) {}
    ~RowTransform() {
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(backward_);
    }
    RowTransform(const RowTransform&) = delete;
    RowTransform& operator=(const RowTransform&) = delete;

    Complex* data() { return reinterpret_cast<Complex*>(buffer_.get()); }
    void forward() { fftw_execute(forward_); }
    void backward() { fftw_execute(backward_); }
    std::size_t size() const { return n_; }

private:
    std::size_t n_;
    std::unique_ptr<fftw_complex, FftwDeleter> buffer_;
    fftw_plan forward_;
    fftw_plan backward_;
};

// Angular wave number of DFT bin j; the Nyquist bin of an even-length row is 0.
double wave_number(std::size_t j, std::size_t n, double dp) {
    const double unit = 2.0 * kPi / (static_cast<double>(n) * dp);
    if (2 * j == n) {
        return 0.0;
    }
    return j < (n + 1) / 2 ? unit * static_cast<double>(j) : -unit * static_cast<double>(n - j);
}

}  // namespace

PhaseSpaceField series_term(const PhaseSpaceField& w, double alpha, double hbar, int k) {
    if (k < 0) {
        throw std::invalid_argument("series order must be nonnegative");
    }
    if (!(hbar > 0.0)) {
        throw std::invalid_argument("hbar must be positive");
    }
    const auto& grid = w.grid();
    const std::size_t np = grid.n_p();
    const double dp = grid.dp();
    double coefficient = 1.0;
    for (int j = 1; j <= k; ++j) {
        coefficient *= alpha * hbar * hbar / 12.0 / j;
    }
    std::vector<double> values(grid.size(), 0.0);
    if (coefficient == 0.0) {
        return PhaseSpaceField(grid, std::move(values));
    }
    RowTransform fft(np);
    const Complex i_unit(0.0, 1.0);
    for (std::size_t iq = 0; iq < grid.n_q(); ++iq) {
        const double q = grid.q().node(iq);
        const double shift = alpha * q * q;
        const auto row = w.row(iq);
        Complex* data = fft.data();
        for (std::size_t j = 0; j < np; ++j) {
            data[j] = row[j];
        }
        fft.forward();
        for (std::size_t j = 0; j < np; ++j) {
            const double kappa = wave_number(j, np, dp);
            if (kappa == 0.0 && j != 0) {
                data[j] = 0.0;
                continue;
            }
            const Complex derivative = std::pow(i_unit * kappa, 3 * k);
            data[j] *= coefficient * derivative * std::polar(1.0, -kappa * shift) / static_cast<double>(np);
        }
        fft.backward();
        for (std::size_t j = 0; j < np; ++j) {
            values[iq * np + j] = data[j].real();
        }
    }
    return PhaseSpaceField(grid, std::move(values));
}

TransformResult transform_series(const PhaseSpaceField& w, double alpha, double hbar, int order) {
    if (order < 0) {
        throw std::invalid_argument("series order must be nonnegative");
    }
    const auto& grid = w.grid();
    PhaseSpaceField sheared = series_term(w, alpha, hbar, 0);
    std::vector<double> total(sheared.values().begin(), sheared.values().end());
    for (int k = 1; k <= order; ++k) {
        const PhaseSpaceField term = series_term(w, alpha, hbar, k);
        for (std::size_t i = 0; i < total.size(); ++i) {
            total[i] += term.values()[i];
        }
    }
    TransformResult out{PhaseSpaceField(grid, std::move(total)), TransformMethod::Series, order};
    out.normalization_residual = normalization_residual(out.field);

    double peak = 0.0;
    double edge = 0.0;
    for (std::size_t iq = 0; iq < grid.n_q(); ++iq) {
        const auto row = sheared.row(iq);
        for (double v : row) {
            peak = std::max(peak, std::abs(v));
        }
        edge = std::max({edge, std::abs(row.front()), std::abs(row.back())});
    }
    if (edge > 1e-8 * peak) {
        out.warnings.push_back("sheared field reaches the momentum boundary and wraps periodically");
    }

    // Spectral content near the Nyquist limit is amplified by kappa^{3K}.
    if (order > 0) {
        RowTransform fft(grid.n_p());
        const double nyquist = kPi / grid.dp();
        double coefficient = 1.0;
        for (int j = 1; j <= order; ++j) {
            coefficient *= std::abs(alpha) * hbar * hbar / 12.0 / j;
        }
        double noise = 0.0;
        for (std::size_t iq = 0; iq < grid.n_q(); ++iq) {
            const auto row = w.row(iq);
            for (std::size_t j = 0; j < grid.n_p(); ++j) {
                fft.data()[j] = row[j];
            }
            fft.forward();
            for (std::size_t j = 0; j < grid.n_p(); ++j) {
                const double kappa = std::abs(wave_number(j, grid.n_p(), grid.dp()));
                if (kappa > 2.0 * nyquist / 3.0) {
                    noise = std::max(noise, std::abs(fft.data()[j]) / static_cast<double>(grid.n_p()) * coefficient *
                                                std::pow(kappa, 3 * order));
                }
            }
        }
        if (noise > 1e-6 * std::max(peak, 1e-300)) {
            std::ostringstream os;
            os << "spectral differentiation amplifies grid noise to " << noise << " relative to field peak " << peak;
            out.warnings.push_back(os.str());
        }
    }
    return out;
}

UniformAxis kernel_axis_for(const AnalyticWigner& state, const PhaseGate& gate, const PhaseSpaceGrid& grid) {
    validate(gate);
    const double hbar = state.hbar();
    const double p_grid = std::max(std::abs(grid.p().min()), std::abs(grid.p().max()));
    const double q_far = std::max(std::abs(grid.q().min()), std::abs(grid.q().max()));
    const double reach = std::abs(gate.alpha) * std::pow(q_far, gate.degree - 1) + state.p_extent();
    // Periodic images of W' lie at multiples of pi hbar / dx in momentum.
    const double dx_max = kPi * hbar / (1.1 * (reach + p_grid));
    const double dq = grid.dq();
    const auto refine = static_cast<std::size_t>(std::ceil(2.0 * dq / dx_max - 1e-12));
    const double dx = 2.0 * dq / static_cast<double>(std::max<std::size_t>(refine, 1));

    const double half_y = 0.5 * state.y_extent();
    const double q_ext = state.q_extent();
    const double lo = std::min(grid.q().min(), std::max(grid.q().min() - half_y, -q_ext));
    const double hi = std::max(grid.q().max(), std::min(grid.q().max() + half_y, q_ext));
    const auto margin_lo = static_cast<std::size_t>(std::ceil((grid.q().min() - lo) / dx));
    const auto margin_hi = static_cast<std::size_t>(std::ceil((hi - grid.q().max()) / dx));
    const double x0 = grid.q().min() - static_cast<double>(margin_lo) * dx;
    const auto inner = static_cast<std::size_t>(std::ceil((grid.q().max() - grid.q().min()) / dx - 1e-9));
    const std::size_t n = inner + margin_lo + margin_hi + 1;
    return UniformAxis(x0, x0 + static_cast<double>(n - 1) * dx, n);
}

void check_kernel_budget(const AnalyticWigner& state, const PhaseGate& gate, const PhaseSpaceGrid& grid,
                         std::size_t max_kernel_points) {
    const UniformAxis axis = kernel_axis_for(state, gate, grid);
    if (axis.size() > max_kernel_points) {
        std::ostringstream os;
        os << "kernel-phase route needs a " << axis.size() << "-point position lattice (budget " << max_kernel_points
           << "); shrink the q range, the momentum range or alpha";
        throw GridResolutionError(os.str(), axis.size());
    }
}

Discrepancy classical_quantum_discrepancy(const AnalyticWigner& state, const PhaseGate& gate,
                                          const PhaseSpaceGrid& grid) {
    validate(gate);
    if (!same_hbar(gate.hbar, state.hbar())) {
        throw std::invalid_argument("phase gate and state must share hbar");
    }
    const UniformAxis axis = kernel_axis_for(state, gate, grid);
    TransformResult quantum = transform_kernel_phase(state.kernel(axis), gate, grid);
    MapChain chain;
    if (gate.alpha != 0.0) {
        chain.then(classical_map(gate));
    }
    PhaseSpaceField classical =
        classical_pushforward([&state](double q, double p) { return state(q, p); }, chain, grid);
    std::vector<double> difference(grid.size());
    double l_inf = 0.0;
    for (std::size_t i = 0; i < difference.size(); ++i) {
        difference[i] = std::abs(quantum.field.values()[i] - classical.values()[i]);
        l_inf = std::max(l_inf, difference[i]);
    }
    const double l1 = integrate_field(PhaseSpaceField(grid, std::move(difference)));
    return {l_inf, l1, std::move(quantum), std::move(classical)};
}

}  // namespace wigmap
