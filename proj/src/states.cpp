#include "wigmap/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace wigmap {

namespace {

constexpr double kPi = std::numbers::pi;
// -ln(1e-18): exponent at which a Gaussian envelope drops below 1e-18.
constexpr double kEnvelopeLog = 41.446531673892822;

}  // namespace

double laguerre(int n, double x) {
    if (n < 0) {
        throw std::invalid_argument("laguerre degree must be nonnegative");
    }
    if (n == 0) {
        return 1.0;
    }
    double prev = 1.0;
    double cur = 1.0 - x;
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

double laguerre_weighted(int n, double x) {
    if (n < 0) {
        throw std::invalid_argument("laguerre degree must be nonnegative");
    }
    if (x < 0.0) {
        throw std::domain_error("laguerre_weighted requires x >= 0");
    }
    double prev = 1.0;
    double cur = n == 0 ? 1.0 : 1.0 - x;
    long scale = 0;  // binary exponent carried outside the recursion
    for (int k = 1; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 - x) * cur - k * prev) / (k + 1.0);
        prev = cur;
        cur = next;
        if (std::abs(cur) > 0x1p400) {
            prev = std::ldexp(prev, -400);
            cur = std::ldexp(cur, -400);
            scale += 400;
        }
    }
    if (cur == 0.0) {
        return 0.0;
    }
    int e = 0;
    const double mantissa = std::frexp(cur, &e);
    return mantissa * std::exp(static_cast<double>(scale + e) * std::numbers::ln2 - 0.5 * x);
}

WaveFunction::WaveFunction(UniformAxis axis, std::vector<Complex> samples, double hbar)
    : axis_(axis), samples_(std::move(samples)), hbar_(hbar) {
    if (!(hbar > 0.0)) {
        throw std::invalid_argument("hbar must be positive");
    }
    if (samples_.size() != axis_.size()) {
        throw std::invalid_argument("wave function needs one sample per grid node");
    }
    std::vector<double> density(samples_.size());
    std::transform(samples_.begin(), samples_.end(), density.begin(), [](const Complex& c) { return std::norm(c); });
    const double norm = trapezoid(density, axis_.spacing());
    if (std::abs(norm - 1.0) > 1e-8) {
        throw std::invalid_argument("wave function norm " + std::to_string(norm) + " differs from 1 by more than 1e-8");
    }
}

namespace {

std::vector<Complex> fock_samples(const UniformAxis& axis, int n, double hbar) {
    if (n < 0) {
        throw std::invalid_argument("Fock index must be nonnegative");
    }
    if (!(hbar > 0.0)) {
        throw std::invalid_argument("hbar must be positive");
    }
    std::vector<Complex> samples(axis.size());
    const double root = std::sqrt(hbar);
    const double prefactor = std::pow(kPi * hbar, -0.25);
    for (std::size_t i = 0; i < axis.size(); ++i) {
        const double xi = axis.node(i) / root;
        double prev = 0.0;
        double cur = prefactor * std::exp(-0.5 * xi * xi);
        for (int k = 0; k < n; ++k) {
            const double next = std::sqrt(2.0 / (k + 1.0)) * xi * cur - std::sqrt(k / (k + 1.0)) * prev;
            prev = cur;
            cur = next;
        }
        samples[i] = cur;
    }
    return samples;
}

}  // namespace

WaveFunction fock_wavefunction(const UniformAxis& axis, int n, double hbar) {
    return WaveFunction(axis, fock_samples(axis, n, hbar), hbar);
}

DensityKernel::DensityKernel(UniformAxis axis, std::vector<Complex> matrix, double hbar, std::vector<double> weights)
    : DensityKernel(axis, std::move(matrix), hbar, std::move(weights), Check::Full) {}

DensityKernel::DensityKernel(UniformAxis axis, std::vector<Complex> matrix, double hbar, std::vector<double> weights,
                             Check check)
    : axis_(axis), matrix_(std::move(matrix)), hbar_(hbar), weights_(std::move(weights)) {
    if (!(hbar > 0.0)) {
        throw std::invalid_argument("hbar must be positive");
    }
    if (matrix_.size() != axis_.size() * axis_.size()) {
        throw std::invalid_argument("kernel matrix must be n x n for an n-point axis");
    }
    if (check == Check::None) {
        return;
    }
    if (const double h = hermiticity_residual(); h > 1e-12) {
        throw std::invalid_argument("density kernel is not Hermitian (residual " + std::to_string(h) + ")");
    }
    if (check == Check::Hermitian) {
        return;
    }
    if (const double tr = trace(); std::abs(tr - 1.0) > 1e-8) {
        throw std::invalid_argument("density kernel trace " + std::to_string(tr) + " differs from 1");
    }
}

DensityKernel DensityKernel::operator_kernel(UniformAxis axis, std::vector<Complex> matrix, double hbar) {
    return DensityKernel(axis, std::move(matrix), hbar, {}, Check::None);
}

DensityKernel DensityKernel::window(UniformAxis axis, std::vector<Complex> matrix, double hbar) {
    DensityKernel k(axis, std::move(matrix), hbar, {}, Check::Hermitian);
    k.window_ = true;
    return k;
}

DensityKernel DensityKernel::mixture(std::span<const WaveFunction> states, std::vector<double> weights) {
    if (states.empty()) {
        throw std::invalid_argument("mixture needs at least one state");
    }
    if (weights.empty()) {
        weights.assign(states.size(), 1.0 / static_cast<double>(states.size()));
    }
    if (weights.size() != states.size()) {
        throw std::invalid_argument("mixture needs one weight per state");
    }
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) {
            throw std::invalid_argument("mixture weights must be nonnegative");
        }
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw std::invalid_argument("mixture weights must sum to 1");
    }
    const UniformAxis axis = states.front().axis();
    const double hbar = states.front().hbar();
    const std::size_t n = axis.size();
    std::vector<Complex> matrix(n * n);
    for (std::size_t j = 0; j < states.size(); ++j) {
        if (!(states[j].axis() == axis) || states[j].hbar() != hbar) {
            throw std::invalid_argument("mixture states must share grid and hbar");
        }
        const auto psi = states[j].samples();
        for (std::size_t a = 0; a < n; ++a) {
            const Complex wa = weights[j] * psi[a];
            for (std::size_t b = 0; b < n; ++b) {
                matrix[a * n + b] += wa * std::conj(psi[b]);
            }
        }
    }
    return DensityKernel(axis, std::move(matrix), hbar, std::move(weights));
}

double DensityKernel::trace() const {
    std::vector<double> diag(size());
    for (std::size_t a = 0; a < size(); ++a) {
        diag[a] = (*this)(a, a).real();
    }
    return trapezoid(diag, axis_.spacing());
}

double DensityKernel::hermiticity_residual() const {
    double worst = 0.0;
    double scale = 1.0;
    for (const auto& c : matrix_) {
        scale = std::max(scale, std::abs(c));
    }
    for (std::size_t a = 0; a < size(); ++a) {
        for (std::size_t b = a; b < size(); ++b) {
            worst = std::max(worst, std::abs((*this)(a, b) - std::conj((*this)(b, a))));
        }
    }
    return worst / scale;
}

DensityKernel fock_kernel(const UniformAxis& axis, int n, double hbar) {
    const WaveFunction psi = fock_wavefunction(axis, n, hbar);
    return DensityKernel::mixture(std::span<const WaveFunction>(&psi, 1), {1.0});
}

namespace {

std::vector<Complex> thermal_matrix(const UniformAxis& axis, double beta, double omega, double m, double hbar) {
    if (!(beta > 0.0) || !(omega > 0.0) || !(m > 0.0) || !(hbar > 0.0)) {
        throw std::invalid_argument("thermal kernel requires beta, omega, m, hbar > 0");
    }
    const double t = std::tanh(0.5 * beta * hbar * omega);
    const double mw = m * omega;
    const double amplitude = std::sqrt(mw * t / (kPi * hbar));
    const std::size_t n = axis.size();
    std::vector<Complex> matrix(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            const double x = axis.node(a);
            const double xp = axis.node(b);
            const double q = 0.5 * (x + xp);
            const double y = x - xp;
            matrix[a * n + b] = amplitude * std::exp(-mw * t * q * q / hbar - mw * y * y / (4.0 * hbar * t));
        }
    }
    return matrix;
}

std::vector<Complex> pure_matrix(std::span<const Complex> psi) {
    const std::size_t n = psi.size();
    std::vector<Complex> matrix(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            matrix[a * n + b] = psi[a] * std::conj(psi[b]);
        }
    }
    return matrix;
}

}  // namespace

DensityKernel thermal_kernel(const UniformAxis& axis, double beta, double omega, double m, double hbar) {
    return DensityKernel(axis, thermal_matrix(axis, beta, omega, m, hbar), hbar);
}

DensityKernel multiplication_kernel(const UniformAxis& axis, const std::function<double(double)>& potential,
                                    double hbar) {
    const std::size_t n = axis.size();
    const double dx = axis.spacing();
    std::vector<Complex> matrix(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            const long offset = static_cast<long>(a) - static_cast<long>(b);
            const double delta =
                offset == 0 ? 1.0 / (2.0 * dx) : std::sin(kPi * offset / 2.0) / (kPi * offset * dx);
            matrix[a * n + b] = potential(0.5 * (axis.node(a) + axis.node(b))) * delta;
        }
    }
    return DensityKernel::operator_kernel(axis, std::move(matrix), hbar);
}

namespace {

// Index m with q = x_0 + m dx / 2, or throws when q is off the lattice.
std::size_t half_lattice_index(const UniformAxis& axis, double q) {
    const double t = 2.0 * (q - axis.min()) / axis.spacing();
    const double m = std::round(t);
    if (std::abs(t - m) > 1e-6 || m < 0.0 || m > 2.0 * static_cast<double>(axis.size() - 1)) {
        std::ostringstream os;
        os << "q = " << q << " is not on the kernel's half-step lattice";
        throw std::invalid_argument(os.str());
    }
    return static_cast<std::size_t>(m);
}

}  // namespace

WeylSymbol weyl_symbol(const DensityKernel& kernel, const PhaseSpaceGrid& grid) {
    const UniformAxis& axis = kernel.axis();
    const std::size_t n = axis.size();
    const double dx = axis.spacing();
    const double h = 2.0 * dx;
    const double hbar = kernel.hbar();

    double peak = 0.0;
    for (const auto& c : kernel.matrix()) {
        peak = std::max(peak, std::abs(c));
    }
    const double negligible = 1e-20 * peak;

    WeylSymbol out{PhaseSpaceField(grid, std::vector<double>(grid.size(), 0.0)), hbar, 0.0, {}};

    const double half_band = kPi * hbar / (2.0 * dx);
    if (std::max(std::abs(grid.p().min()), std::abs(grid.p().max())) > half_band) {
        std::ostringstream os;
        os << "momentum grid exceeds the alias-free band |p| < " << half_band << " of the kernel lattice";
        out.warnings.push_back(os.str());
    }
    double edge = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        edge = std::max({edge, std::abs(kernel(a, 0)), std::abs(kernel(a, n - 1)), std::abs(kernel(0, a)),
                         std::abs(kernel(n - 1, a))});
    }
    if (edge > 1e-10 * peak) {
        out.warnings.push_back("kernel has not decayed at the position-grid boundary");
    }

    std::vector<double> values(grid.size());
    std::vector<Complex> samples;
    samples.reserve(n);
    for (std::size_t iq = 0; iq < grid.n_q(); ++iq) {
        const std::size_t m = half_lattice_index(axis, grid.q().node(iq));
        std::size_t a_lo = m >= n - 1 ? m - (n - 1) : 0;
        std::size_t a_hi = std::min(n - 1, m);
        while (a_lo < a_hi && std::abs(kernel(a_lo, m - a_lo)) <= negligible) {
            ++a_lo;
        }
        while (a_hi > a_lo && std::abs(kernel(a_hi, m - a_hi)) <= negligible) {
            --a_hi;
        }
        samples.clear();
        for (std::size_t a = a_lo; a <= a_hi; ++a) {
            samples.push_back(kernel(a, m - a));
        }
        // y_j = y_lo + j h
        const double y_lo = (2.0 * static_cast<double>(a_lo) - static_cast<double>(m)) * dx;
        for (std::size_t ip = 0; ip < grid.n_p(); ++ip) {
            const double p = grid.p().node(ip);
            const Complex z = std::polar(1.0, -p * h / hbar);
            Complex acc = 0.0;
            for (auto it = samples.rbegin(); it != samples.rend(); ++it) {
                acc = acc * z + *it;
            }
            const Complex symbol = h * std::polar(1.0, -p * y_lo / hbar) * acc;
            values[iq * grid.n_p() + ip] = symbol.real();
            out.max_imag = std::max(out.max_imag, std::abs(symbol.imag()));
        }
    }
    out.field = PhaseSpaceField(grid, std::move(values));
    return out;
}

WeylSymbol wigner_from_kernel(const DensityKernel& kernel, const PhaseSpaceGrid& grid) {
    WeylSymbol symbol = weyl_symbol(kernel, grid);
    const double scale = 1.0 / (2.0 * kPi * kernel.hbar());
    std::vector<double> values(symbol.field.values().begin(), symbol.field.values().end());
    for (double& v : values) {
        v *= scale;
    }
    symbol.field = PhaseSpaceField(grid, std::move(values));
    symbol.max_imag *= scale;
    return symbol;
}

DensityKernel kernel_from_symbol(const WeylSymbol& symbol, const UniformAxis& axis) {
    const auto& grid = symbol.field.grid();
    const std::size_t n = axis.size();
    const double tol = 1e-9 * axis.spacing();
    if (grid.n_q() != 2 * n - 1 || std::abs(grid.q().min() - axis.min()) > tol ||
        std::abs(grid.q().max() - axis.max()) > tol) {
        throw std::invalid_argument("symbol q axis must be the half-step lattice of the target axis");
    }
    const double hbar = symbol.hbar;
    const double dp = grid.dp();
    const double scale = dp / (2.0 * kPi * hbar);
    const double dx = axis.spacing();
    std::vector<Complex> matrix(n * n);
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            const auto row = symbol.field.row(a + b);
            const double y = (static_cast<double>(a) - static_cast<double>(b)) * dx;
            const Complex z = std::polar(1.0, dp * y / hbar);
            Complex acc = 0.0;
            for (auto it = row.rbegin(); it != row.rend(); ++it) {
                acc = acc * z + *it;
            }
            matrix[a * n + b] = scale * std::polar(1.0, grid.p().min() * y / hbar) * acc;
        }
    }
    return DensityKernel::operator_kernel(axis, std::move(matrix), hbar);
}

PhaseSpaceGrid dual_grid(const UniformAxis& axis, double hbar, std::size_t n_p) {
    const double dp = kPi * hbar / (static_cast<double>(n_p) * axis.spacing());
    const double p0 = -static_cast<double>(n_p / 2) * dp;
    return PhaseSpaceGrid(UniformAxis(axis.min(), axis.max(), 2 * axis.size() - 1),
                          UniformAxis(p0, p0 + static_cast<double>(n_p - 1) * dp, n_p));
}

double trace_pair(const WeylSymbol& a, const WeylSymbol& b) {
    if (!(a.field.grid() == b.field.grid())) {
        throw std::invalid_argument("trace_pair requires symbols on the same grid");
    }
    if (a.hbar != b.hbar) {
        throw std::invalid_argument("trace_pair requires a shared hbar");
    }
    const auto& grid = a.field.grid();
    std::vector<double> product(grid.size());
    for (std::size_t i = 0; i < product.size(); ++i) {
        product[i] = a.field.values()[i] * b.field.values()[i];
    }
    return integrate_field(PhaseSpaceField(grid, std::move(product))) / (2.0 * kPi * a.hbar);
}

Marginal marginal_q(const PhaseSpaceField& w) {
    const auto& grid = w.grid();
    std::vector<double> density(grid.n_q());
    for (std::size_t iq = 0; iq < grid.n_q(); ++iq) {
        density[iq] = trapezoid(w.row(iq), grid.dp());
    }
    return {grid.q(), std::move(density)};
}

Marginal marginal_p(const PhaseSpaceField& w) {
    const auto& grid = w.grid();
    std::vector<double> density(grid.n_p());
    std::vector<double> column(grid.n_q());
    for (std::size_t ip = 0; ip < grid.n_p(); ++ip) {
        for (std::size_t iq = 0; iq < grid.n_q(); ++iq) {
            column[iq] = w.at(iq, ip);
        }
        density[ip] = trapezoid(column, grid.dq());
    }
    return {grid.p(), std::move(density)};
}

double oscillator_energy(double q, double p, double omega, double m) {
    return p * p / (2.0 * m) + 0.5 * m * omega * omega * q * q;
}

double thermal_wigner(double beta, double omega, double m, double hbar, double q, double p) {
    if (!(beta > 0.0) || !(omega > 0.0) || !(m > 0.0) || !(hbar > 0.0)) {
        throw std::invalid_argument("thermal_wigner requires beta, omega, m, hbar > 0");
    }
    const double t = std::tanh(0.5 * beta * hbar * omega);
    return t / (kPi * hbar) * std::exp(-2.0 / (hbar * omega) * t * oscillator_energy(q, p, omega, m));
}

double fock_wigner(int n, double hbar, double r) {
    if (n < 0 || !(hbar > 0.0) || r < 0.0) {
        throw std::invalid_argument("fock_wigner requires n >= 0, hbar > 0, r >= 0");
    }
    const double sign = n % 2 == 0 ? 1.0 : -1.0;
    return sign / (kPi * hbar) * laguerre_weighted(n, 2.0 * r * r / hbar);
}

double scaled_fock_wigner(int n, double r) {
    if (n < 0 || r < 0.0) {
        throw std::invalid_argument("scaled_fock_wigner requires n >= 0, r >= 0");
    }
    const double sign = n % 2 == 0 ? 1.0 : -1.0;
    const double width = 2.0 * n + 1.0;
    return sign * width / kPi * laguerre_weighted(n, 2.0 * width * r * r);
}

double boltzmann_limit(double beta, double q, double p) {
    if (!(beta > 0.0)) {
        throw std::invalid_argument("boltzmann_limit requires beta > 0");
    }
    return beta / (2.0 * kPi) * std::exp(-beta * oscillator_energy(q, p));
}

AnalyticWigner::AnalyticWigner(Family family) : family_(family) {
    std::visit(
        [](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, ThermalOscillator>) {
                if (!(f.beta > 0.0) || !(f.omega > 0.0) || !(f.m > 0.0) || !(f.hbar > 0.0)) {
                    throw std::invalid_argument("thermal state requires beta, omega, m, hbar > 0");
                }
            } else if constexpr (std::is_same_v<T, Fock>) {
                if (f.n < 0 || !(f.hbar > 0.0)) {
                    throw std::invalid_argument("Fock state requires n >= 0 and hbar > 0");
                }
            } else {
                if (f.n < 0) {
                    throw std::invalid_argument("scaled Fock state requires n >= 0");
                }
            }
        },
        family_);
}

double AnalyticWigner::hbar() const {
    return std::visit(
        [](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, ScaledFock>) {
                return scaled_fock_hbar(f.n);
            } else {
                return f.hbar;
            }
        },
        family_);
}

double AnalyticWigner::operator()(double q, double p) const {
    return std::visit(
        [q, p](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            const double r = std::hypot(q, p);
            if constexpr (std::is_same_v<T, ThermalOscillator>) {
                return thermal_wigner(f.beta, f.omega, f.m, f.hbar, q, p);
            } else if constexpr (std::is_same_v<T, Fock>) {
                return fock_wigner(f.n, f.hbar, r);
            } else {
                return scaled_fock_wigner(f.n, r);
            }
        },
        family_);
}

PhaseSpaceField AnalyticWigner::sample(const PhaseSpaceGrid& grid) const {
    return PhaseSpaceField::sample(grid, [this](double q, double p) { return (*this)(q, p); });
}

DensityKernel AnalyticWigner::kernel(const UniformAxis& axis) const {
    const double extent = q_extent();
    const bool full = axis.min() <= -extent && axis.max() >= extent;
    return std::visit(
        [&](const auto& f) -> DensityKernel {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, ThermalOscillator>) {
                if (full) {
                    return thermal_kernel(axis, f.beta, f.omega, f.m, f.hbar);
                }
                return DensityKernel::window(axis, thermal_matrix(axis, f.beta, f.omega, f.m, f.hbar), f.hbar);
            } else {
                const double h = hbar();
                if (full) {
                    return fock_kernel(axis, f.n, h);
                }
                return DensityKernel::window(axis, pure_matrix(fock_samples(axis, f.n, h)), h);
            }
        },
        family_);
}

namespace {

double fock_extent(int n, double hbar) { return std::sqrt(hbar) * (std::sqrt(2.0 * n + 1.0) + 8.0); }

}  // namespace

double AnalyticWigner::q_extent() const {
    if (const auto* th = std::get_if<ThermalOscillator>(&family_)) {
        const double t = std::tanh(0.5 * th->beta * th->hbar * th->omega);
        return std::sqrt(kEnvelopeLog * th->hbar / (th->m * th->omega * t));
    }
    const int n = std::holds_alternative<Fock>(family_) ? std::get<Fock>(family_).n : std::get<ScaledFock>(family_).n;
    return fock_extent(n, hbar());
}

double AnalyticWigner::y_extent() const {
    if (const auto* th = std::get_if<ThermalOscillator>(&family_)) {
        const double t = std::tanh(0.5 * th->beta * th->hbar * th->omega);
        return std::sqrt(4.0 * th->hbar * t * kEnvelopeLog / (th->m * th->omega));
    }
    return 2.0 * q_extent();
}

double AnalyticWigner::p_extent() const {
    if (const auto* th = std::get_if<ThermalOscillator>(&family_)) {
        const double t = std::tanh(0.5 * th->beta * th->hbar * th->omega);
        return std::sqrt(kEnvelopeLog * th->m * th->omega * th->hbar / t);
    }
    return q_extent();
}

std::string AnalyticWigner::describe() const {
    std::ostringstream os;
    os.precision(17);
    std::visit(
        [&os](const auto& f) {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, ThermalOscillator>) {
                os << "thermal(beta=" << f.beta << ",omega=" << f.omega << ",m=" << f.m << ",hbar=" << f.hbar << ")";
            } else if constexpr (std::is_same_v<T, Fock>) {
                os << "fock(n=" << f.n << ",hbar=" << f.hbar << ")";
            } else {
                os << "scaled_fock(n=" << f.n << ")";
            }
        },
        family_);
    return os.str();
}

}  // namespace wigmap
