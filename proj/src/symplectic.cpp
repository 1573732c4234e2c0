#include "wigmap/symplectic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wigmap {

PhasePolynomial PhasePolynomial::monomial(double coefficient, int q_power, int p_power) {
    if (q_power < 0 || p_power < 0) {
        throw std::invalid_argument("exponents must be nonnegative");
    }
    PhasePolynomial out;
    out.add_term({q_power, p_power}, coefficient);
    return out;
}

void PhasePolynomial::add_term(Exponents e, double c) {
    if (c == 0.0) {
        return;
    }
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0.0) {
            terms_.erase(it);
        }
    }
}

double PhasePolynomial::coefficient(int q_power, int p_power) const {
    const auto it = terms_.find({q_power, p_power});
    return it == terms_.end() ? 0.0 : it->second;
}

double PhasePolynomial::evaluate(const PhasePoint& z) const {
    double sum = 0.0;
    for (const auto& [e, c] : terms_) {
        sum += c * std::pow(z.q, e.first) * std::pow(z.p, e.second);
    }
    return sum;
}

PhasePolynomial PhasePolynomial::derivative_q() const {
    PhasePolynomial out;
    for (const auto& [e, c] : terms_) {
        if (e.first > 0) {
            out.add_term({e.first - 1, e.second}, c * e.first);
        }
    }
    return out;
}

PhasePolynomial PhasePolynomial::derivative_p() const {
    PhasePolynomial out;
    for (const auto& [e, c] : terms_) {
        if (e.second > 0) {
            out.add_term({e.first, e.second - 1}, c * e.second);
        }
    }
    return out;
}

PhasePolynomial& PhasePolynomial::operator+=(const PhasePolynomial& other) {
    for (const auto& [e, c] : other.terms_) {
        add_term(e, c);
    }
    return *this;
}

PhasePolynomial& PhasePolynomial::operator-=(const PhasePolynomial& other) {
    for (const auto& [e, c] : other.terms_) {
        add_term(e, -c);
    }
    return *this;
}

PhasePolynomial& PhasePolynomial::operator*=(double scale) {
    if (scale == 0.0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, c] : terms_) {
        c *= scale;
    }
    return *this;
}

PhasePolynomial operator*(const PhasePolynomial& a, const PhasePolynomial& b) {
    PhasePolynomial out;
    for (const auto& [ea, ca] : a.terms_) {
        for (const auto& [eb, cb] : b.terms_) {
            out.add_term({ea.first + eb.first, ea.second + eb.second}, ca * cb);
        }
    }
    return out;
}

PhasePolynomial poisson_bracket(const PhasePolynomial& f, const PhasePolynomial& g) {
    return f.derivative_q() * g.derivative_p() - f.derivative_p() * g.derivative_q();
}

LieSeries lie_transform(const PhasePolynomial& f, const PhasePolynomial& g, int order) {
    if (order < 0) {
        throw std::invalid_argument("lie_transform order must be nonnegative");
    }
    LieSeries out{g, g.is_zero()};
    PhasePolynomial term = g;
    double factorial = 1.0;
    for (int l = 1; l <= order && !out.exact; ++l) {
        term = poisson_bracket(f, term);
        if (term.is_zero()) {
            out.exact = true;
            break;
        }
        factorial *= l;
        out.value += term * (1.0 / factorial);
    }
    if (!out.exact && poisson_bracket(f, term).is_zero()) {
        out.exact = true;
    }
    return out;
}

double determinant(const Matrix2& m) { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }

double symplectic_residual(const Matrix2& m) {
    // For 2x2, M^T J M = det(M) J.
    return std::abs(determinant(m) - 1.0);
}

void validate(const ElementaryMap& map) {
    if (const auto* mono = std::get_if<MonomialShear>(&map)) {
        if (mono->degree < 3) {
            throw std::invalid_argument("MonomialShear degree must be at least 3");
        }
    }
    if (const auto* lin = std::get_if<GeneralLinear>(&map)) {
        if (symplectic_residual(lin->matrix) > 1e-12) {
            throw std::invalid_argument("GeneralLinear matrix must have unit determinant");
        }
    }
}

std::optional<PhasePolynomial> generator(const ElementaryMap& map) {
    return std::visit(
        [](const auto& m) -> std::optional<PhasePolynomial> {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Translation>) {
                return PhasePolynomial::monomial(m.alpha, 1, 0);
            } else if constexpr (std::is_same_v<T, LinearShear>) {
                return PhasePolynomial::monomial(m.alpha / 2.0, 2, 0);
            } else if constexpr (std::is_same_v<T, MonomialShear>) {
                return PhasePolynomial::monomial(m.alpha / m.degree, m.degree, 0);
            } else {
                return std::nullopt;
            }
        },
        map);
}

MapChain::MapChain(std::vector<ElementaryMap> maps) : maps_(std::move(maps)) {
    for (const auto& m : maps_) {
        validate(m);
    }
}

MapChain& MapChain::then(ElementaryMap map) {
    validate(map);
    maps_.push_back(map);
    return *this;
}

PhasePoint apply_map(const ElementaryMap& map, const PhasePoint& z) {
    return std::visit(
        [&z](const auto& m) -> PhasePoint {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Translation>) {
                return {z.q, z.p + m.alpha};
            } else if constexpr (std::is_same_v<T, LinearShear>) {
                return {z.q, z.p + m.alpha * z.q};
            } else if constexpr (std::is_same_v<T, MonomialShear>) {
                return {z.q, z.p + m.alpha * std::pow(z.q, m.degree - 1)};
            } else {
                return {m.matrix[0][0] * z.q + m.matrix[0][1] * z.p, m.matrix[1][0] * z.q + m.matrix[1][1] * z.p};
            }
        },
        map);
}

PhasePoint apply_map(const MapChain& chain, const PhasePoint& z) {
    PhasePoint out = z;
    for (const auto& m : chain.maps()) {
        out = apply_map(m, out);
    }
    return out;
}

namespace {

ElementaryMap inverse(const ElementaryMap& map) {
    return std::visit(
        [](const auto& m) -> ElementaryMap {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, GeneralLinear>) {
                const auto& a = m.matrix;
                const double det = determinant(a);
                return GeneralLinear{{{{a[1][1] / det, -a[0][1] / det}, {-a[1][0] / det, a[0][0] / det}}}};
            } else {
                T inv = m;
                inv.alpha = -m.alpha;
                return inv;
            }
        },
        map);
}

Matrix2 elementary_jacobian(const ElementaryMap& map, const PhasePoint& z) {
    return std::visit(
        [&z](const auto& m) -> Matrix2 {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, Translation>) {
                return {{{1.0, 0.0}, {0.0, 1.0}}};
            } else if constexpr (std::is_same_v<T, LinearShear>) {
                return {{{1.0, 0.0}, {m.alpha, 1.0}}};
            } else if constexpr (std::is_same_v<T, MonomialShear>) {
                return {{{1.0, 0.0}, {(m.degree - 1) * m.alpha * std::pow(z.q, m.degree - 2), 1.0}}};
            } else {
                return m.matrix;
            }
        },
        map);
}

Matrix2 multiply(const Matrix2& a, const Matrix2& b) {
    Matrix2 c{};
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    return c;
}

}  // namespace

MapChain inverse_map(const MapChain& chain) {
    std::vector<ElementaryMap> out;
    out.reserve(chain.size());
    for (auto it = chain.maps().rbegin(); it != chain.maps().rend(); ++it) {
        out.push_back(inverse(*it));
    }
    return MapChain(std::move(out));
}

Matrix2 jacobian(const MapChain& chain, const PhasePoint& z) {
    Matrix2 total{{{1.0, 0.0}, {0.0, 1.0}}};
    PhasePoint current = z;
    for (const auto& m : chain.maps()) {
        total = multiply(elementary_jacobian(m, current), total);
        current = apply_map(m, current);
    }
    return total;
}

PushforwardResult classical_pushforward(const PhaseSpaceField& w, const MapChain& chain) {
    if (chain.empty()) {
        return {w, 0};
    }
    const auto& grid = w.grid();
    const MapChain back = inverse_map(chain);
    std::vector<double> values(grid.size());
    std::size_t out_of_grid = 0;
    for (std::size_t iq = 0; iq < grid.n_q(); ++iq) {
        const double q = grid.q().node(iq);
        for (std::size_t ip = 0; ip < grid.n_p(); ++ip) {
            const PhasePoint src = apply_map(back, {q, grid.p().node(ip)});
            if (!w.contains(src.q, src.p)) {
                ++out_of_grid;
                values[iq * grid.n_p() + ip] = 0.0;
            } else {
                values[iq * grid.n_p() + ip] = w.interpolate(src.q, src.p);
            }
        }
    }
    return {PhaseSpaceField(grid, std::move(values)), out_of_grid};
}

PhaseSpaceField classical_pushforward(const std::function<double(double, double)>& w, const MapChain& chain,
                                      const PhaseSpaceGrid& grid) {
    const MapChain back = inverse_map(chain);
    return PhaseSpaceField::sample(grid, [&](double q, double p) {
        const PhasePoint src = apply_map(back, {q, p});
        return w(src.q, src.p);
    });
}

}  // namespace wigmap
