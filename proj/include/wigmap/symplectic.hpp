#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "wigmap/grids.hpp"

namespace wigmap {

struct PhasePoint {
    double q = 0.0;
    double p = 0.0;
    bool operator==(const PhasePoint&) const = default;
};

// Sum of c_ab q^a p^b with a finite coefficient table; zero coefficients are
// never stored.
class PhasePolynomial {
public:
    using Exponents = std::pair<int, int>;

    PhasePolynomial() = default;
    static PhasePolynomial monomial(double coefficient, int q_power, int p_power);
    static PhasePolynomial constant(double c) { return monomial(c, 0, 0); }
    static PhasePolynomial q() { return monomial(1.0, 1, 0); }
    static PhasePolynomial p() { return monomial(1.0, 0, 1); }

    const std::map<Exponents, double>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    double coefficient(int q_power, int p_power) const;

    double evaluate(const PhasePoint& z) const;
    PhasePolynomial derivative_q() const;
    PhasePolynomial derivative_p() const;

    PhasePolynomial& operator+=(const PhasePolynomial& other);
    PhasePolynomial& operator-=(const PhasePolynomial& other);
    PhasePolynomial& operator*=(double scale);
    friend PhasePolynomial operator+(PhasePolynomial a, const PhasePolynomial& b) { return a += b; }
    friend PhasePolynomial operator-(PhasePolynomial a, const PhasePolynomial& b) { return a -= b; }
    friend PhasePolynomial operator*(PhasePolynomial a, double s) { return a *= s; }
    friend PhasePolynomial operator*(double s, PhasePolynomial a) { return a *= s; }
    friend PhasePolynomial operator*(const PhasePolynomial& a, const PhasePolynomial& b);
    bool operator==(const PhasePolynomial&) const = default;

private:
    void add_term(Exponents e, double c);
    std::map<Exponents, double> terms_;
};

// [f, g] = df/dq dg/dp - df/dp dg/dq
PhasePolynomial poisson_bracket(const PhasePolynomial& f, const PhasePolynomial& g);

struct LieSeries {
    PhasePolynomial value;
    // True when :f:^k g vanished for some k <= order, i.e. the series terminated.
    bool exact = false;
};

// Truncated exp(:f:) g = sum_{l <= order} :f:^l g / l!.
LieSeries lie_transform(const PhasePolynomial& f, const PhasePolynomial& g, int order);

using Matrix2 = std::array<std::array<double, 2>, 2>;

struct Translation {
    double alpha = 0.0;
};
struct LinearShear {
    double alpha = 0.0;
};
struct MonomialShear {
    int degree = 3;
    double alpha = 0.0;
};
struct GeneralLinear {
    Matrix2 matrix{{{1.0, 0.0}, {0.0, 1.0}}};
};

using ElementaryMap = std::variant<Translation, LinearShear, MonomialShear, GeneralLinear>;

// Validates the symplectic condition (det = 1) and degree >= 3 invariants.
void validate(const ElementaryMap& map);

// The generator f with exp(:f:) equal to the map; GeneralLinear has none here.
std::optional<PhasePolynomial> generator(const ElementaryMap& map);

// Elementary maps applied left to right.
class MapChain {
public:
    MapChain() = default;
    explicit MapChain(std::vector<ElementaryMap> maps);

    MapChain& then(ElementaryMap map);
    const std::vector<ElementaryMap>& maps() const noexcept { return maps_; }
    bool empty() const noexcept { return maps_.empty(); }
    std::size_t size() const noexcept { return maps_.size(); }

private:
    std::vector<ElementaryMap> maps_;
};

PhasePoint apply_map(const ElementaryMap& map, const PhasePoint& z);
PhasePoint apply_map(const MapChain& chain, const PhasePoint& z);
MapChain inverse_map(const MapChain& chain);
Matrix2 jacobian(const MapChain& chain, const PhasePoint& z);

// Residual max |M^T J M - J| entries.
double symplectic_residual(const Matrix2& m);
double determinant(const Matrix2& m);

struct PushforwardResult {
    PhaseSpaceField field;
    // Output nodes whose pulled-back point fell outside the source grid.
    std::size_t out_of_grid = 0;
};

// w'(z) = w(M^{-1} z), bilinear interpolation with zero extension.
PushforwardResult classical_pushforward(const PhaseSpaceField& w, const MapChain& chain);

// Same law for a density given in closed form, evaluated exactly on `grid`.
PhaseSpaceField classical_pushforward(const std::function<double(double, double)>& w, const MapChain& chain,
                                      const PhaseSpaceGrid& grid);

}  // namespace wigmap
