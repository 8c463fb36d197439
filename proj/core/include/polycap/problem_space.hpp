#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <vector>

#include "polycap/rational.hpp"

namespace polycap {

enum class Parity { even, odd };

/// Dimensions of the problem: operator (-Δ)^m in R^n, 2 <= n <= 2m+1.
struct Dims {
    int m = 1;
    int n = 3;
    int lambda = 0;  ///< regularity order: m - n/2 + 1/2 (n odd), m - n/2 (n even)
    Parity n_parity = Parity::odd;
    Parity m_parity = Parity::odd;

    bool n_odd() const { return n_parity == Parity::odd; }
    Rational lambda_r() const { return Rational(lambda); }
    /// Conjugation exponent of the plain Dirichlet energy, m - n/2.
    Rational dirichlet_shift() const { return Rational(2 * m - n, 2); }

    friend bool operator==(const Dims&, const Dims&) = default;
};

/// Validates (m, n) and populates lambda and the parity flags.
/// Throws ValidationError naming the violated bound.
Dims make_dims(int m, int n);

/// Spherical-harmonic degrees p >= 0 with vanishing zero-order coefficient.
class IndexSetZ {
public:
    explicit IndexSetZ(std::vector<int> members);

    const std::vector<int>& members() const { return members_; }
    bool contains(int p) const;
    int max() const { return members_.back(); }
    std::size_t size() const { return members_.size(); }

private:
    std::vector<int> members_;
};

IndexSetZ index_set_Z(const Dims& dims);

/// Dimension of the space of degree-p spherical harmonics on S^{n-1}.
std::int64_t harmonic_multiplicity(int n, int p);

/// (degree p, flat 0-based index l within the degree-p eigenspace).
struct ModeIndex {
    int p = 0;
    std::int64_t l = 0;
    auto operator<=>(const ModeIndex&) const = default;
};

/// Element of Π: finite combination of orthonormal spherical harmonics of
/// degrees in Z.
class PiElement {
public:
    PiElement(Dims dims, std::map<ModeIndex, double> coeffs);

    const Dims& dims() const { return dims_; }
    const std::map<ModeIndex, double>& coeffs() const { return coeffs_; }
    double norm() const { return norm_; }
    /// Sum of b_{pl}^2 over l, per degree p.
    std::map<int, double> degree_weights() const;
    /// Rescaled to unit norm (an element of Π₁). Throws for the zero element.
    PiElement normalized() const;

private:
    Dims dims_;
    std::map<ModeIndex, double> coeffs_;
    double norm_ = 0.0;
};

/// Validates support ⊆ Z × [0, multiplicity) and computes the norm.
PiElement pi_element(const Dims& dims, std::map<ModeIndex, double> coeffs);

/// The unit element carried by a single harmonic Y_l^p.
PiElement pure_mode(const Dims& dims, int p, std::int64_t l = 0);

}  // namespace polycap
