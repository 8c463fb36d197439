#pragma once

#include <vector>

#include "polycap/problem_space.hpp"
#include "polycap/rational.hpp"
#include "polycap/report.hpp"

namespace polycap {

/// Exact even polynomial Σ_k c_k γ^{2k}.
class EvenPoly {
public:
    EvenPoly() = default;
    explicit EvenPoly(std::vector<Rational> coeffs);

    /// Number of γ² powers minus one (the γ²-degree).
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const Rational& operator[](int k) const { return coeffs_.at(static_cast<std::size_t>(k)); }
    const std::vector<Rational>& coeffs() const { return coeffs_; }
    std::vector<double> coeffs_double() const;

    double eval(double gamma) const;
    Rational eval_exact(const Rational& gamma) const;

    friend bool operator==(const EvenPoly&, const EvenPoly&) = default;

private:
    std::vector<Rational> coeffs_;
};

/// The conjugated symbol as a polynomial in z = -∂_t, before the Fourier
/// substitution z = -iγ. Coefficients of z^0..z^{2m}.
///
/// With v = e^{shift·t} u(e^{-t}ω) and a weight |x|^{2m-n-2·shift},
///   ∫ (-Δ)^m u · u |x|^{2m-n-2·shift} dx = Σ_{p,l} ∫ Z_p(-∂_t) v_pl · v_pl dt,
/// where Z_p(z) = (-1)^m Π_{j<m} ((z + shift - 2j)(z + shift + n - 2 - 2j) - p(p+n-2)).
/// This follows from writing (-Δ)^m in log-polar coordinates as
/// (-1)^m e^{2mt} Π_j ((-∂_t - 2j)(-∂_t - 2j + n - 2) + δ_ω) and commuting the
/// exponential weights through, which replaces -∂_t by -∂_t + shift.
RationalPoly z_polynomial(const Dims& dims, const Rational& shift, int p);

struct SymbolParts {
    EvenPoly real;            ///< Re Z_p(-iγ) = Σ c_k γ^{2k}
    RationalPoly imag_odd;    ///< Im Z_p(-iγ) = Σ d_k γ^{2k+1}; odd in γ, drops out of the energy
};

SymbolParts symbol_parts(const Dims& dims, const Rational& shift, int p);

/// Real part of the conjugated symbol expanded in powers of γ².
EvenPoly conjugated_symbol(const Dims& dims, const Rational& shift, int p);

struct CoeffTable {
    Dims dims;
    Rational shift;
    std::vector<EvenPoly> rows;  ///< rows[p], 0 <= p <= p_max

    int p_max() const { return static_cast<int>(rows.size()) - 1; }
    const EvenPoly& row(int p) const { return rows.at(static_cast<std::size_t>(p)); }
};

/// Rows of the conjugated symbol at an arbitrary shift.
CoeffTable symbol_table(const Dims& dims, const Rational& shift, int p_max);

/// The coefficients c_kp at shift λ. For even n the rows are built from the
/// factorization Π_j (γ² + B_j(p)²) and checked against the generic expansion.
CoeffTable coeff_table(const Dims& dims, int p_max);

/// Mode symbols of the Dirichlet energy ⟨(-Δ)^m u, u⟩, shift m - n/2.
CoeffTable dirichlet_symbol_table(const Dims& dims, int p_max);

/// Closed-form zero-order coefficient (up to a positive constant).
Rational closed_form_c0(const Dims& dims, int p);

/// B_j(q) = q + n/2 + m - 2j - 2 (n even).
Rational B_coefficient(const Dims& dims, int j, int q);

struct SymbolBoundsReport {
    Report report;
    Rational c0_witness;          ///< min over c_kp (k >= 1) and c_0p / max(1, (p(p+n-2))^m), p ∉ Z
    Rational min_positive_ck;     ///< min_{k>=1,p} c_kp
    Rational growth_constant;     ///< explicit C with (p(p+n-2))^m <= C Π_s (...) (odd n), else witness
    Rational closed_form_ratio;   ///< c_0p / closed_form_c0(p), when constant
    std::vector<int> zero_set;    ///< {p <= p_max : c_0p = 0}
};

SymbolBoundsReport verify_symbol_bounds(const CoeffTable& table);

}  // namespace polycap
