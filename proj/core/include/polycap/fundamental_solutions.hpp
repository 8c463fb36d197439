#pragma once

#include <vector>

#include "polycap/problem_space.hpp"
#include "polycap/rational.hpp"
#include "polycap/report.hpp"

namespace polycap {

/// coeff · t^poly_degree · e^{rate·t}
struct ExpTerm {
    Rational rate;
    int poly_degree = 0;
    Rational coeff;

    friend bool operator==(const ExpTerm&, const ExpTerm&) = default;
};

/// Finite sum of ExpTerms, one side of a piecewise function.
using ExpPoly = std::vector<ExpTerm>;

/// Merges like terms and drops zero coefficients; sorted by (rate, degree).
ExpPoly canonical(ExpPoly terms);

double eval_exp_poly(const ExpPoly& terms, double t, int deriv = 0);

/// d-th derivative at t = 0, exact.
Rational jet_at_zero(const ExpPoly& terms, int deriv);

/// P(∂_t) applied term by term: P(∂)(t^k e^{rt}) = Σ_i C(k,i) P^{(i)}(r) t^{k-i} e^{rt}.
ExpPoly apply_operator(const RationalPoly& op, const ExpPoly& terms);

/// Root of a characteristic polynomial with its multiplicity.
struct Root {
    Rational value;
    int multiplicity = 1;

    friend bool operator==(const Root&, const Root&) = default;
};

/// Fundamental solution h of P(∂_t) h = δ that vanishes at +∞ and grows at
/// most linearly at -∞. P is the mode-zero conjugated operator (n odd) or its
/// even-n factorization at the base degree q₀ ∈ {0, 1}.
struct FundSol {
    Dims dims;
    RationalPoly op;            ///< characteristic polynomial in s = ∂_t; leading coefficient (-1)^m
    std::vector<Root> roots;    ///< roots of op, ascending
    int base_degree = 0;        ///< 0 for odd n; q₀ ≡ m - n/2 (mod 2) for even n
    ExpPoly plus_terms;         ///< h on t > 0
    ExpPoly minus_terms;        ///< h on t < 0, including the polynomial part
    Rational mu4;               ///< coefficient of t in minus_terms
    Rational mu5;               ///< constant in minus_terms

    const Rational& leading() const { return op.back(); }
};

/// The 2m roots {-m+n/2-1/2+2j} ∪ {m-n/2-1/2-2j}, j = 0..m-1, ascending. n odd only.
std::vector<Rational> roots_odd(const Dims& dims);

/// Characteristic polynomial of the operator whose fundamental solution is built.
RationalPoly fundsol_operator(const Dims& dims);

/// Solves the jump system for an arbitrary root multiset: negative roots
/// populate t > 0, nonnegative roots t < 0; derivatives 0..2m-2 continuous,
/// leading · [h^{(2m-1)}] = 1. Throws ComputationError if singular.
FundSol solve_jump_system(const Dims& dims, const RationalPoly& op, const std::vector<Root>& roots);

/// Closed-form residue construction, n odd: coefficients
/// κ_i = (-1)^{m+1} / Π_{j≠i}(γ_j - γ_i); ν = κ on negative roots, μ = -κ on the rest.
FundSol fundsol_residue(const Dims& dims);

/// Odd n: residue formula, cross-checked against the jump system.
/// Even n: jump system over ±B_j(q₀).
FundSol fundsol(const Dims& dims);

/// ∂_t^deriv h(t). deriv <= 2m; at t = 0 only deriv <= 2m-2 is defined.
double eval_fundsol(const FundSol& h, double t, int deriv = 0);

struct WeightParams {
    double C1 = 1.0;
    double C2 = 1.0;
    double Cprime = 1.0;
    double Cdoubleprime = 1.0;
    double R = 10.0;

    double C_R() const;
    void validate() const;
};

/// Composite weight. n odd: e^t (C1 h(t-τ) + C2).
/// n even: h(t-τ) + μ4 (C_R + τ) + C' + C''(C_R + t), for t, τ >= log(1/(2R)).
class Weight {
public:
    Weight(const Dims& dims, WeightParams params = {});

    double operator()(double t, double tau) const;
    /// ∂_t^k of e^{-t} g(t, τ) (n odd); bounded on ℝ for k <= 2m.
    double reduced_derivative(double t, double tau, int k) const;

    const FundSol& fundamental_solution() const { return h_; }
    const WeightParams& params() const { return params_; }

private:
    FundSol h_;
    WeightParams params_;
};

double g_weight(const Dims& dims, const WeightParams& params, double t, double tau);

/// Operators whose action on h must be nonnegative away from 0.
/// n odd: Q_p - Q_0 for 0 <= p <= λ. n even: Π_j(B_j(p)² - s²) for
/// 0 <= p <= m - n/2 with p ≡ m - n/2 (mod 2).
struct PositivityOperator {
    int p = 0;
    RationalPoly op;
};
std::vector<PositivityOperator> positivity_operators(const Dims& dims);

/// Checks on a fundamental solution: exact ODE residual, exact continuity and
/// jump at 0, positivity of the operators above over the grid, growth class,
/// and asymptotics at t = ±50. The grid must exclude 0.
Report verify_fundsol(const FundSol& h, const std::vector<double>& grid);

}  // namespace polycap
