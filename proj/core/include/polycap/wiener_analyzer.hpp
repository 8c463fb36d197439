#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "polycap/capacity_engine.hpp"
#include "polycap/problem_space.hpp"

namespace polycap {

/// Arithmetic expression in the annulus index j: numbers, j, + - * /, ^
/// (right associative, binding tighter than unary minus) and parentheses.
/// "2^-j^3" reads as 2^(-(j^3)).
class RuleExpr {
public:
    struct Node;

    /// Throws ValidationError on malformed input.
    static RuleExpr parse(std::string_view text);

    double operator()(double j) const;
    const std::string& text() const { return text_; }

private:
    std::shared_ptr<const Node> root_;
    std::string text_;
};

/// Complement of the domain inside each closed dyadic annulus [2^{-j}, 2^{-j+2}].
class DomainModel {
public:
    enum class Kind { full, sphere_radius, sphere_cap_scale, shell, empty_after };

    /// The whole closed annulus.
    static DomainModel full();
    /// Sphere of radius r(j).
    static DomainModel sphere_radius(RuleExpr radius);
    /// Sphere at the mid-radius 2^{-j+1} whose capacity is rescaled by
    /// cap_scale(j)·2^j; cap_scale(j) = 2^{-j} is the plain concentric sphere.
    static DomainModel sphere_cap_scale(RuleExpr cap_scale);
    /// Shell of radial thickness w(j) centered at the mid-radius.
    static DomainModel shell(RuleExpr thickness);
    /// The whole annulus for j < J, nothing afterwards.
    static DomainModel empty_after(int J);

    Kind kind() const { return kind_; }
    const std::optional<RuleExpr>& rule() const { return rule_; }
    int cutoff() const { return cutoff_; }
    std::string describe() const;

private:
    Kind kind_ = Kind::full;
    std::optional<RuleExpr> rule_;
    int cutoff_ = 0;
};

/// Closed annulus [2^{-j}, 2^{-j+2}] as (inner, outer) radii.
std::pair<double, double> dyadic_annulus(int j);

/// Ambient annulus C_{2^{-j-2}, 2^{-j+4}} used for the annulus-j capacity.
Annulus wiener_ambient(int j);

/// The model's compactum for annulus j. Throws ValidationError when j < 0 or
/// the rule places geometry outside the closed annulus.
RadialCompactum annulus_obstacle(const DomainModel& model, int j);

/// Capacity multiplier of annulus j: cap_scale(j)·2^j for cap-scale spheres, else 1.
double capacity_weight(const DomainModel& model, int j);

/// True when annulus_obstacle(j) = 2^{j0-j}·annulus_obstacle(j0) and the weights
/// agree, for every j in [j0, j_end], to relative 1e-12.
bool scale_covariant(const DomainModel& model, int j0, int j_end);

struct WienerTerm {
    int j = 0;
    double cap = 0.0;              ///< cap_inf over p ∈ Z for annulus j
    int argmin_p = 0;
    std::map<int, double> per_mode;  ///< mode capacities for annulus j
    double weight = 1.0;          ///< capacity multiplier of the model
    double term = 0.0;
    double partial_sum = 0.0;
};

struct WienerSeries {
    Parity parity = Parity::odd;  ///< even series carry the extra factor j
    int j0 = 0;
    int j1 = 0;
    std::vector<WienerTerm> terms;
    /// Σ_j over the pure mode p alone, for each p ∈ Z.
    std::map<int, double> pure_mode_sums;
    double sum_inf_inside = 0.0;  ///< Σ_j inf_p (the last partial sum)
    double inf_outside = 0.0;     ///< inf_p Σ_j over pure modes
    int inf_outside_p = 0;
    bool forms_differ = false;    ///< the two forms differ by more than 1e-9 relative
};

/// Per-annulus scale factor 2^{-j(2m-n)}, times j for even n.
double wiener_factor(const Dims& dims, int j);

/// Terms weight·factor·cap_inf over j0..j1 with the given capacity kind.
WienerSeries wiener_terms(const Dims& dims, const DomainModel& model, int j0, int j1, const Discretization& disc = {},
                          CapacityKind kind = CapacityKind::dirichlet);

/// Series from explicit term values; per-annulus capacities are left at 0.
WienerSeries series_from_terms(const std::vector<double>& terms, int j0 = 0, Parity parity = Parity::odd);

enum class Classification { diverges_by_bound, converges_numerically, inconclusive };

std::string to_string(Classification c);

struct Verdict {
    Classification classification = Classification::inconclusive;
    std::string rationale;
    std::string fit_kind;      ///< zero, geometric, super-geometric, non-decaying, or certified
    double fitted_ratio = 0.0; ///< exp of the least-squares slope of log terms over the tail
    double tail_bound = 0.0;   ///< bound on the remainder beyond the last term, when convergent
    double lower_bound = 0.0;  ///< certified per-term lower bound, when divergent
};

/// Three-valued classification. Divergence needs a scale-covariance certificate
/// from the model and a positive first term; convergence needs a tail whose
/// ratios stay below 0.9 with remainder bound at most 1% of the partial sum.
/// Requires at least 8 terms.
Verdict classify(const WienerSeries& series, const DomainModel& model);
Verdict classify(const WienerSeries& series);

/// exp(-c Σ_{j=2}^{l} (R b^{-2j})^{2m-n} caps[j]) for l = 0..caps.size()-1; the
/// empty sum for l < 2 gives 1. caps[j] belongs to the closed annulus
/// [R b^{-2j}, R b^{-2(j-1)}].
std::vector<double> decay_envelope(const Dims& dims, const std::vector<double>& caps, double c, double R, double b);

/// The annulus of caps[j] in decay_envelope and its ambient [R b^{-2j}/2, 2R b^{-2(j-1)}].
struct BAdicAnnulus {
    double inner = 0.0;
    double outer = 0.0;
    Annulus ambient;
};
BAdicAnnulus b_adic_annulus(double R, double b, int j);

/// Classical harmonic series for m = 1, n = 3: terms 2^{j}·4π·weight·cap of the
/// annulus-j compactum, with an ambient extending 20 log-units beyond the
/// annulus on both sides in place of the whole space.
WienerSeries classical_reference(const DomainModel& model, int j0, int j1, const Discretization& disc = {});

}  // namespace polycap
