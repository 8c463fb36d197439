#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "polycap/problem_space.hpp"

namespace polycap {

/// Open annulus r_in < |x| < r_out; in t = log(1/|x|) the interval [t_lo, t_hi].
struct Annulus {
    double r_in = 0.0;
    double r_out = 0.0;

    double t_lo() const;
    double t_hi() const;
};

/// Throws ValidationError unless 0 < r_in < r_out < ∞.
Annulus make_annulus(double r_in, double r_out);

/// Closed shell a <= |x| <= b; a == b is a sphere.
struct Shell {
    double a = 0.0;
    double b = 0.0;

    bool is_sphere() const { return a == b; }
    friend bool operator==(const Shell&, const Shell&) = default;
};

/// Finite union of pairwise disjoint concentric shells, sorted by radius.
class RadialCompactum {
public:
    RadialCompactum() = default;
    /// Validates positivity, a <= b and disjointness; sorts.
    explicit RadialCompactum(std::vector<Shell> shells);

    static RadialCompactum sphere(double r) { return RadialCompactum({{r, r}}); }
    static RadialCompactum shell(double a, double b) { return RadialCompactum({{a, b}}); }

    const std::vector<Shell>& shells() const { return shells_; }
    bool empty() const { return shells_.empty(); }
    double inner_radius() const { return shells_.front().a; }
    double outer_radius() const { return shells_.back().b; }
    /// Every shell lies in the open annulus.
    bool inside(const Annulus& ambient) const;

    friend bool operator==(const RadialCompactum&, const RadialCompactum&) = default;

private:
    std::vector<Shell> shells_;
};

enum class CapacityKind { phi, dirichlet };

std::string to_string(CapacityKind kind);
CapacityKind parse_capacity_kind(const std::string& text);

/// Mesh control. Element size at gap ends is kappa/ρ, where ρ is the fastest
/// exponential rate admitted by the mode symbol; sizes grow geometrically to
/// max_ratio times that.
struct Discretization {
    double kappa = 0.0;  ///< 0 selects a default depending on m
    double grading = 1.05;
    double max_ratio = 10.0;
    int refine = 0;      ///< halves the base element size this many times
    bool richardson = true;
    std::size_t max_elements = 400000;

    double kappa_for(int m) const;
};

/// Mode symbol coefficients c_0..c_m used by the given capacity kind:
/// shift λ for Φ, shift m - n/2 for the Dirichlet energy.
std::vector<double> mode_coefficients(const Dims& dims, CapacityKind kind, int p);

struct ModeEnergy {
    double value = 0.0;           ///< extrapolated when enabled
    double fine = 0.0;            ///< energy on the finest mesh
    double coarse = 0.0;          ///< energy on the base mesh
    double error_estimate = 0.0;
    std::size_t elements = 0;     ///< fine-mesh element count over all gaps
    double h_min = 0.0;
    double h_max = 0.0;
};

/// The minimizing mode function v(t) over the ambient interval, from the finest mesh.
class ModeMinimizer {
public:
    struct Gap {
        double t0 = 0.0;
        std::vector<double> nodes;  ///< local coordinates from 0
        std::vector<std::vector<double>> derivs;
    };

    ModeMinimizer(int m, double sigma, double t_lo, double t_hi, std::vector<std::pair<double, double>> obstacle,
                  std::vector<Gap> gaps);

    /// v^{(k)}(t); zero outside the ambient interval.
    double operator()(double t, int k = 0) const;
    /// Points where derivatives of order >= m may jump.
    std::vector<double> breakpoints() const;
    double t_lo() const { return t_lo_; }
    double t_hi() const { return t_hi_; }

private:
    int m_;
    double sigma_;
    double t_lo_;
    double t_hi_;
    std::vector<std::pair<double, double>> obstacle_;
    std::vector<Gap> gaps_;
};

/// Minimizes Σ_k c_k ∫ (v^{(k)})² over the ambient t-interval: value and m-1
/// derivatives vanish at both ends; on each shell (t-interval of K) v equals the
/// constraint function, 1 for Φ and e^{(m-n/2)t} for the Dirichlet energy.
/// Shell contributions are integrated exactly; gaps use Hermite elements.
ModeEnergy mode_energy(const Dims& dims, CapacityKind kind, int p, const RadialCompactum& K, const Annulus& ambient,
                       const Discretization& disc = {});

double mode_capacity(const Dims& dims, CapacityKind kind, int p, const RadialCompactum& K, const Annulus& ambient,
                     const Discretization& disc = {});

ModeMinimizer solve_mode(const Dims& dims, CapacityKind kind, int p, const RadialCompactum& K, const Annulus& ambient,
                         const Discretization& disc = {});

struct CapacityResult {
    CapacityKind kind = CapacityKind::phi;
    std::map<int, double> per_mode;        ///< unit-amplitude mode capacity, p ∈ Z
    std::map<int, double> per_mode_error;  ///< extrapolation error estimates
    double cap_P = 0.0;
    double cap_inf = 0.0;
    int argmin_p = 0;
    std::size_t elements = 0;
    double h_min = 0.0;
    double h_max = 0.0;
    double error_estimate = 0.0;  ///< max over modes
};

/// Σ b_{pl}² · mode capacity(p). cap_inf is filled over the degrees present in P.
CapacityResult cap_P(const Dims& dims, CapacityKind kind, const RadialCompactum& K, const Annulus& ambient,
                     const PiElement& P, const Discretization& disc = {});

/// Mode capacities for every p ∈ Z; cap_inf is their minimum. cap_P is set to cap_inf.
CapacityResult cap_inf(const Dims& dims, CapacityKind kind, const RadialCompactum& K, const Annulus& ambient,
                       const Discretization& disc = {});

/// Radii multiplied by s (a translation by -log s in t).
RadialCompactum scale_compactum(const RadialCompactum& K, double s);
Annulus scale_annulus(const Annulus& A, double s);

/// Inversion |x| ↦ 1/|x|: [a, b] ↦ [1/b, 1/a].
RadialCompactum kelvin_invert(const RadialCompactum& K);
Annulus kelvin_invert(const Annulus& A);

/// A single spherical-harmonic mode v_{pl}(t) of a test function u ∘ κ^{-1}.
struct ModeFunction {
    int p = 0;
    std::int64_t l = 0;
    std::function<double(double t, int k)> jet;  ///< ∂_t^k v(t)
    std::vector<double> breakpoints;             ///< points where high derivatives may jump
};

ModeFunction to_mode_function(const ModeMinimizer& v, int p, std::int64_t l = 0);

enum class PhiWeight { plain, log };

struct PhiFormOptions {
    PhiWeight weight = PhiWeight::plain;
    double R = 10.0;  ///< C_R = log(4R); the log weight needs the annulus inside B_{2R}
};

/// Σ_{modes} Σ_k c_kp ∫_{annulus} (∂_t^k v)² [· (C_R + t)] dt with c_kp at shift λ,
/// by composite Gauss–Legendre quadrature between breakpoints.
double phi_form(const Dims& dims, const std::vector<ModeFunction>& u, const Annulus& annulus,
                const PhiFormOptions& opts = {});

struct SweepPoint {
    double r_in = 0.0;
    double r_out = 0.0;
    double cap_inf = 0.0;
};

/// cap_inf for ambients widened by factors 2^k in both directions, k = 0..steps-1.
std::vector<SweepPoint> ambient_sweep(const Dims& dims, CapacityKind kind, const RadialCompactum& K,
                                      const Annulus& ambient, int steps, const Discretization& disc = {});

}  // namespace polycap
