#include "polycap/verification.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "polycap/fundamental_solutions.hpp"
#include "polycap/symbol_calculus.hpp"

namespace polycap {
namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// a <= b up to the relative slack tol.
bool le_tol(double a, double b, double tol) { return a <= b + tol * std::max(std::abs(a), std::abs(b)); }

void capacity_checks(Report& r, const Dims& dims, CapacityKind kind, const VerifyOptions& opts) {
    const std::string tag = to_string(kind) + ".";
    const Annulus A = make_annulus(0.1, 10.0);
    const Annulus A_wide = make_annulus(0.05, 20.0);
    const RadialCompactum K1 = RadialCompactum::shell(0.5, 1.0);
    const RadialCompactum K2({{0.5, 1.0}, {2.0, 2.0}});

    const double c1 = cap_inf(dims, kind, K1, A, opts.disc).cap_inf;
    const double c2 = cap_inf(dims, kind, K2, A, opts.disc).cap_inf;
    r.add(tag + "monotone_in_K", le_tol(c1, c2, opts.solver_tol), fmt(c1) + " <= " + fmt(c2));

    const double c_wide = cap_inf(dims, kind, K1, A_wide, opts.disc).cap_inf;
    r.add(tag + "antimonotone_in_ambient", le_tol(c_wide, c1, opts.solver_tol), fmt(c_wide) + " <= " + fmt(c1));

    const double s = opts.scale;
    const double c_scaled =
        cap_inf(dims, kind, scale_compactum(K2, s), scale_annulus(A, s), opts.disc).cap_inf;
    const double law = kind == CapacityKind::dirichlet ? std::pow(s, dims.n - 2 * dims.m) : 1.0;
    const double err = rel_diff(c_scaled, law * c2);
    r.add(tag + "scaling", err <= opts.scaling_tol, "relative deviation " + fmt(err));

    const IndexSetZ Z = index_set_Z(dims);
    for (int p : Z.members()) {
        const ModeEnergy e = mode_energy(dims, kind, p, K2, A, opts.disc);
        r.add(tag + "refinement_decreases.p" + std::to_string(p), le_tol(e.fine, e.coarse, opts.solver_tol),
              "fine " + fmt(e.fine) + ", coarse " + fmt(e.coarse));
    }

    const double c_empty = cap_inf(dims, kind, RadialCompactum(), A, opts.disc).cap_inf;
    r.add(tag + "empty_obstacle", c_empty == 0.0, fmt(c_empty));
}

}  // namespace

Report verify_suite(const Dims& dims, const VerifyOptions& opts) {
    Report r;

    const IndexSetZ Z = index_set_Z(dims);
    r.append(verify_symbol_bounds(coeff_table(dims, Z.max() + 10)).report, "symbol.");

    std::vector<double> grid;
    for (int k = 1; k <= 100; ++k) {
        grid.push_back(k / 10.0);
        grid.push_back(-k / 10.0);
    }
    r.append(verify_fundsol(fundsol(dims), grid), "fundsol.");

    capacity_checks(r, dims, CapacityKind::dirichlet, opts);
    capacity_checks(r, dims, CapacityKind::phi, opts);

    const Annulus A = make_annulus(0.1, 10.0);
    const RadialCompactum K({{0.5, 1.0}, {2.0, 2.0}});

    // Kelvin and equivalence ratios must be finite and positive.
    const double c = cap_inf(dims, CapacityKind::dirichlet, K, A, opts.disc).cap_inf;
    const double c_kelvin =
        cap_inf(dims, CapacityKind::dirichlet, kelvin_invert(K), kelvin_invert(A), opts.disc).cap_inf;
    const double kelvin = c_kelvin / c;
    r.add("kelvin_ratio_positive", std::isfinite(kelvin) && kelvin > 0.0, fmt(kelvin));
    const double c_phi = cap_inf(dims, CapacityKind::phi, K, A, opts.disc).cap_inf;
    const double equiv = std::pow(K.outer_radius(), 2 * dims.m - dims.n) * c_phi / c;
    r.add("equivalence_ratio_positive", std::isfinite(equiv) && equiv > 0.0, fmt(equiv));

    // Adding a constant to a p ∈ Z mode leaves Φ unchanged.
    for (int p : Z.members()) {
        const ModeMinimizer v = solve_mode(dims, CapacityKind::phi, p, K, A, opts.disc);
        ModeFunction f = to_mode_function(v, p);
        ModeFunction g = f;
        g.jet = [v](double t, int k) { return v(t, k) + (k == 0 ? 0.75 : 0.0); };
        const double phi_f = phi_form(dims, {f}, A);
        const double phi_g = phi_form(dims, {g}, A);
        const double d = rel_diff(phi_f, phi_g);
        r.add("phi.pi_shift_invariance.p" + std::to_string(p), d <= 1e-12, "relative deviation " + fmt(d));
    }

    // m = 1: explicit two-sided solution for the unit sphere in (1/4, 4).
    if (dims.m == 1) {
        const Annulus B = make_annulus(0.25, 4.0);
        const double got = mode_capacity(dims, CapacityKind::dirichlet, 0, RadialCompactum::sphere(1.0), B, opts.disc);
        const double want = dims.n == 3 ? 1.0 / (1.0 - 0.25) + 1.0 / (4.0 - 1.0) : 2.0 / std::log(4.0);
        const double d = rel_diff(got, want);
        r.add("dirichlet.explicit_m1_sphere", d <= 1e-8, fmt(got) + " vs " + fmt(want));
    }
    return r;
}

}  // namespace polycap
