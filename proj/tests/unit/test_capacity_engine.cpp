#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "polycap/capacity_engine.hpp"
#include "polycap/error.hpp"

using namespace polycap;

namespace {

// Harmonic capacity of a shell [ka, kb] inside (a, b), one unit-norm mode of degree 0.
double harmonic_shell_3d(double a, double ka, double kb, double b) {
    return 1.0 / (1.0 / kb - 1.0 / b) + 1.0 / (1.0 / a - 1.0 / ka);
}

double harmonic_shell_2d(double a, double ka, double kb, double b) {
    return 1.0 / std::log(b / kb) + 1.0 / std::log(ka / a);
}

RadialCompactum random_compactum(std::mt19937& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const int count = 1 + static_cast<int>(u(rng) * 3);
    std::vector<double> cuts;
    for (int i = 0; i < 2 * count; ++i) cuts.push_back(std::exp(std::log(lo) + u(rng) * std::log(hi / lo)));
    std::sort(cuts.begin(), cuts.end());
    std::vector<Shell> shells;
    for (int i = 0; i < count; ++i) {
        const bool sphere = u(rng) < 0.3;
        shells.push_back({cuts[2 * i], sphere ? cuts[2 * i] : cuts[2 * i + 1]});
    }
    return RadialCompactum(shells);
}

}  // namespace

TEST_CASE("geometry validation", "[capacity_engine]") {
    CHECK_THROWS_AS(make_annulus(0.0, 1.0), ValidationError);
    CHECK_THROWS_AS(make_annulus(2.0, 1.0), ValidationError);
    CHECK_THROWS_AS(RadialCompactum({{1.0, 2.0}, {1.5, 3.0}}), ValidationError);
    CHECK_THROWS_AS(RadialCompactum({{2.0, 1.0}}), ValidationError);
    const RadialCompactum K({{3.0, 4.0}, {1.0, 1.0}});
    CHECK(K.inner_radius() == 1.0);
    CHECK(K.outer_radius() == 4.0);
    CHECK_THROWS_AS(cap_inf(make_dims(1, 3), CapacityKind::dirichlet, K, make_annulus(0.5, 4.0)), ValidationError);
    CHECK(kelvin_invert(RadialCompactum::shell(0.5, 2.0)) == RadialCompactum::shell(0.5, 2.0));
    CHECK(parse_capacity_kind("phi") == CapacityKind::phi);
    CHECK_THROWS_AS(parse_capacity_kind("other"), ValidationError);
}

TEST_CASE("m = 1 capacities match the explicit solutions", "[capacity_engine][oracle]") {
    const Annulus A = make_annulus(0.05, 20.0);
    for (auto [ka, kb] : {std::pair{1.0, 1.0}, std::pair{0.3, 2.5}, std::pair{0.1, 0.11}}) {
        const RadialCompactum K = RadialCompactum::shell(ka, kb);
        CHECK(mode_capacity(make_dims(1, 3), CapacityKind::dirichlet, 0, K, A) ==
              Catch::Approx(harmonic_shell_3d(0.05, ka, kb, 20.0)).epsilon(1e-9));
        CHECK(mode_capacity(make_dims(1, 2), CapacityKind::dirichlet, 0, K, A) ==
              Catch::Approx(harmonic_shell_2d(0.05, ka, kb, 20.0)).epsilon(1e-9));
        // Φ with c = (0, 1): two linear ramps in t.
        CHECK(mode_capacity(make_dims(1, 3), CapacityKind::phi, 0, K, A) ==
              Catch::Approx(1.0 / std::log(20.0 / kb) + 1.0 / std::log(ka / 0.05)).epsilon(1e-9));
    }
}

TEST_CASE("m = 1 minimizer matches the explicit harmonic profile", "[capacity_engine][oracle]") {
    const Dims d = make_dims(1, 3);
    const double a = 0.25, R = 1.0, b = 4.0;
    const ModeMinimizer v = solve_mode(d, CapacityKind::dirichlet, 0, RadialCompactum::sphere(R), make_annulus(a, b));
    for (double r : {0.3, 0.5, 0.9, 1.0, 1.5, 3.0, 3.9}) {
        const double u = r < R ? (1.0 / a - 1.0 / r) / (1.0 / a - 1.0 / R) : (1.0 / r - 1.0 / b) / (1.0 / R - 1.0 / b);
        const double t = std::log(1.0 / r);
        CHECK(v(t) == Catch::Approx(std::exp(-0.5 * t) * u).margin(1e-8));
    }
}

TEST_CASE("empty obstacle has zero capacity", "[capacity_engine]") {
    const CapacityResult r = cap_inf(make_dims(2, 3), CapacityKind::phi, RadialCompactum(), make_annulus(0.1, 10.0));
    CHECK(r.cap_inf == 0.0);
    for (const auto& [p, v] : r.per_mode) CHECK(v == 0.0);
}

TEST_CASE("Dirichlet capacity scales as s^(n-2m), Φ is scale invariant", "[capacity_engine][property]") {
    std::mt19937 rng(7);
    for (auto [m, n] : {std::pair{1, 3}, std::pair{2, 3}, std::pair{2, 2}, std::pair{3, 5}, std::pair{4, 4}}) {
        const Dims d = make_dims(m, n);
        const Annulus A = make_annulus(0.1, 10.0);
        const RadialCompactum K = random_compactum(rng, 0.2, 5.0);
        for (double s : {0.25, 3.0}) {
            const double dir = cap_inf(d, CapacityKind::dirichlet, K, A).cap_inf;
            const double dir_s =
                cap_inf(d, CapacityKind::dirichlet, scale_compactum(K, s), scale_annulus(A, s)).cap_inf;
            CHECK(dir_s == Catch::Approx(std::pow(s, n - 2 * m) * dir).epsilon(1e-12));
            const double phi = cap_inf(d, CapacityKind::phi, K, A).cap_inf;
            const double phi_s = cap_inf(d, CapacityKind::phi, scale_compactum(K, s), scale_annulus(A, s)).cap_inf;
            CHECK(phi_s == Catch::Approx(phi).epsilon(1e-12));
        }
    }
}

TEST_CASE("Φ capacity is invariant under inversion", "[capacity_engine][property]") {
    const Dims d = make_dims(2, 3);
    const RadialCompactum K({{0.4, 0.7}, {2.0, 2.0}});
    const Annulus A = make_annulus(0.1, 8.0);
    const double c = cap_inf(d, CapacityKind::phi, K, A).cap_inf;
    const double ck = cap_inf(d, CapacityKind::phi, kelvin_invert(K), kelvin_invert(A)).cap_inf;
    CHECK(ck == Catch::Approx(c).epsilon(1e-10));
}

TEST_CASE("monotone in K, antimonotone in the ambient", "[capacity_engine][property]") {
    std::mt19937 rng(11);
    for (auto [m, n] : {std::pair{1, 3}, std::pair{2, 2}, std::pair{3, 4}}) {
        const Dims d = make_dims(m, n);
        for (int trial = 0; trial < 4; ++trial) {
            const RadialCompactum K1 = random_compactum(rng, 0.5, 2.0);
            std::vector<Shell> more = K1.shells();
            more.push_back({3.0, 3.5});
            const RadialCompactum K2(more);
            const Annulus A = make_annulus(0.2, 6.0);
            const Annulus A_wide = make_annulus(0.1, 12.0);
            for (auto kind : {CapacityKind::dirichlet, CapacityKind::phi}) {
                const double c1 = cap_inf(d, kind, K1, A).cap_inf;
                const double c2 = cap_inf(d, kind, K2, A).cap_inf;
                const double c1w = cap_inf(d, kind, K1, A_wide).cap_inf;
                CHECK(c1 <= c2 * (1 + 1e-10));
                CHECK(c1w <= c1 * (1 + 1e-10));
            }
        }
    }
}

TEST_CASE("refinement lowers the discrete energy", "[capacity_engine][property]") {
    const Dims d = make_dims(3, 4);
    const RadialCompactum K({{0.5, 1.0}, {2.0, 2.0}});
    const Annulus A = make_annulus(0.1, 10.0);
    Discretization coarse;
    coarse.richardson = false;
    Discretization fine = coarse;
    fine.refine = 1;
    const ModeEnergy e0 = mode_energy(d, CapacityKind::dirichlet, 1, K, A, coarse);
    const ModeEnergy e1 = mode_energy(d, CapacityKind::dirichlet, 1, K, A, fine);
    CHECK(e0.fine <= e0.coarse * (1 + 1e-12));
    CHECK(e1.fine <= e0.fine * (1 + 1e-12));
    CHECK(e1.elements > e0.elements);
    CHECK(e1.fine == Catch::Approx(e0.fine).epsilon(1e-8));
}

TEST_CASE("cap_P weights mode capacities by squared coefficients", "[capacity_engine]") {
    const Dims d = make_dims(2, 3);
    const RadialCompactum K = RadialCompactum::shell(0.5, 1.0);
    const Annulus A = make_annulus(0.1, 10.0);
    const CapacityResult all = cap_inf(d, CapacityKind::dirichlet, K, A);
    const PiElement P = pi_element(d, {{{0, 0}, 0.6}, {{1, 1}, 0.8}});
    const CapacityResult r = cap_P(d, CapacityKind::dirichlet, K, A, P);
    CHECK(r.cap_P == Catch::Approx(0.36 * all.per_mode.at(0) + 0.64 * all.per_mode.at(1)));
    CHECK(r.cap_inf == Catch::Approx(all.cap_inf));
    CHECK(all.cap_inf == std::min(all.per_mode.at(0), all.per_mode.at(1)));
}

TEST_CASE("phi_form of the Φ minimizer reproduces its capacity", "[capacity_engine]") {
    const Dims d = make_dims(2, 3);
    const RadialCompactum K = RadialCompactum::shell(0.5, 1.0);
    const Annulus A = make_annulus(0.1, 10.0);
    for (int p : {0, 1}) {
        const ModeMinimizer v = solve_mode(d, CapacityKind::phi, p, K, A);
        const double form = phi_form(d, {to_mode_function(v, p)}, A);
        CHECK(form == Catch::Approx(mode_capacity(d, CapacityKind::phi, p, K, A)).epsilon(1e-8));
        CHECK(v(std::log(1.0 / 0.7)) == 1.0);
        CHECK(v(A.t_lo()) == Catch::Approx(0.0).margin(1e-14));
    }
    PhiFormOptions opts;
    opts.weight = PhiWeight::log;
    opts.R = 1.0;
    CHECK_THROWS_AS(phi_form(d, {}, A, opts), ValidationError);
}

TEST_CASE("ambient sweep decreases toward the whole-space value", "[capacity_engine]") {
    const auto sweep = ambient_sweep(make_dims(1, 3), CapacityKind::dirichlet, RadialCompactum::sphere(1.0),
                                     make_annulus(0.5, 2.0), 5);
    REQUIRE(sweep.size() == 5);
    for (std::size_t i = 1; i < sweep.size(); ++i) {
        CHECK(sweep[i].cap_inf < sweep[i - 1].cap_inf);
        CHECK(sweep[i].r_in == Catch::Approx(sweep[i - 1].r_in / 2));
    }
    CHECK(sweep.back().cap_inf > 1.0);
}
