#include "polycap/capacity_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include <boost/math/quadrature/gauss.hpp>

#include "polycap/error.hpp"
#include "polycap/fem1d.hpp"
#include "polycap/parallel.hpp"
#include "polycap/symbol_calculus.hpp"

namespace polycap {

double Annulus::t_lo() const { return std::log(1.0 / r_out); }
double Annulus::t_hi() const { return std::log(1.0 / r_in); }

Annulus make_annulus(double r_in, double r_out) {
    if (!(r_in > 0.0) || !(r_out > r_in) || !std::isfinite(r_out)) {
        throw ValidationError("annulus requires 0 < r_in < r_out < inf (got r_in = " + std::to_string(r_in) +
                              ", r_out = " + std::to_string(r_out) + ")");
    }
    return {r_in, r_out};
}

RadialCompactum::RadialCompactum(std::vector<Shell> shells) : shells_(std::move(shells)) {
    for (const auto& s : shells_) {
        if (!(s.a > 0.0) || !(s.b >= s.a) || !std::isfinite(s.b)) {
            throw ValidationError("shell radii must satisfy 0 < a <= b < inf");
        }
    }
    std::sort(shells_.begin(), shells_.end(), [](const Shell& x, const Shell& y) { return x.a < y.a; });
    for (std::size_t i = 0; i + 1 < shells_.size(); ++i) {
        if (!(shells_[i].b < shells_[i + 1].a)) throw ValidationError("shells must be pairwise disjoint");
    }
}

bool RadialCompactum::inside(const Annulus& ambient) const {
    return std::all_of(shells_.begin(), shells_.end(),
                       [&](const Shell& s) { return s.a > ambient.r_in && s.b < ambient.r_out; });
}

std::string to_string(CapacityKind kind) { return kind == CapacityKind::phi ? "phi" : "dirichlet"; }

CapacityKind parse_capacity_kind(const std::string& text) {
    if (text == "phi") return CapacityKind::phi;
    if (text == "dirichlet") return CapacityKind::dirichlet;
    throw ValidationError("capacity kind must be 'phi' or 'dirichlet', got '" + text + "'");
}

double Discretization::kappa_for(int m) const {
    if (kappa > 0.0) return kappa;
    static constexpr double defaults[] = {1e-3, 4e-3, 0.05, 0.1, 0.2, 0.3};
    return m <= 6 ? defaults[m - 1] : 0.4;
}

std::vector<double> mode_coefficients(const Dims& dims, CapacityKind kind, int p) {
    if (p < 0) throw ValidationError("spherical-harmonic degree must be >= 0");
    const Rational shift = kind == CapacityKind::phi ? dims.lambda_r() : dims.dirichlet_shift();
    return conjugated_symbol(dims, shift, p).coeffs_double();
}

namespace {

struct Problem {
    int m = 1;
    double sigma = 0.0;  // constraint v = e^{σt} on K
    std::vector<double> c;
    double t_lo = 0.0;
    double t_hi = 0.0;
    std::vector<std::pair<double, double>> obstacle;  // ascending t-intervals
};

Problem make_problem(const Dims& dims, CapacityKind kind, int p, const RadialCompactum& K, const Annulus& ambient) {
    make_annulus(ambient.r_in, ambient.r_out);
    if (!K.inside(ambient)) {
        throw ValidationError("obstacle is not contained in the open ambient annulus (" + std::to_string(ambient.r_in) +
                              ", " + std::to_string(ambient.r_out) + ")");
    }
    Problem pr;
    pr.m = dims.m;
    pr.sigma = kind == CapacityKind::dirichlet ? to_double(dims.dirichlet_shift()) : 0.0;
    pr.c = mode_coefficients(dims, kind, p);
    pr.t_lo = ambient.t_lo();
    pr.t_hi = ambient.t_hi();
    for (auto it = K.shells().rbegin(); it != K.shells().rend(); ++it) {
        pr.obstacle.emplace_back(std::log(1.0 / it->b), std::log(1.0 / it->a));
    }
    return pr;
}

double constraint(double sigma, double t, int k) {
    if (sigma == 0.0) return k == 0 ? 1.0 : 0.0;
    return std::pow(sigma, k) * std::exp(sigma * t);
}

std::vector<double> constraint_data(const Problem& pr, double t) {
    std::vector<double> d(static_cast<std::size_t>(pr.m));
    for (int k = 0; k < pr.m; ++k) d[static_cast<std::size_t>(k)] = constraint(pr.sigma, t, k);
    return d;
}

double shell_energy(const Problem& pr, double s, double e) {
    const double len = e - s;
    if (len == 0.0) return 0.0;
    if (pr.sigma == 0.0) return pr.c[0] * len;
    double sym = 0.0;
    for (std::size_t k = 0; k < pr.c.size(); ++k) sym += pr.c[k] * std::pow(pr.sigma, 2.0 * static_cast<double>(k));
    return sym * std::exp(2.0 * pr.sigma * s) * std::expm1(2.0 * pr.sigma * len) / (2.0 * pr.sigma);
}

MeshOptions mesh_options(const Problem& pr, const Discretization& disc) {
    const double rho = std::max(fastest_rate(pr.c), 0.5);
    MeshOptions opts;
    opts.h0 = disc.kappa_for(pr.m) / rho / std::ldexp(1.0, disc.refine);
    opts.grading = disc.grading;
    opts.h_max = disc.max_ratio * opts.h0;
    opts.max_elements = disc.max_elements;
    return opts;
}

struct ModeRun {
    ModeEnergy energy;
    std::vector<ModeMinimizer::Gap> gaps;
};

ModeRun run_mode(const Problem& pr, const Discretization& disc) {
    ModeRun run;
    if (pr.obstacle.empty()) return run;
    const MeshOptions opts = mesh_options(pr, disc);
    const std::vector<double> zero(static_cast<std::size_t>(pr.m), 0.0);

    double shells = 0.0;
    for (const auto& [s, e] : pr.obstacle) shells += shell_energy(pr, s, e);

    struct GapSpec {
        double t0, t1;
        std::vector<double> left, right;
    };
    std::vector<GapSpec> specs;
    double prev = pr.t_lo;
    std::vector<double> prev_data = zero;
    for (const auto& [s, e] : pr.obstacle) {
        specs.push_back({prev, s, prev_data, constraint_data(pr, s)});
        prev = e;
        prev_data = constraint_data(pr, e);
    }
    specs.push_back({prev, pr.t_hi, prev_data, zero});

    double coarse = shells;
    double fine = shells;
    run.energy.h_min = std::numeric_limits<double>::infinity();
    for (const auto& g : specs) {
        const double len = g.t1 - g.t0;
        if (!(len > 1e-9 * std::max(1.0, std::abs(g.t0)))) {
            throw ComputationError("infeasible discretization: gap of length " + std::to_string(len) +
                                   " at t = " + std::to_string(g.t0) + " is below mesh resolution");
        }
        std::vector<double> nodes = graded_mesh(len, opts);
        GapSolution sc = solve_gap(pr.c, nodes, g.left, g.right);
        coarse += sc.energy;
        GapSolution sf = sc;
        if (disc.richardson) {
            sf = solve_gap(pr.c, bisect(nodes), g.left, g.right);
        }
        fine += sf.energy;
        for (std::size_t i = 0; i + 1 < sf.nodes.size(); ++i) {
            const double h = sf.nodes[i + 1] - sf.nodes[i];
            run.energy.h_min = std::min(run.energy.h_min, h);
            run.energy.h_max = std::max(run.energy.h_max, h);
        }
        run.energy.elements += sf.nodes.size() - 1;
        run.gaps.push_back({g.t0, std::move(sf.nodes), std::move(sf.derivs)});
    }
    run.energy.coarse = coarse;
    run.energy.fine = fine;
    if (disc.richardson) {
        const double corr = (fine - coarse) / (std::ldexp(1.0, 2 * pr.m) - 1.0);
        run.energy.value = fine + corr;
        run.energy.error_estimate = std::abs(corr);
    } else {
        run.energy.value = coarse;
    }
    return run;
}

}  // namespace

ModeMinimizer::ModeMinimizer(int m, double sigma, double t_lo, double t_hi,
                             std::vector<std::pair<double, double>> obstacle, std::vector<Gap> gaps)
    : m_(m), sigma_(sigma), t_lo_(t_lo), t_hi_(t_hi), obstacle_(std::move(obstacle)), gaps_(std::move(gaps)) {}

double ModeMinimizer::operator()(double t, int k) const {
    if (t < t_lo_ || t > t_hi_ || obstacle_.empty()) return 0.0;
    for (const auto& [s, e] : obstacle_) {
        if (t >= s && t <= e) return constraint(sigma_, t, k);
    }
    for (const auto& g : gaps_) {
        const double x = t - g.t0;
        if (x >= 0.0 && x <= g.nodes.back()) return hermite_eval(g.nodes, g.derivs, x, k);
    }
    return 0.0;
}

std::vector<double> ModeMinimizer::breakpoints() const {
    std::vector<double> out{t_lo_, t_hi_};
    for (const auto& [s, e] : obstacle_) {
        out.push_back(s);
        out.push_back(e);
    }
    for (const auto& g : gaps_) {
        for (double x : g.nodes) out.push_back(g.t0 + x);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ModeEnergy mode_energy(const Dims& dims, CapacityKind kind, int p, const RadialCompactum& K, const Annulus& ambient,
                       const Discretization& disc) {
    return run_mode(make_problem(dims, kind, p, K, ambient), disc).energy;
}

double mode_capacity(const Dims& dims, CapacityKind kind, int p, const RadialCompactum& K, const Annulus& ambient,
                     const Discretization& disc) {
    return mode_energy(dims, kind, p, K, ambient, disc).value;
}

ModeMinimizer solve_mode(const Dims& dims, CapacityKind kind, int p, const RadialCompactum& K, const Annulus& ambient,
                         const Discretization& disc) {
    const Problem pr = make_problem(dims, kind, p, K, ambient);
    ModeRun run = run_mode(pr, disc);
    return ModeMinimizer(pr.m, pr.sigma, pr.t_lo, pr.t_hi, pr.obstacle, std::move(run.gaps));
}

namespace {

CapacityResult collect(const Dims& dims, CapacityKind kind, const RadialCompactum& K, const Annulus& ambient,
                       const std::vector<int>& degrees, const Discretization& disc) {
    std::vector<ModeEnergy> energies(degrees.size());
    parallel_for(degrees.size(), [&](std::size_t i) {
        energies[i] = mode_energy(dims, kind, degrees[i], K, ambient, disc);
    });
    CapacityResult r;
    r.kind = kind;
    r.cap_inf = std::numeric_limits<double>::infinity();
    r.h_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < degrees.size(); ++i) {
        const ModeEnergy& e = energies[i];
        r.per_mode[degrees[i]] = e.value;
        r.per_mode_error[degrees[i]] = e.error_estimate;
        if (e.value < r.cap_inf) {
            r.cap_inf = e.value;
            r.argmin_p = degrees[i];
        }
        r.elements = std::max(r.elements, e.elements);
        r.error_estimate = std::max(r.error_estimate, e.error_estimate);
        if (e.elements > 0) {
            r.h_min = std::min(r.h_min, e.h_min);
            r.h_max = std::max(r.h_max, e.h_max);
        }
    }
    if (r.elements == 0) r.h_min = 0.0;
    return r;
}

}  // namespace

CapacityResult cap_P(const Dims& dims, CapacityKind kind, const RadialCompactum& K, const Annulus& ambient,
                     const PiElement& P, const Discretization& disc) {
    if (!(P.dims() == dims)) throw ValidationError("Pi element belongs to different dimensions");
    const auto weights = P.degree_weights();
    std::vector<int> degrees;
    for (const auto& [p, w] : weights) degrees.push_back(p);
    if (degrees.empty()) degrees.push_back(index_set_Z(dims).members().front());
    CapacityResult r = collect(dims, kind, K, ambient, degrees, disc);
    r.cap_P = 0.0;
    for (const auto& [p, w] : weights) r.cap_P += w * r.per_mode.at(p);
    return r;
}

CapacityResult cap_inf(const Dims& dims, CapacityKind kind, const RadialCompactum& K, const Annulus& ambient,
                       const Discretization& disc) {
    CapacityResult r = collect(dims, kind, K, ambient, index_set_Z(dims).members(), disc);
    r.cap_P = r.cap_inf;
    return r;
}

RadialCompactum scale_compactum(const RadialCompactum& K, double s) {
    if (!(s > 0.0) || !std::isfinite(s)) throw ValidationError("scale factor must be positive");
    std::vector<Shell> out;
    for (const auto& sh : K.shells()) out.push_back({sh.a * s, sh.b * s});
    return RadialCompactum(std::move(out));
}

Annulus scale_annulus(const Annulus& A, double s) {
    if (!(s > 0.0) || !std::isfinite(s)) throw ValidationError("scale factor must be positive");
    return make_annulus(A.r_in * s, A.r_out * s);
}

RadialCompactum kelvin_invert(const RadialCompactum& K) {
    std::vector<Shell> out;
    for (const auto& sh : K.shells()) out.push_back({1.0 / sh.b, 1.0 / sh.a});
    return RadialCompactum(std::move(out));
}

Annulus kelvin_invert(const Annulus& A) { return make_annulus(1.0 / A.r_out, 1.0 / A.r_in); }

ModeFunction to_mode_function(const ModeMinimizer& v, int p, std::int64_t l) {
    ModeFunction f;
    f.p = p;
    f.l = l;
    f.jet = [v](double t, int k) { return v(t, k); };
    f.breakpoints = v.breakpoints();
    return f;
}

double phi_form(const Dims& dims, const std::vector<ModeFunction>& u, const Annulus& annulus,
                const PhiFormOptions& opts) {
    make_annulus(annulus.r_in, annulus.r_out);
    const double a = annulus.t_lo();
    const double b = annulus.t_hi();
    double c_r = 0.0;
    if (opts.weight == PhiWeight::log) {
        if (!(opts.R > 0.0)) throw ValidationError("R must be positive");
        if (annulus.r_out > 2.0 * opts.R) {
            throw ValidationError("log-weighted form requires support inside B_{2R}: r_out = " +
                                  std::to_string(annulus.r_out) + " > 2R = " + std::to_string(2.0 * opts.R));
        }
        c_r = std::log(4.0 * opts.R);
    }
    using Quad = boost::math::quadrature::gauss<double, 20>;
    std::map<int, std::vector<double>> rows;
    double total = 0.0;
    for (const auto& mode : u) {
        if (!mode.jet) continue;
        auto it = rows.find(mode.p);
        if (it == rows.end()) it = rows.emplace(mode.p, mode_coefficients(dims, CapacityKind::phi, mode.p)).first;
        const std::vector<double>& c = it->second;
        std::vector<double> cuts{a, b};
        for (double x : mode.breakpoints) {
            if (x > a && x < b) cuts.push_back(x);
        }
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        auto integrand = [&](double t) {
            double s = 0.0;
            for (std::size_t k = 0; k < c.size(); ++k) {
                if (c[k] == 0.0) continue;
                const double d = mode.jet(t, static_cast<int>(k));
                s += c[k] * d * d;
            }
            return opts.weight == PhiWeight::log ? s * (c_r + t) : s;
        };
        for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double len = cuts[i + 1] - cuts[i];
            const int pieces = std::max(1, static_cast<int>(std::ceil(len / 0.25)));
            for (int j = 0; j < pieces; ++j) {
                const double x0 = cuts[i] + len * j / pieces;
                const double x1 = (j + 1 == pieces) ? cuts[i + 1] : cuts[i] + len * (j + 1) / pieces;
                total += Quad::integrate(integrand, x0, x1);
            }
        }
    }
    return total;
}

std::vector<SweepPoint> ambient_sweep(const Dims& dims, CapacityKind kind, const RadialCompactum& K,
                                      const Annulus& ambient, int steps, const Discretization& disc) {
    if (steps < 1) throw ValidationError("sweep needs at least one step");
    std::vector<SweepPoint> out(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k) {
        const double f = std::ldexp(1.0, k);
        const Annulus a = make_annulus(ambient.r_in / f, ambient.r_out * f);
        out[static_cast<std::size_t>(k)] = {a.r_in, a.r_out, cap_inf(dims, kind, K, a, disc).cap_inf};
    }
    return out;
}

}  // namespace polycap
