#include "polycap/fundamental_solutions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "polycap/error.hpp"
#include "polycap/symbol_calculus.hpp"

namespace polycap {

namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

BigInt binom_exact(int n, int k) {
    BigInt r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

BigInt falling(int k, int i) {
    BigInt r = 1;
    for (int j = 0; j < i; ++j) r *= (k - j);
    return r;
}

}  // namespace

ExpPoly canonical(ExpPoly terms) {
    std::map<std::pair<Rational, int>, Rational> acc;
    for (auto& t : terms) acc[{t.rate, t.poly_degree}] += t.coeff;
    ExpPoly out;
    for (auto& [key, c] : acc) {
        if (c != 0) out.push_back({key.first, key.second, c});
    }
    return out;
}

double eval_exp_poly(const ExpPoly& terms, double t, int deriv) {
    double sum = 0.0;
    for (const auto& term : terms) {
        const double r = to_double(term.rate);
        const int k = term.poly_degree;
        double inner = 0.0;
        for (int i = 0; i <= std::min(deriv, k); ++i) {
            double f = 1.0;
            for (int j = 0; j < i; ++j) f *= (k - j);
            inner += binom(deriv, i) * f * std::pow(t, k - i) * std::pow(r, deriv - i);
        }
        sum += to_double(term.coeff) * inner * std::exp(r * t);
    }
    return sum;
}

Rational jet_at_zero(const ExpPoly& terms, int deriv) {
    Rational sum = 0;
    for (const auto& term : terms) {
        const int k = term.poly_degree;
        if (deriv < k) continue;
        sum += term.coeff * Rational(binom_exact(deriv, k) * falling(k, k)) *
               rational_pow(term.rate, static_cast<unsigned>(deriv - k));
    }
    return sum;
}

ExpPoly apply_operator(const RationalPoly& op, const ExpPoly& terms) {
    int max_k = 0;
    for (const auto& t : terms) max_k = std::max(max_k, t.poly_degree);
    std::vector<RationalPoly> derivs{op};
    for (int i = 1; i <= max_k; ++i) derivs.push_back(poly_derivative(derivs.back()));
    ExpPoly out;
    for (const auto& t : terms) {
        for (int i = 0; i <= t.poly_degree; ++i) {
            const Rational c = t.coeff * Rational(binom_exact(t.poly_degree, i)) *
                               poly_eval(derivs[static_cast<std::size_t>(i)], t.rate);
            out.push_back({t.rate, t.poly_degree - i, c});
        }
    }
    return canonical(std::move(out));
}

std::vector<Rational> roots_odd(const Dims& dims) {
    if (!dims.n_odd()) throw ValidationError("roots_odd requires odd n");
    const int m = dims.m;
    std::vector<Rational> roots;
    for (int j = 0; j < m; ++j) {
        roots.push_back(Rational(-2 * m + dims.n - 1 + 4 * j, 2));
        roots.push_back(Rational(2 * m - dims.n - 1 - 4 * j, 2));
    }
    std::sort(roots.begin(), roots.end());
    if (std::adjacent_find(roots.begin(), roots.end()) != roots.end()) {
        throw ComputationError("characteristic roots are not distinct");
    }
    if (std::count(roots.begin(), roots.end(), Rational(0)) != 1) {
        throw ComputationError("characteristic roots must contain 0 exactly once");
    }
    return roots;
}

namespace {

int base_degree(const Dims& dims) { return dims.n_odd() ? 0 : ((2 * dims.m - dims.n) / 2) % 2; }

RationalPoly even_operator(const Dims& dims, int q) {
    RationalPoly acc{Rational(1)};
    for (int j = 0; j < dims.m; ++j) {
        const Rational b = B_coefficient(dims, j, q);
        acc = poly_mul(acc, RationalPoly{b * b, Rational(0), Rational(-1)});
    }
    return acc;
}

std::vector<Root> even_roots(const Dims& dims) {
    std::map<Rational, int> mult;
    for (int j = 0; j < dims.m; ++j) {
        const Rational b = B_coefficient(dims, j, base_degree(dims));
        ++mult[b];
        ++mult[-b];
    }
    std::vector<Root> roots;
    for (auto& [v, k] : mult) roots.push_back({v, k});
    return roots;
}

void check_roots(const RationalPoly& op, const std::vector<Root>& roots) {
    int total = 0;
    for (const auto& r : roots) {
        RationalPoly d = op;
        for (int i = 0; i < r.multiplicity; ++i) {
            if (poly_eval(d, r.value) != 0) {
                throw ComputationError("root " + to_string(r.value) + " has lower multiplicity than recorded");
            }
            d = poly_derivative(d);
        }
        total += r.multiplicity;
    }
    if (total + 1 != static_cast<int>(op.size())) throw ComputationError("root count does not match degree");
}

void set_linear_part(FundSol& h) {
    h.mu4 = 0;
    h.mu5 = 0;
    if (h.dims.n_odd()) return;
    for (const auto& t : h.minus_terms) {
        if (t.rate != 0) continue;
        if (t.poly_degree == 1) h.mu4 = t.coeff;
        if (t.poly_degree == 0) h.mu5 = t.coeff;
    }
}

}  // namespace

RationalPoly fundsol_operator(const Dims& dims) {
    if (dims.n_odd()) return z_polynomial(dims, dims.lambda_r(), 0);
    return even_operator(dims, base_degree(dims));
}

FundSol solve_jump_system(const Dims& dims, const RationalPoly& op, const std::vector<Root>& roots) {
    struct Unknown {
        Rational rate;
        int degree;
        bool plus;
    };
    std::vector<Unknown> unknowns;
    for (const auto& r : roots) {
        for (int k = 0; k < r.multiplicity; ++k) unknowns.push_back({r.value, k, r.value < 0});
    }
    const int order = static_cast<int>(op.size()) - 1;
    if (static_cast<int>(unknowns.size()) != order || order != 2 * dims.m) {
        throw ComputationError("jump system size mismatch");
    }
    const auto sz = static_cast<std::size_t>(order);
    std::vector<std::vector<Rational>> a(sz, std::vector<Rational>(sz));
    std::vector<Rational> b(sz);
    for (int d = 0; d < order; ++d) {
        for (std::size_t u = 0; u < sz; ++u) {
            const Rational jet = jet_at_zero({{unknowns[u].rate, unknowns[u].degree, Rational(1)}}, d);
            a[static_cast<std::size_t>(d)][u] = unknowns[u].plus ? jet : Rational(-jet);
        }
    }
    b[sz - 1] = 1 / op.back();
    const std::vector<Rational> x = solve_exact(std::move(a), std::move(b));

    FundSol h;
    h.dims = dims;
    h.op = op;
    h.roots = roots;
    h.base_degree = base_degree(dims);
    for (std::size_t u = 0; u < sz; ++u) {
        (unknowns[u].plus ? h.plus_terms : h.minus_terms).push_back({unknowns[u].rate, unknowns[u].degree, x[u]});
    }
    h.plus_terms = canonical(std::move(h.plus_terms));
    h.minus_terms = canonical(std::move(h.minus_terms));
    set_linear_part(h);
    return h;
}

FundSol fundsol_residue(const Dims& dims) {
    const std::vector<Rational> gam = roots_odd(dims);
    const Rational sign = (dims.m % 2 == 0) ? -1 : 1;  // (-1)^{m+1}
    FundSol h;
    h.dims = dims;
    h.op = fundsol_operator(dims);
    for (const auto& g : gam) h.roots.push_back({g, 1});
    check_roots(h.op, h.roots);
    for (std::size_t i = 0; i < gam.size(); ++i) {
        Rational prod = 1;
        for (std::size_t j = 0; j < gam.size(); ++j) {
            if (j != i) prod *= gam[j] - gam[i];
        }
        const Rational kappa = sign / prod;
        if (gam[i] < 0) {
            h.plus_terms.push_back({gam[i], 0, kappa});
        } else {
            h.minus_terms.push_back({gam[i], 0, -kappa});
        }
    }
    h.plus_terms = canonical(std::move(h.plus_terms));
    h.minus_terms = canonical(std::move(h.minus_terms));
    set_linear_part(h);
    return h;
}

FundSol fundsol(const Dims& dims) {
    const RationalPoly op = fundsol_operator(dims);
    if (dims.n_odd()) {
        FundSol h = fundsol_residue(dims);
        const FundSol g = solve_jump_system(dims, op, h.roots);
        if (g.plus_terms != h.plus_terms || g.minus_terms != h.minus_terms) {
            throw ComputationError("residue formula disagrees with the jump system");
        }
        return h;
    }
    const std::vector<Root> roots = even_roots(dims);
    check_roots(op, roots);
    return solve_jump_system(dims, op, roots);
}

double eval_fundsol(const FundSol& h, double t, int deriv) {
    const int m = h.dims.m;
    if (deriv < 0 || deriv > 2 * m) {
        throw ValidationError("derivative order " + std::to_string(deriv) + " outside [0, 2m]");
    }
    if (t == 0.0 && deriv > 2 * m - 2) {
        throw ValidationError("derivative order " + std::to_string(deriv) + " is discontinuous at t = 0");
    }
    return eval_exp_poly(t >= 0.0 ? h.plus_terms : h.minus_terms, t, deriv);
}

double WeightParams::C_R() const { return std::log(4.0 * R); }

void WeightParams::validate() const {
    for (double v : {C1, C2, Cprime, Cdoubleprime, R}) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError("weight constants and R must be positive and finite");
    }
}

Weight::Weight(const Dims& dims, WeightParams params) : h_(fundsol(dims)), params_(params) { params_.validate(); }

double Weight::operator()(double t, double tau) const {
    if (h_.dims.n_odd()) return std::exp(t) * (params_.C1 * eval_fundsol(h_, t - tau) + params_.C2);
    const double lo = std::log(1.0 / (2.0 * params_.R));
    if (t < lo || tau < lo) {
        throw ValidationError("even-n weight requires t, tau >= log(1/(2R)) = " + std::to_string(lo));
    }
    const double cr = params_.C_R();
    return eval_fundsol(h_, t - tau) + to_double(h_.mu4) * (cr + tau) + params_.Cprime +
           params_.Cdoubleprime * (cr + t);
}

double Weight::reduced_derivative(double t, double tau, int k) const {
    if (!h_.dims.n_odd()) throw ValidationError("reduced weight derivatives are defined for odd n");
    return params_.C1 * eval_fundsol(h_, t - tau, k) + (k == 0 ? params_.C2 : 0.0);
}

double g_weight(const Dims& dims, const WeightParams& params, double t, double tau) {
    return Weight(dims, params)(t, tau);
}

std::vector<PositivityOperator> positivity_operators(const Dims& dims) {
    std::vector<PositivityOperator> out;
    if (dims.n_odd()) {
        const RationalPoly q0 = z_polynomial(dims, dims.lambda_r(), 0);
        for (int p = 0; p <= dims.lambda; ++p) {
            RationalPoly d = z_polynomial(dims, dims.lambda_r(), p);
            for (std::size_t i = 0; i < d.size(); ++i) d[i] -= q0[i];
            poly_trim(d);
            out.push_back({p, d});
        }
        return out;
    }
    const int top = (2 * dims.m - dims.n) / 2;
    for (int p = base_degree(dims); p <= top; p += 2) out.push_back({p, even_operator(dims, p)});
    return out;
}

namespace {

double term_scale(const ExpPoly& terms, double t) {
    double s = 0.0;
    for (const auto& term : terms) {
        s += std::abs(to_double(term.coeff)) * std::pow(std::abs(t), term.poly_degree) *
             std::exp(to_double(term.rate) * t);
    }
    return s;
}

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace

Report verify_fundsol(const FundSol& h, const std::vector<double>& grid) {
    Report rep;
    const int m = h.dims.m;
    for (double t : grid) {
        if (t == 0.0) throw ValidationError("verification grid must exclude 0");
    }

    const ExpPoly res_plus = apply_operator(h.op, h.plus_terms);
    const ExpPoly res_minus = apply_operator(h.op, h.minus_terms);
    double max_res = 0.0;
    for (double t : grid) {
        max_res = std::max(max_res, std::abs(eval_exp_poly(t > 0 ? res_plus : res_minus, t)));
    }
    rep.add("ode_residual", res_plus.empty() && res_minus.empty(),
            "symbolic residual terms: " + std::to_string(res_plus.size() + res_minus.size()) +
                ", max grid residual " + fmt_double(max_res));

    std::string cont_fail;
    for (int d = 0; d <= 2 * m - 2; ++d) {
        const Rational diff = jet_at_zero(h.plus_terms, d) - jet_at_zero(h.minus_terms, d);
        if (diff != 0 && cont_fail.empty()) cont_fail = "jump in derivative " + std::to_string(d) + " = " + to_string(diff);
    }
    rep.add("continuity", cont_fail.empty(), cont_fail.empty() ? "derivatives 0.." + std::to_string(2 * m - 2) + " continuous" : cont_fail);
    const Rational jump = h.leading() * (jet_at_zero(h.plus_terms, 2 * m - 1) - jet_at_zero(h.minus_terms, 2 * m - 1));
    rep.add("unit_jump", jump == 1, "leading * jump of derivative " + std::to_string(2 * m - 1) + " = " + to_string(jump));

    for (const auto& po : positivity_operators(h.dims)) {
        const ExpPoly ap = apply_operator(po.op, h.plus_terms);
        const ExpPoly am = apply_operator(po.op, h.minus_terms);
        double worst = 0.0;
        bool ok = true;
        for (double t : grid) {
            const ExpPoly& side = t > 0 ? ap : am;
            const double v = eval_exp_poly(side, t);
            const double tol = 1e-10 * term_scale(side, t);
            if (v < -tol) ok = false;
            worst = std::min(worst, v);
        }
        rep.add("positivity_p" + std::to_string(po.p), ok, "min value " + fmt_double(worst));
    }

    bool growth_ok = true;
    for (const auto& t : h.plus_terms) growth_ok = growth_ok && t.rate < 0;
    int zero_rate = 0;
    for (const auto& t : h.minus_terms) {
        growth_ok = growth_ok && t.rate >= 0;
        if (t.rate == 0) {
            ++zero_rate;
            growth_ok = growth_ok && t.poly_degree <= (h.dims.n_odd() ? 0 : 1);
        } else {
            growth_ok = growth_ok && t.poly_degree <= 1;
        }
    }
    if (h.dims.n_odd()) growth_ok = growth_ok && zero_rate == 1 && h.mu4 == 0 && h.mu5 == 0;
    rep.add("growth_class", growth_ok,
            h.dims.n_odd() ? std::string("bounded, vanishing at +inf")
                           : "at most linear at -inf, mu4 = " + to_string(h.mu4) + ", mu5 = " + to_string(h.mu5));

    const double far = 50.0;
    double lead = 0.0;
    for (const auto& t : h.plus_terms) lead = std::max(lead, std::abs(to_double(t.coeff)));
    const double right = std::abs(eval_fundsol(h, far));
    ExpPoly tail;
    for (const auto& t : h.minus_terms) {
        if (t.rate != 0) tail.push_back(t);
    }
    double lead_minus = std::abs(to_double(h.mu4)) * far + std::abs(to_double(h.mu5));
    for (const auto& t : h.minus_terms) {
        if (t.rate == 0) lead_minus = std::max(lead_minus, std::abs(to_double(t.coeff)) * std::pow(far, t.poly_degree));
    }
    const double left = std::abs(eval_exp_poly(tail, -far));
    const bool asym_ok = right <= 1e-12 * std::max(lead, 1e-300) && left <= 1e-12 * std::max(lead_minus, 1e-300);
    rep.add("asymptotics", asym_ok, "|h(50)| = " + fmt_double(right) + ", |h(-50) - polynomial part| = " + fmt_double(left));
    return rep;
}

}  // namespace polycap
