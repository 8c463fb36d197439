#include "polycap/symbol_calculus.hpp"

#include <algorithm>
#include <string>

#include "polycap/error.hpp"

namespace polycap {

EvenPoly::EvenPoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.push_back(0);
}

std::vector<double> EvenPoly::coeffs_double() const {
    std::vector<double> out;
    out.reserve(coeffs_.size());
    for (const auto& c : coeffs_) out.push_back(to_double(c));
    return out;
}

double EvenPoly::eval(double gamma) const {
    const double g2 = gamma * gamma;
    double acc = 0.0;
    for (std::size_t k = coeffs_.size(); k-- > 0;) acc = acc * g2 + to_double(coeffs_[k]);
    return acc;
}

Rational EvenPoly::eval_exact(const Rational& gamma) const {
    const Rational g2 = gamma * gamma;
    Rational acc = 0;
    for (std::size_t k = coeffs_.size(); k-- > 0;) acc = acc * g2 + coeffs_[k];
    return acc;
}

namespace {

Rational eigen_value(const Dims& dims, int p) { return Rational(p) * (p + dims.n - 2); }

}  // namespace

RationalPoly z_polynomial(const Dims& dims, const Rational& shift, int p) {
    if (p < 0) throw ValidationError("spherical-harmonic degree must be >= 0");
    const Rational ev = eigen_value(dims, p);
    RationalPoly acc{Rational((dims.m % 2 == 0) ? 1 : -1)};
    for (int j = 0; j < dims.m; ++j) {
        const Rational a = shift - 2 * j;
        const Rational b = shift + dims.n - 2 - 2 * j;
        // (z + a)(z + b) - ev
        acc = poly_mul(acc, RationalPoly{a * b - ev, a + b, Rational(1)});
    }
    return acc;
}

SymbolParts symbol_parts(const Dims& dims, const Rational& shift, int p) {
    const RationalPoly z = z_polynomial(dims, shift, p);
    // z = -iγ:  z^{2k} = (-1)^k γ^{2k},  z^{2k+1} = -i (-1)^k γ^{2k+1}.
    std::vector<Rational> re(static_cast<std::size_t>(dims.m) + 1);
    RationalPoly im(static_cast<std::size_t>(dims.m));
    for (int k = 0; k <= dims.m; ++k) {
        const Rational& c = z[static_cast<std::size_t>(2 * k)];
        re[static_cast<std::size_t>(k)] = (k % 2 == 0) ? c : Rational(-c);
    }
    for (int k = 0; k < dims.m; ++k) {
        const Rational& c = z[static_cast<std::size_t>(2 * k + 1)];
        im[static_cast<std::size_t>(k)] = (k % 2 == 0) ? Rational(-c) : c;
    }
    return {EvenPoly(std::move(re)), std::move(im)};
}

EvenPoly conjugated_symbol(const Dims& dims, const Rational& shift, int p) {
    return symbol_parts(dims, shift, p).real;
}

CoeffTable symbol_table(const Dims& dims, const Rational& shift, int p_max) {
    if (p_max < 0) throw ValidationError("p_max must be >= 0");
    CoeffTable t{dims, shift, {}};
    t.rows.reserve(static_cast<std::size_t>(p_max) + 1);
    for (int p = 0; p <= p_max; ++p) t.rows.push_back(conjugated_symbol(dims, shift, p));
    return t;
}

Rational B_coefficient(const Dims& dims, int j, int q) {
    if (dims.n_odd()) throw ValidationError("B_j(q) is defined for even n only");
    if (j < 0 || j >= dims.m) throw ValidationError("B_j(q) requires 0 <= j <= m-1");
    if (q < 0) throw ValidationError("B_j(q) requires q >= 0");
    return Rational(q + dims.n / 2 + dims.m - 2 * j - 2);
}

namespace {

EvenPoly factored_even_row(const Dims& dims, int q) {
    // Π_j (γ² + B_j(q)²) expanded in powers of γ².
    RationalPoly acc{Rational(1)};
    for (int j = 0; j < dims.m; ++j) {
        const Rational b = B_coefficient(dims, j, q);
        acc = poly_mul(acc, RationalPoly{b * b, Rational(1)});
    }
    return EvenPoly(std::move(acc));
}

void require_pmax(const Dims& dims, int p_max) {
    const int need = index_set_Z(dims).max() + 2;
    if (p_max < need) {
        throw ValidationError("p_max = " + std::to_string(p_max) + " must be at least max(Z) + 2 = " +
                              std::to_string(need));
    }
}

}  // namespace

CoeffTable coeff_table(const Dims& dims, int p_max) {
    require_pmax(dims, p_max);
    CoeffTable t = symbol_table(dims, dims.lambda_r(), p_max);
    if (!dims.n_odd()) {
        for (int p = 0; p <= p_max; ++p) {
            EvenPoly f = factored_even_row(dims, p);
            if (!(f == t.row(p))) {
                throw ComputationError("even-n symbol factorization disagrees with expansion at p = " +
                                       std::to_string(p));
            }
            // The odd-in-γ part vanishes identically for even n at this shift.
            const SymbolParts parts = symbol_parts(dims, dims.lambda_r(), p);
            for (const auto& c : parts.imag_odd) {
                if (c != 0) throw ComputationError("nonzero imaginary symbol part for even n");
            }
        }
    }
    return t;
}

CoeffTable dirichlet_symbol_table(const Dims& dims, int p_max) {
    require_pmax(dims, p_max);
    return symbol_table(dims, dims.dirichlet_shift(), p_max);
}

Rational closed_form_c0(const Dims& dims, int p) {
    if (p < 0) throw ValidationError("p must be >= 0");
    const int n = dims.n;
    const int m = dims.m;
    const Rational big_p = eigen_value(dims, p);
    auto ev = [&](const Rational& s) { return s * (s + n - 2); };
    Rational acc = 1;
    if (dims.n_odd()) {
        // s = -n/2 + 3/2, ..., m - n/2 + 1/2 (integers for odd n).
        const int s_lo = (3 - n) / 2;
        for (int s = s_lo; s <= dims.lambda; ++s) acc *= big_p - ev(Rational(s));
        return acc;
    }
    const int h = n / 2;
    if (m % 2 == 0) {
        for (int j = 1; j <= m / 2; ++j) {
            const Rational f = big_p - ev(Rational(-h + 2 * j));
            acc *= f * f;
        }
    } else {
        for (int j = 1; j <= (m - 1) / 2; ++j) {
            const Rational f = big_p - ev(Rational(-h + 1 + 2 * j));
            acc *= f * f;
        }
        acc *= big_p + Rational((h - 1) * (h - 1));
    }
    return acc;
}

SymbolBoundsReport verify_symbol_bounds(const CoeffTable& table) {
    SymbolBoundsReport out;
    const Dims& dims = table.dims;
    const IndexSetZ z = index_set_Z(dims);
    const int m = dims.m;

    // (a) c_kp > 0 for k >= 1.
    bool have_min = false;
    std::string neg_detail;
    for (int p = 0; p <= table.p_max(); ++p) {
        for (int k = 1; k <= m; ++k) {
            const Rational& c = table.row(p)[k];
            if (!have_min || c < out.min_positive_ck) {
                out.min_positive_ck = c;
                have_min = true;
            }
            if (c <= 0 && neg_detail.empty()) {
                neg_detail = "c_{" + std::to_string(k) + "," + std::to_string(p) + "} = " + to_string(c);
            }
        }
    }
    out.report.add("ck_positive", neg_detail.empty(),
                   neg_detail.empty() ? "min c_kp (k>=1) = " + to_string(out.min_positive_ck) : neg_detail);

    // (b) zero set of c_0p equals Z ∩ [0, p_max].
    std::vector<int> expected;
    for (int p : z.members()) {
        if (p <= table.p_max()) expected.push_back(p);
    }
    for (int p = 0; p <= table.p_max(); ++p) {
        if (table.row(p)[0] == 0) out.zero_set.push_back(p);
    }
    {
        std::string d = "zeros {";
        for (std::size_t i = 0; i < out.zero_set.size(); ++i) d += (i ? "," : "") + std::to_string(out.zero_set[i]);
        d += "} vs Z {";
        for (std::size_t i = 0; i < expected.size(); ++i) d += (i ? "," : "") + std::to_string(expected[i]);
        d += "}";
        out.report.add("zero_set_equals_Z", out.zero_set == expected, d);
    }

    // (c) c_0p >= c0 max{1, (p(p+n-2))^m} for p ∉ Z.
    Rational growth_witness;
    bool have_growth = false;
    bool growth_ok = true;
    for (int p = 0; p <= table.p_max(); ++p) {
        if (z.contains(p)) continue;
        Rational big = rational_pow(Rational(p) * (p + dims.n - 2), static_cast<unsigned>(m));
        if (big < 1) big = 1;
        const Rational r = table.row(p)[0] / big;
        if (r <= 0) growth_ok = false;
        if (!have_growth || r < growth_witness) {
            growth_witness = r;
            have_growth = true;
        }
    }
    out.c0_witness = have_growth ? std::min(growth_witness, out.min_positive_ck) : out.min_positive_ck;
    out.report.add("c0_growth_bound", growth_ok && out.c0_witness > 0, "c0 witness = " + to_string(out.c0_witness));

    // (c') explicit constant in (p(p+n-2))^m <= C Π_s (p(p+n-2) - s(s+n-2)), odd n, p >= λ+1.
    if (dims.n_odd()) {
        const Rational lam = dims.lambda;
        const Rational ratio = (lam * (lam + dims.n - 2)) / ((lam + 1) * (lam + dims.n - 1));
        const Rational base = 1 - ratio;
        out.growth_constant = 1 / rational_pow(base, static_cast<unsigned>(m));
        bool ok = base > 0;
        std::string first_fail;
        for (int p = dims.lambda + 1; p <= table.p_max(); ++p) {
            const Rational big = rational_pow(Rational(p) * (p + dims.n - 2), static_cast<unsigned>(m));
            if (big > out.growth_constant * closed_form_c0(dims, p)) {
                ok = false;
                if (first_fail.empty()) first_fail = "fails at p = " + std::to_string(p);
            }
        }
        out.report.add("explicit_growth_constant", ok,
                       first_fail.empty() ? "C = " + to_string(out.growth_constant) : first_fail);
    } else {
        out.growth_constant = have_growth ? 1 / growth_witness : Rational(0);
    }

    // (d) c_0p / closed_form_c0(p) is a positive p-independent constant.
    bool ratio_ok = true;
    bool have_ratio = false;
    for (int p = 0; p <= table.p_max(); ++p) {
        const Rational cf = closed_form_c0(dims, p);
        const Rational& c0 = table.row(p)[0];
        if (cf == 0 || c0 == 0) {
            if ((cf == 0) != (c0 == 0)) ratio_ok = false;
            continue;
        }
        const Rational r = c0 / cf;
        if (!have_ratio) {
            out.closed_form_ratio = r;
            have_ratio = true;
        } else if (r != out.closed_form_ratio) {
            ratio_ok = false;
        }
    }
    ratio_ok = ratio_ok && have_ratio && out.closed_form_ratio > 0;
    out.report.add("closed_form_ratio_constant", ratio_ok,
                   have_ratio ? "c_0p / closed form = " + to_string(out.closed_form_ratio) : "no nonzero rows");
    return out;
}

}  // namespace polycap
