#include <catch_amalgamated.hpp>

#include <complex>

#include "polycap/error.hpp"
#include "polycap/symbol_calculus.hpp"

using namespace polycap;

namespace {

std::vector<Rational> ints(std::initializer_list<long long> v) {
    std::vector<Rational> out;
    for (long long x : v) out.emplace_back(x);
    return out;
}

}  // namespace

TEST_CASE("mode rows match an independent rational expansion", "[symbol_calculus]") {
    // Frozen from tests/oracles/gap_oracle.py:mode_row.
    CHECK(conjugated_symbol(make_dims(2, 3), Rational(1), 2).coeffs() == ints({24, 13, 1}));
    CHECK(conjugated_symbol(make_dims(3, 4), Rational(1), 2).coeffs() == ints({225, 259, 35, 1}));
    CHECK(conjugated_symbol(make_dims(2, 2), Rational(1), 0).coeffs() == ints({1, 2, 1}));
    CHECK(conjugated_symbol(make_dims(4, 5), Rational(2), 3).coeffs() == ints({40320, 22676, 2609, 94, 1}));
    CHECK(conjugated_symbol(make_dims(3, 6), Rational(0), 1).coeffs() == ints({225, 259, 35, 1}));
}

TEST_CASE("m = 1 symbols in three dimensions", "[symbol_calculus]") {
    const Dims d = make_dims(1, 3);
    CHECK(coeff_table(d, 2).row(0).coeffs() == ints({0, 1}));
    const CoeffTable dir = dirichlet_symbol_table(d, 2);
    CHECK(dir.row(0)[0] == Rational(1, 4));
    CHECK(dir.row(0)[1] == Rational(1));
    CHECK(dir.row(1)[0] == Rational(9, 4));
}

TEST_CASE("the even part of the symbol is the real part on the imaginary axis", "[symbol_calculus][property]") {
    for (int m = 1; m <= 5; ++m) {
        for (int n = 2; n <= 2 * m + 1; ++n) {
            const Dims d = make_dims(m, n);
            for (int p = 0; p <= 4; ++p) {
                const RationalPoly z = z_polynomial(d, d.lambda_r(), p);
                const EvenPoly re = conjugated_symbol(d, d.lambda_r(), p);
                for (double gamma : {0.0, 0.3, 1.7, 4.2}) {
                    std::complex<double> v = 0.0;
                    const std::complex<double> x(0.0, -gamma);
                    for (std::size_t k = z.size(); k-- > 0;) v = v * x + to_double(z[k]);
                    CHECK(re.eval(gamma) == Catch::Approx(v.real()).epsilon(1e-12).margin(1e-9));
                }
            }
        }
    }
}

TEST_CASE("c_0p vanishes exactly on Z and c_kp >= 0", "[symbol_calculus][property]") {
    for (int m = 1; m <= 4; ++m) {
        for (int n = 2; n <= 2 * m + 1; ++n) {
            const Dims d = make_dims(m, n);
            const IndexSetZ Z = index_set_Z(d);
            const CoeffTable t = coeff_table(d, 20);
            for (int p = 0; p <= 20; ++p) {
                CHECK((t.row(p)[0] == 0) == Z.contains(p));
                for (int k = 0; k <= m; ++k) CHECK(t.row(p)[k] >= 0);
                CHECK(t.row(p)[m] == 1);
            }
        }
    }
}

TEST_CASE("verify_symbol_bounds passes and reports the zero set", "[symbol_calculus]") {
    for (int m = 1; m <= 4; ++m) {
        for (int n = 2; n <= 2 * m + 1; ++n) {
            const Dims d = make_dims(m, n);
            const SymbolBoundsReport r = verify_symbol_bounds(coeff_table(d, 12));
            INFO("m=" << m << " n=" << n);
            CHECK(r.report.passed());
            CHECK(r.zero_set == index_set_Z(d).members());
            CHECK(r.closed_form_ratio > 0);
        }
    }
}

TEST_CASE("B coefficients for even n", "[symbol_calculus]") {
    const Dims d = make_dims(3, 4);
    CHECK(B_coefficient(d, 0, 1) == Rational(1 + 2 + 3 - 2));
    CHECK(B_coefficient(d, 2, 0) == Rational(0 + 2 + 3 - 6));
    CHECK_THROWS_AS(B_coefficient(make_dims(2, 3), 0, 0), ValidationError);
    CHECK_THROWS_AS(B_coefficient(d, 3, 0), ValidationError);
}

TEST_CASE("symbol inputs are validated", "[symbol_calculus]") {
    CHECK_THROWS_AS(z_polynomial(make_dims(2, 3), Rational(1), -1), ValidationError);
    CHECK_THROWS_AS(coeff_table(make_dims(2, 3), -1), ValidationError);
}
