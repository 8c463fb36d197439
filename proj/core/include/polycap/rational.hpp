#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace polycap {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// "num/den" with den > 0; integers still carry "/1".
std::string to_string(const Rational& q);

/// Accepts "a", "-a", "a/b". Throws ValidationError on malformed input or b == 0.
Rational parse_rational(std::string_view text);

double to_double(const Rational& q);

inline Rational half(long long k) { return Rational(k, 2); }

Rational rational_pow(const Rational& base, unsigned exponent);

/// Solves A x = b exactly by Gaussian elimination with nonzero pivoting.
/// Throws ComputationError when A is singular.
std::vector<Rational> solve_exact(std::vector<std::vector<Rational>> a, std::vector<Rational> b);

/// Rational polynomial helpers on coefficient vectors (index = power).
using RationalPoly = std::vector<Rational>;

RationalPoly poly_mul(const RationalPoly& a, const RationalPoly& b);
RationalPoly poly_derivative(const RationalPoly& a);
Rational poly_eval(const RationalPoly& a, const Rational& x);
void poly_trim(RationalPoly& a);

}  // namespace polycap
