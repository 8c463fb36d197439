#include "polycap/fem1d.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/multiprecision/float128.hpp>

#include "polycap/error.hpp"

namespace polycap {

namespace {

BigInt falling(int j, int b) {
    BigInt r = 1;
    for (int i = 0; i < b; ++i) r *= (j - i);
    return r;
}

double horner(const std::vector<double>& c, double x) {
    double acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
    return acc;
}

}  // namespace

HermiteBasis::HermiteBasis(int m) : m_(m) {
    if (m < 1) throw ValidationError("Hermite basis requires m >= 1");
    const int deg = 2 * m;  // number of coefficients
    for (int side = 0; side < 2; ++side) {
        for (int a = 0; a < m; ++a) {
            std::vector<std::vector<Rational>> sys(static_cast<std::size_t>(deg), std::vector<Rational>(static_cast<std::size_t>(deg)));
            std::vector<Rational> rhs(static_cast<std::size_t>(deg));
            for (int b = 0; b < m; ++b) {
                // derivative b at 0 picks the coefficient of x^b; at 1 sums all.
                sys[static_cast<std::size_t>(b)][static_cast<std::size_t>(b)] = Rational(falling(b, b));
                for (int j = b; j < deg; ++j) {
                    sys[static_cast<std::size_t>(m + b)][static_cast<std::size_t>(j)] = Rational(falling(j, b));
                }
            }
            rhs[static_cast<std::size_t>(side * m + a)] = 1;
            polys_.push_back(solve_exact(std::move(sys), std::move(rhs)));
        }
    }
    for (const auto& p : polys_) {
        RationalPoly d = p;
        for (int k = 0; k < deg; ++k) {
            std::vector<double> c;
            for (const auto& q : d) c.push_back(to_double(q));
            coeffs_.push_back(std::move(c));
            d = poly_derivative(d);
        }
    }
    for (int k = 0; k <= m; ++k) {
        std::vector<RationalPoly> dk;
        for (const auto& p : polys_) {
            RationalPoly d = p;
            for (int i = 0; i < k; ++i) d = poly_derivative(d);
            dk.push_back(std::move(d));
        }
        std::vector<std::vector<double>> g(static_cast<std::size_t>(deg), std::vector<double>(static_cast<std::size_t>(deg)));
        for (int i = 0; i < deg; ++i) {
            for (int j = i; j < deg; ++j) {
                const RationalPoly prod = poly_mul(dk[static_cast<std::size_t>(i)], dk[static_cast<std::size_t>(j)]);
                Rational integral = 0;
                for (std::size_t e = 0; e < prod.size(); ++e) integral += prod[e] / Rational(static_cast<long long>(e + 1));
                g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = to_double(integral);
                g[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = to_double(integral);
            }
        }
        gram_.push_back(std::move(g));
    }
}

double HermiteBasis::eval(int idx, double xi, int k) const {
    if (k >= 2 * m_) return 0.0;
    return horner(coeffs_[static_cast<std::size_t>(idx * 2 * m_ + k)], xi);
}

const HermiteBasis& hermite_basis(int m) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<HermiteBasis>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[m];
    if (!slot) slot = std::make_unique<HermiteBasis>(m);
    return *slot;
}

double fastest_rate(const std::vector<double>& c) {
    // Roots in y = r² of Σ_k (-1)^k c_k y^k via the companion matrix.
    std::size_t deg = c.size();
    while (deg > 0 && c[deg - 1] == 0.0) --deg;
    if (deg <= 1) return 0.0;
    const Eigen::Index d = static_cast<Eigen::Index>(deg - 1);
    const double lead = (d % 2 == 0 ? 1.0 : -1.0) * c[deg - 1];
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
    for (Eigen::Index k = 0; k < d; ++k) {
        companion(k, d - 1) = -(k % 2 == 0 ? 1.0 : -1.0) * c[static_cast<std::size_t>(k)] / lead;
    }
    const Eigen::VectorXcd roots = companion.eigenvalues();
    double y = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) y = std::max(y, std::abs(roots(i)));
    return std::sqrt(y);
}

std::vector<double> graded_mesh(double length, const MeshOptions& opts) {
    if (!(length > 0.0) || !std::isfinite(length)) throw ComputationError("mesh length must be positive and finite");
    if (!(opts.h0 > 0.0) || !(opts.grading >= 1.0) || !(opts.h_max >= opts.h0)) {
        throw ValidationError("invalid mesh options");
    }
    std::vector<double> sizes;
    double sum = 0.0;
    double h = opts.h0;
    while (sum < 0.5 * length) {
        sizes.push_back(h);
        sum += h;
        h = std::min(h * opts.grading, opts.h_max);
        if (2 * sizes.size() > opts.max_elements) {
            throw ComputationError("infeasible discretization: more than " + std::to_string(opts.max_elements) +
                                   " elements required");
        }
    }
    const double scale = length / (2.0 * sum);
    std::vector<double> nodes{0.0};
    nodes.reserve(2 * sizes.size() + 1);
    double x = 0.0;
    for (double s : sizes) nodes.push_back(x += s * scale);
    for (std::size_t i = sizes.size(); i-- > 0;) nodes.push_back(x += sizes[i] * scale);
    nodes.back() = length;
    return nodes;
}

std::vector<double> bisect(const std::vector<double>& nodes) {
    std::vector<double> out;
    out.reserve(2 * nodes.size());
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        out.push_back(nodes[i]);
        out.push_back(0.5 * (nodes[i] + nodes[i + 1]));
    }
    out.push_back(nodes.back());
    return out;
}

namespace {

// Gap systems are assembled, factored and integrated in quad precision: the
// stiffness condition number grows like (element size)^{-2m}, which exhausts
// double precision for m >= 5 at useful resolutions.
using Wide = boost::multiprecision::float128;

Wide to_wide(const Rational& q) {
    return static_cast<Wide>(boost::multiprecision::numerator(q)) /
           static_cast<Wide>(boost::multiprecision::denominator(q));
}

// Gauss–Legendre rule on [0, 1], exact for the squared derivatives of degree 2m-1 Hermite elements up to m = 10.
template <class T>
struct UnitRule {
    std::vector<T> x, w;
    UnitRule() {
        using G = boost::math::quadrature::gauss<T, 20>;
        const auto& a = G::abscissa();
        const auto& wt = G::weights();
        for (std::size_t i = 0; i < a.size(); ++i) {
            x.push_back((1 - a[i]) / 2);
            w.push_back(wt[i] / 2);
            if (a[i] != 0) {
                x.push_back((1 + a[i]) / 2);
                w.push_back(wt[i] / 2);
            }
        }
    }
};

template <class T>
const UnitRule<T>& unit_rule() {
    static const UnitRule<T> rule;
    return rule;
}

// Quad-precision copies of the Gram matrices and of ψ^{(k)} at the quadrature nodes.
struct WideBasis {
    int m = 0;
    std::vector<std::vector<Wide>> gram;  // gram[k][i * 2m + j]
    std::vector<std::vector<std::vector<Wide>>> psi;  // psi[k][q][idx]

    explicit WideBasis(const HermiteBasis& basis) : m(basis.m()) {
        const int d = 2 * m;
        std::vector<RationalPoly> dk;
        for (int i = 0; i < d; ++i) dk.push_back(basis.poly(i));
        const auto& rule = unit_rule<Wide>();
        for (int k = 0; k <= m; ++k) {
            std::vector<Wide> g(static_cast<std::size_t>(d * d));
            for (int i = 0; i < d; ++i) {
                for (int j = i; j < d; ++j) {
                    const RationalPoly prod = poly_mul(dk[static_cast<std::size_t>(i)], dk[static_cast<std::size_t>(j)]);
                    Rational integral = 0;
                    for (std::size_t e = 0; e < prod.size(); ++e) integral += prod[e] / Rational(static_cast<long long>(e + 1));
                    g[static_cast<std::size_t>(i * d + j)] = g[static_cast<std::size_t>(j * d + i)] = to_wide(integral);
                }
            }
            gram.push_back(std::move(g));
            std::vector<std::vector<Wide>> table;
            for (const Wide& x : rule.x) {
                std::vector<Wide> row;
                for (const auto& poly : dk) {
                    Wide acc = 0;
                    for (std::size_t i = poly.size(); i-- > 0;) acc = acc * x + to_wide(poly[i]);
                    row.push_back(acc);
                }
                table.push_back(std::move(row));
            }
            psi.push_back(std::move(table));
            for (auto& poly : dk) poly = poly_derivative(poly);
        }
    }
};

const WideBasis& wide_basis(int m) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<WideBasis>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[m];
    if (!slot) slot = std::make_unique<WideBasis>(hermite_basis(m));
    return *slot;
}

Wide wide_pow(Wide x, int k) {
    Wide r = 1;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

// Element stiffness for DOFs w_a = s^a v^{(a)}, with s_left / s_right the node scales.
std::vector<Wide> element_matrix(const WideBasis& basis, const std::vector<Wide>& c, const Wide& h, const Wide& s_left,
                                 const Wide& s_right) {
    const int m = basis.m;
    const auto d = static_cast<std::size_t>(2 * m);
    std::vector<Wide> f(d);
    for (int a = 0; a < m; ++a) {
        f[static_cast<std::size_t>(a)] = wide_pow(h / s_left, a);
        f[static_cast<std::size_t>(m + a)] = wide_pow(h / s_right, a);
    }
    std::vector<Wide> ke(d * d, Wide(0));
    for (int k = 0; k <= m; ++k) {
        const Wide& ck = c[static_cast<std::size_t>(k)];
        if (ck == 0) continue;
        const Wide w = ck * h / wide_pow(h, 2 * k);
        const auto& g = basis.gram[static_cast<std::size_t>(k)];
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) ke[i * d + j] += w * f[i] * f[j] * g[i * d + j];
        }
    }
    return ke;
}

// Σ_k c_k ∫ (v^{(k)})² over one element, by quadrature of the squared derivatives.
// u holds DOFs w_a = s^a v^{(a)} for both ends.
Wide element_energy(const WideBasis& basis, const std::vector<Wide>& c, const Wide& h, const Wide& s_left,
                    const Wide& s_right, const Wide* u) {
    const auto& rule = unit_rule<Wide>();
    const auto m = static_cast<std::size_t>(basis.m);
    std::vector<Wide> coef(2 * m);
    for (std::size_t a = 0; a < m; ++a) {
        coef[a] = u[a] * wide_pow(h / s_left, static_cast<int>(a));
        coef[m + a] = u[m + a] * wide_pow(h / s_right, static_cast<int>(a));
    }
    Wide energy = 0;
    for (std::size_t k = 0; k <= m; ++k) {
        if (c[k] == 0) continue;
        Wide acc = 0;
        for (std::size_t q = 0; q < rule.x.size(); ++q) {
            const auto& psi = basis.psi[k][q];
            Wide d = 0;
            for (std::size_t i = 0; i < 2 * m; ++i) d += coef[i] * psi[i];
            acc += rule.w[q] * d * d;
        }
        energy += c[k] * acc * h / wide_pow(h, 2 * static_cast<int>(k));
    }
    return energy;
}

// In-place Cholesky solve of a symmetric positive definite band matrix.
// ab[j][kd + i - j] holds A(i, j) for max(0, j - kd) <= i <= j. Returns false
// when a pivot is not positive.
bool band_cholesky_solve(std::vector<std::vector<Wide>>& ab, std::size_t kd, std::vector<Wide>& b) {
    const std::size_t n = ab.size();
    auto at = [&](std::size_t i, std::size_t j) -> Wide& { return ab[j][kd + i - j]; };
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t lo = j > kd ? j - kd : 0;
        for (std::size_t i = lo; i <= j; ++i) {
            Wide sum = at(i, j);
            const std::size_t klo = std::max(lo, i > kd ? i - kd : 0);
            for (std::size_t k = klo; k < i; ++k) sum -= at(k, i) * at(k, j);
            if (i == j) {
                if (!(sum > 0)) return false;
                at(j, j) = sqrt(sum);
            } else {
                at(i, j) = sum / at(i, i);
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) {  // Uᵀ y = b
        const std::size_t lo = i > kd ? i - kd : 0;
        Wide sum = b[i];
        for (std::size_t k = lo; k < i; ++k) sum -= at(k, i) * b[k];
        b[i] = sum / at(i, i);
    }
    for (std::size_t i = n; i-- > 0;) {  // U x = y
        const std::size_t hi = std::min(n - 1, i + kd);
        Wide sum = b[i];
        for (std::size_t k = i + 1; k <= hi; ++k) sum -= at(i, k) * b[k];
        b[i] = sum / at(i, i);
    }
    return true;
}

std::vector<Wide> widen(const std::vector<double>& v) { return {v.begin(), v.end()}; }

void check_inputs(const std::vector<double>& c, const std::vector<double>& nodes, int m) {
    if (static_cast<int>(c.size()) != m + 1) throw ValidationError("coefficient vector must have m+1 entries");
    if (nodes.size() < 2) throw ValidationError("mesh needs at least one element");
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        if (!(nodes[i + 1] > nodes[i])) throw ComputationError("infeasible discretization: degenerate element");
    }
}

}  // namespace

GapSolution solve_gap(const std::vector<double>& c, const std::vector<double>& nodes, const std::vector<double>& left,
                      const std::vector<double>& right) {
    const int m = static_cast<int>(left.size());
    if (m < 1 || right.size() != left.size()) throw ValidationError("boundary data must have m entries per end");
    check_inputs(c, nodes, m);
    const WideBasis& basis = wide_basis(m);
    const std::vector<Wide> cw = widen(c);
    const std::size_t ne = nodes.size() - 1;
    const auto um = static_cast<std::size_t>(m);

    std::vector<Wide> x = widen(nodes);
    std::vector<Wide> scale(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Wide hl = i > 0 ? x[i] - x[i - 1] : x[1] - x[0];
        const Wide hr = i < ne ? x[i + 1] - x[i] : hl;
        scale[i] = (hl + hr) / 2;
    }

    // w[i][a] = scale_i^a v^{(a)}(x_i); end DOFs fixed.
    std::vector<Wide> w(nodes.size() * um, Wide(0));
    for (std::size_t a = 0; a < um; ++a) {
        w[a] = wide_pow(scale.front(), static_cast<int>(a)) * left[a];
        w[ne * um + a] = wide_pow(scale.back(), static_cast<int>(a)) * right[a];
    }

    const std::size_t n_unknown = (ne - 1) * um;
    if (n_unknown > 0) {
        const std::size_t kd = 2 * um - 1;
        std::vector<std::vector<Wide>> ab(n_unknown, std::vector<Wide>(kd + 1, Wide(0)));
        std::vector<Wide> rhs(n_unknown, Wide(0));
        const std::size_t d = 2 * um;
        for (std::size_t e = 0; e < ne; ++e) {
            const auto ke = element_matrix(basis, cw, x[e + 1] - x[e], scale[e], scale[e + 1]);
            for (std::size_t i = 0; i < d; ++i) {
                const std::size_t gi = e * um + i;  // global DOF
                if (gi < um || gi >= ne * um) continue;
                const std::size_t ui = gi - um;
                for (std::size_t j = 0; j < d; ++j) {
                    const std::size_t gj = e * um + j;
                    if (gj < um || gj >= ne * um) {
                        rhs[ui] -= ke[i * d + j] * w[gj];
                    } else if (const std::size_t uj = gj - um; ui <= uj) {
                        ab[uj][kd + ui - uj] += ke[i * d + j];
                    }
                }
            }
        }
        if (!band_cholesky_solve(ab, kd, rhs)) {
            throw ComputationError("banded Cholesky failed: stiffness matrix is not numerically positive definite");
        }
        std::copy(rhs.begin(), rhs.end(), w.begin() + static_cast<std::ptrdiff_t>(um));
    }

    GapSolution out;
    out.nodes = nodes;
    out.derivs.assign(nodes.size(), std::vector<double>(um));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (std::size_t a = 0; a < um; ++a) {
            out.derivs[i][a] = static_cast<double>(w[i * um + a] / wide_pow(scale[i], static_cast<int>(a)));
        }
    }
    Wide energy = 0;
    for (std::size_t e = 0; e < ne; ++e) {
        energy += element_energy(basis, cw, x[e + 1] - x[e], scale[e], scale[e + 1], &w[e * um]);
    }
    out.energy = static_cast<double>(energy);
    return out;
}

std::vector<std::vector<double>> assemble_dense(const std::vector<double>& c, const std::vector<double>& nodes) {
    const int m = static_cast<int>(c.size()) - 1;
    check_inputs(c, nodes, m);
    const WideBasis& basis = wide_basis(m);
    const std::vector<Wide> cw = widen(c);
    const auto um = static_cast<std::size_t>(m);
    const std::size_t n = nodes.size() * um;
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (std::size_t e = 0; e + 1 < nodes.size(); ++e) {
        const auto ke = element_matrix(basis, cw, Wide(nodes[e + 1] - nodes[e]), Wide(1), Wide(1));
        const std::size_t d = 2 * um;
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < d; ++j) a[e * um + i][e * um + j] += static_cast<double>(ke[i * d + j]);
        }
    }
    return a;
}

double hermite_energy(const std::vector<double>& c, const std::vector<double>& nodes,
                      const std::vector<std::vector<double>>& derivs) {
    const int m = static_cast<int>(c.size()) - 1;
    check_inputs(c, nodes, m);
    const WideBasis& basis = wide_basis(m);
    const std::vector<Wide> cw = widen(c);
    Wide energy = 0;
    for (std::size_t e = 0; e + 1 < nodes.size(); ++e) {
        std::vector<Wide> u = widen(derivs[e]);
        u.insert(u.end(), derivs[e + 1].begin(), derivs[e + 1].end());
        energy += element_energy(basis, cw, Wide(nodes[e + 1] - nodes[e]), Wide(1), Wide(1), u.data());
    }
    return static_cast<double>(energy);
}

double hermite_eval(const std::vector<double>& nodes, const std::vector<std::vector<double>>& derivs, double x, int k) {
    const int m = static_cast<int>(derivs.front().size());
    const HermiteBasis& basis = hermite_basis(m);
    x = std::clamp(x, nodes.front(), nodes.back());
    auto it = std::upper_bound(nodes.begin(), nodes.end(), x);
    std::size_t e = it == nodes.begin() ? 0 : static_cast<std::size_t>(it - nodes.begin()) - 1;
    if (e + 1 >= nodes.size()) e = nodes.size() - 2;
    const double h = nodes[e + 1] - nodes[e];
    const double xi = (x - nodes[e]) / h;
    double v = 0.0;
    for (int side = 0; side < 2; ++side) {
        for (int a = 0; a < m; ++a) {
            v += derivs[e + static_cast<std::size_t>(side)][static_cast<std::size_t>(a)] * std::pow(h, a) *
                 basis.eval(side * m + a, xi, k);
        }
    }
    return v / std::pow(h, k);
}

}  // namespace polycap
