#pragma once

#include <cstddef>
#include <vector>

#include "polycap/rational.hpp"

namespace polycap {

/// Hermite basis of degree 2m-1 on [0, 1]. Index side*m + a interpolates the
/// a-th derivative at the left (side 0) or right (side 1) end.
class HermiteBasis {
public:
    explicit HermiteBasis(int m);

    int m() const { return m_; }
    int size() const { return 2 * m_; }
    const RationalPoly& poly(int idx) const { return polys_.at(static_cast<std::size_t>(idx)); }
    double eval(int idx, double xi, int k) const;
    /// ∫_0^1 ψ_i^{(k)} ψ_j^{(k)} dξ, computed exactly.
    const std::vector<std::vector<double>>& gram(int k) const { return gram_.at(static_cast<std::size_t>(k)); }

private:
    int m_;
    std::vector<RationalPoly> polys_;
    std::vector<std::vector<double>> coeffs_;  // double copies of polys_ and their derivatives, flattened by k
    std::vector<std::vector<std::vector<double>>> gram_;
};

/// Shared immutable basis per m.
const HermiteBasis& hermite_basis(int m);

/// Largest |r| over roots r of Σ_k (-1)^k c_k r^{2k}: the fastest exponential
/// rate of minimizers. Zero when only c_0 is nonzero.
double fastest_rate(const std::vector<double>& c);

struct MeshOptions {
    double h0 = 0.01;         ///< element size at both ends
    double grading = 1.05;    ///< growth ratio of consecutive elements
    double h_max = 0.1;
    std::size_t max_elements = 400000;
};

/// Symmetric graded mesh of [0, length] in local coordinates, refined toward both ends.
std::vector<double> graded_mesh(double length, const MeshOptions& opts);

/// Uniform bisection of every element.
std::vector<double> bisect(const std::vector<double>& nodes);

/// Minimizer of Σ_k c_k ∫ (v^{(k)})² over C^{m-1} piecewise Hermite functions on
/// the given nodes with prescribed derivatives 0..m-1 at both ends.
struct GapSolution {
    double energy = 0.0;
    std::vector<double> nodes;
    std::vector<std::vector<double>> derivs;  ///< derivs[i][a] = v^{(a)}(nodes[i])
};

/// c has m+1 entries; left/right have m entries each. Assembly, banded Cholesky
/// and the energy integral run in quad precision.
GapSolution solve_gap(const std::vector<double>& c, const std::vector<double>& nodes, const std::vector<double>& left,
                      const std::vector<double>& right);

/// Dense assembly of the same system (all node DOFs, physical scaling); used
/// as an independent check of the banded path.
std::vector<std::vector<double>> assemble_dense(const std::vector<double>& c, const std::vector<double>& nodes);

/// Energy of a piecewise Hermite function, element by element.
double hermite_energy(const std::vector<double>& c, const std::vector<double>& nodes,
                      const std::vector<std::vector<double>>& derivs);

/// v^{(k)}(x) for a piecewise Hermite function; x is clamped to the node range.
double hermite_eval(const std::vector<double>& nodes, const std::vector<std::vector<double>>& derivs, double x, int k);

}  // namespace polycap
