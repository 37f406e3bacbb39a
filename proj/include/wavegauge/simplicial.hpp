#pragma once

#include <array>
#include <functional>
#include <vector>

#include "wavegauge/connection.hpp"
#include "wavegauge/types.hpp"

namespace wavegauge {

using Point2 = Eigen::Vector2d;
/// matrix-valued forms on a 2-parameter patch
using Form0 = std::function<Matrix(const Point2&)>;
using Form1 = std::function<Matrix(const Point2&, const Point2&)>;
using Form2 = std::function<Matrix(const Point2&, const Point2&, const Point2&)>;

/// Regular right-triangle subdivision of a parameter rectangle. Triangles are
/// stored positively oriented; epsilon is the longest edge length.
struct Triangulation {
    std::vector<Point2> vertices;
    std::vector<std::array<int, 3>> triangles;
    double epsilon = 0.0;

    static Triangulation regular(const Point2& lo, const Point2& hi, int nx, int ny);
    /// Only the (v, v + dx + dy, v + dy) half of each cell; used where the
    /// third vertex must mix the two boundary curves of a pair-space patch.
    static Triangulation upper_left(const Point2& lo, const Point2& hi, int nx, int ny);
};

/// Antisymmetric matrix-valued function on vertex tuples of a triangulation.
/// Values are produced by a canonical-order evaluator; antisymmetry under
/// transpositions is exact by construction.
class Cochain {
public:
    using Eval = std::function<Matrix(const std::vector<int>&)>;

    Cochain(int degree, const Triangulation* tri, Eval eval)
        : degree_(degree), tri_(tri), eval_(std::move(eval)) {}

    int degree() const { return degree_; }
    const Triangulation* triangulation() const { return tri_; }

    /// Value on an arbitrary tuple of p+1 vertex indices.
    Matrix value(const std::vector<int>& tuple) const;

private:
    int degree_;
    const Triangulation* tri_;
    Eval eval_; // called with a strictly increasing tuple
};

/// de Rham map: point evaluation, 3-point Gauss-Legendre edge quadrature, or
/// 3-point barycentric triangle quadrature of the pullback form.
Cochain de_rham(const Triangulation& tri, const Form0& form);
Cochain de_rham(const Triangulation& tri, const Form1& form);
Cochain de_rham(const Triangulation& tri, const Form2& form);

/// (delta w)_{u0...u_{p+1}} = sum_j (-1)^j w_{...without u_j...}
Cochain cobord(const Cochain& w);

/// Bracket cup product with the shared-vertex convention,
/// (w u e)_{u0..u_{p+q}} = 1/(p+q+1)! sum_sigma sgn [w_{sigma(0..p)}, e_{sigma(p..p+q)}].
Cochain cup(const Cochain& w, const Cochain& e);

/// a + b + [a,b]/2; second-order Baker-Campbell-Hausdorff. Accurate only for
/// ||a||, ||b|| well below 0.5.
Matrix bch2(const Matrix& a, const Matrix& b);

struct RefinementReport {
    std::vector<double> epsilons;
    std::vector<double> residuals; // max over simplices per level
    double fitted_order = 0.0;
};

/// Per-level max of || log(e^{Ra_12} e^{-Ra_02} e^{Ra_01}) - R(da + a^a)_012 ||
/// over the triangles of refining meshes of [lo, hi]; da by central FD.
RefinementReport discrete_cartan_residual(const Form1& alpha, const Point2& lo,
                                          const Point2& hi,
                                          const std::vector<int>& subdivisions,
                                          double fd_step = 1e-5);

/// Curve in chart coordinates: t -> (point, velocity).
using CurveFn = std::function<std::pair<Vector, Vector>(double)>;

/// Per-triangle residual of
///   e^{R(eta_bar)_12} e^{-R(eta_bar)_02} e^{R(eta_bar)_01} vs e^{R(B_ns)_012}
/// on the pair-space patch (y(s), x(u)), using the upper-left triangles whose
/// mixed vertex is (y(s0), x(u1)). On those triangles R(A)_12 = 0 and the
/// pullback of F integrates to zero, so the Cartan product of eta_bar closes
/// on B_ns alone.
RefinementReport curving_product_check(const GaugeField& field, const Chart& chart,
                                       const CurveFn& y_curve, const CurveFn& x_curve,
                                       const std::vector<int>& levels);

} // namespace wavegauge
