#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <utility>

#include "wavegauge/bundle.hpp"
#include "wavegauge/crossed_module.hpp"
#include "wavegauge/grassmann.hpp"

namespace wavegauge {

/// Tangent of the pair space U^i x U^i at (Q, P), as chart-coordinate
/// displacements of the target and source.
struct PairTangent {
    Vector dq;
    Vector dp;
};

/// Chart-indexed 1-form evaluators of a 2-connection: A valued in g on
/// points, eta valued in h on linkable pairs, plus the declared
/// potential-transformation eta^ij and optional spherical curving B_sph.
class GaugeField {
public:
    using AFn = std::function<Matrix(const Chart&, const Vector&, const Vector&)>;
    using EtaFn = std::function<Matrix(const Chart&, const Vector&, const Vector&,
                                       const Vector&, const Vector&)>;
    using EtaIJFn =
        std::function<Matrix(const Chart&, const Chart&, const Vector&, const Vector&)>;
    using B2Fn =
        std::function<Matrix(const Chart&, const Vector&, const Vector&, const Vector&)>;

    /// Universal connection of the Stiefel 2-bundle:
    ///   A^i = (Z0^dag Z0)^{-1} Z0^dag dZ0    (exact; Z0 affine in coordinates)
    ///   eta^i = (Z0^dag Z0)^{-1} Z0^dag (Omega^{-1} d2 Omega) Z0  (central FD)
    /// eta^ij = 0 (the universal A glues equivariantly).
    static GaugeField stiefel_universal(int n, int m, double fd_step = 1e-5);

    /// Self-consistent abelian CENTRAL instance on G_1(C^n): a seeded
    /// polynomial scalar 1-form a with A = a, eta(y,x) = a(y) - a(x) and
    /// B_sph = da, so that F = dA - t(B_sph) = 0.
    static GaugeField central_abelian(int n, std::uint64_t seed);

    /// Per-chart uncorrelated synthetic A fields (no gluing relation by
    /// construction); negative-control material.
    static GaugeField synthetic_per_chart(CrossedModuleKind kind, int n, int m,
                                          std::uint64_t seed);

    const CrossedModule& cm() const { return cm_; }
    int n() const { return n_; }
    int m() const { return cm_.dim(); }
    double fd_step() const { return fd_step_; }

    Matrix A(const Chart& chart, const Vector& xi, const Vector& dxi) const;
    Matrix eta(const Chart& chart, const Vector& xi_q, const Vector& xi_p, const Vector& dq,
               const Vector& dp) const;
    Matrix eta_ij(const Chart& i, const Chart& j, const Vector& xi, const Vector& dxi) const;
    Matrix b_sph(const Chart& chart, const Vector& xi, const Vector& d1,
                 const Vector& d2) const;
    bool has_b_sph() const { return static_cast<bool>(b_sph_); }

    /// eta_bar = A(source) + eta, as an element of the semidirect sum.
    AlgebraElement eta_bar(const Chart& chart, const Vector& xi_q, const Vector& xi_p,
                           const PairTangent& d) const;

    GaugeField with_A_defect(AFn defect) const;

private:
    GaugeField(CrossedModuleKind kind, int m, int n) : cm_(kind, m), n_(n) {}

    CrossedModule cm_;
    int n_;
    double fd_step_ = 1e-5;
    AFn a_;
    EtaFn eta_;
    EtaIJFn eta_ij_;
    B2Fn b_sph_;
};

/// A^i(P; dxi) for a projector in the chart.
Matrix eval_A(const GaugeField& field, const Chart& chart, const Projector& p,
              const Vector& dxi);

/// eta^i(Q, P; dQ, dP).
Matrix eval_eta(const GaugeField& field, const Chart& chart, const Projector& q,
                const Projector& p, const Vector& dq, const Vector& dp);

/// Coordinate change between charts: (xi^j, dxi^j) from (xi^i, dxi^i),
/// differentiated exactly.
std::pair<Vector, Vector> pushforward(const Chart& from, const Chart& to, int n,
                                      const Vector& xi, const Vector& dxi);

/// Exact differential of g^ij along a chart-i displacement.
Matrix g_transition_differential(const Chart& i, const Chart& j, int n, const Vector& xi,
                                 const Vector& dxi);

/// eta^ij with t^Lie(eta^ij) = A^j - g^{-1} A^i g - g^{-1} dg, computed from
/// the field's evaluators (analytic g and dg). Throws NotInImage when the
/// defect leaves t^Lie(h).
Matrix potential_transformation(const GaugeField& field, const Chart& i, const Chart& j,
                                const Projector& p, const Vector& dxi);

/// Nonspherical curving B_ns = d2 eta + eta ^ eta + alpha^Lie_A(eta),
/// antisymmetric in (d1, d2). Derivatives by central differences with
/// `step` (relative).
Matrix curving_bns(const GaugeField& field, const Chart& chart, const Vector& xi_q,
                   const Vector& xi_p, const PairTangent& d1, const PairTangent& d2,
                   double step = 5e-4);

/// Fake curvature F = dA + A ^ A - t^Lie(B_sph) on the base.
Matrix fake_curvature(const GaugeField& field, const Chart& chart, const Vector& xi,
                      const Vector& d1, const Vector& d2, double step = 5e-4);

/// Full fake curvature on the pair space: F_bar = d2 eta_bar + eta_bar ^ eta_bar.
AlgebraElement fake_curvature_full(const GaugeField& field, const Chart& chart,
                                   const Vector& xi_q, const Vector& xi_p,
                                   const PairTangent& d1, const PairTangent& d2,
                                   double step = 5e-4);

/// 3-curvature H = -[eta, F_bar], an h-valued 3-form on the pair space.
Matrix three_curvature(const GaugeField& field, const Chart& chart, const Vector& xi_q,
                       const Vector& xi_p, const PairTangent& d1, const PairTangent& d2,
                       const PairTangent& d3, double step = 5e-4);

/// || d2 H + alpha^Lie_A(H) + [B, F_bar] || on a 4-tuple of tangents.
double bianchi_residual(const GaugeField& field, const Chart& chart, const Vector& xi_q,
                        const Vector& xi_p, const std::array<PairTangent, 4>& d,
                        double step = 2e-2);

struct GluingReport {
    double a_gluing = 0.0;       // A^j = g^-1 A^i g + g^-1 dg + t^Lie(eta^ij)
    double eta_bar_gluing = 0.0; // q^-1 eta_bar q + q^-1 d2 q + correction
    double eta_gluing = 0.0;     // the alpha_{g^ij} form
    double bns_gluing = 0.0;
    double eta_ij_triple = 0.0;  // triple-overlap relation of eta^ij
    int samples = 0;
};

GluingReport gluing_residuals(const GaugeField& field, const Chart& i, const Chart& j,
                              int samples, std::uint64_t seed);

} // namespace wavegauge
