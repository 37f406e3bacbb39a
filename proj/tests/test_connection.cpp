#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wavegauge/connection.hpp"
#include "wavegauge/errors.hpp"
#include "wavegauge/linalg.hpp"
#include "wavegauge/two_space.hpp"

using namespace wavegauge;

namespace {

Vector cvec(std::initializer_list<cxd> values) {
    Vector v(static_cast<int>(values.size()));
    int k = 0;
    for (cxd x : values) v(k++) = x;
    return v;
}

} // namespace

TEST_CASE("eval_A: zero, closed form, linearity") {
    const auto field = GaugeField::stiefel_universal(2, 1);
    const Chart c{{0}};
    const cxd coord(0.7, -0.4);
    const Projector p = projector_from_frame(frame_from_coordinates(c, 2, cvec({coord})));

    CHECK(eval_A(field, c, p, cvec({0.0})).norm() < 1e-14);

    // Z0 = (1, c)^T: A = conj(c) dc / (1 + |c|^2)
    const cxd dc(0.3, 0.1);
    const Matrix a = eval_A(field, c, p, cvec({dc}));
    const cxd expected = std::conj(coord) * dc / (1.0 + std::norm(coord));
    CHECK(std::abs(a(0, 0) - expected) < 1e-12);

    const Vector d1 = cvec({cxd(0.2, -0.5)});
    const Vector d2 = cvec({cxd(-0.1, 0.9)});
    const cxd ca(1.3, -0.2), cb(0.4, 0.8);
    const Matrix lin = eval_A(field, c, p, ca * d1 + cb * d2);
    const Matrix split = ca * eval_A(field, c, p, d1) + cb * eval_A(field, c, p, d2);
    CHECK(rel_error(lin, split) < 1e-12);
}

TEST_CASE("eval_eta: zero tangents, diagonal consistency, Richardson stability") {
    const auto field = GaugeField::stiefel_universal(2, 1);
    const Chart c{{0}};
    const Projector q = projector_from_frame(frame_from_coordinates(c, 2, cvec({cxd(0.5, 0.2)})));
    const Projector p = projector_from_frame(frame_from_coordinates(c, 2, cvec({cxd(0.1, -0.3)})));

    CHECK(eval_eta(field, c, q, p, cvec({0.0}), cvec({0.0})).norm() < 1e-12);

    // eta(x, x; d, d) = 0 so eta_bar on the diagonal reduces to A
    const Vector d = cvec({cxd(0.25, 0.1)});
    const Matrix eta_diag = eval_eta(field, c, p, p, d, d);
    CHECK(eta_diag.norm() < 1e-8);
    const Matrix a = eval_A(field, c, p, d);
    const AlgebraElement eb =
        field.eta_bar(c, chart_coordinates(c, p), chart_coordinates(c, p), {d, d});
    CHECK(rel_error(eb.Y + eb.X, a) < 1e-8);

    // step halving changes the value only at FD order
    const auto coarse = GaugeField::stiefel_universal(2, 1, 2e-5);
    const auto fine = GaugeField::stiefel_universal(2, 1, 1e-5);
    const Vector dq = cvec({cxd(0.3, -0.2)});
    const Vector dp = cvec({cxd(-0.15, 0.45)});
    const Matrix v1 = eval_eta(coarse, c, q, p, dq, dp);
    const Matrix v2 = eval_eta(fine, c, q, p, dq, dp);
    CHECK(rel_error(v1, v2) < 1e-4);
    CHECK(v1.norm() > 1e-4); // non-trivial value
}

TEST_CASE("potential transformation: i=j, Stiefel residual, CENTRAL negative control") {
    const auto field = GaugeField::stiefel_universal(3, 1);
    const Chart c0{{0}}, c1{{1}};
    const Projector p = projector_from_frame(
        frame_from_coordinates(c0, 3, cvec({cxd(0.8, 0.1), cxd(-0.3, 0.5)})));
    const Vector d = cvec({cxd(0.2, -0.1), cxd(0.4, 0.3)});

    CHECK(potential_transformation(field, c0, c0, p, d).norm() < 1e-14);

    // the universal A glues with eta^ij = 0, so the defect itself vanishes
    const Matrix eta01 = potential_transformation(field, c0, c1, p, d);
    CHECK(eta01.norm() < 1e-8);

    // per-chart synthetic CENTRAL field: defect leaves the scalars
    const auto bad = GaugeField::synthetic_per_chart(CrossedModuleKind::CENTRAL, 3, 2, 3);
    const Chart b0{{0, 1}}, b1{{0, 2}};
    const Projector pb = random_projector(3, 2, 9);
    const Vector db = cvec({cxd(0.3, 0.0), cxd(0.0, 0.2)});
    REQUIRE(in_chart(b0, pb));
    REQUIRE(in_chart(b1, pb));
    CHECK_THROWS_AS(potential_transformation(bad, b0, b1, pb, db), NotInImage);
}

TEST_CASE("pushforward consistency: A^j equals the transformed A^i") {
    const auto field = GaugeField::stiefel_universal(3, 1);
    const Chart c0{{0}}, c1{{1}};
    Rng rng(71);
    for (int trial = 0; trial < 10; ++trial) {
        const Projector p = random_projector(3, 1, 400 + trial);
        if (!in_chart(c0, p) || !in_chart(c1, p)) continue;
        const Vector xi = chart_coordinates(c0, p);
        const Vector d = rng.gaussian_matrix(2, 1).col(0);
        const auto [xi1, d1] = pushforward(c0, c1, 3, xi, d);
        const Matrix aj = field.A(c1, xi1, d1);
        const Matrix g = g_transition(c0, c1, p);
        const Matrix dg = g_transition_differential(c0, c1, 3, xi, d);
        const Matrix rhs = g.inverse() * field.A(c0, xi, d) * g + g.inverse() * dg;
        CHECK(rel_error(aj, rhs) < 1e-10);
    }
}

TEST_CASE("curving: antisymmetry and abelian reduction to d2 eta") {
    const auto field = GaugeField::stiefel_universal(3, 1);
    const Chart c{{0}};
    const Vector xi_q = cvec({cxd(0.4, 0.2), cxd(-0.1, 0.3)});
    const Vector xi_p = cvec({cxd(0.1, -0.2), cxd(0.2, 0.1)});
    Rng rng(72);
    const PairTangent d1{rng.gaussian_matrix(2, 1).col(0), rng.gaussian_matrix(2, 1).col(0)};
    const PairTangent d2{rng.gaussian_matrix(2, 1).col(0), rng.gaussian_matrix(2, 1).col(0)};

    const Matrix b12 = curving_bns(field, c, xi_q, xi_p, d1, d2);
    const Matrix b21 = curving_bns(field, c, xi_q, xi_p, d2, d1);
    CHECK(rel_error(b12, Matrix(-b21)) < 1e-8);
    CHECK(curving_bns(field, c, xi_q, xi_p, d1, d1).norm() < 1e-10);

    // abelian CENTRAL: B_ns = d2 eta exactly (known closed form)
    const auto central = GaugeField::central_abelian(3, 11);
    const Matrix b = curving_bns(central, c, xi_q, xi_p, d1, d2);
    // oracle: d2 eta = da(y; dq1, dq2) - da(x; dp1, dp2), via the declared B_sph = da
    const Matrix oracle = central.b_sph(c, xi_q, d1.dq, d2.dq) -
                          central.b_sph(c, xi_p, d1.dp, d2.dp);
    CHECK(rel_error(b, oracle) < 1e-6);
}

TEST_CASE("fake curvature: m=1 Stiefel matches FD of A; antisymmetry") {
    const Chart c{{0}};
    const Vector xi = cvec({cxd(0.3, 0.1), cxd(-0.2, 0.4)});
    Rng rng(73);
    const Vector d1 = rng.gaussian_matrix(2, 1).col(0);
    const Vector d2 = rng.gaussian_matrix(2, 1).col(0);

    // m=1 Stiefel: F = dA, cross-checked against a second-order FD of eval_A
    const auto stiefel = GaugeField::stiefel_universal(3, 1);
    const Matrix f = fake_curvature(stiefel, c, xi, d1, d2, 1e-4);
    const double h = 1e-5;
    const auto a_at = [&](const Vector& point, const Vector& dd) {
        return stiefel.A(c, point, dd);
    };
    const Matrix da = ((a_at(xi + h * d1, d2) - a_at(xi - h * d1, d2)) / (2 * h)) -
                      ((a_at(xi + h * d2, d1) - a_at(xi - h * d2, d1)) / (2 * h));
    CHECK(rel_error(f, da) < 1e-6);

    const auto field = GaugeField::synthetic_per_chart(CrossedModuleKind::GL_ADJ, 3, 1, 21);
    CHECK(rel_error(fake_curvature(field, c, xi, d1, d2),
                    Matrix(-fake_curvature(field, c, xi, d2, d1))) < 1e-8);
}

TEST_CASE("decomposition: F_bar parts match F and B_ns") {
    const auto field = GaugeField::stiefel_universal(2, 1);
    const Chart c{{0}};
    const Vector xi_q = cvec({cxd(0.5, -0.1)});
    const Vector xi_p = cvec({cxd(-0.2, 0.3)});
    Rng rng(74);
    const PairTangent d1{rng.gaussian_matrix(1, 1).col(0), rng.gaussian_matrix(1, 1).col(0)};
    const PairTangent d2{rng.gaussian_matrix(1, 1).col(0), rng.gaussian_matrix(1, 1).col(0)};

    const AlgebraElement fbar = fake_curvature_full(field, c, xi_q, xi_p, d1, d2);
    const Matrix bns = curving_bns(field, c, xi_q, xi_p, d1, d2);
    const Matrix f = fake_curvature(field, c, xi_p, d1.dp, d2.dp);
    CHECK(rel_error(fbar.Y, bns) < 1e-5);
    CHECK(rel_error(fbar.X, f) < 1e-5);
}

TEST_CASE("Bianchi residual decreases with the FD step") {
    // m = 2 keeps the 3-curvature non-abelian (it vanishes identically at m = 1)
    const auto field = GaugeField::stiefel_universal(3, 2);
    const Chart c{{0, 1}};
    const Vector xi_q = cvec({cxd(0.4, 0.1), cxd(0.0, 0.25)});
    const Vector xi_p = cvec({cxd(0.05, -0.15), cxd(0.3, 0.05)});
    Rng rng(75);
    std::array<PairTangent, 4> d{};
    for (auto& t : d)
        t = {rng.gaussian_matrix(2, 1).col(0), rng.gaussian_matrix(2, 1).col(0)};

    std::vector<double> steps{8e-2, 4e-2, 2e-2};
    std::vector<double> residuals;
    for (double s : steps)
        residuals.push_back(bianchi_residual(field, c, xi_q, xi_p, d, s));
    const double slope = fit_log_slope(steps, residuals);
    CHECK(slope >= 1.0);
}

TEST_CASE("gluing residuals: Stiefel A-gluing tight, i=j zero, defect flagged") {
    const auto field = GaugeField::stiefel_universal(3, 1);
    const Chart c0{{0}}, c1{{1}};

    const auto same = gluing_residuals(field, c0, c0, 5, 3);
    CHECK(same.a_gluing == 0.0);
    CHECK(same.eta_bar_gluing == 0.0);
    CHECK(same.eta_gluing == 0.0);
    CHECK(same.bns_gluing == 0.0);
    CHECK(same.eta_ij_triple == 0.0);

    const auto report = gluing_residuals(field, c0, c1, 10, 5);
    CHECK(report.samples > 0);
    CHECK(report.a_gluing <= 1e-7);
    CHECK(report.eta_ij_triple <= 1e-6);

    // injected gauge defect in one chart breaks the A-gluing
    const auto broken = field.with_A_defect(
        [](const Chart& chart, const Vector&, const Vector& dxi) -> Matrix {
            Matrix value = Matrix::Zero(1, 1);
            if (chart.indices[0] == 1) value(0, 0) = 0.5 * dxi(0);
            return value;
        });
    const auto flagged = gluing_residuals(broken, c0, c1, 10, 5);
    CHECK(flagged.a_gluing > 1e-3);
}

TEST_CASE("frame relation: A(Q) = g^-1 eta g + g^-1 A(P) g + g^-1 dg along a curve") {
    // the W0 g^-1 = Omega Z0 gauge of the universal connection
    const auto field = GaugeField::stiefel_universal(2, 1);
    const Chart c{{0}};
    const int n = 2;
    const auto xi_p_of = [](double t) { return cvec({cxd(0.1 + 0.2 * t, -0.1 * t)}); };
    const auto xi_q_of = [](double t) { return cvec({cxd(0.4 * t, 0.3 + 0.1 * t)}); };

    const auto g_of = [&](double t) -> Matrix {
        const Vector xq = xi_q_of(t), xp = xi_p_of(t);
        const Projector q = projector_from_frame(frame_from_coordinates(c, n, xq));
        const Projector p = projector_from_frame(frame_from_coordinates(c, n, xp));
        const Matrix z0 = coordinate_matrix(c, p).matrix;
        const Matrix w0 = coordinate_matrix(c, q).matrix;
        const Matrix omega = elementary_wave_op(q, p);
        const Matrix ginv =
            (w0.adjoint() * w0).inverse() * (w0.adjoint() * (omega * z0));
        return ginv.inverse();
    };

    const double t0 = 0.3, dt = 1e-5;
    const Vector xq = xi_q_of(t0), xp = xi_p_of(t0);
    const Vector dq = (xi_q_of(t0 + dt) - xi_q_of(t0 - dt)) / (2 * dt);
    const Vector dp = (xi_p_of(t0 + dt) - xi_p_of(t0 - dt)) / (2 * dt);
    const Matrix g = g_of(t0);
    const Matrix dg = (g_of(t0 + dt) - g_of(t0 - dt)) / (2 * dt);
    const Matrix gi = g.inverse();

    const Matrix a_q = field.A(c, xq, dq);
    const Matrix a_p = field.A(c, xp, dp);
    const Matrix eta = field.eta(c, xq, xp, dq, dp);
    const Matrix rhs = gi * eta * g + gi * a_p * g + gi * dg;
    CHECK((a_q - rhs).norm() <= 1e-6);
}
