#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wavegauge/crossed_module.hpp"
#include "wavegauge/errors.hpp"
#include "wavegauge/linalg.hpp"

using namespace wavegauge;

namespace {

Matrix m2(cxd a, cxd b, cxd c, cxd d) {
    Matrix m(2, 2);
    m << a, b, c, d;
    return m;
}

Arrow2 random_arrow(const CrossedModule& cm, Rng& rng) {
    Matrix h = rng.invertible_matrix(cm.dim());
    if (cm.kind() == CrossedModuleKind::CENTRAL)
        h = rng.gaussian_complex() * Matrix::Identity(cm.dim(), cm.dim());
    return {h, rng.invertible_matrix(cm.dim())};
}

} // namespace

TEST_CASE("horizontal compose: identity arrows") {
    CrossedModule cm(CrossedModuleKind::GL_ADJ, 2);
    Rng rng(11);
    const Matrix g = rng.invertible_matrix(2);
    const Matrix gp = rng.invertible_matrix(2);
    const Arrow2 prod = horizontal_compose(cm, identity_arrow(cm, g), identity_arrow(cm, gp));
    CHECK(rel_error(prod.h, cm.identity_H()) < 1e-14);
    CHECK(rel_error(prod.g, g * gp) < 1e-14);
}

TEST_CASE("horizontal compose: arrows over the unit object multiply in H") {
    CrossedModule cm(CrossedModuleKind::GL_ADJ, 2);
    Rng rng(12);
    const Matrix h = rng.invertible_matrix(2);
    const Matrix hp = rng.invertible_matrix(2);
    const Matrix one = cm.identity_G();
    const Arrow2 prod = horizontal_compose(cm, {h, one}, {hp, one});
    CHECK(rel_error(prod.h, h * hp) < 1e-14);
    CHECK(rel_error(prod.g, one) < 1e-14);
}

TEST_CASE("horizontal compose: direct 2x2 arithmetic") {
    CrossedModule cm(CrossedModuleKind::GL_ADJ, 2);
    const Matrix h = m2(1, 1, 0, 1);
    const Matrix g = m2(2, 0, 0, 1);
    const Matrix hp = m2(1, 0, 1, 1);
    const Matrix gp = Matrix::Identity(2, 2);
    const Arrow2 prod = horizontal_compose(cm, {h, g}, {hp, gp});
    // oracle: h * (g hp g^-1) by hand arithmetic
    const Matrix expected_h = m2(1.5, 1, 0.5, 1);
    CHECK(rel_error(prod.h, expected_h) < 1e-14);
    CHECK(rel_error(prod.g, g) < 1e-14);
}

TEST_CASE("vertical compose: identity on target and inverse") {
    CrossedModule cm(CrossedModuleKind::GL_ADJ, 2);
    Rng rng(13);
    const Arrow2 a = random_arrow(cm, rng);
    const Arrow2 id_target = identity_arrow(cm, arrow_target(cm, a));
    const Arrow2 same = vertical_compose(cm, id_target, a);
    CHECK(rel_error(same.h, a.h) < 1e-12);
    CHECK(rel_error(same.g, a.g) < 1e-12);

    const Arrow2 inv = arrow_inverse_vertical(cm, a);
    const Arrow2 unit = vertical_compose(cm, inv, a);
    CHECK(rel_error(unit.h, cm.identity_H()) < 1e-12);
    CHECK(rel_error(unit.g, a.g) < 1e-12);
}

TEST_CASE("vertical compose: endpoint mismatch raises") {
    CrossedModule cm(CrossedModuleKind::GL_ADJ, 2);
    Rng rng(14);
    const Arrow2 a = random_arrow(cm, rng);
    Arrow2 b = random_arrow(cm, rng);
    b.g = a.g; // not the target of a
    CHECK_THROWS_AS(vertical_compose(cm, b, a), CompositionMismatch);
}

TEST_CASE("groupoid laws: associativity and units") {
    CrossedModule cm(CrossedModuleKind::GL_ADJ, 2);
    Rng rng(15);
    for (int trial = 0; trial < 50; ++trial) {
        const Arrow2 a1 = random_arrow(cm, rng);
        Arrow2 a2 = random_arrow(cm, rng);
        a2.g = arrow_target(cm, a1);
        Arrow2 a3 = random_arrow(cm, rng);
        a3.g = arrow_target(cm, a2);
        const Arrow2 left = vertical_compose(cm, a3, vertical_compose(cm, a2, a1));
        const Arrow2 right = vertical_compose(cm, vertical_compose(cm, a3, a2), a1);
        CHECK(rel_error(left.h, right.h) < 1e-12);
        CHECK(rel_error(left.g, right.g) < 1e-12);

        const Arrow2 lu = vertical_compose(cm, identity_arrow(cm, arrow_target(cm, a1)), a1);
        const Arrow2 ru = vertical_compose(cm, a1, identity_arrow(cm, a1.source()));
        CHECK(rel_error(lu.h, a1.h) < 1e-12);
        CHECK(rel_error(ru.h, a1.h) < 1e-12);
    }
}

TEST_CASE("exchange law") {
    for (auto kind : {CrossedModuleKind::GL_ADJ, CrossedModuleKind::CENTRAL}) {
        CrossedModule cm(kind, 2);
        Rng rng(16);
        for (int trial = 0; trial < 100; ++trial) {
            const Arrow2 a12 = random_arrow(cm, rng);
            const Arrow2 a22 = random_arrow(cm, rng);
            Arrow2 a11 = random_arrow(cm, rng);
            a11.g = arrow_target(cm, a12);
            Arrow2 a21 = random_arrow(cm, rng);
            a21.g = arrow_target(cm, a22);

            const Arrow2 lhs = horizontal_compose(cm, vertical_compose(cm, a11, a12),
                                                  vertical_compose(cm, a21, a22));
            const Arrow2 rhs = vertical_compose(cm, horizontal_compose(cm, a11, a21),
                                                horizontal_compose(cm, a12, a22));
            CHECK(rel_error(lhs.h, rhs.h) < 1e-10);
            CHECK(rel_error(lhs.g, rhs.g) < 1e-10);
        }
    }
}

TEST_CASE("verify_crossed_module: built-in instances pass") {
    for (auto kind : {CrossedModuleKind::GL_ADJ, CrossedModuleKind::CENTRAL}) {
        CrossedModule cm(kind, 2);
        const auto report = verify_crossed_module(cm, 100, 7);
        CHECK(report.max_equivariance_residual <= 1e-10);
        CHECK(report.max_peiffer_residual <= 1e-10);
    }
}

TEST_CASE("verify_crossed_module: corrupted action is flagged") {
    CrossedModule corrupted(CrossedModuleKind::GL_ADJ, 2,
                            [](const Matrix&, const Matrix& h) { return h; });
    const auto report = verify_crossed_module(corrupted, 100, 7);
    CHECK(report.max_equivariance_residual > 1e-3);
    CHECK(report.max_peiffer_residual > 1e-3);
}

TEST_CASE("semidirect bracket: pure and mixed parts") {
    CrossedModule cm(CrossedModuleKind::GL_ADJ, 2);
    Rng rng(17);
    const Matrix x = rng.gaussian_matrix(2, 2);
    const Matrix xp = rng.gaussian_matrix(2, 2);
    const Matrix y = rng.gaussian_matrix(2, 2);
    const Matrix yp = rng.gaussian_matrix(2, 2);
    const Matrix zero = Matrix::Zero(2, 2);

    const AlgebraElement gg = semidirect_bracket(cm, {zero, x}, {zero, xp});
    CHECK(rel_error(gg.X, x * xp - xp * x) < 1e-14);
    CHECK(gg.Y.norm() < 1e-14);

    const AlgebraElement hh = semidirect_bracket(cm, {y, zero}, {yp, zero});
    CHECK(rel_error(hh.Y, y * yp - yp * y) < 1e-14);
    CHECK(hh.X.norm() < 1e-14);

    // [X, Y]_s = alpha^Lie_X(Y)
    const AlgebraElement mixed = semidirect_bracket(cm, {zero, x}, {y, zero});
    CHECK(rel_error(mixed.Y, cm.alpha_lie(x, y)) < 1e-14);
    CHECK(mixed.X.norm() < 1e-14);
}

TEST_CASE("semidirect bracket: Jacobi identity") {
    for (auto kind : {CrossedModuleKind::GL_ADJ, CrossedModuleKind::CENTRAL}) {
        CrossedModule cm(kind, 2);
        Rng rng(18);
        for (int trial = 0; trial < 30; ++trial) {
            auto elem = [&]() -> AlgebraElement {
                Matrix y = rng.gaussian_matrix(2, 2);
                if (kind == CrossedModuleKind::CENTRAL)
                    y = rng.gaussian_complex() * Matrix::Identity(2, 2);
                return {y, rng.gaussian_matrix(2, 2)};
            };
            const AlgebraElement a = elem(), b = elem(), c = elem();
            const AlgebraElement j1 = semidirect_bracket(cm, a, semidirect_bracket(cm, b, c));
            const AlgebraElement j2 = semidirect_bracket(cm, b, semidirect_bracket(cm, c, a));
            const AlgebraElement j3 = semidirect_bracket(cm, c, semidirect_bracket(cm, a, b));
            CHECK((j1.Y + j2.Y + j3.Y).norm() < 1e-10);
            CHECK((j1.X + j2.X + j3.X).norm() < 1e-10);
        }
    }
}

TEST_CASE("t^Lie equivariance at algebra level") {
    CrossedModule cm(CrossedModuleKind::GL_ADJ, 3);
    Rng rng(19);
    for (int trial = 0; trial < 30; ++trial) {
        const Matrix x = rng.gaussian_matrix(3, 3);
        const Matrix y = rng.gaussian_matrix(3, 3);
        const Matrix lhs = cm.t_lie(cm.alpha_lie(x, y));
        const Matrix rhs = x * cm.t_lie(y) - cm.t_lie(y) * x;
        CHECK(rel_error(lhs, rhs) < 1e-12);
    }
}

TEST_CASE("adjoint: identity, center, composition law") {
    CrossedModule cm(CrossedModuleKind::GL_ADJ, 2);
    Rng rng(20);
    const AlgebraElement x{rng.gaussian_matrix(2, 2), rng.gaussian_matrix(2, 2)};

    const AlgebraElement same = adjoint(cm, cm.identity_H(), cm.identity_G(), x);
    CHECK(rel_error(same.Y, x.Y) < 1e-14);
    CHECK(rel_error(same.X, x.X) < 1e-14);

    CrossedModule central(CrossedModuleKind::CENTRAL, 2);
    const Matrix hs = cxd(0.3, 1.2) * Matrix::Identity(2, 2);
    const AlgebraElement ys{cxd(2.0, -1.0) * Matrix::Identity(2, 2), Matrix::Zero(2, 2)};
    const AlgebraElement fixed = adjoint(central, hs, rng.invertible_matrix(2), ys);
    CHECK(rel_error(fixed.Y, ys.Y) < 1e-12);

    // compose-then-apply vs apply-twice
    for (int trial = 0; trial < 30; ++trial) {
        const Matrix h1 = rng.invertible_matrix(2), g1 = rng.invertible_matrix(2);
        const Matrix h2 = rng.invertible_matrix(2), g2 = rng.invertible_matrix(2);
        const AlgebraElement twice = adjoint(cm, h2, g2, adjoint(cm, h1, g1, x));
        const AlgebraElement once = adjoint(cm, h2 * cm.alpha(g2, h1), g2 * g1, x);
        CHECK(rel_error(twice.Y, once.Y) < 1e-9);
        CHECK(rel_error(twice.X, once.X) < 1e-9);
    }
}

TEST_CASE("mat_exp basics") {
    CHECK(rel_error(mat_exp(Matrix::Zero(3, 3)), Matrix::Identity(3, 3)) < 1e-15);

    Matrix d = Matrix::Zero(2, 2);
    d(0, 0) = cxd(0.4, 0.0);
    d(1, 1) = cxd(-1.2, 0.7);
    Matrix ed = Matrix::Zero(2, 2);
    ed(0, 0) = std::exp(d(0, 0));
    ed(1, 1) = std::exp(d(1, 1));
    CHECK(rel_error(mat_exp(d), ed) < 1e-14);

    Matrix n = Matrix::Zero(2, 2);
    n(0, 1) = 1.0;
    CHECK(rel_error(mat_exp(n), Matrix::Identity(2, 2) + n) < 1e-14);
}

TEST_CASE("mat_log round trip and branch failure") {
    Rng rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix g = rng.invertible_matrix(3, 3.0);
        CHECK(rel_error(mat_exp(mat_log(g)), g) < 1e-10);
    }
    const Matrix neg = -Matrix::Identity(2, 2);
    CHECK_THROWS_AS(mat_log(neg), BranchFailure);
}
