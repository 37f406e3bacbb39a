#include "wavegauge/connection.hpp"

#include <algorithm>
#include <cmath>

#include "wavegauge/errors.hpp"
#include "wavegauge/linalg.hpp"
#include "wavegauge/two_space.hpp"

namespace wavegauge {

namespace {

Matrix stiefel_A(const Chart& chart, int n, const Vector& xi, const Vector& dxi) {
    const Matrix z0 = frame_from_coordinates(chart, n, xi).matrix;
    // the coordinate frame is affine in xi: its differential is the frame of
    // the displacement with the identity block removed
    const Matrix dz0 = frame_from_coordinates(chart, n, dxi).matrix -
                       frame_from_coordinates(chart, n, Vector::Zero(dxi.size())).matrix;
    const Matrix gram = z0.adjoint() * z0;
    return gram.inverse() * (z0.adjoint() * dz0);
}

// seeded polynomial scalar 1-form on C^d: a(xi; dxi) = sum_k f_k(xi) dxi_k,
// f_k = c_k + sum_l M_kl xi_l + sum_l q_kl xi_l^2
struct ScalarPoly {
    Vector c;
    Matrix lin;
    Matrix quad;

    static ScalarPoly seeded(int d, Rng& rng, double scale) {
        ScalarPoly p;
        p.c = scale * rng.gaussian_matrix(d, 1).col(0);
        p.lin = scale * rng.gaussian_matrix(d, d);
        p.quad = 0.5 * scale * rng.gaussian_matrix(d, d);
        return p;
    }

    cxd coeff(int k, const Vector& xi) const {
        cxd value = c(k);
        for (int l = 0; l < xi.size(); ++l)
            value += lin(k, l) * xi(l) + quad(k, l) * xi(l) * xi(l);
        return value;
    }

    cxd eval(const Vector& xi, const Vector& dxi) const {
        cxd value = 0.0;
        for (int k = 0; k < xi.size(); ++k) value += coeff(k, xi) * dxi(k);
        return value;
    }

    // exact exterior derivative on a bivector
    cxd d(const Vector& xi, const Vector& d1, const Vector& d2) const {
        cxd value = 0.0;
        for (int k = 0; k < xi.size(); ++k)
            for (int l = 0; l < xi.size(); ++l) {
                const cxd dfk_l = lin(k, l) + 2.0 * quad(k, l) * xi(l);
                value += dfk_l * (d1(l) * d2(k) - d2(l) * d1(k));
            }
        return value;
    }
};

std::uint64_t chart_hash(const Chart& chart) {
    std::uint64_t h = 1469598103934665603ULL;
    for (int a : chart.indices) {
        h ^= static_cast<std::uint64_t>(a) + 1;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace

GaugeField GaugeField::stiefel_universal(int n, int m, double fd_step) {
    GaugeField field(CrossedModuleKind::GL_ADJ, m, n);
    field.fd_step_ = fd_step;
    field.a_ = [n](const Chart& chart, const Vector& xi, const Vector& dxi) {
        return stiefel_A(chart, n, xi, dxi);
    };
    field.eta_ = [n, m, fd_step](const Chart& chart, const Vector& xi_q, const Vector& xi_p,
                                 const Vector& dq, const Vector& dp) -> Matrix {
        const double norm = std::sqrt(dq.squaredNorm() + dp.squaredNorm());
        if (norm < 1e-300) return Matrix::Zero(m, m);
        const double s = fd_step / norm;
        const auto omega_at = [&](double shift) {
            const Projector q =
                projector_from_frame(frame_from_coordinates(chart, n, xi_q + shift * dq));
            const Projector p =
                projector_from_frame(frame_from_coordinates(chart, n, xi_p + shift * dp));
            return elementary_wave_op(q, p);
        };
        const Matrix domega = (omega_at(s) - omega_at(-s)) / (2.0 * s);
        const Projector q = projector_from_frame(frame_from_coordinates(chart, n, xi_q));
        const Projector p = projector_from_frame(frame_from_coordinates(chart, n, xi_p));
        const Matrix z0 = coordinate_matrix(chart, p).matrix;
        const Matrix omega_inv = p.matrix * q.matrix; // weak inverse
        const Matrix gram = z0.adjoint() * z0;
        return gram.inverse() * (z0.adjoint() * (omega_inv * domega) * z0);
    };
    field.eta_ij_ = [m](const Chart&, const Chart&, const Vector&, const Vector&) {
        return Matrix::Zero(m, m);
    };
    return field;
}

GaugeField GaugeField::central_abelian(int n, std::uint64_t seed) {
    GaugeField field(CrossedModuleKind::CENTRAL, 1, n);
    Rng rng(seed);
    const auto poly = ScalarPoly::seeded(n - 1, rng, 0.35);
    field.a_ = [poly](const Chart&, const Vector& xi, const Vector& dxi) {
        Matrix a(1, 1);
        a(0, 0) = poly.eval(xi, dxi);
        return a;
    };
    field.eta_ = [poly](const Chart&, const Vector& xi_q, const Vector& xi_p,
                        const Vector& dq, const Vector& dp) {
        Matrix e(1, 1);
        e(0, 0) = poly.eval(xi_q, dq) - poly.eval(xi_p, dp);
        return e;
    };
    field.eta_ij_ = [](const Chart&, const Chart&, const Vector&, const Vector&) {
        return Matrix::Zero(1, 1);
    };
    field.b_sph_ = [poly](const Chart&, const Vector& xi, const Vector& d1, const Vector& d2) {
        Matrix b(1, 1);
        b(0, 0) = poly.d(xi, d1, d2);
        return b;
    };
    return field;
}

GaugeField GaugeField::synthetic_per_chart(CrossedModuleKind kind, int n, int m,
                                           std::uint64_t seed) {
    GaugeField field(kind, m, n);
    field.a_ = [m, seed](const Chart& chart, const Vector& xi, const Vector& dxi) {
        Rng rng(seed ^ chart_hash(chart));
        const int d = static_cast<int>(xi.size());
        Matrix value = Matrix::Zero(m, m);
        for (int k = 0; k < d; ++k) {
            const Matrix coeff = 0.3 * rng.gaussian_matrix(m, m);
            const Matrix slope = 0.2 * rng.gaussian_matrix(m, m);
            value += (coeff + xi(k) * slope) * dxi(k);
        }
        return value;
    };
    field.eta_ = [m](const Chart&, const Vector&, const Vector&, const Vector&,
                     const Vector&) { return Matrix::Zero(m, m); };
    field.eta_ij_ = [m](const Chart&, const Chart&, const Vector&, const Vector&) {
        return Matrix::Zero(m, m);
    };
    return field;
}

Matrix GaugeField::A(const Chart& chart, const Vector& xi, const Vector& dxi) const {
    return a_(chart, xi, dxi);
}

Matrix GaugeField::eta(const Chart& chart, const Vector& xi_q, const Vector& xi_p,
                       const Vector& dq, const Vector& dp) const {
    return eta_(chart, xi_q, xi_p, dq, dp);
}

Matrix GaugeField::eta_ij(const Chart& i, const Chart& j, const Vector& xi,
                          const Vector& dxi) const {
    if (!eta_ij_) return Matrix::Zero(m(), m());
    return eta_ij_(i, j, xi, dxi);
}

Matrix GaugeField::b_sph(const Chart& chart, const Vector& xi, const Vector& d1,
                         const Vector& d2) const {
    if (!b_sph_) return Matrix::Zero(m(), m());
    return b_sph_(chart, xi, d1, d2);
}

AlgebraElement GaugeField::eta_bar(const Chart& chart, const Vector& xi_q,
                                   const Vector& xi_p, const PairTangent& d) const {
    return {eta_(chart, xi_q, xi_p, d.dq, d.dp), a_(chart, xi_p, d.dp)};
}

GaugeField GaugeField::with_A_defect(AFn defect) const {
    GaugeField field = *this;
    const AFn base = field.a_;
    field.a_ = [base, defect](const Chart& chart, const Vector& xi, const Vector& dxi) {
        return Matrix(base(chart, xi, dxi) + defect(chart, xi, dxi));
    };
    return field;
}

Matrix eval_A(const GaugeField& field, const Chart& chart, const Projector& p,
              const Vector& dxi) {
    return field.A(chart, chart_coordinates(chart, p), dxi);
}

Matrix eval_eta(const GaugeField& field, const Chart& chart, const Projector& q,
                const Projector& p, const Vector& dq, const Vector& dp) {
    if (!linkable(q, p)) throw NotLinkable("eval_eta: projectors not linkable");
    return field.eta(chart, chart_coordinates(chart, q), chart_coordinates(chart, p), dq, dp);
}

std::pair<Vector, Vector> pushforward(const Chart& from, const Chart& to, int n,
                                      const Vector& xi, const Vector& dxi) {
    const int m = from.rank();
    const Matrix z = frame_from_coordinates(from, n, xi).matrix;
    const Matrix dz = frame_from_coordinates(from, n, dxi).matrix -
                      frame_from_coordinates(from, n, Vector::Zero(dxi.size())).matrix;
    Matrix block(m, m), dblock(m, m);
    for (int a = 0; a < m; ++a) {
        block.row(a) = z.row(to.indices[a]);
        dblock.row(a) = dz.row(to.indices[a]);
    }
    Eigen::JacobiSVD<Matrix> svd(block);
    if (svd.singularValues()(m - 1) < 1e-12 * std::max(1.0, svd.singularValues()(0)))
        throw OutOfChart("pushforward: target chart block singular");
    const Matrix binv = block.inverse();
    const Matrix z_to = z * binv;
    const Matrix dz_to = dz * binv - z * binv * dblock * binv;

    std::vector<bool> in_set(n, false);
    for (int a : to.indices) in_set[a] = true;
    Vector xi_to(m * (n - m)), dxi_to(m * (n - m));
    int k = 0;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < n; ++b)
            if (!in_set[b]) {
                xi_to(k) = z_to(b, a);
                dxi_to(k) = dz_to(b, a);
                ++k;
            }
    return {xi_to, dxi_to};
}

Matrix g_transition_differential(const Chart& i, const Chart& j, int n, const Vector& xi,
                                 const Vector& dxi) {
    const int m = i.rank();
    const Matrix z = frame_from_coordinates(i, n, xi).matrix;
    const Matrix dz = frame_from_coordinates(i, n, dxi).matrix -
                      frame_from_coordinates(i, n, Vector::Zero(dxi.size())).matrix;
    Matrix block(m, m), dblock(m, m);
    for (int a = 0; a < m; ++a) {
        block.row(a) = z.row(j.indices[a]);
        dblock.row(a) = dz.row(j.indices[a]);
    }
    const Matrix binv = block.inverse();
    // g^ij(xi) = block(xi)^{-1}
    return -binv * dblock * binv;
}

Matrix potential_transformation(const GaugeField& field, const Chart& i, const Chart& j,
                                const Projector& p, const Vector& dxi) {
    if (i == j) return Matrix::Zero(field.m(), field.m());
    const Vector xi = chart_coordinates(i, p);
    const auto [xi_j, dxi_j] = pushforward(i, j, field.n(), xi, dxi);
    const Matrix aj = field.A(j, xi_j, dxi_j);
    const Matrix ai = field.A(i, xi, dxi);
    const Matrix g = g_transition(i, j, p);
    const Matrix gi = g.inverse();
    const Matrix dg = g_transition_differential(i, j, field.n(), xi, dxi);
    const Matrix defect = aj - gi * ai * g - gi * dg;
    return field.cm().t_lie_preimage(defect, 1e-6);
}

namespace {

using PairFormFn =
    std::function<AlgebraElement(const Vector&, const Vector&, const PairTangent&)>;

// directional derivative of a pair-space 1-form along `along`, evaluated on `eval`
AlgebraElement pair_form_derivative(const PairFormFn& form, const Vector& xi_q,
                                    const Vector& xi_p, const PairTangent& along,
                                    const PairTangent& eval, double step) {
    const double norm = std::sqrt(along.dq.squaredNorm() + along.dp.squaredNorm());
    const double s = step / std::max(norm, 1e-300);
    const AlgebraElement plus = form(xi_q + s * along.dq, xi_p + s * along.dp, eval);
    const AlgebraElement minus = form(xi_q - s * along.dq, xi_p - s * along.dp, eval);
    return {(plus.Y - minus.Y) / (2.0 * s), (plus.X - minus.X) / (2.0 * s)};
}

} // namespace

Matrix curving_bns(const GaugeField& field, const Chart& chart, const Vector& xi_q,
                   const Vector& xi_p, const PairTangent& d1, const PairTangent& d2,
                   double step) {
    const int m = field.m();
    const auto eta_form = [&](const Vector& q, const Vector& p,
                              const PairTangent& d) -> AlgebraElement {
        return {field.eta(chart, q, p, d.dq, d.dp), Matrix::Zero(m, m)};
    };
    const Matrix d_eta_12 = pair_form_derivative(eta_form, xi_q, xi_p, d1, d2, step).Y;
    const Matrix d_eta_21 = pair_form_derivative(eta_form, xi_q, xi_p, d2, d1, step).Y;
    const Matrix e1 = field.eta(chart, xi_q, xi_p, d1.dq, d1.dp);
    const Matrix e2 = field.eta(chart, xi_q, xi_p, d2.dq, d2.dp);
    const Matrix a1 = field.A(chart, xi_p, d1.dp);
    const Matrix a2 = field.A(chart, xi_p, d2.dp);
    return (d_eta_12 - d_eta_21) + (e1 * e2 - e2 * e1) + field.cm().alpha_lie(a1, e2) -
           field.cm().alpha_lie(a2, e1);
}

Matrix fake_curvature(const GaugeField& field, const Chart& chart, const Vector& xi,
                      const Vector& d1, const Vector& d2, double step) {
    const auto derivative = [&](const Vector& along, const Vector& eval) -> Matrix {
        const double s = step / std::max(along.norm(), 1e-300);
        return (field.A(chart, xi + s * along, eval) -
                field.A(chart, xi - s * along, eval)) /
               (2.0 * s);
    };
    const Matrix da = derivative(d1, d2) - derivative(d2, d1);
    const Matrix a1 = field.A(chart, xi, d1);
    const Matrix a2 = field.A(chart, xi, d2);
    return da + a1 * a2 - a2 * a1 - field.cm().t_lie(field.b_sph(chart, xi, d1, d2));
}

AlgebraElement fake_curvature_full(const GaugeField& field, const Chart& chart,
                                   const Vector& xi_q, const Vector& xi_p,
                                   const PairTangent& d1, const PairTangent& d2,
                                   double step) {
    const auto form = [&](const Vector& q, const Vector& p, const PairTangent& d) {
        return field.eta_bar(chart, q, p, d);
    };
    const AlgebraElement d12 = pair_form_derivative(form, xi_q, xi_p, d1, d2, step);
    const AlgebraElement d21 = pair_form_derivative(form, xi_q, xi_p, d2, d1, step);
    const AlgebraElement e1 = field.eta_bar(chart, xi_q, xi_p, d1);
    const AlgebraElement e2 = field.eta_bar(chart, xi_q, xi_p, d2);
    const AlgebraElement wedge = semidirect_bracket(field.cm(), e1, e2);
    return {d12.Y - d21.Y + wedge.Y, d12.X - d21.X + wedge.X};
}

Matrix three_curvature(const GaugeField& field, const Chart& chart, const Vector& xi_q,
                       const Vector& xi_p, const PairTangent& d1, const PairTangent& d2,
                       const PairTangent& d3, double step) {
    const int m = field.m();
    const auto term = [&](const PairTangent& e, const PairTangent& a, const PairTangent& b) {
        const Matrix eta_e = field.eta(chart, xi_q, xi_p, e.dq, e.dp);
        const AlgebraElement fbar = fake_curvature_full(field, chart, xi_q, xi_p, a, b, step);
        return semidirect_bracket(field.cm(), {eta_e, Matrix::Zero(m, m)}, fbar).Y;
    };
    return -(term(d1, d2, d3) - term(d2, d1, d3) + term(d3, d1, d2));
}

double bianchi_residual(const GaugeField& field, const Chart& chart, const Vector& xi_q,
                        const Vector& xi_p, const std::array<PairTangent, 4>& d,
                        double step) {
    const int m = field.m();
    const auto h_at = [&](const Vector& q, const Vector& p, const PairTangent& a,
                          const PairTangent& b, const PairTangent& c) {
        return three_curvature(field, chart, q, p, a, b, c, 0.5 * step);
    };
    Matrix d2h = Matrix::Zero(m, m);
    Matrix alpha_h = Matrix::Zero(m, m);
    for (int k = 0; k < 4; ++k) {
        std::array<PairTangent, 3> rest{};
        int idx = 0;
        for (int l = 0; l < 4; ++l)
            if (l != k) rest[idx++] = d[l];
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        const double norm = std::sqrt(d[k].dq.squaredNorm() + d[k].dp.squaredNorm());
        const double s = step / std::max(norm, 1e-300);
        const Matrix plus =
            h_at(xi_q + s * d[k].dq, xi_p + s * d[k].dp, rest[0], rest[1], rest[2]);
        const Matrix minus =
            h_at(xi_q - s * d[k].dq, xi_p - s * d[k].dp, rest[0], rest[1], rest[2]);
        d2h += sign * (plus - minus) / (2.0 * s);

        const Matrix a = field.A(chart, xi_p, d[k].dp);
        const Matrix h = h_at(xi_q, xi_p, rest[0], rest[1], rest[2]);
        alpha_h += sign * field.cm().alpha_lie(a, h);
    }
    const auto b_total = [&](const PairTangent& a, const PairTangent& b) {
        Matrix value = curving_bns(field, chart, xi_q, xi_p, a, b, 0.5 * step);
        if (field.has_b_sph()) value += field.b_sph(chart, xi_p, a.dp, b.dp);
        return value;
    };
    const auto fbar = [&](const PairTangent& a, const PairTangent& b) {
        return fake_curvature_full(field, chart, xi_q, xi_p, a, b, 0.5 * step);
    };
    const int shuffle[6][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2},
                               {1, 2, 0, 3}, {1, 3, 0, 2}, {2, 3, 0, 1}};
    const double sign[6] = {1.0, -1.0, 1.0, 1.0, -1.0, 1.0};
    Matrix bf = Matrix::Zero(m, m);
    for (int s = 0; s < 6; ++s) {
        const Matrix b = b_total(d[shuffle[s][0]], d[shuffle[s][1]]);
        const AlgebraElement f = fbar(d[shuffle[s][2]], d[shuffle[s][3]]);
        bf += sign[s] * semidirect_bracket(field.cm(), {b, Matrix::Zero(m, m)}, f).Y;
    }
    return (d2h + alpha_h + bf).norm();
}

GluingReport gluing_residuals(const GaugeField& field, const Chart& ci, const Chart& cj,
                              int samples, std::uint64_t seed) {
    GluingReport report;
    Rng rng(seed);
    const int n = field.n();
    const int m = field.m();
    const CrossedModule& cm = field.cm();
    const int dim = m * (n - m);

    Chart ck = ci;
    for (const auto& cand : all_charts(n, m))
        if (!(cand == ci) && !(cand == cj)) {
            ck = cand;
            break;
        }

    for (int s = 0; s < samples; ++s) {
        Projector x{Matrix(), m}, y{Matrix(), m};
        bool found = false;
        for (int attempt = 0; attempt < 200 && !found; ++attempt) {
            const Projector cand =
                random_projector(n, m, static_cast<std::uint64_t>(rng.uniform() * 1e15));
            if (!in_chart(ci, cand, 0.05) || !in_chart(cj, cand, 0.05) ||
                !in_chart(ck, cand, 0.05))
                continue;
            const Projector partner = random_projector_near(
                cand, 0.4, static_cast<std::uint64_t>(rng.uniform() * 1e15));
            if (!in_chart(ci, partner, 0.05) || !in_chart(cj, partner, 0.05)) continue;
            x = cand;
            y = partner;
            found = true;
        }
        if (!found) continue;
        ++report.samples;
        if (ci == cj) continue; // every residual is identically zero

        const Vector xi_x = chart_coordinates(ci, x);
        const Vector xi_y = chart_coordinates(ci, y);
        const Vector dp = rng.gaussian_matrix(dim, 1).col(0);
        const Vector dq = rng.gaussian_matrix(dim, 1).col(0);
        const PairTangent d1{dq, dp};
        const PairTangent d2{rng.gaussian_matrix(dim, 1).col(0),
                             rng.gaussian_matrix(dim, 1).col(0)};

        const Matrix g = g_transition(ci, cj, x);
        const Matrix gi = g.inverse();
        const Matrix dg = g_transition_differential(ci, cj, n, xi_x, dp);
        const auto [xj_x, dpj] = pushforward(ci, cj, n, xi_x, dp);
        const auto [xj_y, dqj] = pushforward(ci, cj, n, xi_y, dq);

        // 1. A-gluing with t^Lie(eta^ij)
        {
            const Matrix lhs = field.A(cj, xj_x, dpj);
            const Matrix rhs = gi * field.A(ci, xi_x, dp) * g + gi * dg +
                               cm.t_lie(field.eta_ij(ci, cj, xi_x, dp));
            report.a_gluing = std::max(report.a_gluing, (lhs - rhs).norm());
        }

        const Matrix h = h_transition(ci, cj, y, x);
        const Matrix hi = h.inverse();
        const auto d2h = [&](const PairTangent& d) -> Matrix {
            const double norm = std::sqrt(d.dq.squaredNorm() + d.dp.squaredNorm());
            const double fd = field.fd_step() / std::max(norm, 1e-300);
            const auto h_of = [&](double shift) {
                const Projector yy = projector_from_frame(
                    frame_from_coordinates(ci, n, xi_y + shift * d.dq));
                const Projector xx = projector_from_frame(
                    frame_from_coordinates(ci, n, xi_x + shift * d.dp));
                return h_transition(ci, cj, yy, xx);
            };
            return (h_of(fd) - h_of(-fd)) / (2.0 * fd);
        };

        // 2. eta_bar gluing with the t^Lie(eta^ij(x)) + eta^ij(y) - eta^ij(x) correction
        {
            const AlgebraElement lhs{field.eta(cj, xj_y, xj_x, dqj, dpj),
                                     field.A(cj, xj_x, dpj)};
            const AlgebraElement ebar_i = field.eta_bar(ci, xi_y, xi_x, d1);
            const Matrix q_h_inv = cm.alpha(gi, hi);
            const AlgebraElement conjugated = adjoint(cm, q_h_inv, gi, ebar_i);
            const Matrix dh = d2h(d1);
            const AlgebraElement maurer{gi * (hi * dh) * g, gi * dg};
            const Matrix eij_y = field.eta_ij(ci, cj, xi_y, dq);
            const Matrix eij_x = field.eta_ij(ci, cj, xi_x, dp);
            const AlgebraElement corr{eij_y - eij_x, cm.t_lie(eij_x)};
            const double res =
                std::sqrt((lhs.Y - conjugated.Y - maurer.Y - corr.Y).squaredNorm() +
                          (lhs.X - conjugated.X - maurer.X - corr.X).squaredNorm());
            report.eta_bar_gluing = std::max(report.eta_bar_gluing, res);
        }

        // 3. eta gluing (the alpha_{g^ij} form)
        {
            const Matrix lhs = cm.alpha(g, field.eta(cj, xj_y, xj_x, dqj, dpj));
            const Matrix e_i = field.eta(ci, xi_y, xi_x, dq, dp);
            const Matrix a_x = field.A(ci, xi_x, dp);
            const Matrix dh = d2h(d1);
            const Matrix eij_y = field.eta_ij(ci, cj, xi_y, dq);
            const Matrix eij_x = field.eta_ij(ci, cj, xi_x, dp);
            const Matrix rhs = hi * e_i * h + hi * dh + hi * (a_x * h - h * a_x) +
                               cm.alpha(g, Matrix(eij_y - eij_x));
            report.eta_gluing = std::max(report.eta_gluing, (lhs - rhs).norm());
        }

        // 4. B_ns gluing
        {
            const auto pj2 = pushforward(ci, cj, n, xi_x, d2.dp);
            const auto qj2 = pushforward(ci, cj, n, xi_y, d2.dq);
            const Vector& dpj2 = pj2.second;
            const Vector& dqj2 = qj2.second;
            const Matrix lhs =
                curving_bns(field, cj, xj_y, xj_x, {dqj, dpj}, {dqj2, dpj2});
            const Matrix b_i = curving_bns(field, ci, xi_y, xi_x, d1, d2);
            const Matrix f_x = fake_curvature(field, ci, xi_x, d1.dp, d2.dp);
            Matrix rhs = cm.alpha(gi, Matrix(hi * b_i * h + hi * (f_x * h - h * f_x)));
            // eta^ij correction terms (identically zero for the built-in fields)
            const auto eij = [&](const Vector& base, const Vector& eval) {
                return field.eta_ij(ci, cj, base, eval);
            };
            const double fd = 10.0 * field.fd_step();
            const auto d_eij = [&](const Vector& base, const Vector& a,
                                   const Vector& b) -> Matrix {
                const double sa = fd / std::max(a.norm(), 1e-300);
                const double sb = fd / std::max(b.norm(), 1e-300);
                const Matrix dab = (eij(base + sa * a, b) - eij(base - sa * a, b)) / (2 * sa);
                const Matrix dba = (eij(base + sb * b, a) - eij(base - sb * b, a)) / (2 * sb);
                return dab - dba;
            };
            const Matrix aj1 = field.A(cj, xj_x, dpj);
            const Matrix aj2 = field.A(cj, xj_x, dpj2);
            const auto alpha_wedge = [&](const Matrix& w1, const Matrix& w2) -> Matrix {
                return cm.alpha_lie(aj1, w2) - cm.alpha_lie(aj2, w1);
            };
            const Matrix ey1 = eij(xi_y, dq), ey2 = eij(xi_y, d2.dq);
            const Matrix ex1 = eij(xi_x, dp), ex2 = eij(xi_x, d2.dp);
            rhs += d_eij(xi_y, dq, d2.dq) + alpha_wedge(ey1, ey2) - (ey1 * ey2 - ey2 * ey1);
            rhs -= d_eij(xi_x, dp, d2.dp) + alpha_wedge(ex1, ex2) - (ex1 * ex2 - ex2 * ex1);
            const Matrix ei1 = field.eta(ci, xi_y, xi_x, d1.dq, d1.dp);
            const Matrix ei2 = field.eta(ci, xi_y, xi_x, d2.dq, d2.dp);
            rhs += (ei1 * ey2 - ey2 * ei1) - (ei2 * ey1 - ey1 * ei2);
            report.bns_gluing = std::max(report.bns_gluing, (lhs - rhs).norm());
        }

        // 5. triple-overlap relation of eta^ij
        {
            const Matrix gij = g_transition(ci, cj, x);
            const Matrix gjk = g_transition(cj, ck, x);
            const Matrix gik = g_transition(ci, ck, x);
            const Matrix hijk = gik * (gij * gjk).inverse();
            const Matrix eij = field.eta_ij(ci, cj, xi_x, dp);
            const auto [xj, dpjx] = pushforward(ci, cj, n, xi_x, dp);
            const Matrix ejk = field.eta_ij(cj, ck, xj, dpjx);
            const Matrix eik = field.eta_ij(ci, ck, xi_x, dp);
            const Matrix lhs = cm.alpha(gij, eij) + cm.alpha(gij * gjk, ejk) -
                               hijk.inverse() * cm.alpha(gik, eik) * hijk;
            const double fd = field.fd_step() / std::max(dp.norm(), 1e-300);
            const auto hijk_at = [&](double shift) -> Matrix {
                const Projector xx = projector_from_frame(
                    frame_from_coordinates(ci, n, xi_x + shift * dp));
                const Matrix a = g_transition(ci, cj, xx);
                const Matrix b = g_transition(cj, ck, xx);
                const Matrix c = g_transition(ci, ck, xx);
                return c * (a * b).inverse();
            };
            const Matrix dhijk = (hijk_at(fd) - hijk_at(-fd)) / (2.0 * fd);
            const Matrix a_x = field.A(ci, xi_x, dp);
            const Matrix rhs =
                hijk.inverse() * dhijk + hijk.inverse() * (a_x * hijk - hijk * a_x);
            report.eta_ij_triple = std::max(report.eta_ij_triple, (lhs - rhs).norm());
        }
    }
    return report;
}

} // namespace wavegauge
