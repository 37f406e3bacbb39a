#include "wavegauge/simplicial.hpp"

#include <algorithm>
#include <cmath>

#include "wavegauge/errors.hpp"
#include "wavegauge/linalg.hpp"

namespace wavegauge {

namespace {

// 3-point Gauss-Legendre on [0, 1]
constexpr double kGL3Node[3] = {0.1127016653792583, 0.5, 0.8872983346207417};
constexpr double kGL3Weight[3] = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};

int tuple_sign(std::vector<int>& tuple) {
    // insertion sort with sign tracking; repeated vertices give sign 0
    int sign = 1;
    for (std::size_t i = 1; i < tuple.size(); ++i)
        for (std::size_t j = i; j > 0 && tuple[j] < tuple[j - 1]; --j) {
            std::swap(tuple[j], tuple[j - 1]);
            sign = -sign;
        }
    for (std::size_t i = 1; i < tuple.size(); ++i)
        if (tuple[i] == tuple[i - 1]) return 0;
    return sign;
}

} // namespace

Triangulation Triangulation::regular(const Point2& lo, const Point2& hi, int nx, int ny) {
    Triangulation tri;
    const double dx = (hi.x() - lo.x()) / nx;
    const double dy = (hi.y() - lo.y()) / ny;
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            tri.vertices.push_back({lo.x() + i * dx, lo.y() + j * dy});
    const auto at = [nx](int i, int j) { return j * (nx + 1) + i; };
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            tri.triangles.push_back({at(i, j), at(i + 1, j), at(i + 1, j + 1)});
            tri.triangles.push_back({at(i, j), at(i + 1, j + 1), at(i, j + 1)});
        }
    tri.epsilon = std::sqrt(dx * dx + dy * dy);
    return tri;
}

Triangulation Triangulation::upper_left(const Point2& lo, const Point2& hi, int nx, int ny) {
    Triangulation tri;
    const double dx = (hi.x() - lo.x()) / nx;
    const double dy = (hi.y() - lo.y()) / ny;
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            tri.vertices.push_back({lo.x() + i * dx, lo.y() + j * dy});
    const auto at = [nx](int i, int j) { return j * (nx + 1) + i; };
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            tri.triangles.push_back({at(i, j), at(i + 1, j + 1), at(i, j + 1)});
    tri.epsilon = std::sqrt(dx * dx + dy * dy);
    return tri;
}

Matrix Cochain::value(const std::vector<int>& tuple) const {
    if (static_cast<int>(tuple.size()) != degree_ + 1)
        throw DimensionMismatch("Cochain::value: tuple size != degree + 1");
    std::vector<int> sorted = tuple;
    const int sign = tuple_sign(sorted);
    if (sign == 0) {
        const Matrix probe = eval_(std::vector<int>(degree_ + 1, tuple[0]));
        return Matrix::Zero(probe.rows(), probe.cols());
    }
    return static_cast<double>(sign) * eval_(sorted);
}

Cochain de_rham(const Triangulation& tri, const Form0& form) {
    return {0, &tri, [&tri, form](const std::vector<int>& t) {
                return form(tri.vertices[t[0]]);
            }};
}

Cochain de_rham(const Triangulation& tri, const Form1& form) {
    return {1, &tri, [&tri, form](const std::vector<int>& t) {
                const Point2 a = tri.vertices[t[0]];
                const Point2 b = tri.vertices[t[1]];
                const Point2 tangent = b - a;
                Matrix sum;
                for (int k = 0; k < 3; ++k) {
                    const Point2 x = a + kGL3Node[k] * tangent;
                    const Matrix v = form(x, tangent);
                    sum = (k == 0) ? Matrix(kGL3Weight[k] * v) : Matrix(sum + kGL3Weight[k] * v);
                }
                return sum;
            }};
}

Cochain de_rham(const Triangulation& tri, const Form2& form) {
    return {2, &tri, [&tri, form](const std::vector<int>& t) {
                const Point2 v0 = tri.vertices[t[0]];
                const Point2 v1 = tri.vertices[t[1]];
                const Point2 v2 = tri.vertices[t[2]];
                const Point2 e1 = v1 - v0;
                const Point2 e2 = v2 - v0;
                // edge-midpoint rule, exact through quadratics
                const Point2 m01 = 0.5 * (v0 + v1);
                const Point2 m12 = 0.5 * (v1 + v2);
                const Point2 m02 = 0.5 * (v0 + v2);
                const Matrix sum = form(m01, e1, e2) + form(m12, e1, e2) + form(m02, e1, e2);
                return Matrix(sum / 6.0); // (1/3 each) x (1/2 triangle factor)
            }};
}

Cochain cobord(const Cochain& w) {
    const int p = w.degree();
    return {p + 1, w.triangulation(), [w, p](const std::vector<int>& t) {
                Matrix sum;
                for (int j = 0; j <= p + 1; ++j) {
                    std::vector<int> face;
                    face.reserve(p + 1);
                    for (int k = 0; k <= p + 1; ++k)
                        if (k != j) face.push_back(t[k]);
                    const Matrix v = w.value(face);
                    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
                    sum = (j == 0) ? Matrix(sign * v) : Matrix(sum + sign * v);
                }
                return sum;
            }};
}

Cochain cup(const Cochain& w, const Cochain& e) {
    const int p = w.degree();
    const int q = e.degree();
    const int total = p + q + 1;
    double norm = 1.0;
    for (int k = 2; k <= total; ++k) norm *= k;
    return {p + q, w.triangulation(), [w, e, p, q, total, norm](const std::vector<int>& t) {
                std::vector<int> perm(total);
                for (int k = 0; k < total; ++k) perm[k] = k;
                Matrix sum;
                bool first = true;
                do {
                    // permutation sign by inversion count
                    int inversions = 0;
                    for (int a = 0; a < total; ++a)
                        for (int b = a + 1; b < total; ++b)
                            if (perm[a] > perm[b]) ++inversions;
                    const double sign = (inversions % 2 == 0) ? 1.0 : -1.0;
                    std::vector<int> left(p + 1), right(q + 1);
                    for (int k = 0; k <= p; ++k) left[k] = t[perm[k]];
                    for (int k = 0; k <= q; ++k) right[k] = t[perm[p + k]];
                    const Matrix a = w.value(left);
                    const Matrix b = e.value(right);
                    const Matrix bracket = a * b - b * a;
                    sum = first ? Matrix(sign * bracket) : Matrix(sum + sign * bracket);
                    first = false;
                } while (std::next_permutation(perm.begin(), perm.end()));
                return Matrix(sum / norm);
            }};
}

Matrix bch2(const Matrix& a, const Matrix& b) {
    return a + b + 0.5 * (a * b - b * a);
}

namespace {

// log of the triangle holonomy product; splits the simplex once when the log
// hits the branch cut
Matrix triangle_log(const std::function<Matrix(const Point2&, const Point2&)>& edge_exp,
                    const Point2& v0, const Point2& v1, const Point2& v2, int depth) {
    const Matrix p = edge_exp(v1, v2) * edge_exp(v0, v2).inverse() * edge_exp(v0, v1);
    try {
        return mat_log(p);
    } catch (const BranchFailure&) {
        if (depth >= 2) throw;
        const Point2 m01 = 0.5 * (v0 + v1);
        const Point2 m12 = 0.5 * (v1 + v2);
        const Point2 m02 = 0.5 * (v0 + v2);
        Matrix best = triangle_log(edge_exp, v0, m01, m02, depth + 1);
        const Matrix candidates[3] = {triangle_log(edge_exp, m01, v1, m12, depth + 1),
                                      triangle_log(edge_exp, m02, m12, v2, depth + 1),
                                      triangle_log(edge_exp, m01, m12, m02, depth + 1)};
        for (const auto& c : candidates)
            if (c.norm() > best.norm()) best = c;
        return best;
    }
}

} // namespace

RefinementReport discrete_cartan_residual(const Form1& alpha, const Point2& lo,
                                          const Point2& hi,
                                          const std::vector<int>& subdivisions,
                                          double fd_step) {
    RefinementReport report;
    const Form2 beta = [&alpha, fd_step](const Point2& x, const Point2& t1,
                                         const Point2& t2) -> Matrix {
        const auto dd = [&](const Point2& along, const Point2& eval) -> Matrix {
            const double s = fd_step / std::max(along.norm(), 1e-300);
            return (alpha(x + s * along, eval) - alpha(x - s * along, eval)) / (2.0 * s);
        };
        const Matrix da = dd(t1, t2) - dd(t2, t1);
        const Matrix a1 = alpha(x, t1);
        const Matrix a2 = alpha(x, t2);
        return da + a1 * a2 - a2 * a1;
    };

    for (int k : subdivisions) {
        const Triangulation tri = Triangulation::regular(lo, hi, k, k);
        const Cochain r_alpha = de_rham(tri, alpha);
        const Cochain r_beta = de_rham(tri, beta);
        double worst = 0.0;
        for (const auto& t : tri.triangles) {
            const Matrix a = r_alpha.value({t[0], t[1]});
            const Matrix b = r_alpha.value({t[0], t[2]});
            const Matrix c = r_alpha.value({t[1], t[2]});
            Matrix logp;
            try {
                logp = mat_log(mat_exp(c) * mat_exp(-b) * mat_exp(a));
            } catch (const BranchFailure&) {
                // auto-split: measure on the four half-scale children instead
                const Point2 v0 = tri.vertices[t[0]];
                const Point2 v1 = tri.vertices[t[1]];
                const Point2 v2 = tri.vertices[t[2]];
                const auto exp_edge = [&](const Point2& from, const Point2& to) {
                    Matrix sum;
                    const Point2 tangent = to - from;
                    for (int g = 0; g < 3; ++g) {
                        const Matrix v = alpha(from + kGL3Node[g] * tangent, tangent);
                        sum = (g == 0) ? Matrix(kGL3Weight[g] * v)
                                       : Matrix(sum + kGL3Weight[g] * v);
                    }
                    return mat_exp(sum);
                };
                logp = triangle_log(exp_edge, v0, v1, v2, 0);
            }
            const Matrix rb = r_beta.value({t[0], t[1], t[2]});
            worst = std::max(worst, (logp - rb).norm());
        }
        report.epsilons.push_back(tri.epsilon);
        report.residuals.push_back(worst);
    }
    report.fitted_order = fit_log_slope(report.epsilons, report.residuals);
    return report;
}

RefinementReport curving_product_check(const GaugeField& field, const Chart& chart,
                                       const CurveFn& y_curve, const CurveFn& x_curve,
                                       const std::vector<int>& levels) {
    RefinementReport report;
    // pullback forms on the (s, u) parameter square: s drives the target
    // curve y, u drives the source curve x
    const Form1 eta_tilde = [&](const Point2& p, const Point2& t) {
        const auto [yq, vq] = y_curve(p.x());
        const auto [xp, vp] = x_curve(p.y());
        return field.eta(chart, yq, xp, Vector(t.x() * vq), Vector(t.y() * vp));
    };
    const Form1 a_tilde = [&](const Point2& p, const Point2& t) {
        const auto [xp, vp] = x_curve(p.y());
        return field.A(chart, xp, Vector(t.y() * vp));
    };
    const Form1 eta_bar = [&](const Point2& p, const Point2& t) {
        return Matrix(eta_tilde(p, t) + a_tilde(p, t));
    };
    const Form2 bns_tilde = [&](const Point2& p, const Point2& t1, const Point2& t2) {
        const auto [yq, vq] = y_curve(p.x());
        const auto [xp, vp] = x_curve(p.y());
        const PairTangent d1{Vector(t1.x() * vq), Vector(t1.y() * vp)};
        const PairTangent d2{Vector(t2.x() * vq), Vector(t2.y() * vp)};
        return curving_bns(field, chart, yq, xp, d1, d2);
    };

    for (int k : levels) {
        const Triangulation tri =
            Triangulation::upper_left(Point2(0, 0), Point2(1, 1), k, k);
        const Cochain r_eta = de_rham(tri, eta_tilde);
        const Cochain r_ebar = de_rham(tri, eta_bar);
        const Cochain r_bns = de_rham(tri, bns_tilde);
        double worst = 0.0;
        for (const auto& t : tri.triangles) {
            // the 12 edge keeps the source fixed, so R(eta)_12 = R(eta_bar)_12;
            // the middle factor must stay a single exponential of eta_bar or a
            // [R(eta), R(A)]/2 defect enters at second order
            const Matrix product = mat_exp(r_eta.value({t[1], t[2]})) *
                                   mat_exp(Matrix(-r_ebar.value({t[0], t[2]}))) *
                                   mat_exp(r_ebar.value({t[0], t[1]}));
            const Matrix rb = r_bns.value({t[0], t[1], t[2]});
            worst = std::max(worst, (mat_log(product) - rb).norm());
        }
        report.epsilons.push_back(tri.epsilon);
        report.residuals.push_back(worst);
    }
    report.fitted_order = fit_log_slope(report.epsilons, report.residuals);
    return report;
}

} // namespace wavegauge
