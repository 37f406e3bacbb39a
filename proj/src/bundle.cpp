#include "wavegauge/bundle.hpp"

#include <algorithm>
#include <cmath>

#include "wavegauge/errors.hpp"
#include "wavegauge/linalg.hpp"

namespace wavegauge {

Frame phi(const Chart& chart, const Projector& p, const Matrix& g) {
    const Frame z0 = coordinate_matrix(chart, p); // throws OutOfChart
    return {z0.matrix * g};
}

std::pair<Projector, Matrix> phi_bar(const Chart& chart, const Frame& z) {
    const Projector p = projector_from_frame(z); // throws RankDeficient
    const Frame z0 = coordinate_matrix(chart, p);
    const Matrix gram = z0.matrix.adjoint() * z0.matrix;
    return {p, gram.inverse() * (z0.matrix.adjoint() * z.matrix)};
}

Matrix g_transition(const Chart& i, const Chart& j, const Projector& p) {
    const Matrix z0i = coordinate_matrix(i, p).matrix;
    const Matrix z0j = coordinate_matrix(j, p).matrix;
    const Matrix gram = z0i.adjoint() * z0i;
    return gram.inverse() * (z0i.adjoint() * z0j);
}

Matrix h_transition(const Chart& i, const Chart& j, const Projector& q, const Projector& p) {
    if (!linkable(q, p)) throw NotLinkable("h_transition: projectors not linkable");
    const Matrix w0i = coordinate_matrix(i, q).matrix;
    const Matrix w0j = coordinate_matrix(j, q).matrix;
    const Matrix z0i = coordinate_matrix(i, p).matrix;
    const Matrix z0j = coordinate_matrix(j, p).matrix;
    const Matrix wgram = w0i.adjoint() * w0i;
    const Matrix zgram = z0j.adjoint() * z0j;
    return wgram.inverse() * (w0i.adjoint() * w0j) * zgram.inverse() * (z0j.adjoint() * z0i);
}

Frame right_action(const Matrix& h, const Matrix& g, const Frame& z) {
    (void)h; // objects only feel the G part
    return {z.matrix * g};
}

Arrow2 right_action(const CrossedModule& cm, const Matrix& h, const Matrix& g,
                    const Arrow2& arrow) {
    return {arrow.h * cm.alpha(arrow.g, h), arrow.g * g};
}

TransitionData::TransitionData(CrossedModuleKind kind, int n, int m)
    : cm_(kind, m), n_(n), m_(m), charts_(all_charts(n, m)) {}

TransitionData TransitionData::stiefel(CrossedModuleKind kind, int n, int m) {
    TransitionData data(kind, n, m);
    data.k_ = [m](int, const Projector&) { return Matrix::Identity(m, m); };
    return data;
}

TransitionData TransitionData::twisted(CrossedModuleKind kind, int n, int m,
                                       std::uint64_t seed) {
    TransitionData data(kind, n, m);
    // one smooth H-valued twist per chart: k^i(x) = exp(s(x) K_i)
    const int charts = static_cast<int>(data.charts_.size());
    std::vector<Matrix> gens;
    gens.reserve(charts);
    Rng rng(seed);
    for (int c = 0; c < charts; ++c) {
        if (kind == CrossedModuleKind::CENTRAL)
            gens.push_back(0.3 * rng.gaussian_complex() * Matrix::Identity(m, m));
        else
            gens.push_back(0.3 * rng.gaussian_matrix(m, m));
    }
    data.k_ = [gens](int i, const Projector& x) {
        const double s = 0.5 + 0.25 * x.matrix(0, 0).real();
        return mat_exp(s * gens[i]);
    };
    return data;
}

Matrix TransitionData::k(int i, const Projector& x) const { return k_(i, x); }

Matrix TransitionData::g(int i, int j, const Projector& x) const {
    Matrix value = cm_.t(k_(i, x)) * g_transition(charts_[i], charts_[j], x);
    if (i == g_defect_i_ && j == g_defect_k_) value = g_defect_ * value;
    return value;
}

Matrix TransitionData::h(int i, int j, const Projector& y, const Projector& x) const {
    Matrix value = k_(i, y) * h_transition(charts_[i], charts_[j], y, x) * k_(i, x).inverse();
    if (h_defect_ && i != j) value = h_defect_(i, j, y, x) * value;
    return value;
}

Matrix TransitionData::h2(int i, int j, int /*kk*/, const Projector& x) const {
    // k^i alpha_{g0^ij}(k^j^{-1}) k^i^{-1}: the twist of the trivial cocycle
    const Matrix g0ij = g_transition(charts_[i], charts_[j], x);
    const Matrix ki = k_(i, x);
    return ki * cm_.alpha(g0ij, k_(j, x).inverse()) * ki.inverse();
}

void TransitionData::inject_g_defect(int i, int k, const Matrix& d) {
    g_defect_i_ = i;
    g_defect_k_ = k;
    g_defect_ = d;
}

Matrix two_transition(const TransitionData& data, int i, int j, int k, const Projector& p) {
    const Matrix gik = data.g(i, k, p);
    const Matrix gij = data.g(i, j, p);
    const Matrix gjk = data.g(j, k, p);
    const Matrix defect = gik * (gij * gjk).inverse();
    return data.cm().t_lie_preimage(defect, 1e-8);
}

double BundleReport::max_residual() const {
    return std::max({g_ii, g_ji, th_g, h_ii, h_cocycle, h2_cocycle});
}

namespace {

// seeded projector guaranteed to sit in at least `want` charts
Projector sample_covered(const TransitionData& data, Rng& rng, int want,
                         std::vector<int>* hit_charts) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        const Projector p = random_projector(
            data.n(), data.m(), static_cast<std::uint64_t>(rng.uniform() * 1e15));
        std::vector<int> hits;
        for (std::size_t c = 0; c < data.charts().size(); ++c) {
            try {
                coordinate_matrix(data.charts()[c], p);
                hits.push_back(static_cast<int>(c));
            } catch (const OutOfChart&) {
            }
        }
        if (static_cast<int>(hits.size()) >= want) {
            if (hit_charts) *hit_charts = hits;
            return p;
        }
    }
    throw NoChartCover("sample_covered: no projector with the requested chart cover");
}

} // namespace

BundleReport verify_bundle_identities(const TransitionData& data, int samples,
                                      std::uint64_t seed) {
    BundleReport report;
    Rng rng(seed);
    const auto& cm = data.cm();
    for (int s = 0; s < samples; ++s) {
        std::vector<int> hits;
        const Projector x = sample_covered(
            data, rng, std::min<int>(4, static_cast<int>(data.charts().size())), &hits);
        // linkable partner covered by the same charts
        Projector y = x;
        for (int attempt = 0; attempt < 100; ++attempt) {
            const Projector cand = random_projector_near(
                x, 0.5, static_cast<std::uint64_t>(rng.uniform() * 1e15));
            bool ok = true;
            for (int c : hits) {
                try {
                    coordinate_matrix(data.charts()[c], cand);
                } catch (const OutOfChart&) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                y = cand;
                break;
            }
        }
        const int nh = static_cast<int>(hits.size());
        const int i = hits[0], j = hits[1 % nh], kk = hits[2 % nh], l = hits[3 % nh];

        report.g_ii = std::max(report.g_ii, rel_error(data.g(i, i, x), cm.t(data.k(i, x))));
        report.g_ji =
            std::max(report.g_ji,
                     rel_error(data.g(j, i, x), cm.t(data.k(j, x)) * data.g(i, j, x).inverse() *
                                                    cm.t(data.k(i, x))));
        report.th_g = std::max(report.th_g, rel_error(cm.t(data.h(i, j, y, x)) * data.g(i, j, x),
                                                      data.g(i, j, y)));
        report.h_ii = std::max(
            report.h_ii, rel_error(data.h(i, i, y, x), data.k(i, y) * data.k(i, x).inverse()));
        {
            const Matrix lhs =
                data.h(i, j, y, x) * cm.alpha(data.g(i, j, x), data.h(j, kk, y, x));
            const Matrix rhs =
                data.h2(i, j, kk, y).inverse() * data.h(i, kk, y, x) * data.h2(i, j, kk, x);
            report.h_cocycle = std::max(report.h_cocycle, rel_error(lhs, rhs));
        }
        {
            const Matrix lhs =
                data.h2(i, j, l, x) * cm.alpha(data.g(i, j, x), data.h2(j, kk, l, x));
            const Matrix rhs = data.h2(i, kk, l, x) * data.h2(i, j, kk, x);
            report.h2_cocycle = std::max(report.h2_cocycle, rel_error(lhs, rhs));
        }
        ++report.samples;
    }
    return report;
}

} // namespace wavegauge
