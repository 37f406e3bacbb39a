#include "wavegauge/grassmann.hpp"

#include <algorithm>
#include <cmath>

#include "wavegauge/errors.hpp"
#include "wavegauge/linalg.hpp"

namespace wavegauge {

Projector projector_from_frame(const Frame& z) {
    const Matrix q = orthonormalize(z.matrix); // throws RankDeficient
    Projector p;
    p.matrix = q * q.adjoint();
    p.rank = z.rank();
    return p;
}

Frame orthonormal_frame(const Projector& p) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(p.matrix);
    const int n = p.dim();
    Matrix frame(n, p.rank);
    // eigenvalues ascending; the rank largest are the ~1 ones
    for (int k = 0; k < p.rank; ++k) frame.col(k) = es.eigenvectors().col(n - p.rank + k);
    return {frame};
}

namespace {

// arccos(1 - z) for z in [0, 2], accurate for z -> 0
double acos_one_minus(double z) {
    z = std::clamp(z, 0.0, 2.0);
    if (z > 1e-4) return std::acos(1.0 - z);
    const double s = std::sqrt(2.0 * z);
    return s * (1.0 + z / 12.0 + 3.0 * z * z / 160.0);
}

} // namespace

double fs_distance(const Projector& p1, const Projector& p2, bool squared_overlap) {
    if (p1.rank != p2.rank || p1.dim() != p2.dim())
        throw DimensionMismatch("fs_distance: projectors of equal size and rank required");
    const Matrix z2 = orthonormal_frame(p2).matrix;
    // principal-angle sines: singular values of (1 - P1) Z2. The overlap
    // |det Z1^dag Z2|^2 equals prod (1 - s_k^2); going through the sines keeps
    // the distance accurate near coincidence where arccos is ill-conditioned.
    const Matrix residual = z2 - p1.matrix * z2;
    Eigen::JacobiSVD<Matrix> svd(residual);
    double log_overlap_sq = 0.0; // log prod (1 - s_k^2)
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
        const double s = std::min(svd.singularValues()(k), 1.0);
        const double c2 = 1.0 - s * s;
        if (c2 <= 0.0) return M_PI / 2.0;
        log_overlap_sq += std::log1p(-s * s);
    }
    if (!squared_overlap) log_overlap_sq *= 0.5;
    const double one_minus_overlap = -std::expm1(log_overlap_sq);
    return acos_one_minus(one_minus_overlap);
}

bool linkable(const Projector& p1, const Projector& p2, double margin) {
    return fs_distance(p1, p2) < M_PI / 2.0 - margin;
}

Projector chart_projector(const Chart& chart, int n) {
    Matrix p = Matrix::Zero(n, n);
    for (int a : chart.indices) p(a, a) = 1.0;
    return {p, chart.rank()};
}

bool in_chart(const Chart& chart, const Projector& p, double margin) {
    if (chart.rank() != p.rank) return false;
    return linkable(chart_projector(chart, p.dim()), p, margin);
}

Frame coordinate_matrix(const Chart& chart, const Projector& p) {
    if (chart.rank() != p.rank)
        throw DimensionMismatch("coordinate_matrix: chart and projector rank differ");
    const Matrix v = orthonormal_frame(p).matrix;
    const int m = p.rank;
    Matrix block(m, m);
    for (int a = 0; a < m; ++a) block.row(a) = v.row(chart.indices[a]);
    Eigen::JacobiSVD<Matrix> svd(block);
    const auto& sv = svd.singularValues();
    if (sv(m - 1) < 1e-12 * std::max(1.0, sv(0)))
        throw OutOfChart("coordinate_matrix: singular chart block");
    return {v * block.inverse()};
}

std::vector<Chart> all_charts(int n, int m) {
    std::vector<Chart> charts;
    std::vector<int> pick(m);
    for (int a = 0; a < m; ++a) pick[a] = a;
    while (true) {
        charts.push_back({pick});
        int k = m - 1;
        while (k >= 0 && pick[k] == n - m + k) --k;
        if (k < 0) break;
        ++pick[k];
        for (int j = k + 1; j < m; ++j) pick[j] = pick[j - 1] + 1;
    }
    return charts;
}

std::vector<Chart> charts_for(const Projector& p, const std::vector<Chart>& charts) {
    std::vector<Chart> hits;
    for (const auto& c : charts) {
        try {
            coordinate_matrix(c, p);
            hits.push_back(c);
        } catch (const OutOfChart&) {
        }
    }
    return hits;
}

Vector chart_coordinates(const Chart& chart, const Projector& p) {
    const Frame z0 = coordinate_matrix(chart, p);
    const int n = p.dim();
    const int m = p.rank;
    std::vector<bool> in_set(n, false);
    for (int a : chart.indices) in_set[a] = true;
    Vector xi(m * (n - m));
    int k = 0;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < n; ++b)
            if (!in_set[b]) xi(k++) = z0.matrix(b, a);
    return xi;
}

Frame frame_from_coordinates(const Chart& chart, int n, const Vector& xi) {
    const int m = chart.rank();
    if (xi.size() != m * (n - m))
        throw DimensionMismatch("frame_from_coordinates: coordinate vector size");
    std::vector<bool> in_set(n, false);
    for (int a : chart.indices) in_set[a] = true;
    Matrix z = Matrix::Zero(n, m);
    for (int a = 0; a < m; ++a) z(chart.indices[a], a) = 1.0;
    int k = 0;
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < n; ++b)
            if (!in_set[b]) z(b, a) = xi(k++);
    return {z};
}

Projector random_projector(int n, int m, std::uint64_t seed) {
    if (m > n) throw DimensionMismatch("random_projector: m > n");
    Rng rng(seed);
    const Frame z{rng.gaussian_matrix(n, m)};
    return projector_from_frame(z);
}

Projector random_projector_near(const Projector& p, double radius, std::uint64_t seed) {
    Rng rng(seed);
    const Matrix v = orthonormal_frame(p).matrix;
    const Matrix noise = rng.gaussian_matrix(p.dim(), p.rank);
    double scale = radius / (1.0 + noise.norm());
    for (int attempt = 0; attempt < 60; ++attempt) {
        const Projector q = projector_from_frame({v + scale * noise});
        if (fs_distance(p, q) < radius) return q;
        scale *= 0.5;
    }
    return p; // radius ~ 0: the projector itself satisfies the contract
}

} // namespace wavegauge
