#include "wavegauge/two_space.hpp"

#include <algorithm>
#include <cmath>

#include "wavegauge/errors.hpp"
#include "wavegauge/linalg.hpp"

namespace wavegauge {

Matrix invert_within(const Projector& p0, const Matrix& m) {
    const Matrix v = orthonormal_frame(p0).matrix;
    const Matrix block = v.adjoint() * m * v;
    Eigen::JacobiSVD<Matrix> svd(block);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= 0.0 || sv(0) / sv(sv.size() - 1) > kConditionBound)
        throw IllConditioned("invert_within: subspace block condition exceeds bound");
    return v * block.inverse() * v.adjoint();
}

Matrix elementary_wave_op(const Projector& target, const Projector& source, double margin) {
    if (!linkable(target, source, margin))
        throw NotLinkable("elementary_wave_op: projectors not linkable");
    return target.matrix * invert_within(source, target.matrix);
}

Skeleton reduce(const Skeleton& skeleton, double tol) {
    Skeleton out;
    for (const auto& p : skeleton.entries) {
        if (!out.entries.empty() && fs_distance(out.entries.back(), p) < tol) continue;
        out.entries.push_back(p);
    }
    return out;
}

MorphismM wave_operator(const Skeleton& skeleton, double margin) {
    if (skeleton.entries.empty()) throw DimensionMismatch("wave_operator: empty skeleton");
    const Skeleton red = reduce(skeleton);
    MorphismM m;
    m.skeleton = red;
    if (red.length() == 1) {
        m.value = red.entries[0].matrix;
        return m;
    }
    Matrix value = elementary_wave_op(red.entries[1], red.entries[0], margin);
    for (int k = 2; k < red.length(); ++k)
        value = elementary_wave_op(red.entries[k], red.entries[k - 1], margin) * value;
    m.value = value;
    return m;
}

MorphismM compose(const MorphismM& m2, const MorphismM& m1, double tol) {
    if (fs_distance(m2.skeleton.source(), m1.skeleton.target()) > tol)
        throw CompositionMismatch("compose: source(m2) != target(m1)");
    MorphismM out;
    Skeleton concat = m1.skeleton;
    concat.entries.insert(concat.entries.end(), m2.skeleton.entries.begin(),
                          m2.skeleton.entries.end());
    out.skeleton = reduce(concat);
    out.value = m2.value * m1.value;
    return out;
}

Matrix weak_inverse(const MorphismM& m) {
    if (m.skeleton.length() == 1) return m.skeleton.entries[0].matrix;
    if (m.skeleton.length() != 2)
        throw NotElementary("weak_inverse: skeleton of length <= 2 required");
    return m.skeleton.source().matrix * m.skeleton.target().matrix;
}

namespace {

// quintic plateau map: constant on [0, c] and [1-c, 1], C^2 in between
double plateau(double u) {
    const double c = kFlatEndFraction;
    if (u <= c) return 0.0;
    if (u >= 1.0 - c) return 1.0;
    const double v = (u - c) / (1.0 - 2.0 * c);
    return v * v * v * (10.0 + v * (-15.0 + 6.0 * v));
}

} // namespace

PseudoSurface make_pseudosurface(const std::function<Skeleton(double)>& family, int grid) {
    PseudoSurface ps;
    ps.samples.reserve(grid + 1);
    for (int k = 0; k <= grid; ++k)
        ps.samples.push_back(family(plateau(static_cast<double>(k) / grid)));
    validate_pseudosurface(ps);
    return ps;
}

void validate_pseudosurface(const PseudoSurface& ps) {
    const int n_grid = ps.grid();
    if (n_grid < 1) throw DimensionMismatch("pseudosurface: at least two samples required");
    for (const auto& skel : ps.samples) {
        if (skel.entries.empty())
            throw DimensionMismatch("pseudosurface: empty skeleton sample");
        for (int k = 0; k + 1 < skel.length(); ++k)
            if (!linkable(skel.entries[k], skel.entries[k + 1]))
                throw NotLinkable("pseudosurface: consecutive skeleton entries not linkable");
    }
    const int flat = static_cast<int>(std::floor(kFlatEndFraction * n_grid));
    for (int k = 0; k <= flat; ++k) {
        if (!skeletons_equal(ps.samples[k], ps.samples[0]) ||
            !skeletons_equal(ps.samples[n_grid - k], ps.samples[n_grid]))
            throw CompositionMismatch("pseudosurface: skeleton not constant near endpoints");
    }
}

std::pair<std::vector<Projector>, std::vector<Projector>> ps_boundaries(const PseudoSurface& ps) {
    std::vector<Projector> source, target;
    source.reserve(ps.samples.size());
    target.reserve(ps.samples.size());
    for (const auto& skel : ps.samples) {
        source.push_back(skel.source());
        target.push_back(skel.target());
    }
    return {source, target};
}

bool skeletons_equal(const Skeleton& a, const Skeleton& b, double tol) {
    if (a.length() != b.length()) return false;
    for (int k = 0; k < a.length(); ++k)
        if (fs_distance(a.entries[k], b.entries[k]) > tol) return false;
    return true;
}

PseudoSurface ps_horizontal_compose(const PseudoSurface& g1, const PseudoSurface& g2,
                                    double tol) {
    if (!skeletons_equal(g1.samples.back(), g2.samples.front(), tol))
        throw CompositionMismatch("ps_horizontal_compose: Skel(1) of g1 != Skel(0) of g2");
    if (g1.grid() != g2.grid())
        throw DimensionMismatch("ps_horizontal_compose: equal grids required");
    PseudoSurface out;
    out.samples = g1.samples;
    out.samples.insert(out.samples.end(), g2.samples.begin() + 1, g2.samples.end());
    return out;
}

PseudoSurface ps_vertical_compose(const PseudoSurface& g1, const PseudoSurface& g2,
                                  double tol) {
    if (g1.grid() != g2.grid())
        throw DimensionMismatch("ps_vertical_compose: equal grids required");
    PseudoSurface out;
    out.samples.reserve(g1.samples.size());
    for (std::size_t k = 0; k < g1.samples.size(); ++k) {
        const auto& upper = g1.samples[k];
        const auto& lower = g2.samples[k];
        if (fs_distance(upper.source(), lower.target()) > tol)
            throw CompositionMismatch("ps_vertical_compose: s(g1(u)) != t(g2(u)) at u = " +
                                      std::to_string(static_cast<double>(k) / g1.grid()));
        Skeleton joined = lower;
        joined.entries.insert(joined.entries.end(), upper.entries.begin(), upper.entries.end());
        out.samples.push_back(reduce(joined));
    }
    return out;
}

PseudoSurfaceFlags ps_classify(const PseudoSurface& ps, double tol) {
    PseudoSurfaceFlags flags;
    flags.elementary = true;
    for (const auto& skel : ps.samples)
        if (reduce(skel).length() > 2) flags.elementary = false;
    const auto is_identity = [&](const Skeleton& s) { return reduce(s).length() == 1; };
    flags.impervious = is_identity(ps.samples.front()) && is_identity(ps.samples.back());
    flags.cyclic =
        flags.impervious && skeletons_equal(reduce(ps.samples.front()), reduce(ps.samples.back()), tol);
    flags.pinched = true;
    for (const auto& skel : ps.samples) {
        const bool source_fixed = fs_distance(skel.source(), ps.samples[0].source()) <= tol;
        const bool target_fixed = fs_distance(skel.target(), ps.samples[0].target()) <= tol;
        if (!source_fixed && !target_fixed) flags.pinched = false;
    }
    return flags;
}

} // namespace wavegauge
