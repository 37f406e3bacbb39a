#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "wavegauge/grassmann.hpp"

namespace wavegauge {

/// Ordered tuple of pairwise-linkable projectors, stored source first:
/// entries[0] is the source, entries.back() the target.
struct Skeleton {
    std::vector<Projector> entries;

    int length() const { return static_cast<int>(entries.size()); }
    const Projector& source() const { return entries.front(); }
    const Projector& target() const { return entries.back(); }
};

/// Tolerance under which two consecutive skeleton projectors count as equal.
inline constexpr double kDedupTolerance = 1e-9;
/// Condition bound of the within-subspace inverse.
inline constexpr double kConditionBound = 1e12;

/// Arrow of the hyperbolic affine 2-space of wave operators.
struct MorphismM {
    Skeleton skeleton; // reduced
    Matrix value;      // n x n wave-operator product
};

/// Elementary wave operator Omega(target, source) = Q (P Q P)^{-1} with the
/// inverse taken within Ran P.
Matrix elementary_wave_op(const Projector& target, const Projector& source,
                          double margin = kLinkableMargin);

/// Inverse of P0 M P0 within Ran P0, lifted back to an n x n operator.
Matrix invert_within(const Projector& p0, const Matrix& m);

Skeleton reduce(const Skeleton& skeleton, double tol = kDedupTolerance);

MorphismM wave_operator(const Skeleton& skeleton, double margin = kLinkableMargin);

MorphismM compose(const MorphismM& m2, const MorphismM& m1, double tol = 1e-8);

/// Weak left inverse P0 P of an elementary morphism; weak_inverse * value = P0.
Matrix weak_inverse(const MorphismM& m);

/// One-parameter family of skeletons sampled on the uniform grid u = k/N.
struct PseudoSurface {
    std::vector<Skeleton> samples; // size N+1
    bool flat_ends = true;

    int grid() const { return static_cast<int>(samples.size()) - 1; }
    const Skeleton& at(int k) const { return samples[k]; }
};

/// Fraction of the parameter interval kept exactly constant at both ends.
inline constexpr double kFlatEndFraction = 0.02;

/// Samples a skeleton family on N+1 grid points after reparametrizing with a
/// C^2 plateau map that is constant on the first and last 2% of [0,1].
PseudoSurface make_pseudosurface(const std::function<Skeleton(double)>& family, int grid);

/// Validates per-u consecutive linkability and the constant-ends invariant.
void validate_pseudosurface(const PseudoSurface& ps);

/// (source path, target path): u -> first and last skeleton entry.
std::pair<std::vector<Projector>, std::vector<Projector>> ps_boundaries(const PseudoSurface& ps);

PseudoSurface ps_horizontal_compose(const PseudoSurface& g1, const PseudoSurface& g2,
                                    double tol = 1e-8);
PseudoSurface ps_vertical_compose(const PseudoSurface& g1, const PseudoSurface& g2,
                                  double tol = 1e-8);

struct PseudoSurfaceFlags {
    bool elementary = false;
    bool impervious = false;
    bool cyclic = false;
    bool pinched = false;
};

PseudoSurfaceFlags ps_classify(const PseudoSurface& ps, double tol = 1e-8);

bool skeletons_equal(const Skeleton& a, const Skeleton& b, double tol = 1e-8);

} // namespace wavegauge
