#pragma once

#include <cstdint>
#include <vector>

#include "wavegauge/types.hpp"

namespace wavegauge {

/// Rank-m orthogonal projector on C^n.
struct Projector {
    Matrix matrix; // n x n, Hermitian idempotent
    int rank = 0;

    int dim() const { return static_cast<int>(matrix.rows()); }
};

/// n x m frame of full column rank.
struct Frame {
    Matrix matrix;

    int dim() const { return static_cast<int>(matrix.rows()); }
    int rank() const { return static_cast<int>(matrix.cols()); }
};

/// Coordinate chart of the Grassmannian: the m-element index set I of the
/// basis vectors spanning the reference projector P^i.
struct Chart {
    std::vector<int> indices; // strictly increasing, 0-based

    int rank() const { return static_cast<int>(indices.size()); }
    bool operator==(const Chart& other) const { return indices == other.indices; }
};

/// Default margin below pi/2 under which two projectors count as linkable.
inline constexpr double kLinkableMargin = 1e-6;

/// pi(Z) = Z (Z^dag Z)^{-1} Z^dag. Invariant under Z -> Z g.
Projector projector_from_frame(const Frame& z);

/// Orthonormal frame of Ran P (thin eigenbasis).
Frame orthonormal_frame(const Projector& p);

/// arccos |det Z1^dag Z2|^2 with Z1, Z2 orthonormal frames of the ranges.
/// `squared_overlap=false` drops the square for sensitivity studies.
double fs_distance(const Projector& p1, const Projector& p2, bool squared_overlap = true);

bool linkable(const Projector& p1, const Projector& p2, double margin = kLinkableMargin);

/// Reference projector P^i of a chart (span of e_a, a in I).
Projector chart_projector(const Chart& chart, int n);

bool in_chart(const Chart& chart, const Projector& p, double margin = kLinkableMargin);

/// The unique frame Z0 of Ran P whose rows on I form the identity block.
/// Throws OutOfChart when the I-block of a frame of P is singular.
Frame coordinate_matrix(const Chart& chart, const Projector& p);

/// All m-element index-set charts of the Grassmannian G_m(C^n).
std::vector<Chart> all_charts(int n, int m);

std::vector<Chart> charts_for(const Projector& p, const std::vector<Chart>& charts);

/// Chart coordinates: the non-identity rows of the coordinate matrix,
/// flattened column-major as the m(n-m) vector (c_ab), b not in I.
Vector chart_coordinates(const Chart& chart, const Projector& p);
/// Rebuild the coordinate matrix from chart coordinates.
Frame frame_from_coordinates(const Chart& chart, int n, const Vector& xi);

Projector random_projector(int n, int m, std::uint64_t seed);
Projector random_projector_near(const Projector& p, double radius, std::uint64_t seed);

} // namespace wavegauge
