// hull.hpp: convex hulls of point clouds on the probability simplex.
//
// Points are first expressed in an orthonormal frame of their affine span.
// Spans of dimension 1 and 2 are handled geometrically (interval, monotone
// chain); higher dimensions fall back to LP redundancy removal.

#pragma once

#include "thermo/linalg.hpp"

#include <vector>

namespace thermo {

inline constexpr double kCoplanarTol = 1e-10;
inline constexpr double kDedupTol = 1e-10;
inline constexpr double kMembershipTol = 1e-8;

struct AffineFrame {
    RealVector origin;
    RealMatrix basis;  // ambient x k, orthonormal columns

    std::size_t dim() const { return static_cast<std::size_t>(basis.cols()); }
    RealVector coordinates(const RealVector& x) const { return basis.transpose() * (x - origin); }
    double off_span_distance(const RealVector& x) const;
};

AffineFrame affine_frame(const std::vector<RealVector>& points, double tol = kCoplanarTol);

// Indices of points kept after merging everything within tol (max-norm) of
// an earlier point.
std::vector<std::size_t> deduplicate(const std::vector<RealVector>& points, double tol = kDedupTol);

struct Hull {
    AffineFrame frame;
    std::vector<std::size_t> vertices;  // indices into the input; counter-clockwise in 2D
};

Hull convex_hull(const std::vector<RealVector>& points);

enum class Location { interior, boundary, exterior };
const char* to_string(Location loc);

struct HullLocation {
    Location location = Location::exterior;
    // Signed distance to the nearest supporting hyperplane inside the span
    // (positive inside); for 3+ dimensional spans the max-min barycentric
    // weight instead.
    double margin = 0.0;
    // Weights over hull.vertices when the point is a member.
    std::vector<double> weights;
};

// Interior means relative interior of the hull within its affine span.
HullLocation locate(const RealVector& q, const std::vector<RealVector>& points, const Hull& hull,
                    double tol = kMembershipTol);

}  // namespace thermo
