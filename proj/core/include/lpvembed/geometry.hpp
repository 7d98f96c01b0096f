#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "lpvembed/types.hpp"

namespace lpv {

/// Oriented bounding box: point = center + rotation * (box-frame coords),
/// |coords| <= half_extents. Rotation columns are the box axes, det +1.
struct OrientedBox {
    Vector center;
    Matrix rotation;
    Vector half_extents;

    int dim() const { return static_cast<int>(center.size()); }
    double volume() const;
    /// Corner list (d x 2^d) ordered by a fixed sign-pattern convention per
    /// dimension; column j carries the sign pattern expected by the
    /// alignment target matrix built in kabsch_align.
    Matrix vertices() const;
};

/// Convex hull of a 2D or 3D point cloud. In 2D the vertices are in
/// counterclockwise order and facets is empty; in 3D facets index vertices
/// with outward-facing winding.
struct ConvexHull {
    Matrix vertices;  // d x n_v
    std::vector<std::array<int, 3>> facets;
};

/// Points are columns. Throws DegenerateDataError naming the affine
/// dimension when the cloud does not span the full space.
ConvexHull convex_hull(const Matrix& points);

/// Exact minimum-area enclosing rectangle (rotating calipers over the hull
/// edges). Ties prefer the rectangle whose rotation is closest to identity.
OrientedBox min_area_rectangle(const Matrix& points);

/// Approximate minimum-volume 3D box: candidate orientations aligned with
/// hull facets, refined by a shrinking rotation-grid descent; epsilon in
/// (0, 0.5] controls the refinement depth. Containment is exact; the volume
/// is within (1+epsilon) of the best orientation the search visits.
OrientedBox min_volume_box3(const Matrix& points, double epsilon = 0.05);

/// Rigid map theta = rotation * (v - center) + center.
struct AlignMap {
    Matrix rotation;
    Vector center;

    Vector apply(const Vector& v) const { return rotation * (v - center) + center; }
    Vector invert(const Vector& theta) const {
        return rotation.transpose() * (theta - center) + center;
    }
};

/// Proper rotation (pivoted at the box centroid) aligning the box axes with
/// the coordinate axes, obtained from the SVD of the cross-covariance
/// between the centered corner matrix and the sign-pattern target scaled by
/// axis_scales, with determinant correction.
AlignMap kabsch_align(const OrientedBox& box, const Vector& axis_scales);
/// Same, with axis_scales = singular values of the centered corner matrix.
AlignMap kabsch_align(const OrientedBox& box);
/// Closed-form variant (QP^T P Q^T)^(1/2) (P Q^T)^(-1); valid when PQ^T is
/// invertible and the optimal orthogonal factor is proper. Kept as a
/// cross-check of kabsch_align.
Matrix kabsch_closed_form(const OrientedBox& box, const Vector& axis_scales);

/// Ellipsoid { v : (v - center)^T shape (v - center) <= 1 }, shape SPD.
struct Ellipsoid {
    Matrix shape;
    Vector center;
};

/// Minimum-volume enclosing ellipsoid via Khachiyan-type first-order
/// iteration on the dual weights (with away steps), run until the largest
/// constraint value max_i (v_i-c)^T P (v_i-c) is at most 1 + tolerance.
/// At termination that maximum is also >= 1, so some point is near-active;
/// -log det is within the method's (1 + d*tolerance) optimality factor.
Ellipsoid mvee(const Matrix& points, double tolerance = 1e-7, long max_iterations = 1000000);

/// Rotation from the symmetric eigendecomposition of the shape matrix,
/// sign-fixed and determinant-corrected; the transformed ellipsoid has a
/// diagonal shape matrix (axes sorted by decreasing semi-axis length).
AlignMap ellipsoid_axis_align(const Ellipsoid& ell);

enum class RegionStrategy : std::uint8_t { Auto, AxisAligned, Box, Ellipsoid };

/// Admissible scheduling set: rotate samples by theta = rotation*(v-center)
/// + center, then bound each coordinate. Volume is the product of extents.
struct SchedulingRegion {
    Vector lower;
    Vector upper;
    Matrix rotation;
    Vector center;
    std::string method;  // axis-aligned | box2d | box3d | ellipsoid
    double volume = 0.0;

    int dim() const { return static_cast<int>(lower.size()); }
    Vector transform(const Vector& v) const;
    Vector inverse_transform(const Vector& theta) const;
    bool contains(const Vector& theta, double inflate = 1e-9) const;
};

/// Axis-aligned bounds of the raw samples (identity rotation).
SchedulingRegion axis_aligned_bounds(const Matrix& points);

/// Builds the scheduling region. Auto picks: d = 1 axis-aligned, d in {2,3}
/// minimum box + alignment, d > 3 minimum ellipsoid + alignment. Bounds are
/// always the min/max of the transformed samples.
SchedulingRegion region_from_points(const Matrix& points, RegionStrategy strategy,
                                    double mvee_tolerance = 1e-7, double box_epsilon = 0.05);

}  // namespace lpv
