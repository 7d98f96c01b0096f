#include "lpvembed/geometry.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

namespace lpv {

namespace {

using Eigen::Vector2d;
using Eigen::Vector3d;

// Sign patterns of the box corners, one column per vertex. The 2D and 3D
// tables follow the column ordering of the alignment targets used in
// kabsch_align (adjacent columns differ along one axis, walking the faces).
Matrix sign_pattern(int d) {
    if (d == 1) {
        Matrix s(1, 2);
        s << 1, -1;
        return s;
    }
    if (d == 2) {
        Matrix s(2, 4);
        s << 1, 1, -1, -1,
             1, -1, -1, 1;
        return s;
    }
    if (d == 3) {
        Matrix s(3, 8);
        s << 1, 1, -1, -1, -1, -1, 1, 1,
             1, -1, -1, 1, 1, -1, -1, 1,
             1, 1, 1, 1, -1, -1, -1, -1;
        return s;
    }
    throw DimensionError("sign_pattern: boxes are supported up to dimension 3");
}

// Axes sorted by descending half-extent, each axis flipped so its
// largest-magnitude component is positive, determinant fixed to +1 by
// flipping the last (shortest) axis. Resolves the sign/permutation freedom
// of an oriented box deterministically.
void canonicalize_box(OrientedBox& box) {
    const int d = box.dim();
    std::vector<int> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return box.half_extents(a) > box.half_extents(b);
    });
    Matrix rot(d, d);
    Vector ext(d);
    for (int j = 0; j < d; ++j) {
        rot.col(j) = box.rotation.col(order[static_cast<std::size_t>(j)]);
        ext(j) = box.half_extents(order[static_cast<std::size_t>(j)]);
        int arg = 0;
        rot.col(j).cwiseAbs().maxCoeff(&arg);
        if (rot(arg, j) < 0.0) rot.col(j) = -rot.col(j);
    }
    if (rot.determinant() < 0.0) rot.col(d - 1) = -rot.col(d - 1);
    box.rotation = std::move(rot);
    box.half_extents = std::move(ext);
}

double cloud_scale(const Matrix& points) {
    const Vector lo = points.rowwise().minCoeff();
    const Vector hi = points.rowwise().maxCoeff();
    return std::max(1.0, (hi - lo).norm());
}

// --- 2D hull: monotone chain, counterclockwise, strict turns only ----------

double cross2(const Vector2d& o, const Vector2d& a, const Vector2d& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

ConvexHull hull2d(const Matrix& points) {
    std::vector<Vector2d> pts;
    pts.reserve(static_cast<std::size_t>(points.cols()));
    for (int k = 0; k < points.cols(); ++k) pts.emplace_back(points(0, k), points(1, k));
    std::sort(pts.begin(), pts.end(), [](const Vector2d& a, const Vector2d& b) {
        return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Vector2d& a, const Vector2d& b) { return a == b; }),
              pts.end());

    const double scale = cloud_scale(points);
    const double eps = 1e-12 * scale * scale;  // cross products scale as length^2

    if (pts.size() < 3) throw DegenerateDataError(
        "convex_hull: cloud spans affine dimension " + std::to_string(pts.size() > 1 ? 1 : 0) +
        " in a 2-dimensional space");

    auto build = [&](auto begin, auto end) {
        std::vector<Vector2d> chain;
        for (auto it = begin; it != end; ++it) {
            while (chain.size() >= 2 &&
                   cross2(chain[chain.size() - 2], chain.back(), *it) <= eps)
                chain.pop_back();
            chain.push_back(*it);
        }
        return chain;
    };
    const auto lower = build(pts.begin(), pts.end());
    const auto upper = build(pts.rbegin(), pts.rend());

    std::vector<Vector2d> verts(lower.begin(), lower.end() - 1);
    verts.insert(verts.end(), upper.begin(), upper.end() - 1);
    if (verts.size() < 3)
        throw DegenerateDataError(
            "convex_hull: cloud spans affine dimension 1 in a 2-dimensional space");

    ConvexHull hull;
    hull.vertices.resize(2, static_cast<Eigen::Index>(verts.size()));
    for (std::size_t k = 0; k < verts.size(); ++k) hull.vertices.col(static_cast<Eigen::Index>(k)) = verts[k];
    return hull;
}

// --- 3D hull: incremental with horizon re-triangulation ---------------------

struct Face {
    int a, b, c;
    Vector3d normal;  // unit, outward
    double offset;
    bool alive = true;
};

ConvexHull hull3d(const Matrix& points) {
    const int n = static_cast<int>(points.cols());
    const double scale = cloud_scale(points);
    const double eps_len = 1e-9 * scale;
    const double eps_vis = 1e-10 * scale;

    auto pt = [&](int i) { return Vector3d(points.col(i)); };

    // Seed tetrahedron from extreme points; failures report the affine
    // dimension actually spanned.
    int i0 = 0;
    for (int i = 1; i < n; ++i) {
        const Vector3d p = pt(i), q = pt(i0);
        if (p.x() < q.x() || (p.x() == q.x() && (p.y() < q.y() || (p.y() == q.y() && p.z() < q.z()))))
            i0 = i;
    }
    int i1 = -1;
    double best = eps_len;
    for (int i = 0; i < n; ++i)
        if (const double d = (pt(i) - pt(i0)).norm(); d > best) { best = d; i1 = i; }
    if (i1 < 0)
        throw DegenerateDataError("convex_hull: cloud spans affine dimension 0 in a 3-dimensional space");

    const Vector3d dir = (pt(i1) - pt(i0)).normalized();
    int i2 = -1;
    best = eps_len;
    for (int i = 0; i < n; ++i) {
        const Vector3d r = pt(i) - pt(i0);
        if (const double d = (r - dir * dir.dot(r)).norm(); d > best) { best = d; i2 = i; }
    }
    if (i2 < 0)
        throw DegenerateDataError("convex_hull: cloud spans affine dimension 1 in a 3-dimensional space");

    Vector3d plane_n = (pt(i1) - pt(i0)).cross(pt(i2) - pt(i0)).normalized();
    int i3 = -1;
    best = eps_len;
    for (int i = 0; i < n; ++i)
        if (const double d = std::abs(plane_n.dot(pt(i) - pt(i0))); d > best) { best = d; i3 = i; }
    if (i3 < 0)
        throw DegenerateDataError("convex_hull: cloud spans affine dimension 2 in a 3-dimensional space");

    const Vector3d interior = (pt(i0) + pt(i1) + pt(i2) + pt(i3)) / 4.0;

    std::vector<Face> faces;
    auto add_face = [&](int a, int b, int c) {
        Face f{a, b, c, Vector3d::Zero(), 0.0, true};
        Vector3d nrm = (pt(b) - pt(a)).cross(pt(c) - pt(a));
        const double len = nrm.norm();
        if (len <= 0.0) throw NumericalError("convex_hull: degenerate facet");
        nrm /= len;
        if (nrm.dot(interior - pt(a)) > 0.0) {
            std::swap(f.b, f.c);
            nrm = -nrm;
        }
        f.normal = nrm;
        f.offset = nrm.dot(pt(a));
        faces.push_back(f);
    };
    add_face(i0, i1, i2);
    add_face(i0, i1, i3);
    add_face(i0, i2, i3);
    add_face(i1, i2, i3);

    for (int i = 0; i < n; ++i) {
        if (i == i0 || i == i1 || i == i2 || i == i3) continue;
        const Vector3d p = pt(i);

        std::vector<int> visible;
        for (int f = 0; f < static_cast<int>(faces.size()); ++f)
            if (faces[static_cast<std::size_t>(f)].alive &&
                faces[static_cast<std::size_t>(f)].normal.dot(p) -
                        faces[static_cast<std::size_t>(f)].offset > eps_vis)
                visible.push_back(f);
        if (visible.empty()) continue;

        std::map<std::pair<int, int>, int> edge_count;
        for (const int f : visible) {
            const Face& face = faces[static_cast<std::size_t>(f)];
            const int v[3] = {face.a, face.b, face.c};
            for (int e = 0; e < 3; ++e) {
                const int u1 = v[e], u2 = v[(e + 1) % 3];
                ++edge_count[{std::min(u1, u2), std::max(u1, u2)}];
            }
        }
        for (const int f : visible) faces[static_cast<std::size_t>(f)].alive = false;
        for (const auto& [edge, count] : edge_count)
            if (count == 1) add_face(edge.first, edge.second, i);
    }

    // Compact the vertex set to the points actually on the surface.
    std::vector<int> remap(static_cast<std::size_t>(n), -1);
    std::vector<int> used;
    for (const Face& f : faces) {
        if (!f.alive) continue;
        for (const int v : {f.a, f.b, f.c})
            if (remap[static_cast<std::size_t>(v)] < 0) {
                remap[static_cast<std::size_t>(v)] = static_cast<int>(used.size());
                used.push_back(v);
            }
    }
    ConvexHull hull;
    hull.vertices.resize(3, static_cast<Eigen::Index>(used.size()));
    for (std::size_t k = 0; k < used.size(); ++k) hull.vertices.col(static_cast<Eigen::Index>(k)) = pt(used[k]);
    for (const Face& f : faces)
        if (f.alive)
            hull.facets.push_back({remap[static_cast<std::size_t>(f.a)],
                                   remap[static_cast<std::size_t>(f.b)],
                                   remap[static_cast<std::size_t>(f.c)]});
    return hull;
}

// Minimum-area rectangle of 2D columns, axes returned raw (uncanonicalized);
// extents measured over `extent_points`.
OrientedBox rectangle_from_hull(const ConvexHull& hull, const Matrix& extent_points) {
    const Eigen::Index nv = hull.vertices.cols();
    double best_area = std::numeric_limits<double>::infinity();
    double best_tiebreak = -std::numeric_limits<double>::infinity();
    Vector2d best_e = Vector2d::UnitX();

    for (Eigen::Index i = 0; i < nv; ++i) {
        Vector2d e = hull.vertices.col((i + 1) % nv) - hull.vertices.col(i);
        const double len = e.norm();
        if (len <= 0.0) continue;
        e /= len;
        const Vector2d nrm(-e.y(), e.x());
        double e0 = std::numeric_limits<double>::infinity(), e1 = -e0;
        double n0 = e0, n1 = -e0;
        for (Eigen::Index k = 0; k < nv; ++k) {
            const Vector2d v = hull.vertices.col(k);
            e0 = std::min(e0, e.dot(v)); e1 = std::max(e1, e.dot(v));
            n0 = std::min(n0, nrm.dot(v)); n1 = std::max(n1, nrm.dot(v));
        }
        const double area = (e1 - e0) * (n1 - n0);
        // Tie-break prefers the orientation closest to identity, measured on
        // the canonicalized axes (|e.x| + |e.y| is a monotone proxy for the
        // trace after sign/order fixing).
        const double tiebreak = std::max(std::abs(e.x()), std::abs(e.y()));
        if (area < best_area * (1.0 - 1e-12) ||
            (area <= best_area * (1.0 + 1e-12) && tiebreak > best_tiebreak)) {
            if (area < best_area) best_area = area;
            best_tiebreak = tiebreak;
            best_e = e;
        }
    }

    OrientedBox box;
    box.rotation.resize(2, 2);
    box.rotation.col(0) = best_e;
    box.rotation.col(1) = Vector2d(-best_e.y(), best_e.x());
    double lo0 = std::numeric_limits<double>::infinity(), hi0 = -lo0, lo1 = lo0, hi1 = -lo0;
    for (Eigen::Index k = 0; k < extent_points.cols(); ++k) {
        const Vector2d v = extent_points.col(k);
        const double a = box.rotation.col(0).dot(v);
        const double b = box.rotation.col(1).dot(v);
        lo0 = std::min(lo0, a); hi0 = std::max(hi0, a);
        lo1 = std::min(lo1, b); hi1 = std::max(hi1, b);
    }
    box.half_extents.resize(2);
    box.half_extents << (hi0 - lo0) / 2.0, (hi1 - lo1) / 2.0;
    box.center = box.rotation.col(0) * ((lo0 + hi0) / 2.0) + box.rotation.col(1) * ((lo1 + hi1) / 2.0);
    return box;
}

}  // namespace

double OrientedBox::volume() const {
    double v = 1.0;
    for (int i = 0; i < half_extents.size(); ++i) v *= 2.0 * half_extents(i);
    return v;
}

Matrix OrientedBox::vertices() const {
    const Matrix signs = sign_pattern(dim());
    Matrix out(dim(), signs.cols());
    for (Eigen::Index j = 0; j < signs.cols(); ++j)
        out.col(j) = center + rotation * (signs.col(j).cwiseProduct(half_extents));
    return out;
}

ConvexHull convex_hull(const Matrix& points) {
    if (points.cols() == 0) throw DegenerateDataError("convex_hull: empty point set");
    if (points.rows() == 2) return hull2d(points);
    if (points.rows() == 3) return hull3d(points);
    throw DimensionError("convex_hull: supported dimensions are 2 and 3");
}

OrientedBox min_area_rectangle(const Matrix& points) {
    if (points.rows() != 2) throw DimensionError("min_area_rectangle: points must be 2-dimensional");
    const ConvexHull hull = convex_hull(points);
    OrientedBox box = rectangle_from_hull(hull, points);
    canonicalize_box(box);
    return box;
}

OrientedBox min_volume_box3(const Matrix& points, double epsilon) {
    if (points.rows() != 3) throw DimensionError("min_volume_box3: points must be 3-dimensional");
    if (!(epsilon > 0.0) || epsilon > 0.5)
        throw std::invalid_argument("min_volume_box3: epsilon must lie in (0, 0.5]");
    const ConvexHull hull = convex_hull(points);

    struct Candidate {
        double volume = std::numeric_limits<double>::infinity();
        Matrix rotation;  // 3x3, columns = axes
    };

    // Given the third box axis, the in-plane orientation is solved exactly by
    // the 2D rectangle search on the projected hull vertices.
    auto evaluate = [&](Vector3d zdir) -> Candidate {
        Candidate cand;
        zdir.normalize();
        int arg = 0;
        zdir.cwiseAbs().minCoeff(&arg);
        const Vector3d ex = zdir.cross(Vector3d::Unit(arg)).normalized();
        const Vector3d ey = zdir.cross(ex);

        Matrix proj(2, hull.vertices.cols());
        for (Eigen::Index k = 0; k < hull.vertices.cols(); ++k) {
            const Vector3d v = hull.vertices.col(k);
            proj(0, k) = ex.dot(v);
            proj(1, k) = ey.dot(v);
        }
        ConvexHull flat;
        try {
            flat = hull2d(proj);
        } catch (const DegenerateDataError&) {
            return cand;  // projection collapsed; skip this orientation
        }
        const OrientedBox rect = rectangle_from_hull(flat, proj);

        double zlo = std::numeric_limits<double>::infinity(), zhi = -zlo;
        for (Eigen::Index k = 0; k < hull.vertices.cols(); ++k) {
            const double z = zdir.dot(hull.vertices.col(k));
            zlo = std::min(zlo, z);
            zhi = std::max(zhi, z);
        }
        cand.volume = rect.volume() * (zhi - zlo);
        cand.rotation.resize(3, 3);
        cand.rotation.col(0) = ex * rect.rotation(0, 0) + ey * rect.rotation(1, 0);
        cand.rotation.col(1) = ex * rect.rotation(0, 1) + ey * rect.rotation(1, 1);
        cand.rotation.col(2) = zdir;
        return cand;
    };

    Candidate best = evaluate(Vector3d::UnitZ());
    for (const auto& f : hull.facets) {
        const Vector3d a = hull.vertices.col(f[0]);
        const Vector3d n = (Vector3d(hull.vertices.col(f[1])) - a)
                               .cross(Vector3d(hull.vertices.col(f[2])) - a);
        if (n.norm() <= 0.0) continue;
        const Candidate c = evaluate(n);
        if (c.volume < best.volume) best = c;
    }
    if (!std::isfinite(best.volume))
        throw NumericalError("min_volume_box3: no usable candidate orientation");

    // Local rotation-grid descent on the third axis, shrinking the step until
    // the orientation is resolved to ~epsilon/4 radians.
    double delta = 0.2;
    while (delta > 0.25 * epsilon) {
        const Vector3d z = best.rotation.col(2);
        const Vector3d t1 = best.rotation.col(0);
        const Vector3d t2 = best.rotation.col(1);
        bool improved = false;
        for (const Vector3d& axis : {t1, t2}) {
            for (const double angle : {delta, -delta}) {
                const Candidate c = evaluate(Eigen::AngleAxisd(angle, axis) * z);
                if (c.volume < best.volume * (1.0 - 1e-12)) {
                    best = c;
                    improved = true;
                }
            }
        }
        if (!improved) delta *= 0.5;
    }

    OrientedBox box;
    box.rotation = best.rotation;
    Vector lo = Vector::Constant(3, std::numeric_limits<double>::infinity());
    Vector hi = -lo;
    for (Eigen::Index k = 0; k < points.cols(); ++k) {
        const Vector c = box.rotation.transpose() * points.col(k);
        lo = lo.cwiseMin(c);
        hi = hi.cwiseMax(c);
    }
    box.half_extents = (hi - lo) / 2.0;
    box.center = box.rotation * ((lo + hi) / 2.0);
    canonicalize_box(box);
    return box;
}

AlignMap kabsch_align(const OrientedBox& box, const Vector& axis_scales) {
    const int d = box.dim();
    if (d < 2 || d > 3) throw DimensionError("kabsch_align: box dimension must be 2 or 3");
    if (axis_scales.size() != d)
        throw DimensionError("kabsch_align: need one axis scale per dimension");
    if (box.half_extents.minCoeff() <= 0.0)
        throw DegenerateDataError("kabsch_align: box is flat (zero extent)");

    const Matrix verts = box.vertices();
    const Vector centroid = verts.rowwise().mean();
    const Matrix P = verts.colwise() - centroid;
    const Matrix Q = sign_pattern(d).array().colwise() * axis_scales.array();

    const Matrix H = P * Q.transpose();
    Eigen::JacobiSVD<Matrix> svd(H, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Matrix V = svd.matrixV();
    const Matrix U = svd.matrixU();
    if ((V * U.transpose()).determinant() < 0.0) V.col(d - 1) = -V.col(d - 1);
    return AlignMap{V * U.transpose(), centroid};
}

AlignMap kabsch_align(const OrientedBox& box) {
    const Matrix verts = box.vertices();
    const Matrix P = verts.colwise() - Vector(verts.rowwise().mean());
    Eigen::JacobiSVD<Matrix> svd(P);
    return kabsch_align(box, svd.singularValues());
}

Matrix kabsch_closed_form(const OrientedBox& box, const Vector& axis_scales) {
    const int d = box.dim();
    const Matrix verts = box.vertices();
    const Matrix P = verts.colwise() - Vector(verts.rowwise().mean());
    const Matrix Q = sign_pattern(d).array().colwise() * axis_scales.array();
    const Matrix PQt = P * Q.transpose();
    Eigen::FullPivLU<Matrix> lu(PQt);
    if (!lu.isInvertible())
        throw NumericalError("kabsch_closed_form: PQ^T is singular; use kabsch_align");
    Eigen::SelfAdjointEigenSolver<Matrix> es(PQt.transpose() * PQt);
    const Matrix sqrt_qppq = es.eigenvectors() *
                             es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                             es.eigenvectors().transpose();
    return sqrt_qppq * lu.inverse();
}

Ellipsoid mvee(const Matrix& points, double tolerance, long max_iterations) {
    const int d = static_cast<int>(points.rows());
    const Eigen::Index n = points.cols();
    if (d < 2) throw DimensionError("mvee: dimension must be at least 2");
    if (!(tolerance > 0.0)) throw std::invalid_argument("mvee: tolerance must be positive");

    {
        // The cloud must span the full space, otherwise the ellipsoid volume
        // collapses and the dual iteration cannot converge.
        const Vector mean = points.rowwise().mean();
        const Matrix centered = points.colwise() - mean;
        Eigen::JacobiSVD<Matrix> svd(centered);
        const Vector sv = svd.singularValues();
        int rank = 0;
        for (int i = 0; i < sv.size(); ++i)
            if (sv(i) > 1e-10 * std::max(1.0, sv(0))) ++rank;
        if (rank < d)
            throw DegenerateDataError("mvee: cloud spans affine dimension " + std::to_string(rank) +
                                      " in a " + std::to_string(d) + "-dimensional space");
    }

    Matrix lifted(d + 1, n);
    lifted.topRows(d) = points;
    lifted.row(d).setOnes();

    Vector u = Vector::Constant(n, 1.0 / static_cast<double>(n));
    const double dim1 = d + 1.0;
    double max_constraint = std::numeric_limits<double>::infinity();

    for (long iter = 0; iter < max_iterations; ++iter) {
        const Matrix X = lifted * u.asDiagonal() * lifted.transpose();
        const Eigen::LDLT<Matrix> ldlt(X);
        if (ldlt.info() != Eigen::Success)
            throw NumericalError("mvee: dual scatter matrix is not positive definite");
        const Vector m = (lifted.array() * ldlt.solve(lifted).array()).colwise().sum();
        if (!m.allFinite()) throw NumericalError("mvee: non-finite iterate");

        Eigen::Index plus = 0;
        const double m_plus = m.maxCoeff(&plus);
        max_constraint = (m_plus - 1.0) / d;
        if (max_constraint <= 1.0 + tolerance) break;

        Eigen::Index minus = -1;
        double m_minus = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < n; ++i)
            if (u(i) > 0.0 && m(i) < m_minus) { m_minus = m(i); minus = i; }

        if (iter + 1 == max_iterations)
            throw NumericalError("mvee: no convergence within " + std::to_string(max_iterations) +
                                 " iterations (max constraint " + std::to_string(max_constraint) + ")");

        // Frank-Wolfe step toward the worst violator, or an away step from
        // the weakest support point when that gap is larger.
        if (minus < 0 || m_plus - dim1 >= dim1 - m_minus) {
            const double step = (m_plus - dim1) / (dim1 * (m_plus - 1.0));
            u *= (1.0 - step);
            u(plus) += step;
        } else {
            double step = (dim1 - m_minus) / (dim1 * (m_minus - 1.0));
            const double cap = u(minus) / (1.0 - u(minus));
            bool drop = false;
            if (!(step < cap)) { step = cap; drop = true; }
            u *= (1.0 + step);
            u(minus) = drop ? 0.0 : u(minus) - step;
        }
    }

    const Vector center = points * u;
    const Matrix scatter =
        points * u.asDiagonal() * points.transpose() - center * center.transpose();
    const Eigen::LDLT<Matrix> ldlt(scatter);
    if (ldlt.info() != Eigen::Success)
        throw NumericalError("mvee: singular scatter matrix at the solution");
    Matrix shape = ldlt.solve(Matrix::Identity(d, d)) / d;
    shape = ((shape + shape.transpose()) / 2.0).eval();

    return Ellipsoid{std::move(shape), center};
}

AlignMap ellipsoid_axis_align(const Ellipsoid& ell) {
    const int d = static_cast<int>(ell.shape.rows());
    Eigen::SelfAdjointEigenSolver<Matrix> es(ell.shape);
    if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0)
        throw DegenerateDataError("ellipsoid_axis_align: shape matrix is not positive definite");
    // Ascending eigenvalues put the longest semi-axis first.
    Matrix V = es.eigenvectors();
    for (int j = 0; j < d; ++j) {
        int arg = 0;
        V.col(j).cwiseAbs().maxCoeff(&arg);
        if (V(arg, j) < 0.0) V.col(j) = -V.col(j);
    }
    if (V.determinant() < 0.0) V.col(d - 1) = -V.col(d - 1);
    return AlignMap{V.transpose(), ell.center};
}

Vector SchedulingRegion::transform(const Vector& v) const {
    return rotation * (v - center) + center;
}

Vector SchedulingRegion::inverse_transform(const Vector& theta) const {
    return rotation.transpose() * (theta - center) + center;
}

bool SchedulingRegion::contains(const Vector& theta, double inflate) const {
    return Bounds{lower, upper}.contains(theta, inflate);
}

namespace {

SchedulingRegion region_from_map(const Matrix& points, const AlignMap& map, std::string method) {
    SchedulingRegion region;
    region.rotation = map.rotation;
    region.center = map.center;
    region.method = std::move(method);
    Vector lo = Vector::Constant(points.rows(), std::numeric_limits<double>::infinity());
    Vector hi = -lo;
    for (Eigen::Index k = 0; k < points.cols(); ++k) {
        const Vector theta = map.apply(points.col(k));
        lo = lo.cwiseMin(theta);
        hi = hi.cwiseMax(theta);
    }
    region.lower = lo;
    region.upper = hi;
    region.volume = (hi - lo).prod();
    return region;
}

}  // namespace

SchedulingRegion axis_aligned_bounds(const Matrix& points) {
    if (points.cols() == 0) throw DegenerateDataError("axis_aligned_bounds: empty point set");
    const int d = static_cast<int>(points.rows());
    return region_from_map(points,
                           AlignMap{Matrix::Identity(d, d), Vector::Zero(d)},
                           "axis-aligned");
}

SchedulingRegion region_from_points(const Matrix& points, RegionStrategy strategy,
                                    double mvee_tolerance, double box_epsilon) {
    if (points.cols() == 0) throw DegenerateDataError("region_from_points: empty point set");
    const int d = static_cast<int>(points.rows());

    if (strategy == RegionStrategy::Auto)
        strategy = d == 1 ? RegionStrategy::AxisAligned
                          : (d <= 3 ? RegionStrategy::Box : RegionStrategy::Ellipsoid);

    switch (strategy) {
        case RegionStrategy::AxisAligned:
            return axis_aligned_bounds(points);
        case RegionStrategy::Box: {
            if (d == 1) return axis_aligned_bounds(points);
            if (d > 3)
                throw std::invalid_argument(
                    "region_from_points: box strategy supports at most 3 dimensions");
            const OrientedBox box =
                d == 2 ? min_area_rectangle(points) : min_volume_box3(points, box_epsilon);
            return region_from_map(points, kabsch_align(box), d == 2 ? "box2d" : "box3d");
        }
        case RegionStrategy::Ellipsoid: {
            if (d < 2)
                throw std::invalid_argument(
                    "region_from_points: ellipsoid strategy needs at least 2 dimensions");
            const Ellipsoid ell = mvee(points, mvee_tolerance);
            return region_from_map(points, ellipsoid_axis_align(ell), "ellipsoid");
        }
        case RegionStrategy::Auto:
            break;
    }
    throw std::invalid_argument("region_from_points: unknown strategy");
}

}  // namespace lpv
