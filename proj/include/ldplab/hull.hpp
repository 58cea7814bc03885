#pragma once

// Convex hulls of small point clouds in R^m, m <= 3, with point-to-hull
// distances. A cloud is first reduced to its affine hull (rank 0..3) so that
// degenerate clouds, such as Cartan vectors of SL(d) which satisfy
// sum = 0, are handled exactly in their own subspace.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "ldplab/error.hpp"

namespace ldplab {

using Point = std::vector<double>;

namespace detail {

inline double cross2(const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

inline double segment_distance(const Eigen::VectorXd& p, const Eigen::VectorXd& a,
                               const Eigen::VectorXd& b) {
  const Eigen::VectorXd ab = b - a;
  const double len2 = ab.squaredNorm();
  const double t = len2 > 0 ? std::clamp((p - a).dot(ab) / len2, 0.0, 1.0) : 0.0;
  return (p - (a + t * ab)).norm();
}

/// Closest-point distance from p to triangle abc (Ericson, Real-Time
/// Collision Detection, 5.1.5).
inline double triangle_distance(const Eigen::Vector3d& p, const Eigen::Vector3d& a,
                                const Eigen::Vector3d& b, const Eigen::Vector3d& c) {
  const Eigen::Vector3d ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  if (d1 <= 0 && d2 <= 0) return ap.norm();
  const Eigen::Vector3d bp = p - b;
  const double d3 = ab.dot(bp), d4 = ac.dot(bp);
  if (d3 >= 0 && d4 <= d3) return bp.norm();
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) return (p - (a + d1 / (d1 - d3) * ab)).norm();
  const Eigen::Vector3d cp = p - c;
  const double d5 = ab.dot(cp), d6 = ac.dot(cp);
  if (d6 >= 0 && d5 <= d6) return cp.norm();
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) return (p - (a + d2 / (d2 - d6) * ac)).norm();
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) {
    return (p - (b + (d4 - d3) / ((d4 - d3) + (d5 - d6)) * (c - b))).norm();
  }
  const double denom = 1.0 / (va + vb + vc);
  return (p - (a + ab * (vb * denom) + ac * (vc * denom))).norm();
}

}  // namespace detail

class ConvexHull {
 public:
  ConvexHull() = default;

  explicit ConvexHull(std::span<const Point> cloud, double rank_tolerance = 1e-9) {
    if (cloud.empty()) throw Error(ErrorKind::EmptySet, "hull of an empty cloud");
    ambient_ = cloud.front().size();
    if (ambient_ == 0 || ambient_ > 3) {
      throw Error(ErrorKind::DimensionMismatch, "hulls are supported for dimension 1..3 only");
    }
    const auto n = static_cast<Eigen::Index>(cloud.size());
    const auto m = static_cast<Eigen::Index>(ambient_);
    Eigen::MatrixXd pts(n, m);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (cloud[static_cast<std::size_t>(i)].size() != ambient_) {
        throw Error(ErrorKind::DimensionMismatch, "cloud points have mixed dimensions");
      }
      for (Eigen::Index j = 0; j < m; ++j) pts(i, j) = cloud[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    centre_ = pts.colwise().mean().transpose();
    const Eigen::MatrixXd centred = pts.rowwise() - centre_.transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(centred, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double scale = std::max(1.0, centred.cwiseAbs().maxCoeff());
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv(i) > rank_tolerance * scale) ++rank;
    basis_ = svd.matrixV().leftCols(rank);
    local_ = centred * basis_;  // n x rank
    switch (rank) {
      case 0: vertex_rows_ = {0}; break;
      case 1: build_interval(); break;
      case 2: build_polygon(); break;
      default: build_polytope(); break;
    }
  }

  std::size_t ambient_dim() const noexcept { return ambient_; }
  std::size_t rank() const noexcept { return static_cast<std::size_t>(basis_.cols()); }

  std::vector<Point> vertices() const {
    std::vector<Point> out;
    for (Eigen::Index r : vertex_rows_) {
      const Eigen::VectorXd p = centre_ + basis_ * local_.row(r).transpose();
      out.emplace_back(p.data(), p.data() + p.size());
    }
    return out;
  }

  /// Euclidean distance from p to the hull (0 inside).
  double distance(std::span<const double> p) const {
    if (p.size() != ambient_) throw Error(ErrorKind::DimensionMismatch, "point/hull dimension mismatch");
    const Eigen::VectorXd q = Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size())) - centre_;
    const Eigen::VectorXd y = basis_.transpose() * q;
    const double orth2 = (q - basis_ * y).squaredNorm();
    const double inside = distance_in_subspace(y);
    return std::sqrt(orth2 + inside * inside);
  }

  bool contains(std::span<const double> p, double tolerance = 1e-9) const {
    return distance(p) <= tolerance;
  }

 private:
  void build_interval() {
    Eigen::Index lo = 0, hi = 0;
    local_.col(0).minCoeff(&lo);
    local_.col(0).maxCoeff(&hi);
    vertex_rows_ = {lo, hi};
    if (lo == hi) vertex_rows_ = {lo};
  }

  void build_polygon() {
    // Andrew's monotone chain, counter-clockwise, collinear points dropped.
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(local_.rows()));
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<Eigen::Index>(i);
    auto pt = [&](Eigen::Index i) { return Eigen::Vector2d(local_(i, 0), local_(i, 1)); };
    std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) {
      return local_(a, 0) < local_(b, 0) || (local_(a, 0) == local_(b, 0) && local_(a, 1) < local_(b, 1));
    });
    std::vector<Eigen::Index> h(2 * idx.size());
    std::size_t k = 0;
    for (Eigen::Index i : idx) {
      while (k >= 2 && detail::cross2(pt(h[k - 2]), pt(h[k - 1]), pt(i)) <= 0) --k;
      h[k++] = i;
    }
    for (std::size_t j = idx.size() - 1, t = k + 1; j-- > 0;) {
      const Eigen::Index i = idx[j];
      while (k >= t && detail::cross2(pt(h[k - 2]), pt(h[k - 1]), pt(i)) <= 0) --k;
      h[k++] = i;
    }
    h.resize(k > 1 ? k - 1 : k);
    vertex_rows_ = std::move(h);
  }

  void build_polytope() {
    // Incremental hull with visible-face removal; faces are oriented outward.
    const Eigen::Index n = local_.rows();
    auto pt = [&](Eigen::Index i) -> Eigen::Vector3d { return local_.row(i).transpose(); };
    const double eps = 1e-12 * std::max(1.0, local_.cwiseAbs().maxCoeff());

    // Initial tetrahedron from extreme points.
    Eigen::Index i0 = 0, i1 = 0;
    local_.col(0).minCoeff(&i0);
    double best = -1;
    for (Eigen::Index i = 0; i < n; ++i)
      if (double dd = (pt(i) - pt(i0)).norm(); dd > best) best = dd, i1 = i;
    Eigen::Index i2 = 0;
    best = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double dd = (pt(i1) - pt(i0)).cross(pt(i) - pt(i0)).norm();
      if (dd > best) best = dd, i2 = i;
    }
    Eigen::Index i3 = 0;
    best = -1;
    const Eigen::Vector3d nrm = (pt(i1) - pt(i0)).cross(pt(i2) - pt(i0));
    for (Eigen::Index i = 0; i < n; ++i) {
      const double dd = std::abs(nrm.dot(pt(i) - pt(i0)));
      if (dd > best) best = dd, i3 = i;
    }
    const Eigen::Vector3d inner = (pt(i0) + pt(i1) + pt(i2) + pt(i3)) / 4.0;

    std::vector<Face> faces;
    auto add_face = [&](Eigen::Index a, Eigen::Index b, Eigen::Index c) {
      Face f{{a, b, c}, (pt(b) - pt(a)).cross(pt(c) - pt(a)), 0.0};
      if (f.normal.dot(inner - pt(a)) > 0) {
        std::swap(f.v[1], f.v[2]);
        f.normal = -f.normal;
      }
      f.normal.normalize();
      f.offset = f.normal.dot(pt(f.v[0]));
      faces.push_back(f);
    };
    add_face(i0, i1, i2);
    add_face(i0, i1, i3);
    add_face(i0, i2, i3);
    add_face(i1, i2, i3);

    for (Eigen::Index p = 0; p < n; ++p) {
      if (p == i0 || p == i1 || p == i2 || p == i3) continue;
      const Eigen::Vector3d x = pt(p);
      std::vector<bool> visible(faces.size(), false);
      bool any = false;
      for (std::size_t f = 0; f < faces.size(); ++f) {
        if (faces[f].normal.dot(x) - faces[f].offset > eps) visible[f] = any = true;
      }
      if (!any) continue;
      // Horizon edges: edges of visible faces whose twin is not visible.
      std::vector<std::array<Eigen::Index, 2>> horizon;
      for (std::size_t f = 0; f < faces.size(); ++f) {
        if (!visible[f]) continue;
        for (int e = 0; e < 3; ++e) {
          const Eigen::Index a = faces[f].v[static_cast<std::size_t>(e)];
          const Eigen::Index b = faces[f].v[static_cast<std::size_t>((e + 1) % 3)];
          bool shared_with_visible = false;
          for (std::size_t g = 0; g < faces.size() && !shared_with_visible; ++g) {
            if (g == f || !visible[g]) continue;
            for (int k = 0; k < 3; ++k) {
              if (faces[g].v[static_cast<std::size_t>(k)] == b &&
                  faces[g].v[static_cast<std::size_t>((k + 1) % 3)] == a) {
                shared_with_visible = true;
                break;
              }
            }
          }
          if (!shared_with_visible) horizon.push_back({a, b});
        }
      }
      std::vector<Face> kept;
      for (std::size_t f = 0; f < faces.size(); ++f)
        if (!visible[f]) kept.push_back(faces[f]);
      faces = std::move(kept);
      for (const auto& [a, b] : horizon) {
        Face nf{{a, b, p}, (pt(b) - pt(a)).cross(x - pt(a)), 0.0};
        nf.normal.normalize();
        nf.offset = nf.normal.dot(pt(a));
        faces.push_back(nf);
      }
    }
    faces_ = std::move(faces);
    std::vector<Eigen::Index> verts;
    for (const auto& f : faces_)
      for (Eigen::Index v : f.v) verts.push_back(v);
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    vertex_rows_ = std::move(verts);
  }

  double distance_in_subspace(const Eigen::VectorXd& y) const {
    switch (y.size()) {
      case 0: return 0.0;
      case 1: {
        const double lo = local_(vertex_rows_.front(), 0), hi = local_(vertex_rows_.back(), 0);
        return std::max({0.0, y(0) - std::max(lo, hi), std::min(lo, hi) - y(0)});
      }
      case 2: {
        const std::size_t k = vertex_rows_.size();
        if (k == 1) return (y - local_.row(vertex_rows_[0]).transpose()).norm();
        bool inside = k >= 3;
        double dmin = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < k; ++i) {
          const Eigen::VectorXd a = local_.row(vertex_rows_[i]).transpose();
          const Eigen::VectorXd b = local_.row(vertex_rows_[(i + 1) % k]).transpose();
          if (detail::cross2(a, b, y) < 0) inside = false;
          dmin = std::min(dmin, detail::segment_distance(y, a, b));
        }
        return inside ? 0.0 : dmin;
      }
      default: {
        bool inside = true;
        const Eigen::Vector3d x = y;
        for (const auto& f : faces_)
          if (f.normal.dot(x) - f.offset > 0) inside = false;
        if (inside) return 0.0;
        double dmin = std::numeric_limits<double>::infinity();
        for (const auto& f : faces_) {
          dmin = std::min(dmin, detail::triangle_distance(x, local_.row(f.v[0]).transpose(),
                                                          local_.row(f.v[1]).transpose(),
                                                          local_.row(f.v[2]).transpose()));
        }
        return dmin;
      }
    }
  }

  struct Face {
    std::array<Eigen::Index, 3> v;
    Eigen::Vector3d normal;
    double offset;
  };

  std::size_t ambient_ = 0;
  Eigen::VectorXd centre_;
  Eigen::MatrixXd basis_;
  Eigen::MatrixXd local_;
  std::vector<Eigen::Index> vertex_rows_;
  std::vector<Face> faces_;
};

/// Hausdorff distance between two convex hulls. The distance to a convex set
/// is convex, so each directed sup is attained at a vertex.
inline double hull_hausdorff(const ConvexHull& a, const ConvexHull& b) {
  double h = 0.0;
  for (const auto& v : a.vertices()) h = std::max(h, b.distance(v));
  for (const auto& v : b.vertices()) h = std::max(h, a.distance(v));
  return h;
}

/// Hausdorff distance between finite point sets (Euclidean).
inline double hausdorff(std::span<const Point> a, std::span<const Point> b) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::EmptySet, "Hausdorff distance of an empty set");
  auto directed = [](std::span<const Point> from, std::span<const Point> to) {
    double worst = 0.0;
    for (const auto& p : from) {
      if (p.size() != to.front().size()) throw Error(ErrorKind::DimensionMismatch, "point dimensions differ");
      double nearest = std::numeric_limits<double>::infinity();
      for (const auto& q : to) {
        double s = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i) s += (p[i] - q[i]) * (p[i] - q[i]);
        nearest = std::min(nearest, s);
      }
      worst = std::max(worst, std::sqrt(nearest));
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

}  // namespace ldplab
