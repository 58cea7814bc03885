#pragma once

// Small dense linear algebra over GL(d, R): Cartan and Jordan projections,
// exterior powers, and Fubini-Study geometry of projective space.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "ldplab/error.hpp"

namespace ldplab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Relative threshold separating a simple dominant eigenvalue from a tie.
inline constexpr double kEigenGapTolerance = 1e-9;

namespace detail {

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

inline double max_abs_entry(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

inline double determinant_tolerance(const Matrix& m) {
  return 1e-12 * std::pow(max_abs_entry(m), static_cast<double>(m.rows()));
}

inline std::vector<double> sorted_descending(std::vector<double> v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

}  // namespace detail

/// A d x d real invertible matrix. Construction validates finiteness and
/// |det| > 1e-12 * (max |entry|)^d; nothing is regularized.
class SquareMatrix {
 public:
  SquareMatrix() = default;

  explicit SquareMatrix(Matrix m) : m_(std::move(m)) { validate(); }

  /// Row-major construction, e.g. SquareMatrix::from_rows({{1, 1}, {0, 1}}).
  static SquareMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const auto d = static_cast<Eigen::Index>(rows.size());
    Matrix m(d, d);
    Eigen::Index i = 0;
    for (const auto& row : rows) {
      if (static_cast<Eigen::Index>(row.size()) != d) {
        throw Error(ErrorKind::DimensionMismatch, "matrix rows must all have length " +
                                                      std::to_string(d));
      }
      Eigen::Index j = 0;
      for (double x : row) m(i, j++) = x;
      ++i;
    }
    return SquareMatrix(std::move(m));
  }

  static SquareMatrix from_row_major(std::size_t dim, std::span<const double> entries) {
    if (entries.size() != dim * dim) {
      throw Error(ErrorKind::DimensionMismatch, "expected " + std::to_string(dim * dim) +
                                                    " entries, got " +
                                                    std::to_string(entries.size()));
    }
    const auto d = static_cast<Eigen::Index>(dim);
    Matrix m(d, d);
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j) m(i, j) = entries[static_cast<std::size_t>(i * d + j)];
    return SquareMatrix(std::move(m));
  }

  static SquareMatrix identity(std::size_t dim) {
    const auto d = static_cast<Eigen::Index>(dim);
    return SquareMatrix(Matrix::Identity(d, d));
  }

  static SquareMatrix diagonal(std::initializer_list<double> entries) {
    std::vector<double> v(entries);
    return diagonal(std::span<const double>(v));
  }

  static SquareMatrix diagonal(std::span<const double> entries) {
    const auto d = static_cast<Eigen::Index>(entries.size());
    Matrix m = Matrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) m(i, i) = entries[static_cast<std::size_t>(i)];
    return SquareMatrix(std::move(m));
  }

  /// Skips the determinant test (finiteness is still enforced). Used for
  /// matrices that are invertible by construction, such as exterior powers
  /// of a validated matrix, whose determinant may legitimately be tiny.
  static SquareMatrix trusted(Matrix m) {
    if (m.rows() != m.cols()) throw Error(ErrorKind::DimensionMismatch, "matrix is not square");
    if (!detail::all_finite(m)) throw Error(ErrorKind::NonFinite, "matrix has non-finite entries");
    SquareMatrix out;
    out.m_ = std::move(m);
    return out;
  }

  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  const Matrix& matrix() const noexcept { return m_; }
  double operator()(std::size_t i, std::size_t j) const {
    return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }

  std::vector<double> row_major() const {
    std::vector<double> out;
    out.reserve(dim() * dim());
    for (Eigen::Index i = 0; i < m_.rows(); ++i)
      for (Eigen::Index j = 0; j < m_.cols(); ++j) out.push_back(m_(i, j));
    return out;
  }

  SquareMatrix inverse() const { return SquareMatrix::trusted(m_.inverse()); }

  friend SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
    if (a.dim() != b.dim()) throw Error(ErrorKind::DimensionMismatch, "product of unequal sizes");
    return SquareMatrix::trusted(a.m_ * b.m_);
  }

  friend bool operator==(const SquareMatrix& a, const SquareMatrix& b) {
    return a.m_.rows() == b.m_.rows() && a.m_ == b.m_;
  }

 private:
  void validate() const {
    if (m_.rows() != m_.cols()) throw Error(ErrorKind::DimensionMismatch, "matrix is not square");
    if (m_.rows() == 0) throw Error(ErrorKind::DimensionMismatch, "matrix has dimension 0");
    if (!detail::all_finite(m_)) throw Error(ErrorKind::NonFinite, "matrix has non-finite entries");
    const double det = m_.rows() <= 4 ? m_.determinant() : m_.partialPivLu().determinant();
    if (!(std::abs(det) > detail::determinant_tolerance(m_))) {
      throw Error(ErrorKind::SingularMatrix,
                  "|det| = " + std::to_string(std::abs(det)) + " is below tolerance");
    }
  }

  Matrix m_;
};

/// A point of the closed Weyl chamber: non-increasing reals, natural-log scale.
/// The tag separates Cartan (singular value) from Jordan (eigenvalue) vectors.
template <class Tag>
struct ChamberVector {
  std::vector<double> components;

  std::size_t size() const noexcept { return components.size(); }
  double operator[](std::size_t i) const { return components[i]; }
  double sum() const { return std::accumulate(components.begin(), components.end(), 0.0); }

  ChamberVector scaled(double factor) const {
    ChamberVector out = *this;
    for (double& x : out.components) x *= factor;
    return out;
  }

  friend bool operator==(const ChamberVector&, const ChamberVector&) = default;
};

struct CartanTag {};
struct JordanTag {};
using CartanVector = ChamberVector<CartanTag>;
using JordanVector = ChamberVector<JordanTag>;

namespace detail {

/// Canonical sign: the first coordinate with |x| > 1e-15 is made positive.
inline Vector canonical_unit(const Vector& v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error(ErrorKind::NonFinite, "cannot normalize a zero or non-finite vector");
  }
  Vector u = v / norm;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    if (std::abs(u(i)) > 1e-15) {
      if (u(i) < 0) u = -u;
      break;
    }
  }
  return u;
}

}  // namespace detail

/// A line in R^d represented by a unit vector with canonical sign.
class ProjectivePoint {
 public:
  ProjectivePoint() = default;
  explicit ProjectivePoint(const Vector& v) : v_(detail::canonical_unit(v)) {}
  ProjectivePoint(std::initializer_list<double> coords)
      : ProjectivePoint(Vector(Eigen::Map<const Vector>(coords.begin(),
                                                        static_cast<Eigen::Index>(coords.size())))) {}

  static ProjectivePoint basis(std::size_t dim, std::size_t i) {
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(i)) = 1.0;
    return ProjectivePoint(v);
  }

  std::size_t dim() const noexcept { return static_cast<std::size_t>(v_.size()); }
  const Vector& representative() const noexcept { return v_; }

 private:
  Vector v_;
};

/// A projective hyperplane P(H), stored through the unit normal of H.
class ProjectiveHyperplane {
 public:
  ProjectiveHyperplane() = default;
  explicit ProjectiveHyperplane(const Vector& normal) : n_(detail::canonical_unit(normal)) {}

  std::size_t dim() const noexcept { return static_cast<std::size_t>(n_.size()); }
  const Vector& unit_normal() const noexcept { return n_; }
  ProjectivePoint normal_point() const { return ProjectivePoint(n_); }

 private:
  Vector n_;
};

namespace detail {

inline std::vector<double> singular_values(const Matrix& m) {
  Eigen::JacobiSVD<Matrix, Eigen::ColPivHouseholderQRPreconditioner> svd(m);
  const Vector& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

inline double top_singular_value(const Matrix& m) {
  if (m.rows() == 1) return std::abs(m(0, 0));
  if (m.rows() == 2) {
    // Stable closed form: sigma_1 = (|q| + |r|) / 2.
    const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
    return 0.5 * (std::hypot(a + d, c - b) + std::hypot(a - d, b + c));
  }
  return singular_values(m).front();
}

inline std::vector<std::complex<double>> eigenvalues(const Matrix& m) {
  if (m.rows() == 1) return {std::complex<double>(m(0, 0), 0.0)};
  Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::EigenFailure, "eigenvalue iteration did not converge");
  }
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

inline double spectral_radius(const Matrix& m) {
  if (m.rows() == 1) return std::abs(m(0, 0));
  if (m.rows() == 2) {
    const double tr = m(0, 0) + m(1, 1);
    const double det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    const double disc = tr * tr - 4.0 * det;
    if (disc < 0.0) return std::sqrt(std::abs(det));
    return 0.5 * (std::abs(tr) + std::sqrt(disc));
  }
  double rho = 0.0;
  for (const auto& z : eigenvalues(m)) rho = std::max(rho, std::abs(z));
  return rho;
}

inline void require_valid(const SquareMatrix& m) {
  if (m.dim() == 0) throw Error(ErrorKind::DimensionMismatch, "empty matrix");
}

/// Lexicographically ordered k-subsets of {0, ..., d-1}.
inline std::vector<std::vector<int>> combinations(int d, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> idx(static_cast<std::size_t>(k));
  std::iota(idx.begin(), idx.end(), 0);
  if (k > d || k < 0) return out;
  while (true) {
    out.push_back(idx);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == d - k + i) --i;
    if (i < 0) break;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

inline Matrix exterior_power_raw(const Matrix& m, int k) {
  const int d = static_cast<int>(m.rows());
  const auto subsets = combinations(d, k);
  const auto n = static_cast<Eigen::Index>(subsets.size());
  Matrix out(n, n);
  Matrix minor(k, k);
  for (Eigen::Index r = 0; r < n; ++r) {
    const auto& rows = subsets[static_cast<std::size_t>(r)];
    for (Eigen::Index c = 0; c < n; ++c) {
      const auto& cols = subsets[static_cast<std::size_t>(c)];
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
          minor(i, j) = m(rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]);
      out(r, c) = k <= 4 ? minor.determinant() : minor.partialPivLu().determinant();
    }
  }
  return out;
}

}  // namespace detail

/// kappa(g): logs of singular values in decreasing order.
inline CartanVector cartan_projection(const SquareMatrix& m) {
  detail::require_valid(m);
  std::vector<double> logs;
  for (double s : detail::singular_values(m.matrix())) logs.push_back(std::log(s));
  return {detail::sorted_descending(std::move(logs))};
}

/// lambda(g): logs of eigenvalue moduli in decreasing order; a complex pair
/// contributes two equal components.
inline JordanVector jordan_projection(const SquareMatrix& m) {
  detail::require_valid(m);
  std::vector<double> logs;
  for (const auto& z : detail::eigenvalues(m.matrix())) logs.push_back(std::log(std::abs(z)));
  return {detail::sorted_descending(std::move(logs))};
}

/// Lambda^k of m in the lexicographic basis e_I, I a k-subset; entries are
/// k x k minors.
inline SquareMatrix exterior_power(const SquareMatrix& m, int k) {
  const int d = static_cast<int>(m.dim());
  if (k < 1 || k > d) {
    throw Error(ErrorKind::BadIndex,
                "exterior power index " + std::to_string(k) + " outside [1, " + std::to_string(d) + "]");
  }
  if (k == 1) return m;
  return SquareMatrix::trusted(detail::exterior_power_raw(m.matrix(), k));
}

inline double operator_norm(const SquareMatrix& m) {
  return detail::top_singular_value(m.matrix());
}

inline double spectral_radius(const SquareMatrix& m) { return detail::spectral_radius(m.matrix()); }

/// Fubini-Study distance: the sine of the angle between the two lines.
inline double fs_distance(const ProjectivePoint& p, const ProjectivePoint& q) {
  if (p.dim() != q.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "points live in different projective spaces");
  }
  const Vector& u = p.representative();
  const Vector& v = q.representative();
  // |v - <u,v> u| avoids the cancellation in sqrt(1 - <u,v>^2).
  const double dist = (v - u.dot(v) * u).norm();
  return std::min(1.0, dist);
}

/// Distance from a point to a projective hyperplane, |<v_p, n_H>|.
inline double fs_point_to_hyperplane(const ProjectivePoint& p, const ProjectiveHyperplane& h) {
  if (p.dim() != h.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "point and hyperplane dimensions differ");
  }
  return std::min(1.0, std::abs(p.representative().dot(h.unit_normal())));
}

/// Hausdorff distance between two projective hyperplanes, computed as the
/// Fubini-Study distance of their normals.
inline double hyperplane_distance(const ProjectiveHyperplane& a, const ProjectiveHyperplane& b) {
  return fs_distance(a.normal_point(), b.normal_point());
}

inline ProjectivePoint projective_action(const SquareMatrix& m, const ProjectivePoint& p) {
  if (m.dim() != p.dim()) throw Error(ErrorKind::DimensionMismatch, "matrix/point size mismatch");
  return ProjectivePoint(Vector(m.matrix() * p.representative()));
}

/// ||Lambda^2 g|| * ||g^-1||^2, a Lipschitz constant of the projective action
/// of g for the Fubini-Study metric.
inline double lipschitz_bound(const SquareMatrix& m) {
  if (m.dim() == 1) return 1.0;
  const double wedge = detail::top_singular_value(detail::exterior_power_raw(m.matrix(), 2));
  const double inv = detail::top_singular_value(m.matrix().inverse());
  return wedge * inv * inv;
}

inline SquareMatrix rotation2(double angle) {
  return SquareMatrix::from_rows({{std::cos(angle), -std::sin(angle)},
                                  {std::sin(angle), std::cos(angle)}});
}

inline SquareMatrix conjugate(const SquareMatrix& by, const SquareMatrix& m) {
  return by * m * by.inverse();
}

}  // namespace ldplab
