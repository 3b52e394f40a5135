// Common scalar-templated dense types and the error hierarchy shared by the
// whole library.
#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace fsc {

using Index = Eigen::Index;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXi = Eigen::MatrixXi;

// Raised when a combinatorial size (e.g. a monomial basis) would overflow.
struct SizeLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when a method is handed fewer samples than its embedding needs.
struct NotEnoughPointsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when the exact algorithms cannot make progress on the given sample,
// i.e. the general-position assumptions do not hold numerically.
struct GeneralPositionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when every gradient of a polynomial vanishes on the data.
struct DegeneratePolynomialError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised by search routines that exhaust their degree budget.
struct NotFoundError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A set of N points in R^D, one per row, with optional cluster labels.
template <typename Scalar>
struct PointCloud {
  Matrix<Scalar> points;    // N x D
  std::vector<int> labels;  // empty, or one label per point
  bool normalized = false;  // set when every row has unit euclidean norm

  Index size() const { return points.rows(); }
  Index ambient_dim() const { return points.cols(); }

  bool has_labels() const {
    return !labels.empty() &&
           static_cast<Index>(labels.size()) == points.rows();
  }
};

using PointCloudd = PointCloud<double>;

// Returns a copy of the cloud with every point scaled to unit norm.
template <typename Scalar>
PointCloud<Scalar> normalize_points(const PointCloud<Scalar>& cloud) {
  PointCloud<Scalar> out = cloud;
  for (Index j = 0; j < out.points.rows(); ++j) {
    const Scalar norm = out.points.row(j).norm();
    if (norm <= Scalar(0))
      throw std::invalid_argument("normalize_points: zero point in cloud");
    out.points.row(j) /= norm;
  }
  out.normalized = true;
  return out;
}

}  // namespace fsc
