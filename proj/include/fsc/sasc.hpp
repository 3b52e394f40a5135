// Single-polynomial spectral affinities: the angle between gradient normals
// (SASC-A) and the distance of a point to the other point's gradient
// hyperplane (SASC-D).
#pragma once

#include <fsc/affinity.hpp>
#include <fsc/spectral.hpp>
#include <fsc/vanishing.hpp>

#include <iostream>

namespace fsc {

enum class SascVariant { kAngle, kDist };

namespace detail {

// Unit gradients of p at every point; zero-gradient rows are flagged.
template <typename Scalar>
Matrix<Scalar> unit_gradients(const PointCloud<Scalar>& cloud,
                              const HomogeneousPolynomial<Scalar>& poly,
                              std::vector<bool>* degenerate) {
  constexpr Scalar kGradFloor = Scalar(1e-14);
  Matrix<Scalar> normals(cloud.size(), cloud.ambient_dim());
  degenerate->assign(cloud.size(), false);
  for (Index j = 0; j < cloud.size(); ++j) {
    Vector<Scalar> g = gradient(poly, cloud.points.row(j).transpose());
    const Scalar norm = g.norm();
    if (norm < kGradFloor) {
      (*degenerate)[j] = true;
      normals.row(j).setZero();
    } else {
      normals.row(j) = (g / norm).transpose();
    }
  }
  return normals;
}

}  // namespace detail

// C[j][j'] = |<grad_j, grad_j'>| over unit gradients; symmetric, entries in
// [0, 1].  Zero-gradient points get a zero row and column with a warning.
template <typename Scalar>
AffinityMatrix<Scalar> angle_affinity(const PointCloud<Scalar>& cloud,
                                      const HomogeneousPolynomial<Scalar>& poly) {
  std::vector<bool> degenerate;
  const Matrix<Scalar> normals =
      detail::unit_gradients(cloud, poly, &degenerate);
  AffinityMatrix<Scalar> out;
  out.weights = (normals * normals.transpose()).cwiseAbs();
  out.weights = out.weights.cwiseMin(Scalar(1));
  for (Index j = 0; j < cloud.size(); ++j)
    if (degenerate[j]) ++out.degenerate_rows;
  if (out.degenerate_rows > 0)
    std::cerr << "angle_affinity: " << out.degenerate_rows
              << " zero-gradient rows\n";
  return out;
}

// C[j][j'] = 1 - |x_j' . grad_j| / |grad_j| for unit-norm points: one minus
// the distance of x_j' from the hyperplane of x_j's gradient.  Not symmetric
// in general; consumers symmetrize via C + C^T.
template <typename Scalar>
AffinityMatrix<Scalar> dist_affinity(const PointCloud<Scalar>& cloud,
                                     const HomogeneousPolynomial<Scalar>& poly) {
  std::vector<bool> degenerate;
  const Matrix<Scalar> normals =
      detail::unit_gradients(cloud, poly, &degenerate);
  AffinityMatrix<Scalar> out;
  out.weights = Scalar(1) -
                (normals * cloud.points.transpose()).cwiseAbs().array();
  out.weights = out.weights.cwiseMax(Scalar(0)).cwiseMin(Scalar(1));
  for (Index j = 0; j < cloud.size(); ++j)
    if (degenerate[j]) {
      out.weights.row(j).setZero();
      ++out.degenerate_rows;
    }
  if (out.degenerate_rows > 0)
    std::cerr << "dist_affinity: " << out.degenerate_rows
              << " zero-gradient rows\n";
  return out;
}

template <typename Scalar>
struct SascResult {
  std::vector<int> labels;
  AffinityMatrix<Scalar> affinity;
  Scalar eigengap = 0;
};

// Fits one degree-n polynomial to the normalized cloud, builds the selected
// affinity, and spectrally clusters C + C^T into n groups.
template <typename Scalar>
SascResult<Scalar> sasc_cluster(const PointCloud<Scalar>& cloud, int degree,
                                SascVariant variant, std::uint64_t seed,
                                Index clusters = 0) {
  if (clusters <= 0) clusters = degree;
  if (cloud.size() < monomial_count(static_cast<int>(cloud.ambient_dim()),
                                    degree))
    throw NotEnoughPointsError("Not enough points");
  const PointCloud<Scalar> unit = normalize_points(cloud);
  const HomogeneousPolynomial<Scalar> poly =
      least_singular_poly(unit, degree);

  SascResult<Scalar> result;
  result.affinity = variant == SascVariant::kAngle
                        ? angle_affinity(unit, poly)
                        : dist_affinity(unit, poly);
  const Matrix<Scalar> symmetric =
      result.affinity.weights + result.affinity.weights.transpose();
  const Vector<Scalar> eigs = spectrum(normalized_laplacian(symmetric));
  result.eigengap = eigs[clusters] - eigs[clusters - 1];
  result.affinity.eigengap = result.eigengap;
  result.labels = spectral_cluster(symmetric, clusters, seed);
  return result;
}

}  // namespace fsc
