// Linear subspaces through the origin, arrangements (unions) of them, random
// generation, and the transversality check.
#pragma once

#include <fsc/core.hpp>
#include <fsc/random.hpp>
#include <fsc/vanishing.hpp>

#include <cmath>

namespace fsc {

// A d-dimensional subspace of R^D held as a D x d orthonormal basis.
template <typename Scalar>
struct Subspace {
  Matrix<Scalar> basis;

  Index ambient_dim() const { return basis.rows(); }
  Index dim() const { return basis.cols(); }
  Index codim() const { return basis.rows() - basis.cols(); }

  // Distance of x from the subspace.
  template <typename Derived>
  Scalar distance(const Eigen::MatrixBase<Derived>& x) const {
    return (x - basis * (basis.transpose() * x)).norm();
  }
};

using Subspaced = Subspace<double>;

// Orthonormalizes the columns of a full-column-rank matrix via Householder
// QR, with column signs fixed so the result is reproducible.
template <typename Scalar>
Matrix<Scalar> orthonormalize(const Matrix<Scalar>& a) {
  Eigen::HouseholderQR<Matrix<Scalar>> qr(a);
  Matrix<Scalar> q = qr.householderQ() *
                     Matrix<Scalar>::Identity(a.rows(), a.cols());
  const Matrix<Scalar> r =
      qr.matrixQR().topRows(a.cols()).template triangularView<Eigen::Upper>();
  for (Index j = 0; j < q.cols(); ++j)
    if (r(j, j) < Scalar(0)) q.col(j) = -q.col(j);
  return q;
}

// Orthonormal basis of the orthogonal complement of span(basis).
template <typename Scalar>
Matrix<Scalar> orthogonal_complement(const Matrix<Scalar>& basis) {
  const Index dim = basis.rows(), d = basis.cols();
  Eigen::HouseholderQR<Matrix<Scalar>> qr(basis);
  const Matrix<Scalar> q_full =
      qr.householderQ() * Matrix<Scalar>::Identity(dim, dim);
  return q_full.rightCols(dim - d);
}

// Principal angles between two subspaces, ascending.
template <typename Scalar>
Vector<Scalar> principal_angles(const Matrix<Scalar>& u,
                                const Matrix<Scalar>& v) {
  Eigen::JacobiSVD<Matrix<Scalar>> svd(u.transpose() * v);
  Vector<Scalar> angles = svd.singularValues();
  for (Index i = 0; i < angles.size(); ++i) {
    const Scalar c = std::min(Scalar(1), std::max(Scalar(-1), angles[i]));
    angles[i] = std::acos(c);
  }
  std::sort(angles.data(), angles.data() + angles.size());
  return angles;
}

// True when the lower-dimensional of the two spans lies inside the other.
// Uses the sine of the largest principal angle, sigma_max((I - B B^T) S),
// which resolves below the acos precision floor.
template <typename Scalar>
bool subspace_included(const Subspace<Scalar>& a, const Subspace<Scalar>& b,
                       Scalar tol = Scalar(1e-10)) {
  const auto& small = a.dim() <= b.dim() ? a : b;
  const auto& big = a.dim() <= b.dim() ? b : a;
  const Matrix<Scalar> residual =
      small.basis - big.basis * (big.basis.transpose() * small.basis);
  Eigen::JacobiSVD<Matrix<Scalar>> svd(residual);
  return svd.singularValues()[0] < tol;
}

// A union of subspaces of a common ambient space, no pairwise inclusions.
template <typename Scalar>
struct Arrangement {
  std::vector<Subspace<Scalar>> subspaces;

  Index ambient_dim() const { return subspaces.front().ambient_dim(); }
  Index count() const { return static_cast<Index>(subspaces.size()); }

  void validate() const {
    if (subspaces.empty())
      throw std::invalid_argument("Arrangement: needs at least one subspace");
    const Index dim = subspaces.front().ambient_dim();
    for (const auto& s : subspaces)
      if (s.ambient_dim() != dim)
        throw std::invalid_argument("Arrangement: mixed ambient dimensions");
    for (std::size_t i = 0; i < subspaces.size(); ++i)
      for (std::size_t j = i + 1; j < subspaces.size(); ++j)
        if (subspace_included(subspaces[i], subspaces[j]))
          throw std::invalid_argument(
              "Arrangement: a subspace is contained in another");
  }
};

using Arrangementd = Arrangement<double>;

// Random d-dimensional subspace of R^D: QR orthonormalization of a D x d
// standard-Gaussian matrix, deterministic per seed.
template <typename Scalar>
Subspace<Scalar> random_subspace(Index ambient_dim, Index dim,
                                 std::uint64_t seed) {
  if (dim < 1 || dim > ambient_dim)
    throw std::invalid_argument("random_subspace: need 1 <= d <= D");
  SplitMix64 rng(seed);
  Matrix<Scalar> g(ambient_dim, dim);
  for (Index i = 0; i < ambient_dim; ++i)
    for (Index j = 0; j < dim; ++j) g(i, j) = Scalar(rng.gaussian());
  return Subspace<Scalar>{orthonormalize(g)};
}

// Transversality: for every nonempty subset I of components, the codimension
// of the intersection equals min(D, sum of codimensions), checked through
// the rank of the stacked complement bases.
template <typename Scalar>
bool check_transversality(const Arrangement<Scalar>& arrangement,
                          const RankPolicy& policy = RankPolicy{}) {
  const Index n = arrangement.count();
  if (n > 15)
    throw std::invalid_argument(
        "check_transversality: subset enumeration capped at 15 subspaces");
  const Index dim = arrangement.ambient_dim();

  std::vector<Matrix<Scalar>> complements;
  complements.reserve(n);
  for (const auto& s : arrangement.subspaces)
    complements.push_back(orthogonal_complement(s.basis));

  for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << n); ++mask) {
    Index total_codim = 0;
    for (Index i = 0; i < n; ++i)
      if (mask & (std::uint64_t(1) << i))
        total_codim += complements[i].cols();
    Matrix<Scalar> stacked(dim, total_codim);
    Index col = 0;
    for (Index i = 0; i < n; ++i)
      if (mask & (std::uint64_t(1) << i)) {
        stacked.middleCols(col, complements[i].cols()) = complements[i];
        col += complements[i].cols();
      }
    Eigen::BDCSVD<Matrix<Scalar>> svd(stacked);
    const Vector<Scalar> sv = svd.singularValues();
    const Scalar cut = policy.threshold(sv.size() > 0 ? sv[0] : Scalar(0));
    Index rank = 0;
    while (rank < sv.size() && sv[rank] > cut) ++rank;
    if (rank != std::min(dim, total_codim)) return false;
  }
  return true;
}

}  // namespace fsc
