// Numerical vanishing-polynomial machinery: null spaces of embedded data
// matrices, least-singular-vector polynomials, minimal-degree search, the
// hyperplane rank condition, and the curvature proxy beta.
#pragma once

#include <fsc/polynomial.hpp>

#include <algorithm>
#include <optional>
#include <utility>

namespace fsc {

// Numerical rank decisions.  In relative mode singular values below
// tolerance * sigma_max count as zero; the 1e-10 default separates exact
// vanishing (roundoff-level sigmas) from genuinely nonzero directions.
struct RankPolicy {
  enum class Mode { kRelative, kAbsolute };
  double relative_tolerance = 1e-10;
  Mode mode = Mode::kRelative;

  template <typename Scalar>
  Scalar threshold(Scalar sigma_max) const {
    return mode == Mode::kRelative
               ? Scalar(relative_tolerance) * sigma_max
               : Scalar(relative_tolerance);
  }
};

namespace detail {

// Full-V SVD wrapper.  Singular values beyond min(N, M) are structural zeros;
// the corresponding V columns span the row-deficiency null space.
template <typename Scalar>
struct FullSvd {
  Vector<Scalar> singular_values;  // length M, padded with zeros when N < M
  Matrix<Scalar> v;                // M x M

  explicit FullSvd(const Matrix<Scalar>& a) {
    Eigen::BDCSVD<Matrix<Scalar>> svd(a, Eigen::ComputeFullV);
    singular_values = Vector<Scalar>::Zero(a.cols());
    singular_values.head(svd.singularValues().size()) = svd.singularValues();
    v = svd.matrixV();
  }

  Index rank(const RankPolicy& policy) const {
    const Scalar sigma_max =
        singular_values.size() > 0 ? singular_values[0] : Scalar(0);
    const Scalar cut = policy.threshold(sigma_max);
    Index r = 0;
    while (r < singular_values.size() && singular_values[r] > cut) ++r;
    return r;
  }
};

// Smallest right singular vector by inverse power iteration on the ridged
// Gram matrix.  Used above the full-decomposition size cutoff, where the
// O(M^3) factorization is paid once instead of a full SVD.
template <typename Scalar>
Vector<Scalar> smallest_singular_vector_iterative(const Matrix<Scalar>& a,
                                                  int max_iters = 200) {
  const Index m = a.cols();
  Matrix<Scalar> gram = a.transpose() * a;
  const Scalar ridge =
      std::numeric_limits<Scalar>::epsilon() * gram.trace() / Scalar(m > 0 ? m : 1);
  gram.diagonal().array() += ridge;
  Eigen::LDLT<Matrix<Scalar>> ldlt(gram);

  Vector<Scalar> x = Vector<Scalar>::Ones(m) / std::sqrt(Scalar(m));
  Scalar prev = std::numeric_limits<Scalar>::max();
  for (int it = 0; it < max_iters; ++it) {
    Vector<Scalar> y = ldlt.solve(x);
    const Scalar norm = y.norm();
    if (!(norm > Scalar(0))) break;
    x = y / norm;
    const Scalar rayleigh = (a * x).squaredNorm();
    if (std::abs(prev - rayleigh) <=
        Scalar(1e-14) * std::max(Scalar(1), rayleigh))
      break;
    prev = rayleigh;
  }
  return x;
}

}  // namespace detail

// Orthonormal coefficient vectors spanning the numerical right null space of
// the embedded data matrix; empty when it has full column rank.
template <typename Scalar>
std::vector<HomogeneousPolynomial<Scalar>> nullspace_polys(
    const PointCloud<Scalar>& cloud, int degree, const RankPolicy& policy) {
  const MonomialBasis basis =
      monomial_basis(static_cast<int>(cloud.ambient_dim()), degree);
  const detail::FullSvd<Scalar> svd(embed(cloud, basis));
  const Index rank = svd.rank(policy);
  std::vector<HomogeneousPolynomial<Scalar>> polys;
  polys.reserve(basis.size() - rank);
  for (Index k = rank; k < basis.size(); ++k)
    polys.push_back(HomogeneousPolynomial<Scalar>{basis, svd.v.col(k)});
  return polys;
}

// The unit-coefficient polynomial minimizing ||embed(X, degree) * c||: the
// right singular vector of the smallest singular value.  Full decomposition
// up to 2000 columns, inverse iteration above.
template <typename Scalar>
HomogeneousPolynomial<Scalar> least_singular_poly(
    const PointCloud<Scalar>& cloud, int degree) {
  const MonomialBasis basis =
      monomial_basis(static_cast<int>(cloud.ambient_dim()), degree);
  const Matrix<Scalar> embedded = embed(cloud, basis);
  Vector<Scalar> coeffs;
  if (basis.size() <= 2000) {
    const detail::FullSvd<Scalar> svd(embedded);
    coeffs = svd.v.col(basis.size() - 1);
  } else {
    coeffs = detail::smallest_singular_vector_iterative(embedded);
  }
  return HomogeneousPolynomial<Scalar>{basis, std::move(coeffs)};
}

// Smallest degree k <= max_degree at which the sample admits a vanishing
// polynomial, together with one null-space element; nullopt when none exists.
template <typename Scalar>
std::optional<std::pair<int, HomogeneousPolynomial<Scalar>>>
minimal_degree_poly(const PointCloud<Scalar>& cloud, int max_degree,
                    const RankPolicy& policy) {
  for (int k = 1; k <= max_degree; ++k) {
    auto polys = nullspace_polys(cloud, k, policy);
    if (!polys.empty()) return std::make_pair(k, std::move(polys.front()));
  }
  return std::nullopt;
}

// True iff the embedded data matrix has full column rank, i.e. the sample
// admits no vanishing polynomial of this degree.  Row-deficient matrices
// (N < M) always fail.
template <typename Scalar>
bool is_full_rank(const PointCloud<Scalar>& cloud, int degree,
                  const RankPolicy& policy) {
  const detail::FullSvd<Scalar> svd(embed(cloud, degree));
  return svd.rank(policy) == svd.singular_values.size();
}

// For samples of a hyperplane arrangement, the number of hyperplanes is the
// smallest degree at which the embedded data matrix drops rank by exactly 1.
template <typename Scalar>
int hyperplane_count(const PointCloud<Scalar>& cloud, int max_degree,
                     const RankPolicy& policy) {
  for (int degree = 1; degree <= max_degree; ++degree) {
    const detail::FullSvd<Scalar> svd(embed(cloud, degree));
    const Index corank = svd.singular_values.size() - svd.rank(policy);
    if (corank == 1) return degree;
    if (corank > 1)
      throw NotFoundError("hyperplane_count: corank jumped past 1; sample is "
                          "not a hyperplane arrangement in general position");
  }
  throw NotFoundError("hyperplane_count: no rank drop up to max_degree");
}

// Average normalized distance of each point to the hyperplane its own
// gradient defines: (1/N) sum_j |x_j . grad p(x_j)| / (|x_j| |grad p(x_j)|).
// Zero for exact vanishing polynomials, noise-scale otherwise.  Points with
// numerically zero gradients are excluded from the average.
template <typename Scalar>
Scalar beta(const PointCloud<Scalar>& cloud,
            const HomogeneousPolynomial<Scalar>& p) {
  constexpr Scalar kGradFloor = Scalar(1e-14);
  Scalar sum(0);
  Index counted = 0;
  for (Index j = 0; j < cloud.size(); ++j) {
    const auto x = cloud.points.row(j).transpose();
    const Scalar xnorm = x.norm();
    if (!(xnorm > Scalar(0)))
      throw std::invalid_argument("beta: zero point in cloud");
    const Vector<Scalar> grad = gradient(p, x);
    const Scalar gnorm = grad.norm();
    if (gnorm < kGradFloor) continue;
    sum += std::abs(x.dot(grad)) / (xnorm * gnorm);
    ++counted;
  }
  if (counted == 0)
    throw DegeneratePolynomialError(
        "beta: gradient vanishes at every sample point");
  return sum / Scalar(counted);
}

}  // namespace fsc
