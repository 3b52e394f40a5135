// The exact noiseless algorithms over clean samples in general position:
//
//  - adf: one descending filtration in working coordinates, returning an
//    orthonormal basis of the orthogonal complement of the subspace through
//    the reference point.  Each step cuts the current ambient space by the
//    hyperplane of a vanishing polynomial's gradient at the reference,
//    realizes the intersection by keeping points whose norm survives the
//    projection, and terminates once the restricted sample admits no
//    vanishing polynomial (full-column-rank embedded matrix).
//  - fasc: peels off one subspace per adf run, removing its points, with the
//    degree budget decremented after each component.
//  - pda_subspace_at_point: classic polynomial differentiation, spanning the
//    gradients of a whole null-space basis at one point.
#pragma once

#include <fsc/filtration.hpp>
#include <fsc/subspaces.hpp>
#include <fsc/vanishing.hpp>

namespace fsc {

template <typename Scalar>
struct FascOutput {
  Index count = 0;                           // number of subspaces found
  std::vector<Index> dims;                   // dims[i] = D - complement cols
  std::vector<Matrix<Scalar>> complements;   // orthonormal bases of S_i^perp
};

using FascOutputd = FascOutput<double>;

// State of one descending filtration: the isometry from the current working
// coordinates back to R^D and the hyperplane normals found so far.  The
// coord_map columns stay orthonormal and orthogonal to every normal.
template <typename Scalar>
struct FiltrationFrame {
  Index step = 0;
  Matrix<Scalar> coord_map;  // D x (D - step), orthonormal columns
  Matrix<Scalar> normals;    // D x step, orthonormal columns

  Index working_dim() const { return coord_map.cols(); }
};

namespace detail {

// Relative norm-drop tolerance realizing "intersect with the hyperplane" on
// clean data.
constexpr double kIntersectTol = 1e-9;

// Among the null-space polynomials of the working sample at the smallest
// admissible degree, pick the one with the largest gradient at the
// reference; the search walks degree by degree up to max_degree.
template <typename Scalar>
bool next_working_polynomial(const PointCloud<Scalar>& working,
                             const Vector<Scalar>& ref, int max_degree,
                             const RankPolicy& policy,
                             HomogeneousPolynomial<Scalar>* out) {
  constexpr Scalar kGradFloor = Scalar(1e-10);
  for (int degree = 1; degree <= max_degree; ++degree) {
    const auto candidates = nullspace_polys(working, degree, policy);
    Scalar best_norm = kGradFloor;
    const HomogeneousPolynomial<Scalar>* best = nullptr;
    for (const auto& candidate : candidates) {
      const Scalar g = gradient(candidate, ref).norm();
      if (g > best_norm) {
        best_norm = g;
        best = &candidate;
      }
    }
    if (best) {
      *out = *best;
      return true;
    }
  }
  return false;
}

}  // namespace detail

// Descending filtration from a vanishing polynomial p with nonzero gradient
// at the reference.  Returns a D x c matrix whose orthonormal columns span
// the orthogonal complement of the subspace containing the reference; the
// final frame (coordinate map and normals) is exposed for diagnostics.
template <typename Scalar>
Matrix<Scalar> adf(const HomogeneousPolynomial<Scalar>& poly,
                   const Vector<Scalar>& ref, const PointCloud<Scalar>& cloud,
                   int max_degree, const RankPolicy& policy,
                   FiltrationFrame<Scalar>* final_frame = nullptr) {
  const Index ambient = cloud.ambient_dim();
  Vector<Scalar> grad0 = gradient(poly, ref);
  if (!(grad0.norm() > Scalar(0)))
    throw std::invalid_argument("adf: zero gradient at the reference");

  FiltrationFrame<Scalar> frame;
  frame.normals.resize(ambient, 0);                      // b_1..b_s
  frame.coord_map = Matrix<Scalar>::Identity(ambient, ambient);
  Matrix<Scalar> pts = cloud.points;
  Vector<Scalar> ref_w = ref;
  Vector<Scalar> normal_w = grad0.normalized();  // in working coordinates

  while (true) {
    // Record the new normal in ambient coordinates, re-orthogonalized
    // against the ones found so far for numerical hygiene.
    Vector<Scalar> b = frame.coord_map * normal_w;
    if (frame.normals.cols() > 0)
      b -= frame.normals * (frame.normals.transpose() * b);
    b.normalize();
    frame.normals.conservativeResize(Eigen::NoChange,
                                     frame.normals.cols() + 1);
    frame.normals.col(frame.normals.cols() - 1) = b;

    if (frame.working_dim() == 1) break;  // nothing left to cut

    // Intersect with the hyperplane: project, keep points whose norm
    // survives, and re-coordinatize.
    const Matrix<Scalar> basis = hyperplane_basis(normal_w);
    const Matrix<Scalar> projected = pts * basis;
    std::vector<Index> kept;
    for (Index j = 0; j < pts.rows(); ++j) {
      const Scalar before = pts.row(j).norm();
      if (before <= Scalar(0)) continue;
      const Scalar drop = (before - projected.row(j).norm()) / before;
      if (drop <= Scalar(detail::kIntersectTol)) kept.push_back(j);
    }
    Matrix<Scalar> next(kept.size(), frame.working_dim() - 1);
    for (std::size_t t = 0; t < kept.size(); ++t)
      next.row(t) = projected.row(kept[t]);
    pts = std::move(next);
    ref_w = basis.transpose() * ref_w;
    frame.coord_map = frame.coord_map * basis;
    ++frame.step;

    if (pts.rows() == 0)
      throw GeneralPositionError(
          "adf: no points survived the hyperplane restriction");

    // Terminate once the restricted sample admits no vanishing polynomial.
    PointCloud<Scalar> working;
    working.points = pts;
    if (is_full_rank(working, max_degree, policy)) break;

    HomogeneousPolynomial<Scalar> q;
    if (!detail::next_working_polynomial(working, ref_w, max_degree, policy,
                                         &q))
      throw GeneralPositionError(
          "adf: no vanishing polynomial with nonzero gradient at the "
          "reference; sample violates the general-position assumptions");
    normal_w = gradient(q, ref_w).normalized();
  }
  if (final_frame) *final_frame = frame;
  return frame.normals;
}

// Full decomposition: find a minimal-degree vanishing polynomial, run one
// filtration from the point with the largest gradient, remove the recovered
// subspace's points, decrement the degree budget, repeat until no points
// remain.
template <typename Scalar>
FascOutput<Scalar> fasc(const PointCloud<Scalar>& cloud, int max_degree,
                        const RankPolicy& policy) {
  const Index ambient = cloud.ambient_dim();
  PointCloud<Scalar> remaining = cloud;
  remaining.labels.clear();
  int budget = max_degree;

  FascOutput<Scalar> out;
  while (remaining.size() > 0) {
    if (budget < 1)
      throw GeneralPositionError(
          "fasc: degree budget exhausted with points remaining");
    const auto minimal = minimal_degree_poly(remaining, budget, policy);
    if (!minimal)
      throw GeneralPositionError(
          "fasc: no vanishing polynomial up to the degree budget");
    const auto& poly = minimal->second;

    Index best_ref = -1;
    Scalar best_grad(0);
    for (Index j = 0; j < remaining.size(); ++j) {
      const Scalar g =
          gradient(poly, remaining.points.row(j).transpose()).norm();
      if (g > best_grad) {
        best_grad = g;
        best_ref = j;
      }
    }
    if (best_ref < 0)
      throw GeneralPositionError(
          "fasc: gradient vanishes at every remaining point");

    const Matrix<Scalar> complement =
        adf(poly, remaining.points.row(best_ref).transpose().eval(),
            remaining, budget, policy);

    // Remove the points of the recovered subspace.
    std::vector<Index> kept;
    for (Index j = 0; j < remaining.size(); ++j) {
      const Vector<Scalar> x = remaining.points.row(j).transpose();
      const Scalar dist = (complement.transpose() * x).norm();
      if (dist > Scalar(detail::kIntersectTol) * x.norm()) kept.push_back(j);
    }
    if (static_cast<Index>(kept.size()) == remaining.size())
      throw GeneralPositionError(
          "fasc: recovered subspace contains none of the points");
    Matrix<Scalar> next(kept.size(), ambient);
    for (std::size_t t = 0; t < kept.size(); ++t)
      next.row(t) = remaining.points.row(kept[t]);
    remaining.points = std::move(next);

    out.dims.push_back(ambient - complement.cols());
    out.complements.push_back(complement);
    ++out.count;
    --budget;
  }
  return out;
}

// Single-shot recovery at one nonsingular point: the subspace through ref
// is the orthogonal complement of the span of all null-space gradients at
// ref, for any degree >= the number of subspaces.
template <typename Scalar>
Subspace<Scalar> pda_subspace_at_point(const PointCloud<Scalar>& cloud,
                                       const Vector<Scalar>& ref, int degree,
                                       const RankPolicy& policy) {
  const auto polys = nullspace_polys(cloud, degree, policy);
  if (polys.empty())
    throw NotFoundError(
        "pda_subspace_at_point: the sample admits no vanishing polynomial "
        "at this degree");
  Matrix<Scalar> gradients(cloud.ambient_dim(),
                           static_cast<Index>(polys.size()));
  for (std::size_t k = 0; k < polys.size(); ++k)
    gradients.col(static_cast<Index>(k)) = gradient(polys[k], ref);

  Eigen::BDCSVD<Matrix<Scalar>> svd(gradients, Eigen::ComputeFullU);
  const Vector<Scalar> sv = svd.singularValues();
  const Scalar cut = policy.threshold(sv.size() > 0 ? sv[0] : Scalar(0));
  Index rank = 0;
  while (rank < sv.size() && sv[rank] > cut) ++rank;
  return Subspace<Scalar>{
      svd.matrixU().rightCols(cloud.ambient_dim() - rank)};
}

}  // namespace fsc
