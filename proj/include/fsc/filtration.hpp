// Robust descending filtrations and the FSASC driver.
//
// A filtration starts from one reference point and a vanishing polynomial.
// Each step projects the surviving points onto the hyperplane orthogonal to
// the polynomial's gradient at the reference, re-coordinatizes to one
// dimension less, drops points whose norm shrank by more than delta, and
// refits a degree-n polynomial to the survivors.  Points of the reference's
// subspace keep their norm through every step; everything else shrinks.  One
// filtration per reference point yields one row of the affinity matrix.
#pragma once

#include <fsc/affinity.hpp>
#include <fsc/spectral.hpp>
#include <fsc/vanishing.hpp>

#include <atomic>
#include <thread>

namespace fsc {

struct FiltrationParams {
  int degree = 1;          // n: degree of the working polynomials
  Index min_cluster = 10;  // L: stop once fewer survivors remain
  double delta = 0;        // relative norm-drop threshold
};

// One affinity row: surviving norms after the reference's filtration, and
// the number of hyperplane projections executed.
template <typename Scalar>
struct FiltrationRow {
  Vector<Scalar> values;
  Index steps = 0;
};

// Per-step record for diagnostics and invariant tests.
template <typename Scalar>
struct FiltrationTrace {
  std::vector<Vector<Scalar>> step_values;  // row state after each write
};

// Orthonormal basis of the hyperplane orthogonal to `normal`, as the last
// d-1 columns of the Householder reflector mapping normal to +-e_1.  The
// basis choice is deterministic, and all outputs of the filtration are
// invariant to it (norms do not depend on the coordinate frame).
template <typename Scalar>
Matrix<Scalar> hyperplane_basis(const Vector<Scalar>& normal) {
  const Index d = normal.size();
  if (d < 2)
    throw std::invalid_argument("hyperplane_basis: ambient dimension >= 2");
  const Scalar norm = normal.norm();
  if (!(norm > Scalar(0)))
    throw std::invalid_argument("hyperplane_basis: zero normal");
  Vector<Scalar> u = normal / norm;
  u[0] += u[0] >= Scalar(0) ? Scalar(1) : Scalar(-1);
  u /= u.norm();
  // Columns 2..d of I - 2 u u^T.
  Matrix<Scalar> basis = Matrix<Scalar>::Zero(d, d - 1);
  basis.bottomRows(d - 1).setIdentity();
  basis.noalias() -= (Scalar(2) * u) * u.tail(d - 1).transpose();
  return basis;
}

template <typename Scalar>
struct HyperplaneProjection {
  Matrix<Scalar> points;  // coordinates in the hyperplane, one row per point
  Vector<Scalar> drops;   // relative norm decrease per point
};

// Projects each row of `points` onto the hyperplane normal^perp and returns
// coordinates in a deterministic orthonormal basis of it, together with the
// relative norm drop of every point.
template <typename Scalar>
HyperplaneProjection<Scalar> project_to_hyperplane(
    const Matrix<Scalar>& points, const Vector<Scalar>& normal) {
  const Matrix<Scalar> basis = hyperplane_basis(normal);
  HyperplaneProjection<Scalar> out;
  out.points.noalias() = points * basis;
  out.drops.resize(points.rows());
  for (Index j = 0; j < points.rows(); ++j) {
    const Scalar before = points.row(j).norm();
    out.drops[j] = before > Scalar(0)
                       ? (before - out.points.row(j).norm()) / before
                       : Scalar(0);
  }
  return out;
}

// One robust filtration: while the working
// dimension exceeds 1, form the hyperplane of the current polynomial's
// gradient at the reference; stop if the reference itself drops (filling the
// row with first-projection norms when this happens immediately); otherwise
// keep the points that survived, record their norms, stop if too few remain
// to continue, and else descend one dimension and refit.
template <typename Scalar>
FiltrationRow<Scalar> single_filtration(
    const PointCloud<Scalar>& cloud, Index ref_index,
    const HomogeneousPolynomial<Scalar>& poly, const FiltrationParams& params,
    FiltrationTrace<Scalar>* trace = nullptr) {
  const Index n_points = cloud.size();
  const Index ambient = cloud.ambient_dim();
  if (n_points < monomial_count(static_cast<int>(ambient), params.degree))
    throw NotEnoughPointsError("Not enough points");
  constexpr Scalar kGradFloor = Scalar(1e-14);

  FiltrationRow<Scalar> row;
  row.values = Vector<Scalar>::Zero(n_points);

  std::vector<Index> survivors(n_points);
  for (Index j = 0; j < n_points; ++j) survivors[j] = j;
  Matrix<Scalar> pts = cloud.points;
  Vector<Scalar> ref = cloud.points.row(ref_index).transpose();
  HomogeneousPolynomial<Scalar> q = poly;
  Index d = ambient;

  auto record = [&] {
    if (trace) trace->step_values.push_back(row.values);
  };

  while (d > 1) {
    const Vector<Scalar> grad = gradient(q, ref);
    if (!(grad.norm() > kGradFloor)) break;  // degenerate: keep current row

    const Matrix<Scalar> basis = hyperplane_basis(grad);
    const Vector<Scalar> ref_next = basis.transpose() * ref;
    const Scalar ref_norm = ref.norm();
    const Scalar ref_drop = (ref_norm - ref_next.norm()) / ref_norm;

    if (ref_drop > params.delta) {
      if (d == ambient) {
        // The reference dropped at the very first hyperplane; fall back to
        // scoring every point by its first-projection norm.
        const Matrix<Scalar> projected = pts * basis;
        for (Index j = 0; j < n_points; ++j)
          row.values[j] = projected.row(j).norm();
        record();
      }
      break;
    }

    const Matrix<Scalar> projected = pts * basis;
    std::vector<Index> kept;
    kept.reserve(survivors.size());
    for (std::size_t s = 0; s < survivors.size(); ++s) {
      const Scalar before = pts.row(s).norm();
      const Scalar drop = before > Scalar(0)
                              ? (before - projected.row(s).norm()) / before
                              : Scalar(0);
      if (drop <= params.delta) kept.push_back(static_cast<Index>(s));
    }
    if (static_cast<Index>(kept.size()) < params.min_cluster) break;

    row.values.setZero();
    for (Index s : kept)
      row.values[survivors[s]] = projected.row(s).norm();
    record();

    if (static_cast<Index>(kept.size()) <
        monomial_count(static_cast<int>(d), params.degree))
      break;

    // Descend: keep the survivors in hyperplane coordinates and refit.
    Matrix<Scalar> next_pts(kept.size(), d - 1);
    std::vector<Index> next_survivors(kept.size());
    for (std::size_t t = 0; t < kept.size(); ++t) {
      next_pts.row(t) = projected.row(kept[t]);
      next_survivors[t] = survivors[kept[t]];
    }
    pts = std::move(next_pts);
    survivors = std::move(next_survivors);
    ref = ref_next;
    --d;
    ++row.steps;

    PointCloud<Scalar> working;
    working.points = pts;
    q = least_singular_poly(working, params.degree);
  }
  return row;
}

template <typename Scalar>
struct FsascParams {
  int degree = 1;          // n: polynomial degree, usually = cluster count
  Index clusters = 0;      // 0 means "same as degree"
  Index min_cluster = 10;  // L
  std::vector<Scalar> gammas = {Scalar(0.1)};
  std::uint64_t seed = 0;  // consumed only by the spectral step
  int threads = 0;         // 0: hardware concurrency

  Index cluster_count() const {
    return clusters > 0 ? clusters : static_cast<Index>(degree);
  }
};

template <typename Scalar>
struct FsascResult {
  std::vector<int> labels;
  AffinityMatrix<Scalar> affinity;  // the eigengap-selected C (unsymmetrized)
  Scalar eigengap = 0;
  Scalar beta = 0;
  Scalar gamma = 0;  // the gamma that won the eigengap selection
};

namespace detail {

template <typename Scalar>
Matrix<Scalar> filtration_affinity(const PointCloud<Scalar>& cloud,
                                   const HomogeneousPolynomial<Scalar>& poly,
                                   const FiltrationParams& params,
                                   int threads) {
  const Index n_points = cloud.size();
  Matrix<Scalar> affinity(n_points, n_points);
  int worker_count = threads > 0
                         ? threads
                         : static_cast<int>(std::thread::hardware_concurrency());
  if (worker_count < 1) worker_count = 1;
  worker_count = static_cast<int>(
      std::min<Index>(worker_count, n_points));

  std::atomic<Index> next_row{0};
  auto work = [&] {
    for (Index j = next_row.fetch_add(1); j < n_points;
         j = next_row.fetch_add(1))
      affinity.row(j) =
          single_filtration(cloud, j, poly, params).values.transpose();
  };
  if (worker_count == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(worker_count);
    for (int t = 0; t < worker_count; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return affinity;
}

}  // namespace detail

// The full driver: normalize, fit one degree-n polynomial, derive the drop
// threshold delta = gamma * beta per candidate gamma, build the affinity
// row-by-row, and keep the candidate whose normalized Laplacian maximizes
// the eigengap lambda_{n+1} - lambda_n.  Rows are computed concurrently;
// the seed feeds only the final k-means.
template <typename Scalar>
FsascResult<Scalar> fsasc(const PointCloud<Scalar>& cloud,
                          const FsascParams<Scalar>& params) {
  const Index n_points = cloud.size();
  if (params.degree < 1 || params.gammas.empty())
    throw std::invalid_argument("fsasc: need degree >= 1 and gammas");
  if (n_points < monomial_count(static_cast<int>(cloud.ambient_dim()),
                                params.degree))
    throw NotEnoughPointsError("Not enough points");

  const PointCloud<Scalar> unit = normalize_points(cloud);
  const HomogeneousPolynomial<Scalar> poly =
      least_singular_poly(unit, params.degree);
  const Scalar b = beta(unit, poly);
  const Index k = params.cluster_count();
  if (k < 1 || k >= n_points)
    throw std::invalid_argument("fsasc: need 1 <= clusters < N");

  FsascResult<Scalar> result;
  result.beta = b;
  // On exact data beta is pure roundoff, and a threshold below the rounding
  // error of the norm computation removes on-subspace points at random.
  // Flooring delta at a few machine epsilons keeps sigma=0 runs exact and is
  // inert at any real noise level.
  const Scalar delta_floor =
      Scalar(8) * std::numeric_limits<Scalar>::epsilon();
  Scalar best_gap = Scalar(-1);
  for (const Scalar gamma : params.gammas) {
    FiltrationParams fp;
    fp.degree = params.degree;
    fp.min_cluster = params.min_cluster;
    fp.delta = static_cast<double>(std::max(gamma * b, delta_floor));
    Matrix<Scalar> affinity =
        detail::filtration_affinity(unit, poly, fp, params.threads);
    const Matrix<Scalar> symmetric = affinity + affinity.transpose();
    const Vector<Scalar> eigs = spectrum(normalized_laplacian(symmetric));
    const Scalar gap = eigs[k] - eigs[k - 1];
    if (gap > best_gap) {
      best_gap = gap;
      result.affinity.weights = std::move(affinity);
      result.gamma = gamma;
    }
  }
  result.eigengap = best_gap;
  result.affinity.eigengap = best_gap;

  const Matrix<Scalar> symmetric =
      result.affinity.weights + result.affinity.weights.transpose();
  result.labels = spectral_cluster(symmetric, k, params.seed);
  return result;
}

}  // namespace fsc
