// Normalized graph Laplacian, its spectrum, and spectral clustering in the
// row-normalized (Ng-Jordan-Weiss) variant with seeded k-means++.
#pragma once

#include <fsc/core.hpp>
#include <fsc/random.hpp>

#include <limits>

namespace fsc {

// L = I - D^{-1/2} W D^{-1/2} with D = diag(row sums).  Vertices of zero
// degree keep an identity row.
template <typename Scalar>
Matrix<Scalar> normalized_laplacian(const Matrix<Scalar>& weights) {
  const Index n = weights.rows();
  if (weights.cols() != n)
    throw std::invalid_argument("normalized_laplacian: matrix must be square");
  Vector<Scalar> inv_sqrt_degree(n);
  for (Index i = 0; i < n; ++i) {
    const Scalar degree = weights.row(i).sum();
    inv_sqrt_degree[i] =
        degree > Scalar(0) ? Scalar(1) / std::sqrt(degree) : Scalar(0);
  }
  Matrix<Scalar> laplacian =
      -(inv_sqrt_degree.asDiagonal() * weights * inv_sqrt_degree.asDiagonal());
  laplacian.diagonal().array() += Scalar(1);
  for (Index i = 0; i < n; ++i)
    if (inv_sqrt_degree[i] == Scalar(0)) {
      laplacian.row(i).setZero();
      laplacian.col(i).setZero();
      laplacian(i, i) = Scalar(1);
    }
  return laplacian;
}

// Eigenvalues of a symmetric matrix, ascending.
template <typename Scalar>
Vector<Scalar> spectrum(const Matrix<Scalar>& symmetric) {
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(symmetric,
                                                       Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

// lambda_{n+1} - lambda_n of the normalized Laplacian spectrum of W.
template <typename Scalar>
Scalar laplacian_eigengap(const Matrix<Scalar>& weights, Index n) {
  const Vector<Scalar> eigs = spectrum(normalized_laplacian(weights));
  if (n < 1 || n >= eigs.size())
    throw std::invalid_argument("laplacian_eigengap: n out of range");
  return eigs[n] - eigs[n - 1];
}

namespace detail {

// Lloyd iterations from a k-means++ initialization.  Empty clusters steal
// the point farthest from its assigned centroid.  Deterministic per seed.
template <typename Scalar>
struct KMeansRun {
  std::vector<int> labels;
  Scalar inertia = std::numeric_limits<Scalar>::max();
};

template <typename Scalar>
KMeansRun<Scalar> kmeans_once(const Matrix<Scalar>& rows, Index k,
                              SplitMix64& rng, int max_iters,
                              Scalar relative_tol) {
  const Index n = rows.rows();
  Matrix<Scalar> centroids(k, rows.cols());

  // k-means++ seeding.
  std::vector<Scalar> dist2(n, std::numeric_limits<Scalar>::max());
  centroids.row(0) = rows.row(rng.uniform_index(n));
  for (Index c = 1; c < k; ++c) {
    Scalar total(0);
    for (Index i = 0; i < n; ++i) {
      const Scalar d = (rows.row(i) - centroids.row(c - 1)).squaredNorm();
      dist2[i] = std::min(dist2[i], d);
      total += dist2[i];
    }
    if (total <= Scalar(0)) {
      centroids.row(c) = rows.row(rng.uniform_index(n));
      continue;
    }
    Scalar target = Scalar(rng.uniform()) * total;
    Index chosen = n - 1;
    for (Index i = 0; i < n; ++i) {
      target -= dist2[i];
      if (target <= Scalar(0)) {
        chosen = i;
        break;
      }
    }
    centroids.row(c) = rows.row(chosen);
  }

  KMeansRun<Scalar> run;
  run.labels.assign(n, 0);
  Scalar prev_inertia = std::numeric_limits<Scalar>::max();
  for (int iter = 0; iter < max_iters; ++iter) {
    // Assign.
    Scalar inertia(0);
    for (Index i = 0; i < n; ++i) {
      Scalar best = std::numeric_limits<Scalar>::max();
      int best_c = 0;
      for (Index c = 0; c < k; ++c) {
        const Scalar d = (rows.row(i) - centroids.row(c)).squaredNorm();
        if (d < best) {
          best = d;
          best_c = static_cast<int>(c);
        }
      }
      run.labels[i] = best_c;
      inertia += best;
    }
    run.inertia = inertia;

    // Update.
    Matrix<Scalar> sums = Matrix<Scalar>::Zero(k, rows.cols());
    std::vector<Index> counts(k, 0);
    for (Index i = 0; i < n; ++i) {
      sums.row(run.labels[i]) += rows.row(i);
      ++counts[run.labels[i]];
    }
    for (Index c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        centroids.row(c) = sums.row(c) / Scalar(counts[c]);
      } else {
        // Steal the worst-fitting point.
        Index worst = 0;
        Scalar worst_d(-1);
        for (Index i = 0; i < n; ++i) {
          const Scalar d =
              (rows.row(i) - centroids.row(run.labels[i])).squaredNorm();
          if (d > worst_d) {
            worst_d = d;
            worst = i;
          }
        }
        centroids.row(c) = rows.row(worst);
      }
    }

    if (std::abs(prev_inertia - inertia) <=
        relative_tol * std::max(Scalar(1), inertia))
      break;
    prev_inertia = inertia;
  }
  return run;
}

}  // namespace detail

// Plain k-means over matrix rows: k-means++ seeding, 20 restarts, best
// inertia wins; fully determined by the seed.
template <typename Scalar>
std::vector<int> kmeans(const Matrix<Scalar>& rows, Index k,
                        std::uint64_t seed, int restarts = 20,
                        int max_iters = 300,
                        Scalar relative_tol = Scalar(1e-9)) {
  if (k < 1 || k > rows.rows())
    throw std::invalid_argument("kmeans: need 1 <= k <= N");
  SplitMix64 seeder(seed);
  detail::KMeansRun<Scalar> best;
  for (int r = 0; r < restarts; ++r) {
    SplitMix64 rng(seeder.fork());
    auto run = detail::kmeans_once(rows, k, rng, max_iters, relative_tol);
    if (run.inertia < best.inertia) best = std::move(run);
  }
  return best.labels;
}

// Spectral clustering: rows of the n bottom eigenvectors of the normalized
// Laplacian, row-normalized to unit length (zero rows stay zero), then
// k-means.
template <typename Scalar>
std::vector<int> spectral_cluster(const Matrix<Scalar>& weights, Index n,
                                  std::uint64_t seed) {
  if (n > weights.rows())
    throw std::invalid_argument("spectral_cluster: more clusters than points");
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(
      normalized_laplacian(weights));
  Matrix<Scalar> embedding = solver.eigenvectors().leftCols(n);
  for (Index i = 0; i < embedding.rows(); ++i) {
    const Scalar norm = embedding.row(i).norm();
    if (norm > Scalar(0)) embedding.row(i) /= norm;
  }
  return kmeans(embedding, n, seed);
}

}  // namespace fsc
