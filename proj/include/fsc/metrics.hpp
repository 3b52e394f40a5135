// Clustering evaluation: misclassification under the best label matching,
// and the intra-/inter-cluster connectivity of an affinity matrix.
#pragma once

#include <fsc/spectral.hpp>

#include <algorithm>
#include <iostream>
#include <map>
#include <numeric>

namespace fsc {

struct ClusteringResult {
  std::vector<int> labels;
  double error_percent = 0;
  double intra = 0;
  double inter_percent = 0;
  double eigengap = 0;
};

namespace detail {

// Remaps arbitrary label values onto 0..k-1.
inline std::vector<int> compact_labels(const std::vector<int>& labels,
                                       int* num_classes = nullptr) {
  std::map<int, int> remap;
  std::vector<int> out(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, inserted] = remap.emplace(labels[i],
                                        static_cast<int>(remap.size()));
    (void)inserted;
    out[i] = it->second;
  }
  if (num_classes) *num_classes = static_cast<int>(remap.size());
  return out;
}

// Maximum-weight assignment on a square cost matrix (Hungarian algorithm,
// potentials formulation).  Returns the column matched to each row.
inline std::vector<int> hungarian_max(const Matrix<double>& score) {
  const Index n = score.rows();
  // Convert to min-cost.
  const double top = score.maxCoeff();
  std::vector<std::vector<double>> cost(n, std::vector<double>(n));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) cost[i][j] = top - score(i, j);

  std::vector<double> u(n + 1, 0), v(n + 1, 0);
  std::vector<int> match(n + 1, -1), way(n + 1, -1);
  for (Index i = 0; i < n; ++i) {
    int j0 = static_cast<int>(n);
    match[j0] = static_cast<int>(i);
    std::vector<double> min_v(n + 1, std::numeric_limits<double>::max());
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const int i0 = match[j0];
      double delta = std::numeric_limits<double>::max();
      int j1 = -1;
      for (int j = 0; j < n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0][j] - u[i0] - v[j];
        if (cur < min_v[j]) {
          min_v[j] = cur;
          way[j] = j0;
        }
        if (min_v[j] < delta) {
          delta = min_v[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          min_v[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != -1);
    while (j0 != static_cast<int>(n)) {
      match[j0] = match[way[j0]];
      j0 = way[j0];
    }
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 0; j < n; ++j)
    if (match[j] >= 0) row_to_col[match[j]] = j;
  return row_to_col;
}

}  // namespace detail

// Percentage of misclassified points under the best matching between the
// predicted and true label alphabets.  Exhaustive permutation search up to 8
// classes, Hungarian assignment above.
inline double clustering_error(const std::vector<int>& predicted,
                               const std::vector<int>& truth) {
  if (predicted.size() != truth.size() || predicted.empty())
    throw std::invalid_argument("clustering_error: label length mismatch");
  int kp = 0, kt = 0;
  const std::vector<int> p = detail::compact_labels(predicted, &kp);
  const std::vector<int> t = detail::compact_labels(truth, &kt);
  const int k = std::max(kp, kt);

  Matrix<double> confusion = Matrix<double>::Zero(k, k);
  for (std::size_t i = 0; i < p.size(); ++i) confusion(p[i], t[i]) += 1.0;

  double best_match = 0;
  if (k <= 8) {
    std::vector<int> perm(k);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      double match = 0;
      for (int c = 0; c < k; ++c) match += confusion(c, perm[c]);
      best_match = std::max(best_match, match);
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    const std::vector<int> assignment = detail::hungarian_max(confusion);
    for (int c = 0; c < k; ++c) best_match += confusion(c, assignment[c]);
  }
  return 100.0 * (1.0 - best_match / static_cast<double>(p.size()));
}

// Minimum algebraic connectivity (second-smallest normalized Laplacian
// eigenvalue) over the ground-truth subgraphs.  Singleton classes contribute
// zero with a warning.
template <typename Scalar>
Scalar intra_connectivity(const Matrix<Scalar>& weights,
                          const std::vector<int>& truth) {
  if (static_cast<Index>(truth.size()) != weights.rows())
    throw std::invalid_argument("intra_connectivity: label length mismatch");
  int k = 0;
  const std::vector<int> t = detail::compact_labels(truth, &k);
  Scalar worst = std::numeric_limits<Scalar>::max();
  for (int c = 0; c < k; ++c) {
    std::vector<Index> members;
    for (std::size_t i = 0; i < t.size(); ++i)
      if (t[i] == c) members.push_back(static_cast<Index>(i));
    if (members.size() < 2) {
      std::cerr << "intra_connectivity: singleton class " << c
                << " contributes 0\n";
      worst = Scalar(0);
      continue;
    }
    Matrix<Scalar> sub(members.size(), members.size());
    for (std::size_t a = 0; a < members.size(); ++a)
      for (std::size_t b = 0; b < members.size(); ++b)
        sub(a, b) = weights(members[a], members[b]);
    const Vector<Scalar> eigs = spectrum(normalized_laplacian(sub));
    worst = std::min(worst, eigs[1]);
  }
  return worst;
}

// Percentage of the affinity's l1 mass lying on cross-class pairs; the
// denominator is the whole-matrix l1 norm, diagonal included.
template <typename Scalar>
Scalar inter_connectivity(const Matrix<Scalar>& weights,
                          const std::vector<int>& truth) {
  if (static_cast<Index>(truth.size()) != weights.rows())
    throw std::invalid_argument("inter_connectivity: label length mismatch");
  const Scalar total = weights.cwiseAbs().sum();
  if (total <= Scalar(0))
    throw std::invalid_argument("inter_connectivity: affinity has zero mass");
  Scalar cross(0);
  for (Index i = 0; i < weights.rows(); ++i)
    for (Index j = 0; j < weights.cols(); ++j)
      if (truth[i] != truth[j]) cross += std::abs(weights(i, j));
  return Scalar(100) * cross / total;
}

}  // namespace fsc
