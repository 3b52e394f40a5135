// Synthetic data generation: sampling unions of subspaces with noise in the
// orthogonal complement, generic projections, and PCA preprocessing.
#pragma once

#include <fsc/subspaces.hpp>

#include <iostream>

namespace fsc {

template <typename Scalar>
struct SampledArrangement {
  PointCloud<Scalar> cloud;
  Arrangement<Scalar> arrangement;
};

// Samples counts[i] points from subspace i of a fresh random arrangement.
// Each point is B_i g + sigma * C_i h with g, h standard Gaussian in the
// subspace and complement coordinates (so sigma is a per-coordinate noise
// scale), then normalized to unit norm.  Labels record the subspace index.
template <typename Scalar>
SampledArrangement<Scalar> sample_arrangement(
    Index ambient_dim, const std::vector<Index>& dims,
    const std::vector<Index>& counts, Scalar sigma, std::uint64_t seed) {
  if (dims.size() != counts.size() || dims.empty())
    throw std::invalid_argument(
        "sample_arrangement: dims and counts must match and be nonempty");
  if (sigma < Scalar(0))
    throw std::invalid_argument("sample_arrangement: sigma must be >= 0");
  for (Index d : dims) {
    if (d < 1 || d > ambient_dim)
      throw std::invalid_argument("sample_arrangement: need 1 <= d <= D");
    if (sigma > Scalar(0) && d == ambient_dim)
      throw std::invalid_argument(
          "sample_arrangement: noise needs d < D (nonempty complement)");
  }

  SplitMix64 master(seed);
  SampledArrangement<Scalar> out;
  Index total = 0;
  for (Index c : counts) total += c;
  out.cloud.points.resize(total, ambient_dim);
  out.cloud.labels.resize(total);

  Index row = 0;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    const std::uint64_t sub_seed = master.fork();
    Subspace<Scalar> s = random_subspace<Scalar>(ambient_dim, dims[i],
                                                 sub_seed);
    const Matrix<Scalar> complement = orthogonal_complement(s.basis);

    SplitMix64 rng(master.fork());
    for (Index k = 0; k < counts[i]; ++k) {
      Vector<Scalar> g(dims[i]);
      for (Index t = 0; t < g.size(); ++t) g[t] = Scalar(rng.gaussian());
      Vector<Scalar> x = s.basis * g;
      if (sigma > Scalar(0)) {
        Vector<Scalar> h(complement.cols());
        for (Index t = 0; t < h.size(); ++t) h[t] = Scalar(rng.gaussian());
        x += sigma * (complement * h);
      }
      out.cloud.points.row(row) = (x / x.norm()).transpose();
      out.cloud.labels[row] = static_cast<int>(i);
      ++row;
    }
    out.arrangement.subspaces.push_back(std::move(s));
  }
  out.cloud.normalized = true;
  out.arrangement.validate();
  return out;
}

// Applies a random row-orthonormal map R^D -> R^{d_target} to every point.
template <typename Scalar>
PointCloud<Scalar> random_projection(const PointCloud<Scalar>& cloud,
                                     Index d_target, std::uint64_t seed) {
  const Index dim = cloud.ambient_dim();
  if (d_target < 1 || d_target > dim)
    throw std::invalid_argument("random_projection: need 1 <= d_target <= D");
  SplitMix64 rng(seed);
  Matrix<Scalar> g(dim, d_target);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < d_target; ++j) g(i, j) = Scalar(rng.gaussian());
  const Matrix<Scalar> q = orthonormalize(g);  // pi = q^T, pi pi^T = I

  PointCloud<Scalar> out;
  out.points = cloud.points * q;
  out.labels = cloud.labels;
  return out;
}

// Estimates (d, n) for samples drawn from subspaces of equal unknown
// dimension: d is the smallest d' whose generic projection to R^{d'+1}
// admits a vanishing polynomial of degree <= max_degree, and n is the
// smallest such degree at d' = d.  The projection seed only has to be
// generic, so it is fixed by default.
template <typename Scalar>
std::pair<Index, int> estimate_equal_dim_and_count(
    const PointCloud<Scalar>& cloud, int max_degree, const RankPolicy& policy,
    std::uint64_t projection_seed = 0x5eed) {
  const Index dim = cloud.ambient_dim();
  for (Index d = 1; d < dim; ++d) {
    const PointCloud<Scalar> projected =
        random_projection(cloud, d + 1, projection_seed);
    for (int degree = 1; degree <= max_degree; ++degree) {
      const detail::FullSvd<Scalar> svd(embed(projected, degree));
      if (svd.rank(policy) < svd.singular_values.size())
        return {d, degree};
    }
  }
  throw NotFoundError(
      "estimate_equal_dim_and_count: no vanishing polynomial found up to "
      "max_degree at any projected dimension");
}

// Re-coordinatizes each point onto the span of the top right singular
// directions of the data matrix, then normalizes to unit norm.  Points that
// project to (numerically) zero are dropped with a warning.
template <typename Scalar>
PointCloud<Scalar> pca_project(const PointCloud<Scalar>& cloud,
                               Index d_target) {
  const Index dim = cloud.ambient_dim();
  if (d_target < 1 || d_target > dim)
    throw std::invalid_argument("pca_project: need 1 <= D_target <= D");
  if (cloud.size() < d_target)
    throw std::invalid_argument("pca_project: need N >= D_target");
  Eigen::BDCSVD<Matrix<Scalar>> svd(cloud.points, Eigen::ComputeFullV);
  const Matrix<Scalar> directions = svd.matrixV().leftCols(d_target);
  const Matrix<Scalar> coords = cloud.points * directions;

  PointCloud<Scalar> out;
  out.points.resize(cloud.size(), d_target);
  out.labels.reserve(cloud.labels.size());
  Index kept = 0;
  for (Index j = 0; j < cloud.size(); ++j) {
    const Scalar norm = coords.row(j).norm();
    if (norm < Scalar(1e-14)) {
      std::cerr << "pca_project: dropping point " << j
                << " (zero after projection)\n";
      continue;
    }
    out.points.row(kept) = coords.row(j) / norm;
    if (cloud.has_labels()) out.labels.push_back(cloud.labels[j]);
    ++kept;
  }
  out.points.conservativeResize(kept, d_target);
  out.normalized = true;
  return out;
}

}  // namespace fsc
