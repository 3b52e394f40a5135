// Pairwise affinity matrices fed to spectral clustering.
#pragma once

#include <fsc/core.hpp>

#include <limits>

namespace fsc {

template <typename Scalar>
struct AffinityMatrix {
  Matrix<Scalar> weights;  // N x N, nonnegative
  Scalar eigengap = std::numeric_limits<Scalar>::quiet_NaN();
  Index degenerate_rows = 0;  // rows zeroed for lack of a usable gradient

  Index size() const { return weights.rows(); }
};

using AffinityMatrixd = AffinityMatrix<double>;

}  // namespace fsc
