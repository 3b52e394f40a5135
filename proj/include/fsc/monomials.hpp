// Graded monomial bases and the Veronese (polynomial) embedding.
//
// A degree-l basis over R^D enumerates all exponent tuples summing to l in
// graded-lexicographic descending order, so for D=3, l=2 the monomials read
// x1^2, x1*x2, x1*x3, x2^2, x2*x3, x3^2.  The embedding sends a point to the
// vector of all degree-l monomials evaluated at it.
#pragma once

#include <fsc/core.hpp>

#include <cstdint>
#include <limits>

namespace fsc {

struct MonomialBasis {
  int ambient_dim = 0;   // D
  int degree = 0;        // l
  MatrixXi exponents;    // M x D, rows in graded-lex descending order

  Index size() const { return exponents.rows(); }
};

// Number of degree-l monomials in D variables: C(l + D - 1, l).
// Throws SizeLimitError if the count does not fit in a signed 64-bit index.
inline std::int64_t monomial_count(int ambient_dim, int degree) {
  if (ambient_dim < 1 || degree < 0)
    throw std::invalid_argument("monomial_count: need D >= 1 and degree >= 0");
  // C(degree + D - 1, D - 1), multiplicative form with overflow checks.
  std::uint64_t result = 1;
  const std::uint64_t limit =
      static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max());
  for (int i = 1; i <= ambient_dim - 1; ++i) {
    const std::uint64_t factor = static_cast<std::uint64_t>(degree) + i;
    if (result > limit / factor)
      throw SizeLimitError("monomial basis size overflows 64-bit index");
    result = result * factor / i;
  }
  if (result > limit)
    throw SizeLimitError("monomial basis size overflows 64-bit index");
  return static_cast<std::int64_t>(result);
}

// Enumerates the degree-l basis over R^D.  Degree 0 (the constant monomial)
// is permitted so differentiation of linear polynomials has a target basis.
inline MonomialBasis monomial_basis(int ambient_dim, int degree) {
  const std::int64_t count = monomial_count(ambient_dim, degree);
  constexpr std::int64_t kMaxBasisSize = 1 << 26;
  if (count > kMaxBasisSize)
    throw SizeLimitError("monomial basis too large to materialize");

  MonomialBasis basis;
  basis.ambient_dim = ambient_dim;
  basis.degree = degree;
  basis.exponents.resize(count, ambient_dim);

  Eigen::VectorXi current = Eigen::VectorXi::Zero(ambient_dim);
  Index row = 0;
  // Recursive descent emits tuples with the leading exponent largest first,
  // which is exactly graded-lex descending.
  auto emit = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == ambient_dim - 1) {
      current[pos] = remaining;
      basis.exponents.row(row++) = current.transpose();
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      current[pos] = e;
      self(self, pos + 1, remaining - e);
    }
  };
  emit(emit, 0, degree);
  return basis;
}

// Veronese embedding of a single point: entry k is prod_j x_j^{alpha_kj}.
template <typename Scalar, typename Derived>
Vector<Scalar> veronese(const Eigen::MatrixBase<Derived>& x,
                        const MonomialBasis& basis) {
  if (x.size() != basis.ambient_dim)
    throw std::invalid_argument("veronese: point dimension mismatch");
  const int dim = basis.ambient_dim;
  const int degree = basis.degree;

  // Power table powers(j, e) = x_j^e.
  Matrix<Scalar> powers(dim, degree + 1);
  for (int j = 0; j < dim; ++j) {
    powers(j, 0) = Scalar(1);
    for (int e = 1; e <= degree; ++e)
      powers(j, e) = powers(j, e - 1) * x[j];
  }

  Vector<Scalar> out(basis.size());
  for (Index k = 0; k < basis.size(); ++k) {
    Scalar value(1);
    for (int j = 0; j < dim; ++j) {
      const int e = basis.exponents(k, j);
      if (e > 0) value *= powers(j, e);
    }
    out[k] = value;
  }
  return out;
}

// Embedded data matrix: row j is the Veronese image of point j.
template <typename Scalar>
Matrix<Scalar> embed(const PointCloud<Scalar>& cloud,
                     const MonomialBasis& basis) {
  if (cloud.ambient_dim() != basis.ambient_dim)
    throw std::invalid_argument("embed: cloud dimension mismatch");
  Matrix<Scalar> out(cloud.size(), basis.size());
  for (Index j = 0; j < cloud.size(); ++j)
    out.row(j) =
        veronese<Scalar>(cloud.points.row(j).transpose(), basis).transpose();
  return out;
}

template <typename Scalar>
Matrix<Scalar> embed(const PointCloud<Scalar>& cloud, int degree) {
  return embed(cloud, monomial_basis(static_cast<int>(cloud.ambient_dim()),
                                     degree));
}

}  // namespace fsc
