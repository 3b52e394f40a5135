// Homogeneous polynomials as coefficient vectors over a graded monomial
// basis, with evaluation and gradients.
//
// Differentiation is linear in coefficient space: d/dx_k maps the degree-l
// basis into the degree-(l-1) basis with integer factors.  The index map for
// a given (D, l) is built once and cached because filtrations evaluate
// gradients of fresh polynomials at every surviving point.
#pragma once

#include <fsc/monomials.hpp>

#include <map>
#include <memory>
#include <mutex>
#include <utility>

namespace fsc {

template <typename Scalar>
struct HomogeneousPolynomial {
  MonomialBasis basis;
  Vector<Scalar> coeffs;
};

using HomogeneousPolynomiald = HomogeneousPolynomial<double>;

template <typename Scalar>
HomogeneousPolynomial<Scalar> make_polynomial(MonomialBasis basis,
                                              Vector<Scalar> coeffs) {
  if (coeffs.size() != basis.size())
    throw std::invalid_argument("make_polynomial: coefficient length must "
                                "match basis size");
  return HomogeneousPolynomial<Scalar>{std::move(basis), std::move(coeffs)};
}

template <typename Scalar, typename Derived>
Scalar eval(const HomogeneousPolynomial<Scalar>& p,
            const Eigen::MatrixBase<Derived>& x) {
  return p.coeffs.dot(veronese<Scalar>(x, p.basis));
}

namespace detail {

// For basis row i and variable k, `target(i, k)` is the row of the
// degree-(l-1) basis holding exponents(i) - e_k, or -1 when exponent k is 0.
// The integer factor is exponents(i, k) itself.
struct DiffTable {
  MonomialBasis lower;   // degree l-1 basis
  MatrixXi target;       // M_l x D row indices into `lower`
};

inline std::shared_ptr<const DiffTable> diff_table(int ambient_dim,
                                                   int degree) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const DiffTable>> cache;
  const auto key = std::make_pair(ambient_dim, degree);
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }

  auto table = std::make_shared<DiffTable>();
  table->lower = monomial_basis(ambient_dim, degree - 1);
  const MonomialBasis upper = monomial_basis(ambient_dim, degree);

  std::map<std::vector<int>, Index> lower_row;
  for (Index r = 0; r < table->lower.size(); ++r) {
    std::vector<int> key_exp(ambient_dim);
    for (int j = 0; j < ambient_dim; ++j)
      key_exp[j] = table->lower.exponents(r, j);
    lower_row.emplace(std::move(key_exp), r);
  }

  table->target.setConstant(upper.size(), ambient_dim, -1);
  std::vector<int> exp(ambient_dim);
  for (Index i = 0; i < upper.size(); ++i) {
    for (int j = 0; j < ambient_dim; ++j) exp[j] = upper.exponents(i, j);
    for (int k = 0; k < ambient_dim; ++k) {
      if (exp[k] == 0) continue;
      --exp[k];
      table->target(i, k) = lower_row.at(exp);
      ++exp[k];
    }
  }

  std::lock_guard<std::mutex> lock(mutex);
  auto [it, inserted] = cache.emplace(key, std::move(table));
  (void)inserted;
  return it->second;
}

}  // namespace detail

// Coefficients of dp/dx_k, one degree lower.
template <typename Scalar>
HomogeneousPolynomial<Scalar> partial_derivative(
    const HomogeneousPolynomial<Scalar>& p, int k) {
  if (k < 0 || k >= p.basis.ambient_dim)
    throw std::invalid_argument("partial_derivative: variable out of range");
  if (p.basis.degree < 1)
    throw std::invalid_argument("partial_derivative: degree must be >= 1");
  const auto table = detail::diff_table(p.basis.ambient_dim, p.basis.degree);
  Vector<Scalar> coeffs = Vector<Scalar>::Zero(table->lower.size());
  for (Index i = 0; i < p.basis.size(); ++i) {
    const Index row = table->target(i, k);
    if (row >= 0)
      coeffs[row] += Scalar(p.basis.exponents(i, k)) * p.coeffs[i];
  }
  return HomogeneousPolynomial<Scalar>{table->lower, std::move(coeffs)};
}

// Gradient of p at x, computed through the cached differentiation operators.
template <typename Scalar, typename Derived>
Vector<Scalar> gradient(const HomogeneousPolynomial<Scalar>& p,
                        const Eigen::MatrixBase<Derived>& x) {
  const int dim = p.basis.ambient_dim;
  if (x.size() != dim)
    throw std::invalid_argument("gradient: point dimension mismatch");
  const auto table = detail::diff_table(dim, p.basis.degree);
  const Vector<Scalar> nu = veronese<Scalar>(x, table->lower);
  Vector<Scalar> grad = Vector<Scalar>::Zero(dim);
  for (Index i = 0; i < p.basis.size(); ++i) {
    const Scalar c = p.coeffs[i];
    if (c == Scalar(0)) continue;
    for (int k = 0; k < dim; ++k) {
      const Index row = table->target(i, k);
      if (row >= 0) grad[k] += c * Scalar(p.basis.exponents(i, k)) * nu[row];
    }
  }
  return grad;
}

}  // namespace fsc
