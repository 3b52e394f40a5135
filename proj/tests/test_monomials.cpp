#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fsc/monomials.hpp>
#include <fsc/polynomial.hpp>
#include <fsc/random.hpp>

#include "test_support.hpp"

using fsc::Index;
using fsc::MonomialBasis;
using fsc::monomial_basis;
using fsc::monomial_count;

namespace {

fsc::HomogeneousPolynomial<double> random_poly(const MonomialBasis& basis,
                                               fsc::SplitMix64& rng) {
  Eigen::VectorXd coeffs(basis.size());
  for (Index i = 0; i < coeffs.size(); ++i) coeffs[i] = rng.gaussian();
  coeffs.normalize();
  return fsc::HomogeneousPolynomial<double>{basis, coeffs};
}

Eigen::VectorXd random_vector(Index n, fsc::SplitMix64& rng) {
  Eigen::VectorXd x(n);
  for (Index i = 0; i < n; ++i) x[i] = rng.gaussian();
  return x;
}

}  // namespace

TEST_CASE("basis sizes and ordering") {
  SUBCASE("D=2, l=2") {
    const MonomialBasis b = monomial_basis(2, 2);
    REQUIRE(b.size() == 3);
    CHECK(b.exponents(0, 0) == 2);
    CHECK(b.exponents(0, 1) == 0);
    CHECK(b.exponents(1, 0) == 1);
    CHECK(b.exponents(1, 1) == 1);
    CHECK(b.exponents(2, 0) == 0);
    CHECK(b.exponents(2, 1) == 2);
  }
  SUBCASE("D=9, l=3 has 165 monomials") {
    CHECK(monomial_basis(9, 3).size() == 165);
  }
  SUBCASE("degree-1 basis is the coordinates") {
    const MonomialBasis b = monomial_basis(3, 1);
    REQUIRE(b.size() == 3);
    CHECK(b.exponents == Eigen::MatrixXi::Identity(3, 3));
  }
  SUBCASE("graded-lex descending for D=3, l=2") {
    const MonomialBasis b = monomial_basis(3, 2);
    const int expected[6][3] = {{2, 0, 0}, {1, 1, 0}, {1, 0, 1},
                                {0, 2, 0}, {0, 1, 1}, {0, 0, 2}};
    REQUIRE(b.size() == 6);
    for (Index i = 0; i < 6; ++i)
      for (int j = 0; j < 3; ++j) CHECK(b.exponents(i, j) == expected[i][j]);
  }
  SUBCASE("counts match binomials for D <= 12, l <= 6") {
    for (int dim = 1; dim <= 12; ++dim)
      for (int degree = 1; degree <= 6; ++degree)
        CHECK(monomial_count(dim, degree) ==
              testsupport::pascal_binomial(degree + dim - 1, degree));
  }
  SUBCASE("no duplicate exponent rows") {
    const MonomialBasis b = monomial_basis(4, 3);
    for (Index i = 0; i < b.size(); ++i)
      for (Index j = i + 1; j < b.size(); ++j)
        CHECK(b.exponents.row(i) != b.exponents.row(j));
  }
  SUBCASE("overflow guard") {
    CHECK_THROWS_AS(monomial_count(64, 200), fsc::SizeLimitError);
  }
}

TEST_CASE("veronese embedding") {
  SUBCASE("x=(1,2), l=2") {
    const Eigen::Vector2d x(1, 2);
    const Eigen::VectorXd v = fsc::veronese<double>(x, monomial_basis(2, 2));
    CHECK(v.isApprox(Eigen::Vector3d(1, 2, 4)));
  }
  SUBCASE("x=(1,0,0), l=3 hits only the leading monomial") {
    const Eigen::Vector3d x(1, 0, 0);
    const Eigen::VectorXd v = fsc::veronese<double>(x, monomial_basis(3, 3));
    CHECK(v[0] == 1.0);
    CHECK(v.tail(v.size() - 1).norm() == 0.0);
  }
  SUBCASE("x=(2,1), l=3") {
    const Eigen::Vector2d x(2, 1);
    const Eigen::VectorXd v = fsc::veronese<double>(x, monomial_basis(2, 3));
    CHECK(v.isApprox(Eigen::Vector4d(8, 4, 2, 1)));
  }
  SUBCASE("dimension mismatch") {
    const Eigen::Vector3d x(1, 2, 3);
    CHECK_THROWS_AS(fsc::veronese<double>(x, monomial_basis(2, 2)),
                    std::invalid_argument);
  }
}

TEST_CASE("embedded data matrix") {
  SUBCASE("single point") {
    fsc::PointCloud<double> cloud;
    cloud.points.resize(1, 2);
    cloud.points << 1, 2;
    const Eigen::MatrixXd e = fsc::embed(cloud, 2);
    REQUIRE(e.rows() == 1);
    CHECK(e.row(0).transpose().isApprox(Eigen::Vector3d(1, 2, 4)));
  }
  SUBCASE("standard basis points at degree 1 embed to the identity") {
    fsc::PointCloud<double> cloud;
    cloud.points = Eigen::MatrixXd::Identity(2, 2);
    CHECK(fsc::embed(cloud, 1).isApprox(Eigen::MatrixXd::Identity(2, 2)));
  }
  SUBCASE("four axis points in R^2 at degree 2: null vector along x1*x2") {
    fsc::PointCloud<double> cloud;
    cloud.points.resize(4, 2);
    cloud.points << 1, 0, -1, 0, 0, 1, 0, -1;
    const Eigen::MatrixXd e = fsc::embed(cloud, 2);
    const Eigen::MatrixXd null_basis = testsupport::gauss_nullspace(e);
    REQUIRE(null_basis.cols() == 1);
    // Hand null space of the 4x3 system: rows are (1,0,0) and (0,0,1), so
    // the kernel is spanned by e_2, i.e. the x1*x2 coefficient.
    CHECK(std::abs(null_basis(1, 0)) == doctest::Approx(1.0));
    CHECK(std::abs(null_basis(0, 0)) < 1e-12);
    CHECK(std::abs(null_basis(2, 0)) < 1e-12);
    CHECK((e * null_basis).norm() < 1e-12);
  }
}

TEST_CASE("polynomial evaluation") {
  const MonomialBasis b22 = monomial_basis(2, 2);
  SUBCASE("p = x1*x2 at (3,4)") {
    const auto p = fsc::make_polynomial<double>(b22, Eigen::Vector3d(0, 1, 0));
    CHECK(fsc::eval(p, Eigen::Vector2d(3, 4)) == doctest::Approx(12.0));
  }
  SUBCASE("any p vanishes at the origin") {
    fsc::SplitMix64 rng(7);
    const auto p = random_poly(monomial_basis(3, 2), rng);
    CHECK(fsc::eval(p, Eigen::Vector3d::Zero().eval()) == 0.0);
  }
  SUBCASE("p = x1^2 - x2^2 at (1,1)") {
    const auto p = fsc::make_polynomial<double>(b22, Eigen::Vector3d(1, 0, -1));
    CHECK(fsc::eval(p, Eigen::Vector2d(1, 1)) == doctest::Approx(0.0));
  }
}

TEST_CASE("gradients") {
  SUBCASE("p = x1*x2 at (3,4)") {
    const auto p = fsc::make_polynomial<double>(monomial_basis(2, 2),
                                                Eigen::Vector3d(0, 1, 0));
    const Eigen::VectorXd g = fsc::gradient(p, Eigen::Vector2d(3, 4));
    CHECK(g.isApprox(Eigen::Vector2d(4, 3)));
  }
  SUBCASE("gradient of a product of forms is colinear with the zeroed form") {
    // p = (b1.x)(b2.x), b1 = e1, b2 = e2, evaluated on the zero set of b2.
    const auto p = testsupport::product_of_forms(
        {Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1)});
    const Eigen::VectorXd g = fsc::gradient(p, Eigen::Vector2d(0, 5));
    CHECK(g.isApprox(Eigen::Vector2d(5, 0)));
  }
  SUBCASE("matches central finite differences on random cubics in R^4") {
    fsc::SplitMix64 rng(2024);
    const MonomialBasis basis = monomial_basis(4, 3);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const auto p = random_poly(basis, rng);
      const Eigen::VectorXd x = random_vector(4, rng);
      const Eigen::VectorXd g = fsc::gradient(p, x);
      const Eigen::VectorXd fd = testsupport::fd_gradient(p, x);
      worst = std::max(worst, (g - fd).norm() / std::max(1.0, g.norm()));
    }
    CHECK(worst < 1e-5);
  }
  SUBCASE("partial derivative coefficients") {
    // d/dx1 (x1^2) = 2 x1.
    const auto p = fsc::make_polynomial<double>(monomial_basis(2, 2),
                                                Eigen::Vector3d(1, 0, 0));
    const auto dp = fsc::partial_derivative(p, 0);
    CHECK(dp.basis.degree == 1);
    CHECK(dp.coeffs.isApprox(Eigen::Vector2d(2, 0)));
  }
}

TEST_CASE("homogeneity and Euler identity") {
  fsc::SplitMix64 rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    const int dim = 2 + static_cast<int>(rng.uniform_index(4));
    const int degree = 1 + static_cast<int>(rng.uniform_index(4));
    const auto p = random_poly(monomial_basis(dim, degree), rng);
    const Eigen::VectorXd x = random_vector(dim, rng);
    const double lambda = 0.25 + rng.uniform() * 3.0;

    const double lhs = fsc::eval(p, (lambda * x).eval());
    const double rhs = std::pow(lambda, degree) * fsc::eval(p, x);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));

    const double euler = x.dot(fsc::gradient(p, x));
    const double expected = degree * fsc::eval(p, x);
    CHECK(std::abs(euler - expected) <=
          1e-10 * std::max(1.0, std::abs(expected)));
  }
}

TEST_CASE("float instantiation compiles and agrees roughly") {
  const fsc::MonomialBasis b = monomial_basis(2, 2);
  Eigen::Vector3f coeffs(0, 1, 0);
  const auto p = fsc::make_polynomial<float>(b, coeffs);
  CHECK(fsc::eval(p, Eigen::Vector2f(3, 4)) == doctest::Approx(12.0f));
}
