#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "whichway/linalg.hpp"
#include "whichway/model.hpp"

using namespace whichway;

namespace {

Vec make_vec(std::initializer_list<Complex> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (const Complex& x : xs) v(i++) = x;
  return v;
}

}  // namespace

TEST_CASE("inner product basics") {
  CHECK(inner(make_vec({1, 0}), make_vec({0, 1})) == Complex(0, 0));
  CHECK(inner(make_vec({1, 0}), make_vec({1, 0})) == Complex(1, 0));

  // Conjugate-linear in the first argument.
  const Vec u = make_vec({Complex(0, 1), 0});
  CHECK(inner(u, make_vec({1, 0})) == Complex(0, -1));

  // Detector-state overlap equals the visibility.
  const auto pair = wwd_states(make_coupling(std::sqrt(0.5)));
  CHECK(std::abs(inner(pair.chi_a, pair.chi_b) - Complex(0.5, 0)) < 1e-14);

  CHECK_THROWS_AS(inner(make_vec({1, 0}), make_vec({1, 0, 0})), DimensionMismatchError);
}

TEST_CASE("normalize") {
  const Vec a = normalize(make_vec({2, 0, 0}));
  CHECK(std::abs(a(0) - Complex(1, 0)) < 1e-15);

  const Vec b = normalize(make_vec({1, 1}));
  CHECK(std::abs(b(0) - Complex(1.0 / std::sqrt(2.0), 0)) < 1e-15);
  CHECK(std::abs(b(1) - Complex(1.0 / std::sqrt(2.0), 0)) < 1e-15);

  CHECK_THROWS_AS(normalize(make_vec({0, 0, 0})), ZeroNormError);
}

TEST_CASE("hermitian_eig on diag(1,-1)") {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  const EigResult r = hermitian_eig(m);
  CHECK(r.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.eigenvalues[1] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(std::abs(r.eigenvectors.vectors[0](0) - Complex(1, 0)) < 1e-12);
  CHECK(std::abs(r.eigenvectors.vectors[1](1) - Complex(1, 0)) < 1e-12);
}

TEST_CASE("hermitian_eig of the canonical observable vs characteristic polynomial") {
  // E = |chi_a><chi_a| - |chi_b><chi_b| at V = 0.5 has eigenvalues
  // +sqrt(3)/2, 0, -sqrt(3)/2; check against the char-poly roots.
  const auto pair = wwd_states(coupling_for_visibility(0.5));
  const Mat e = pair.chi_a * pair.chi_a.adjoint() - pair.chi_b * pair.chi_b.adjoint();
  const EigResult r = hermitian_eig(e);
  const std::vector<double> roots = oracles::eig3_charpoly(e);
  REQUIRE(roots.size() == 3);
  for (int k = 0; k < 3; ++k) {
    CHECK(r.eigenvalues[k] == doctest::Approx(roots[k]).epsilon(1e-10));
  }
  CHECK(r.eigenvalues[0] == doctest::Approx(0.8660254037844386).epsilon(1e-10));
  CHECK(r.eigenvalues[1] == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(r.eigenvalues[2] == doctest::Approx(-0.8660254037844386).epsilon(1e-10));
}

TEST_CASE("hermitian_eig on the zero matrix") {
  const Mat m = Mat::Zero(3, 3);
  const EigResult r = hermitian_eig(m);
  for (double ev : r.eigenvalues) CHECK(std::abs(ev) < 1e-14);
  CHECK(gram_deviation(r.eigenvectors) < 1e-12);
  // Phase convention: first non-negligible component real positive.
  for (const Vec& v : r.eigenvectors.vectors) {
    for (Eigen::Index k = 0; k < v.size(); ++k) {
      if (std::abs(v(k)) > 1e-9) {
        CHECK(v(k).real() > 0.0);
        CHECK(std::abs(v(k).imag()) < 1e-12);
        break;
      }
    }
  }
}

TEST_CASE("hermitian_eig rejects non-Hermitian input") {
  Mat m = Mat::Zero(2, 2);
  m(0, 1) = Complex(1, 0);
  m(1, 0) = Complex(0.5, 0);
  CHECK_THROWS_AS(hermitian_eig(m), NotHermitianError);
}

TEST_CASE("hermitian_eig reconstruction property") {
  SplitRng rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const int dim = 2 + static_cast<int>(rng.below(7));
    Mat m(dim, dim);
    for (int i = 0; i < dim; ++i) {
      m(i, i) = rng.gaussian();
      for (int j = i + 1; j < dim; ++j) {
        m(i, j) = 0.5 * Complex(rng.gaussian(), rng.gaussian());
        m(j, i) = std::conj(m(i, j));
      }
    }
    const EigResult r = hermitian_eig(m);
    CHECK(gram_deviation(r.eigenvectors) < 1e-12);
    Mat rebuilt = Mat::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) {
      rebuilt += r.eigenvalues[k] * r.eigenvectors.vectors[k] *
                 r.eigenvectors.vectors[k].adjoint();
      const Vec resid = m * r.eigenvectors.vectors[k] -
                        r.eigenvalues[k] * r.eigenvectors.vectors[k];
      CHECK(resid.cwiseAbs().maxCoeff() < 1e-10);
    }
    CHECK((m - rebuilt).cwiseAbs().maxCoeff() < 1e-10);
    for (int k = 1; k < dim; ++k) CHECK(r.eigenvalues[k - 1] >= r.eigenvalues[k]);
  }
}

TEST_CASE("haar_random_basis orthonormality and determinism") {
  SplitRng rng(7);
  for (int dim : {2, 3, 8}) {
    for (int rep = 0; rep < 20; ++rep) {
      const OrthonormalBasis b = haar_random_basis(dim, rng);
      CHECK(gram_deviation(b) < 1e-12);
    }
  }

  SplitRng r1(42), r2(42);
  const OrthonormalBasis b1 = haar_random_basis(3, r1);
  const OrthonormalBasis b2 = haar_random_basis(3, r2);
  for (int i = 0; i < 3; ++i) {
    for (int k = 0; k < 3; ++k) {
      CHECK(b1.vectors[i](k).real() == b2.vectors[i](k).real());
      CHECK(b1.vectors[i](k).imag() == b2.vectors[i](k).imag());
    }
  }
}

TEST_CASE("haar_random_basis first moment in dim 2") {
  // E|<e_1|W_1>|^2 = 1/dim; |U_11|^2 is uniform on [0,1] in dim 2, so the
  // standard error of the mean over n draws is sqrt(1/12/n).
  SplitRng rng(271828);
  const int n = 10000;
  double acc = 0.0;
  for (int s = 0; s < n; ++s) {
    const OrthonormalBasis b = haar_random_basis(2, rng);
    acc += std::norm(b.vectors[0](0));
  }
  const double mean = acc / n;
  const double se = std::sqrt(1.0 / 12.0 / n);
  CHECK(std::abs(mean - 0.5) < 3.0 * se);
}

TEST_CASE("derived rng streams are independent of call order") {
  SplitRng base(99);
  SplitRng a1 = base.derive(0, 5);
  SplitRng b1 = base.derive(1, 5);
  const double x = a1.uniform();
  SplitRng b2 = base.derive(1, 5);
  CHECK(b1.uniform() == b2.uniform());
  SplitRng a2 = base.derive(0, 5);
  CHECK(a2.uniform() == x);
}
