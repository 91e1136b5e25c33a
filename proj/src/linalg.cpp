#include "whichway/linalg.hpp"

#include <cmath>

namespace whichway {

Complex inner(const Vec& u, const Vec& v) {
  if (u.size() != v.size()) {
    throw DimensionMismatchError("inner: dimension mismatch (" +
                                 std::to_string(u.size()) + " vs " +
                                 std::to_string(v.size()) + ")");
  }
  return u.dot(v);  // Eigen::dot conjugates the first argument
}

Vec normalize(const Vec& v) {
  const double n2 = v.squaredNorm();
  if (n2 <= 1e-30) {
    throw ZeroNormError("normalize: vector norm below 1e-15");
  }
  return v / std::sqrt(n2);
}

Mat gram(const OrthonormalBasis& basis) {
  const int n = basis.dim();
  Mat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = basis.vectors[i].dot(basis.vectors[j]);
  return g;
}

double gram_deviation(const OrthonormalBasis& basis) {
  const int n = basis.dim();
  double dev = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Complex g = basis.vectors[i].dot(basis.vectors[j]);
      const Complex expect = (i == j) ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
      dev = std::max(dev, std::abs(g - expect));
    }
  }
  return dev;
}

namespace {

// Rotate v so its first component with magnitude > 1e-9 becomes real
// positive. Unit vectors always have one (largest component >= 1/sqrt(8)).
void fix_phase(Vec& v) {
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    const double mag = std::abs(v(k));
    if (mag > 1e-9) {
      v *= std::conj(v(k)) / mag;
      // Clean the pivot's residual imaginary dust so the convention is exact.
      v(k) = Complex(std::abs(v(k)), 0.0);
      return;
    }
  }
}

}  // namespace

EigResult hermitian_eig(const Mat& m) {
  if (m.rows() != m.cols()) {
    throw DimensionMismatchError("hermitian_eig: matrix not square");
  }
  const double herm_defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm_defect > 1e-12) {
    throw NotHermitianError("hermitian_eig: |M - M^dagger| = " +
                            std::to_string(herm_defect));
  }

  // Symmetrize away the sub-tolerance defect before solving.
  const Mat h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> solver(h);
  if (solver.info() != Eigen::Success) {
    throw InternalConsistencyError("hermitian_eig: eigensolver failed");
  }

  const int n = static_cast<int>(m.rows());
  EigResult result;
  result.eigenvalues.resize(n);
  result.eigenvectors.vectors.resize(n);
  // Eigen sorts ascending; emit descending, ties in solver order.
  for (int k = 0; k < n; ++k) {
    result.eigenvalues[k] = solver.eigenvalues()(n - 1 - k);
    Vec v = solver.eigenvectors().col(n - 1 - k);
    fix_phase(v);
    result.eigenvectors.vectors[k] = std::move(v);
  }
  return result;
}

void haar_random_basis_into(int dim, SplitRng& rng, OrthonormalBasis& out) {
  if (dim < 1 || dim > kMaxDim) {
    throw BoundaryError("haar_random_basis: dim must be in [1, 8]");
  }
  out.vectors.resize(dim);
  for (int i = 0; i < dim; ++i) {
    Vec& v = out.vectors[i];
    v.resize(dim);
    for (int k = 0; k < dim; ++k) v(k) = Complex(rng.gaussian(), rng.gaussian());
  }
  // Modified Gram-Schmidt, two passes. Dividing by the real positive norm
  // pins the triangular factor's diagonal phases, which is what keeps the
  // sampled frame Haar-uniform.
  for (int pass = 0; pass < 2; ++pass) {
    for (int i = 0; i < dim; ++i) {
      Vec& v = out.vectors[i];
      for (int j = 0; j < i; ++j) v -= out.vectors[j].dot(v) * out.vectors[j];
      v = normalize(v);
    }
  }
}

OrthonormalBasis haar_random_basis(int dim, SplitRng& rng) {
  OrthonormalBasis basis;
  haar_random_basis_into(dim, rng, basis);
  return basis;
}

}  // namespace whichway
