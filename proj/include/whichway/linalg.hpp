#ifndef WHICHWAY_LINALG_HPP
#define WHICHWAY_LINALG_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "whichway/errors.hpp"
#include "whichway/rng.hpp"

namespace whichway {

inline constexpr int kMaxDim = 8;

using Complex = std::complex<double>;

// Dense complex vector/matrix with compile-time capacity 8: every state
// in this problem lives in dimension 2, 3 or 8, so nothing ever touches
// the heap.
using Vec = Eigen::Matrix<Complex, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
using Mat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor,
                          kMaxDim, kMaxDim>;

/// Orthonormal set of `dim` vectors of dimension `dim` (a unitary frame).
struct OrthonormalBasis {
  std::vector<Vec> vectors;

  int dim() const { return static_cast<int>(vectors.size()); }
};

/// Inner product, conjugate-linear in the first argument.
Complex inner(const Vec& u, const Vec& v);

/// Unit-norm copy of v. Throws ZeroNormError if |v|^2 <= 1e-30.
Vec normalize(const Vec& v);

/// Gram matrix G_ij = <v_i|v_j> of a set of vectors.
Mat gram(const OrthonormalBasis& basis);

/// max_ij |G_ij - delta_ij|; orthonormality defect of the set.
double gram_deviation(const OrthonormalBasis& basis);

struct EigResult {
  std::vector<double> eigenvalues;  // sorted descending
  OrthonormalBasis eigenvectors;    // same order as eigenvalues
};

/// Hermitian eigendecomposition with a reproducible convention:
/// eigenvalues descending, ties kept in solver order, and each vector
/// rotated so its first non-negligible component is real positive.
/// Throws NotHermitianError if max|M - M^dagger| > 1e-12.
EigResult hermitian_eig(const Mat& m);

/// Haar-uniform random orthonormal basis of C^dim.
///
/// Draws a matrix of independent standard complex Gaussians and
/// orthonormalizes it by modified Gram-Schmidt with a reorthogonalization
/// pass. MGS divides by real positive column norms, i.e. the triangular
/// factor has positive diagonal, which is exactly the phase convention
/// that makes the Q factor Haar-distributed.
OrthonormalBasis haar_random_basis(int dim, SplitRng& rng);

/// In-place variant of haar_random_basis for allocation-free loops.
/// `out` is resized/refilled; draws the same stream as the wrapper.
void haar_random_basis_into(int dim, SplitRng& rng, OrthonormalBasis& out);

}  // namespace whichway

#endif
