#ifndef WHICHWAY_ERRORS_HPP
#define WHICHWAY_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace whichway {

// Input vectors/matrices of incompatible dimensions.
struct DimensionMismatchError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Attempt to normalize a (numerically) zero vector.
struct ZeroNormError : std::domain_error {
  using std::domain_error::domain_error;
};

// Matrix handed to the Hermitian eigensolver is not Hermitian.
struct NotHermitianError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Parameter outside its valid range (e.g. beta outside [0,1], or a
// crossing phase requested at V in {0,1} where it is undefined).
struct BoundaryError : std::domain_error {
  using std::domain_error::domain_error;
};

// Conditioning on a phase where the detection probability vanishes
// (V -> 1, delta -> pi): the quantum object is never found there.
struct DarkFringeError : std::domain_error {
  using std::domain_error::domain_error;
};

// A quantity that must hold by construction failed its runtime check,
// e.g. measurement probabilities not summing to one.
struct InternalConsistencyError : std::logic_error {
  using std::logic_error::logic_error;
};

// Integrand produced a NaN/Inf sample.
struct NonFiniteError : std::domain_error {
  using std::domain_error::domain_error;
};

}  // namespace whichway

#endif
