// Dirac laboratory - shared numeric types and error hierarchy

#ifndef DIRAC_COMMON_HPP_
#define DIRAC_COMMON_HPP_

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace dirac {

using Cplx = std::complex<double>;
using RVec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using SpMat = Eigen::SparseMatrix<Cplx>;

inline constexpr Cplx kI{0.0, 1.0};

// Base of every error raised by the library. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Point outside the chart (r <= 0, polar axis, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

// Invalid parameters or configuration (|a| >= M, bad grid, unknown key, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A numerical contract was violated (Hermiticity residual, orthonormality, ...).
class NumericalError : public Error {
 public:
  using Error::Error;
};

// Causal-structure failure: K not timelike where required, normal not spacelike, ...
class SignatureError : public Error {
 public:
  using Error::Error;
};

// Finite-propagation assumption of a split window was broken.
class WindowViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace dirac

#endif  // DIRAC_COMMON_HPP_
