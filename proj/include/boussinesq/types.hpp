#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace bsq {

using cplx = std::complex<double>;
using Mat3 = Eigen::Matrix3cd;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I1{0.0, 1.0};

// Raised for arguments outside an operation's mathematical domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Raised when a branch-cut convention cannot be honoured at the requested point.
class BranchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised when a numerical procedure fails its own convergence certificate.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Raised for malformed configuration or input files.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Largest entry modulus; used for residual reporting.
inline double max_abs(const Mat3& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace bsq
