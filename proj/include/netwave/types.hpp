#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace netwave {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Error raised for invalid inputs or violated preconditions anywhere in the
/// library. Message carries the offending entity (edge id, vertex id, field).
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

enum class Verdict { Yes, No, Undetermined };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    default: return "undetermined";
  }
}

/// Numerical thresholds. Relative tolerances are scaled by a norm of the
/// matrix under test; absolute ones are used as-is. All overridable through
/// the system file's "tolerances" section.
struct Tolerances {
  double herm_rel = 1e-10;     // Hermiticity residual
  double zero_rel = 1e-9;      // eigenvalue-zero threshold (invertibility)
  double iso_rel = 1e-8;       // isotropy residual
  double inv_rel = 1e-9;       // smallest singular value of M
  double eig_imag_rel = 1e-8;  // imaginary part allowed in symmetrizer synthesis
  double check_rel = 1e-9;     // classifier pointwise residuals
  double subspace_rel = 1e-9;  // subspace-equality mutual projection residual
  double proj_tol = 1e-12;     // simulator trace projection residual
};

}  // namespace netwave
