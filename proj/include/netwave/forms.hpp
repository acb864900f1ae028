#pragma once

#include <vector>

#include "netwave/types.hpp"

namespace netwave {

/// Hermitian invertible matrix together with its validated norm. The
/// quadratic form is q(xi) = P xi . conj(xi).
struct HermitianForm {
  Matrix P;
  double norm = 0.0;  // Frobenius norm, used to scale tolerances

  /// Validates ||P - P*|| <= herm_rel * ||P|| and invertibility (every
  /// eigenvalue outside +-zero_rel * ||P||). Throws Error on failure.
  static HermitianForm validate(const Matrix& P, const Tolerances& tol = {});
};

/// Eigenvalue sign counts; negative + positive = n for an invertible form.
struct Signature {
  int negative = 0;
  int positive = 0;
};

enum class ConeClass { Null, Nonpositive, Nonnegative, Indefinite };

const char* to_string(ConeClass c);

/// Classification of a subspace against a form, with the restricted matrix
/// R = B* P B and its extremal eigenvalues as evidence.
struct ConeReport {
  ConeClass cls = ConeClass::Null;
  Matrix restricted;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

Signature signature(const HermitianForm& form, const Tolerances& tol = {});

/// min(k_-, k_+), the largest dimension a totally isotropic subspace can have.
int isotropy_index(const HermitianForm& form, const Tolerances& tol = {});

/// Constructive maximal totally isotropic basis: columns
/// U_i = u_i + alpha_i u_{k_- + i} with alpha_i = sqrt(-lambda_i / lambda_{k_-+i}),
/// eigenpairs sorted ascending. Returns an n x kappa matrix (kappa may be 0).
/// The result is verified to satisfy ||B* P B|| <= iso_rel * max(1, ||P||).
/// `flip` selects the sign-flipped member of the family per column (the 2^kappa
/// maximal subspaces differ only by these signs).
Matrix max_totally_isotropic_basis(const HermitianForm& form, const Tolerances& tol = {},
                                   const std::vector<bool>& flip = {});

/// Classifies span(B) against the form. B must have form.P.rows() rows and
/// full column rank. For a subspace, q vanishing on every vector is
/// equivalent to B* P B = 0 by polarization.
ConeReport classify_subspace(const HermitianForm& form, const Matrix& B,
                             const Tolerances& tol = {});

/// k_-, the largest dimension of a subspace of the nonpositive cone.
int max_nonpositive_dim(const HermitianForm& form, const Tolerances& tol = {});

/// Witness subspace for max_nonpositive_dim: the negative eigenspace.
Matrix nonpositive_witness(const HermitianForm& form, const Tolerances& tol = {});

}  // namespace netwave
