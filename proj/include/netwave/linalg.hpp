#pragma once

#include "netwave/types.hpp"

namespace netwave {

/// True when every imaginary part is exactly 0.0 (bitwise). Real inputs are
/// then routed through real-arithmetic factorizations so that downstream
/// computations on real data keep an exactly-zero imaginary part.
bool is_exactly_real(const Matrix& a);

/// Rank with threshold max(rows,cols) * machine-eps * sigma_max.
int numeric_rank(const Matrix& a);

/// Distance of the decisive singular value from the rank threshold; positive
/// margin means the rank verdict is comfortably away from the cutoff.
double rank_margin(const Matrix& a, int claimed_rank);

/// Orthonormal basis of range(a); returns n x rank(a).
Matrix orthonormal_basis(const Matrix& a);

/// Orthonormal basis of range(a)^perp inside the ambient space C^rows.
Matrix orthonormal_complement(const Matrix& a);

/// dim(range(a) intersect range(b)) = rank(a) + rank(b) - rank([a b]).
int intersection_dim(const Matrix& a, const Matrix& b);

/// Mutual projection residual between the column spans of a and b:
/// max(||(I-P_b) a_on||, ||(I-P_a) b_on||) over orthonormalized bases.
/// Zero iff the spans coincide.
double subspace_distance(const Matrix& a, const Matrix& b);

/// Orthogonal projection of v onto range(basis); basis need not be
/// orthonormal.
Vector project_onto(const Matrix& basis, const Vector& v);

/// Frobenius norm of the anti-Hermitian part, ||a - a*||_F.
double hermiticity_residual(const Matrix& a);

/// Extremal eigenvalues of the Hermitian part (a + a*)/2.
void hermitian_eigen_range(const Matrix& a, double& lambda_min, double& lambda_max);

}  // namespace netwave
