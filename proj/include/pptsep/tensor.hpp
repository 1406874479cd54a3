#pragma once

#include <optional>
#include <vector>

#include "pptsep/types.hpp"

namespace pptsep {

/// Flat index of |iA, iB, iC>: (iA*M + iB)*N + iC. Throws IndexError when out of range.
int compose_index(int iA, int iB, int iC, const TripartiteDims &dims);

Matrix kron(const Matrix &X, const Matrix &Y);

/// Transposes the indices of the masked subsystems. Pure entry permutation.
Matrix partial_transpose(const Matrix &rho, const TripartiteDims &dims, SubsystemMask mask);
Matrix partial_transpose(const TripartiteState &state, SubsystemMask mask);

/// The N x N block E at grid position (rowBlock, colBlock), both in [0, KM).
Matrix block(const Matrix &rho, const TripartiteDims &dims, int rowBlock, int colBlock);
Matrix block(const TripartiteState &state, int rowBlock, int colBlock);

/// <eA, fB| rho |eA, fB> as an N x N operator on subsystem C.
/// Throws NormalizationError unless both vectors have unit norm within vec_tol.
Matrix sandwich_AB(const TripartiteState &state, const Vector &eA, const Vector &fB,
                   double vec_tol = 1e-10);

std::vector<double> singular_values(const Matrix &X);

/// Number of singular values above `tol`. Without an explicit tolerance the
/// threshold is max(rows, cols) * eps * sigma_max.
int numeric_rank(const Matrix &X, std::optional<double> tol = std::nullopt);

/// Same count with the threshold rtol * sigma_max.
int numeric_rank_relative(const Matrix &X, double rtol);

struct HermitianEigen {
    RealVector values;  ///< ascending
    Matrix vectors;     ///< columns
};

/// Eigendecomposition of the Hermitian part (X + X^dag)/2.
HermitianEigen hermitian_eigen(const Matrix &X);

/// Hermitian PSD square root. Eigenvalues in [-tol, 0) are clipped to zero,
/// anything below -tol raises NotPsdError. `tol` is absolute.
Matrix psd_sqrt(const Matrix &X, double tol = 1e-12);

/// Inverse square root of a Hermitian positive definite matrix.
/// Raises NotPsdError for eigenvalues below -tol and SingularError when the
/// smallest eigenvalue is not above the rank threshold.
Matrix psd_inv_sqrt(const Matrix &X, double tol = 1e-12);

/// sigma_max / sigma_min, infinity for singular input.
double condition_number(const Matrix &X);

Matrix identity(int n);

/// Unitary V with V * |last basis vector> = v, i.e. v is V's last column.
/// Remaining columns complete the basis by pivoted Gram-Schmidt over the
/// computational basis; V = I when v is the last basis vector.
Matrix complete_to_unitary(const Vector &v);

}  // namespace pptsep
