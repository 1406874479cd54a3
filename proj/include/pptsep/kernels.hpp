#pragma once

// Dense block kernels behind the public operations.
//
// Each kernel exists twice: `serial::` is the straightforward reference kept
// for testing, `parallel::` is the OpenMP version the library calls. Both
// produce bit-identical results: the parallel loops only distribute
// independent output entries/blocks and never reorder a floating-point sum.

#include <span>
#include <vector>

#include "pptsep/types.hpp"

namespace pptsep::kernels {

/// One product term p |a><a| (x) |b><b| (x) |c><c|.
struct ProductTerm {
    double weight = 0.0;
    Vector a;
    Vector b;
    Vector c;
};

namespace serial {

Matrix partial_transpose(const Matrix &rho, const TripartiteDims &dims, SubsystemMask mask);

/// (I_K (x) I_M (x) W) rho (I_K (x) I_M (x) W)^dag, applied block by block.
Matrix conjugate_c(const Matrix &rho, const TripartiteDims &dims, const Matrix &W);

/// T^dag T for the block row T = [G_0 G_1 ... G_{n-1}] of N x N blocks.
Matrix block_row_gram(std::span<const Matrix> blocks);

/// Sum over terms of p |a b c><a b c|.
Matrix reconstruct(std::span<const ProductTerm> terms, const TripartiteDims &dims);

}  // namespace serial

namespace parallel {

Matrix partial_transpose(const Matrix &rho, const TripartiteDims &dims, SubsystemMask mask);
Matrix conjugate_c(const Matrix &rho, const TripartiteDims &dims, const Matrix &W);
Matrix block_row_gram(std::span<const Matrix> blocks);
Matrix reconstruct(std::span<const ProductTerm> terms, const TripartiteDims &dims);

}  // namespace parallel

/// Number of OpenMP threads the parallel kernels will use (1 without OpenMP).
int max_threads();

}  // namespace pptsep::kernels
