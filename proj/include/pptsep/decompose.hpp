#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pptsep/canonical.hpp"
#include "pptsep/types.hpp"

namespace pptsep {

struct EnsembleTerm {
    double p = 0.0;
    Vector vecA;
    Vector vecB;
    Vector vecC;
};

/// rho = sum_n p_n |a_n><a_n| (x) |b_n><b_n| (x) |c_n><c_n|.
struct SeparableEnsemble {
    TripartiteDims dims;
    std::vector<EnsembleTerm> terms;
};

/// Common eigenbasis of a commuting normal family. values[k][n] is the
/// eigenvalue of generator k on column n of U; columns with the same
/// space[n] span one joint eigenspace.
struct EigenTable {
    Matrix U;
    std::vector<std::vector<Complex>> values;
    std::vector<int> space;
};

struct DiagonalizeOptions {
    double tol = 1e-8;      ///< commutator precondition and diagonality, scaled by max(1, ||G||_F^2)
    double gap_tol = 1e-6;  ///< eigenvalues of the mixed Hermitian closer than this form one cluster
    int max_retries = 8;
    std::uint64_t seed = 0;
};

/// Diagonalizes a random real combination of the Hermitian and anti-Hermitian
/// parts of the family, then recursively splits clusters of near-equal
/// eigenvalues with fresh combinations until each cluster is a joint
/// eigenspace. Columns are phase-fixed: the largest-magnitude entry is real
/// and positive.
///
/// Throws CommutatorViolation if the family is not commuting and normal, and
/// DegeneracyUnresolved if a cluster cannot be split after max_retries tries.
EigenTable simultaneous_diagonalize(std::span<const Matrix> generators, const DiagonalizeOptions &opts = {});

struct DecomposeOptions {
    double tol = 1e-8;  ///< certification: relative reconstruction residual
    double norm_tol = 1e-10;
    WitnessMode witness = RandomSearch{};
    std::uint64_t seed = 0;  ///< random mixing in the joint diagonalization
    ExtractOptions extract;
};

struct Decomposition {
    SeparableEnsemble ensemble;
    double residual = 0.0;
    ProductWitness witness;
    ExtractionDiagnostics diagnostics;
    CanonicalForm form;
};

/// Full pipeline: PPT and rank checks, witness, rotation, extraction, joint
/// diagonalization, ensemble assembly and certification. Inside a degenerate
/// joint eigenspace the basis is the one diagonalizing F there, so the vecC
/// of those terms are orthogonal. Never returns an
/// ensemble that fails verify_ensemble at the certification tolerance.
///
/// Throws NotPptError, RankMismatch, NoWitness, StructureViolation,
/// CommutatorViolation, DegeneracyUnresolved or CertificationFailure.
Decomposition decompose(const TripartiteState &state, const DecomposeOptions &opts = {});

/// sum_n p_n P_A (x) P_B (x) P_C.
Matrix reconstruct(const SeparableEnsemble &ens);

struct EnsembleCheck {
    double residual = 0.0;  ///< ||rho - reconstruction||_F / ||rho||_F
    bool pass = false;
    std::vector<std::string> violations;  ///< broken ensemble invariants, if any
};

/// Throws DimensionMismatch when the ensemble does not match the state.
EnsembleCheck verify_ensemble(const TripartiteState &state, const SeparableEnsemble &ens, double tol,
                              double norm_tol = 1e-10, double vec_tol = 1e-10);

/// Multiplies v by a phase so its first largest-magnitude entry is real positive.
void fix_phase(Vector &v);

}  // namespace pptsep
