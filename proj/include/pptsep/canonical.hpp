#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "pptsep/types.hpp"

namespace pptsep {

/// rho = (I (x) I (x) sqrt F) T^dag T (I (x) I (x) sqrt F), with T the block row
/// whose column u*M + v holds the monomial G^B_u G^A_v.
///
/// A_list[v] is G^A_v for v < M-1 and B_list[u] is G^B_u for u < K-1; the
/// last generator on each side is the identity and is not stored. The local
/// unitaries record the basis rotation that brought the witness to the corner
/// |K-1, M-1>, identity when none was applied.
struct CanonicalForm {
    TripartiteDims dims;
    std::vector<Matrix> A_list;
    std::vector<Matrix> B_list;
    Matrix F;
    Matrix localU_A;
    Matrix localU_B;

    /// A_list followed by B_list.
    [[nodiscard]] std::vector<Matrix> generators() const;
};

/// The KM blocks of T, in composite (u, v) order.
std::vector<Matrix> monomial_row(const TripartiteDims &dims, const std::vector<Matrix> &A_list,
                                 const std::vector<Matrix> &B_list);

/// T^dag T, i.e. the filtered state of the form.
Matrix canonical_filtered_state(const CanonicalForm &cf);

/// sqrt(F) T^dag T sqrt(F) in the rotated frame (no local unitaries applied).
Matrix canonical_state_matrix(const CanonicalForm &cf);

/// Largest Frobenius norm among [G, G^dag] for each G and [G, H], [G, H^dag]
/// for each distinct pair.
double commutator_max(const std::vector<Matrix> &generators);

struct ExtractionDiagnostics {
    double delta_norm = 0.0;
    double commutator_max = 0.0;
    double reconstruction_residual = 0.0;
    double kernel_residual_max = 0.0;
    double block_residual_max = 0.0;  ///< last block row against its monomials
    int corner_rank = 0;
    int state_rank = 0;
    double F_condition = 1.0;
    bool F_ill_conditioned = false;
};

struct ExtractOptions {
    double tol = 1e-8;         ///< reconstruction, relative to ||rho_f||_F
    double comm_tol = 1e-8;    ///< scaled by max(1, max ||G||_F^2)
    double rank_rtol = 1e-10;  ///< singular values below rank_rtol * ||rho||_F count as zero
    std::optional<double> ppt_tol;  ///< default 1e-9 * tr rho
    double F_condition_limit = 1e6;
};

struct Extraction {
    CanonicalForm form;
    ExtractionDiagnostics diagnostics;
};

/// Reads the canonical form off a state whose corner block <K-1, M-1|rho|K-1, M-1>
/// already has rank N (rotate first otherwise).
///
/// Throws NotPptError, RankMismatch (rank of rho or of the corner block is
/// not N) or StructureViolation (some residual exceeds its tolerance).
Extraction extract_canonical(const TripartiteState &state, const ExtractOptions &opts = {});

/// Largest ||rho_f Psi|| / ||Psi|| over the kernel vectors
/// |K-1, v>|f> - |K-1, M-1> G^A_v|f> and |u, M-1>|f> - |K-1, M-1> G^B_u|f>,
/// with rho_f the state rotated by cf's local unitaries and filtered by F^{-1/2}.
double verify_kernel_vectors(const TripartiteState &state, const CanonicalForm &cf);

// ---------------------------------------------------------------------------
// Product-basis witness
// ---------------------------------------------------------------------------

struct ProductWitness {
    Vector eA;
    Vector fB;
    int sandwich_rank = 0;
};

/// Only the K*M computational pairs. (|K-1>, |M-1>) is tried first, then
/// the rest in composite index order.
struct CornerSearch {};

/// Corner candidates, then `samples` Haar-random product pairs.
struct RandomSearch {
    int samples = 256;
    std::uint64_t seed = 0;
};

/// A single caller-supplied pair.
struct ExplicitWitness {
    Vector eA;
    Vector fB;
};

using WitnessMode = std::variant<CornerSearch, RandomSearch, ExplicitWitness>;

/// Sandwich rank of one candidate pair, thresholded at rank_rtol * ||rho||_F.
ProductWitness evaluate_witness(const TripartiteState &state, const Vector &eA, const Vector &fB,
                                double rank_rtol = 1e-10);

/// First candidate whose sandwich has rank N, or nullopt.
std::optional<ProductWitness> find_witness(const TripartiteState &state, const WitnessMode &mode,
                                           double rank_rtol = 1e-10);

struct RotatedState {
    TripartiteState state;
    Matrix U_A;
    Matrix U_B;
};

/// rho' = (U_A (x) U_B (x) I) rho (U_A (x) U_B (x) I)^dag with U_A eA = |K-1>
/// and U_B fB = |M-1>.
RotatedState rotate_to_corner(const TripartiteState &state, const ProductWitness &w, double vec_tol = 1e-10);

}  // namespace pptsep
