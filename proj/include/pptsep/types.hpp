#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace pptsep {

using Complex = std::complex<double>;

/// Dense complex matrix, row-major so that the flat storage order matches
/// the file format and the composite index convention.
using Matrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;
using RealVector = Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Errors. Every failure the library reports is a subclass of Error and
// carries a stable type name, which the CLI echoes in its diagnostics.
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
    explicit Error(const std::string &what) : std::runtime_error(what) {}
    [[nodiscard]] virtual std::string_view name() const noexcept = 0;
};

#define PPTSEP_DEFINE_ERROR(Type)                                                  \
    class Type final : public Error {                                             \
    public:                                                                        \
        using Error::Error;                                                        \
        [[nodiscard]] std::string_view name() const noexcept override { return #Type; } \
    }

PPTSEP_DEFINE_ERROR(IndexError);
PPTSEP_DEFINE_ERROR(NormalizationError);
PPTSEP_DEFINE_ERROR(NotPsdError);
PPTSEP_DEFINE_ERROR(SingularError);
PPTSEP_DEFINE_ERROR(NotHermitianError);
PPTSEP_DEFINE_ERROR(InvalidState);
PPTSEP_DEFINE_ERROR(DimensionMismatch);
PPTSEP_DEFINE_ERROR(PreconditionError);
PPTSEP_DEFINE_ERROR(RankMismatch);
PPTSEP_DEFINE_ERROR(NotPptError);
PPTSEP_DEFINE_ERROR(StructureViolation);
PPTSEP_DEFINE_ERROR(CommutatorViolation);
PPTSEP_DEFINE_ERROR(DegeneracyUnresolved);
PPTSEP_DEFINE_ERROR(NoWitness);
PPTSEP_DEFINE_ERROR(CertificationFailure);
PPTSEP_DEFINE_ERROR(FormatError);
PPTSEP_DEFINE_ERROR(NumericalError);

#undef PPTSEP_DEFINE_ERROR

// ---------------------------------------------------------------------------
// Tripartite bookkeeping
// ---------------------------------------------------------------------------

/// Local dimensions of C^K (x) C^M (x) C^N. Subsystem A is the slowest index.
struct TripartiteDims {
    int K = 2;
    int M = 2;
    int N = 1;

    [[nodiscard]] int side() const noexcept { return K * M * N; }
    [[nodiscard]] int ab() const noexcept { return K * M; }

    /// Throws PreconditionError unless K >= 2, M >= 2, N >= 1.
    void validate() const;

    friend bool operator==(const TripartiteDims &, const TripartiteDims &) = default;
};

/// Which subsystems a partial transpose acts on.
struct SubsystemMask {
    bool A = false;
    bool B = false;
    bool C = false;

    [[nodiscard]] bool identity() const noexcept { return !A && !B && !C; }
    [[nodiscard]] SubsystemMask complement() const noexcept { return {!A, !B, !C}; }
    /// "none", "A", "BC", "ABC", ...
    [[nodiscard]] std::string label() const;
    [[nodiscard]] static SubsystemMask from_bits(unsigned bits) noexcept {
        return {(bits & 1u) != 0, (bits & 2u) != 0, (bits & 4u) != 0};
    }

    friend bool operator==(const SubsystemMask &, const SubsystemMask &) = default;
};

struct StateOptions {
    double herm_tol = 1e-10;  ///< relative: ||rho - rho^dag||_F <= herm_tol * ||rho||_F
    double norm_tol = 1e-10;  ///< |tr rho - 1| <= norm_tol
    bool allow_unnormalized = false;  ///< accept any positive trace and rescale to 1
};

/// A density matrix on C^K (x) C^M (x) C^N viewed as a KM x KM grid of N x N blocks.
class TripartiteState {
public:
    /// Validates shape, finiteness, Hermiticity and trace.
    TripartiteState(TripartiteDims dims, Matrix rho, const StateOptions &opts = {});

    [[nodiscard]] const TripartiteDims &dims() const noexcept { return dims_; }
    [[nodiscard]] const Matrix &rho() const noexcept { return rho_; }

private:
    TripartiteDims dims_;
    Matrix rho_;
};

/// Frobenius norm of X - X^dag.
double hermiticity_defect(const Matrix &X);

/// True if every entry is finite.
bool all_finite(const Matrix &X);

}  // namespace pptsep
