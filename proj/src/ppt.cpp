#include "pptsep/ppt.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "pptsep/tensor.hpp"

namespace pptsep {

PsdCheck is_psd(const Matrix &X, double tol, double herm_tol) {
    if (X.rows() != X.cols()) throw DimensionMismatch("is_psd: matrix is not square");
    if (X.size() == 0) return {true, 0.0};
    if (hermiticity_defect(X) > herm_tol * std::max(X.norm(), 1.0))
        throw NotHermitianError("is_psd: matrix is not Hermitian");
    const Matrix H = (X + X.adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<Matrix> es(H, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("is_psd: eigensolver did not converge");
    const double lo = es.eigenvalues()(0);
    return {lo >= -tol, lo};
}

const MaskResult &PptReport::at(SubsystemMask m) const {
    const unsigned bits = (m.A ? 1u : 0u) | (m.B ? 2u : 0u) | (m.C ? 4u : 0u);
    return entries[bits];
}

PptReport ppt_report(const TripartiteState &state, std::optional<double> tol) {
    PptReport report;
    report.tol_used = tol ? *tol : 1e-9 * state.rho().trace().real();

    // Independent eigensolves; each slot is written by exactly one iteration.
    std::array<std::exception_ptr, 8> failures{};
#pragma omp parallel for schedule(dynamic)
    for (int bits = 0; bits < 8; ++bits) {
        const auto slot = static_cast<std::size_t>(bits);
        const auto mask = SubsystemMask::from_bits(static_cast<unsigned>(bits));
        try {
            const auto check = is_psd(partial_transpose(state, mask), report.tol_used);
            report.entries[slot] = {mask, check.min_eigenvalue, check.psd};
        } catch (...) {
            failures[slot] = std::current_exception();
        }
    }
    for (const auto &f : failures)
        if (f) std::rethrow_exception(f);

    report.overall_ppt = report.entries[0].pass && report.entries[1].pass && report.entries[2].pass &&
                         report.entries[4].pass;
    return report;
}

}  // namespace pptsep
