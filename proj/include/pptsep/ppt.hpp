#pragma once

#include <array>
#include <optional>

#include "pptsep/types.hpp"

namespace pptsep {

struct PsdCheck {
    bool psd = false;
    double min_eigenvalue = 0.0;
};

/// Smallest eigenvalue of the Hermitian part of X and whether it is >= -tol.
/// Throws NotHermitianError if ||X - X^dag||_F > herm_tol * max(||X||_F, 1).
PsdCheck is_psd(const Matrix &X, double tol, double herm_tol = 1e-10);

struct MaskResult {
    SubsystemMask mask;
    double min_eigenvalue = 0.0;
    bool pass = false;
};

/// Positivity of rho and of all seven nontrivial partial transposes.
///
/// entries[b] holds the mask with bit pattern b (A = 1, B = 2, C = 4), so
/// entries[0] is rho itself. The overall verdict only consults rho, {A}, {B}
/// and {C}: a mask and its complement give transposed matrices with the same
/// spectrum, which covers the remaining four.
struct PptReport {
    std::array<MaskResult, 8> entries{};
    bool overall_ppt = false;
    double tol_used = 0.0;

    [[nodiscard]] const MaskResult &at(SubsystemMask m) const;
};

/// Default tolerance: 1e-9 * tr(rho).
PptReport ppt_report(const TripartiteState &state, std::optional<double> tol = std::nullopt);

}  // namespace pptsep
