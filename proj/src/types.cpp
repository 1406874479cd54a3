#include "pptsep/types.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace pptsep {

void TripartiteDims::validate() const {
    if (K < 2 || M < 2 || N < 1) {
        std::ostringstream os;
        os << "invalid dims (" << K << ", " << M << ", " << N << "): need K >= 2, M >= 2, N >= 1";
        throw PreconditionError(os.str());
    }
}

std::string SubsystemMask::label() const {
    if (identity()) return "none";
    std::string s;
    if (A) s += 'A';
    if (B) s += 'B';
    if (C) s += 'C';
    return s;
}

double hermiticity_defect(const Matrix &X) {
    if (X.rows() != X.cols()) return std::numeric_limits<double>::infinity();
    return (X - X.adjoint()).norm();
}

bool all_finite(const Matrix &X) {
    for (Eigen::Index i = 0; i < X.size(); ++i) {
        const Complex z = X.data()[i];
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
    return true;
}

TripartiteState::TripartiteState(TripartiteDims dims, Matrix rho, const StateOptions &opts)
    : dims_(dims), rho_(std::move(rho)) {
    dims_.validate();
    const auto side = dims_.side();
    if (rho_.rows() != side || rho_.cols() != side) {
        std::ostringstream os;
        os << "state matrix is " << rho_.rows() << "x" << rho_.cols() << ", dims require " << side
           << "x" << side;
        throw InvalidState(os.str());
    }
    if (!all_finite(rho_)) throw InvalidState("state matrix has non-finite entries");

    const double scale = rho_.norm();
    if (hermiticity_defect(rho_) > opts.herm_tol * std::max(scale, 1e-300)) {
        throw NotHermitianError("state matrix is not Hermitian");
    }
    const double tr = rho_.trace().real();
    if (opts.allow_unnormalized) {
        if (!(tr > 0.0)) throw InvalidState("state has non-positive trace");
        rho_ /= tr;
    } else if (std::abs(tr - 1.0) > opts.norm_tol) {
        std::ostringstream os;
        os.precision(17);
        os << "state trace is " << tr << ", expected 1";
        throw InvalidState(os.str());
    }
}

}  // namespace pptsep
