#include "pptsep/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pptsep/kernels.hpp"

namespace pptsep {

int compose_index(int iA, int iB, int iC, const TripartiteDims &dims) {
    if (iA < 0 || iA >= dims.K || iB < 0 || iB >= dims.M || iC < 0 || iC >= dims.N) {
        std::ostringstream os;
        os << "index (" << iA << ", " << iB << ", " << iC << ") out of range for dims (" << dims.K << ", "
           << dims.M << ", " << dims.N << ")";
        throw IndexError(os.str());
    }
    return (iA * dims.M + iB) * dims.N + iC;
}

Matrix kron(const Matrix &X, const Matrix &Y) {
    Matrix out(X.rows() * Y.rows(), X.cols() * Y.cols());
    for (Eigen::Index i = 0; i < X.rows(); ++i)
        for (Eigen::Index j = 0; j < X.cols(); ++j)
            out.block(i * Y.rows(), j * Y.cols(), Y.rows(), Y.cols()) = X(i, j) * Y;
    return out;
}

Matrix partial_transpose(const Matrix &rho, const TripartiteDims &dims, SubsystemMask mask) {
    if (rho.rows() != dims.side() || rho.cols() != dims.side())
        throw DimensionMismatch("partial_transpose: matrix does not match dims");
    if (mask.identity()) return rho;
    return kernels::parallel::partial_transpose(rho, dims, mask);
}

Matrix partial_transpose(const TripartiteState &state, SubsystemMask mask) {
    return partial_transpose(state.rho(), state.dims(), mask);
}

Matrix block(const Matrix &rho, const TripartiteDims &dims, int rowBlock, int colBlock) {
    const int nb = dims.ab();
    if (rowBlock < 0 || rowBlock >= nb || colBlock < 0 || colBlock >= nb) {
        std::ostringstream os;
        os << "block (" << rowBlock << ", " << colBlock << ") out of range [0, " << nb << ")";
        throw IndexError(os.str());
    }
    const int N = dims.N;
    return rho.block(rowBlock * N, colBlock * N, N, N);
}

Matrix block(const TripartiteState &state, int rowBlock, int colBlock) {
    return block(state.rho(), state.dims(), rowBlock, colBlock);
}

Matrix sandwich_AB(const TripartiteState &state, const Vector &eA, const Vector &fB, double vec_tol) {
    const auto &d = state.dims();
    if (eA.size() != d.K || fB.size() != d.M) throw DimensionMismatch("sandwich_AB: vector sizes do not match dims");
    if (std::abs(eA.norm() - 1.0) > vec_tol || std::abs(fB.norm() - 1.0) > vec_tol)
        throw NormalizationError("sandwich_AB: witness vectors must be normalized");

    const int N = d.N;
    Vector w(d.ab());
    for (int a = 0; a < d.K; ++a)
        for (int b = 0; b < d.M; ++b) w(a * d.M + b) = eA(a) * fB(b);

    Matrix out = Matrix::Zero(N, N);
    for (int r = 0; r < d.ab(); ++r) {
        if (w(r) == Complex{}) continue;
        for (int c = 0; c < d.ab(); ++c) {
            if (w(c) == Complex{}) continue;
            out += (std::conj(w(r)) * w(c)) * state.rho().block(r * N, c * N, N, N);
        }
    }
    return out;
}

std::vector<double> singular_values(const Matrix &X) {
    if (X.size() == 0) return {};
    Eigen::JacobiSVD<Matrix> svd(X);
    const auto &s = svd.singularValues();
    return {s.data(), s.data() + s.size()};
}

namespace {

int count_above(const std::vector<double> &s, double threshold) {
    return static_cast<int>(std::count_if(s.begin(), s.end(), [&](double v) { return v > threshold; }));
}

}  // namespace

int numeric_rank(const Matrix &X, std::optional<double> tol) {
    const auto s = singular_values(X);
    if (s.empty()) return 0;
    const double threshold = tol ? *tol
                                 : static_cast<double>(std::max(X.rows(), X.cols())) *
                                       std::numeric_limits<double>::epsilon() * s.front();
    return count_above(s, threshold);
}

int numeric_rank_relative(const Matrix &X, double rtol) {
    const auto s = singular_values(X);
    if (s.empty()) return 0;
    return count_above(s, rtol * s.front());
}

HermitianEigen hermitian_eigen(const Matrix &X) {
    const Matrix H = (X + X.adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<Matrix> es(H);
    if (es.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
    return {es.eigenvalues(), es.eigenvectors()};
}

Matrix psd_sqrt(const Matrix &X, double tol) {
    auto [vals, vecs] = hermitian_eigen(X);
    if (vals.size() == 0) return X;
    if (vals(0) < -tol) {
        std::ostringstream os;
        os << "psd_sqrt: eigenvalue " << vals(0) << " below -" << tol;
        throw NotPsdError(os.str());
    }
    RealVector r = vals.cwiseMax(0.0).cwiseSqrt();
    return vecs * r.cast<Complex>().asDiagonal() * vecs.adjoint();
}

Matrix psd_inv_sqrt(const Matrix &X, double tol) {
    auto [vals, vecs] = hermitian_eigen(X);
    if (vals.size() == 0) return X;
    if (vals(0) < -tol) {
        std::ostringstream os;
        os << "psd_inv_sqrt: eigenvalue " << vals(0) << " below -" << tol;
        throw NotPsdError(os.str());
    }
    const double top = vals(vals.size() - 1);
    const double threshold = std::max(tol, static_cast<double>(vals.size()) *
                                               std::numeric_limits<double>::epsilon() * std::abs(top));
    if (!(vals(0) > threshold)) throw SingularError("psd_inv_sqrt: matrix is singular");
    RealVector r = vals.cwiseSqrt().cwiseInverse();
    return vecs * r.cast<Complex>().asDiagonal() * vecs.adjoint();
}

double condition_number(const Matrix &X) {
    const auto s = singular_values(X);
    if (s.empty()) return 1.0;
    if (s.back() == 0.0) return std::numeric_limits<double>::infinity();
    return s.front() / s.back();
}

Matrix identity(int n) { return Matrix::Identity(n, n); }

Matrix complete_to_unitary(const Vector &v) {
    const auto n = v.size();
    std::vector<Vector> q;
    q.reserve(static_cast<std::size_t>(n));
    q.push_back(v / v.norm());
    std::vector<bool> used(static_cast<std::size_t>(n), false);

    auto residual = [&](Eigen::Index k) {
        Vector r = Vector::Unit(n, k);
        for (int pass = 0; pass < 2; ++pass)
            for (const auto &b : q) r -= b * b.dot(r);
        return r;
    };

    while (static_cast<Eigen::Index>(q.size()) < n) {
        Eigen::Index best = -1;
        double best_norm = -1.0;
        Vector best_r;
        for (Eigen::Index k = 0; k < n; ++k) {
            if (used[static_cast<std::size_t>(k)]) continue;
            Vector r = residual(k);
            if (r.norm() > best_norm) {
                best_norm = r.norm();
                best = k;
                best_r = std::move(r);
            }
        }
        used[static_cast<std::size_t>(best)] = true;
        q.push_back(best_r / best_norm);
    }

    Matrix V(n, n);
    for (Eigen::Index k = 1; k < n; ++k) V.col(k - 1) = q[static_cast<std::size_t>(k)];
    V.col(n - 1) = q.front();
    return V;
}

}  // namespace pptsep
