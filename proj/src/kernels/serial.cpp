#include "pptsep/kernels.hpp"

namespace pptsep::kernels::serial {

Matrix partial_transpose(const Matrix &rho, const TripartiteDims &dims, SubsystemMask mask) {
    const int K = dims.K, M = dims.M, N = dims.N;
    Matrix out(rho.rows(), rho.cols());
    for (int iA = 0; iA < K; ++iA)
        for (int iB = 0; iB < M; ++iB)
            for (int iC = 0; iC < N; ++iC)
                for (int jA = 0; jA < K; ++jA)
                    for (int jB = 0; jB < M; ++jB)
                        for (int jC = 0; jC < N; ++jC) {
                            const int rA = mask.A ? jA : iA, cA = mask.A ? iA : jA;
                            const int rB = mask.B ? jB : iB, cB = mask.B ? iB : jB;
                            const int rC = mask.C ? jC : iC, cC = mask.C ? iC : jC;
                            out((iA * M + iB) * N + iC, (jA * M + jB) * N + jC) =
                                rho((rA * M + rB) * N + rC, (cA * M + cB) * N + cC);
                        }
    return out;
}

Matrix conjugate_c(const Matrix &rho, const TripartiteDims &dims, const Matrix &W) {
    const int N = dims.N, nb = dims.ab();
    Matrix out(rho.rows(), rho.cols());
    const Matrix Wd = W.adjoint();
    for (int r = 0; r < nb; ++r)
        for (int c = 0; c < nb; ++c) {
            Matrix tmp = W * rho.block(r * N, c * N, N, N);
            out.block(r * N, c * N, N, N).noalias() = tmp * Wd;
        }
    return out;
}

Matrix block_row_gram(std::span<const Matrix> blocks) {
    const auto nb = static_cast<Eigen::Index>(blocks.size());
    const Eigen::Index N = nb ? blocks[0].rows() : 0;
    Matrix out(nb * N, nb * N);
    for (Eigen::Index r = 0; r < nb; ++r)
        for (Eigen::Index c = 0; c < nb; ++c)
            out.block(r * N, c * N, N, N).noalias() = blocks[r].adjoint() * blocks[c];
    return out;
}

Matrix reconstruct(std::span<const ProductTerm> terms, const TripartiteDims &dims) {
    const int D = dims.side();
    Matrix out = Matrix::Zero(D, D);
    for (const auto &t : terms) {
        Vector v(D);
        for (int a = 0; a < dims.K; ++a)
            for (int b = 0; b < dims.M; ++b)
                for (int c = 0; c < dims.N; ++c) v((a * dims.M + b) * dims.N + c) = t.a(a) * t.b(b) * t.c(c);
        for (int i = 0; i < D; ++i) {
            const Complex left = t.weight * v(i);
            for (int j = 0; j < D; ++j) out(i, j) += left * std::conj(v(j));
        }
    }
    return out;
}

}  // namespace pptsep::kernels::serial
