#include "pptsep/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pptsep::kernels {

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace parallel {

Matrix partial_transpose(const Matrix &rho, const TripartiteDims &dims, SubsystemMask mask) {
    const int M = dims.M, N = dims.N, D = dims.side();
    Matrix out(D, D);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < D; ++i) {
        const int iC = i % N, iB = (i / N) % M, iA = i / (N * M);
        for (int j = 0; j < D; ++j) {
            const int jC = j % N, jB = (j / N) % M, jA = j / (N * M);
            const int rA = mask.A ? jA : iA, cA = mask.A ? iA : jA;
            const int rB = mask.B ? jB : iB, cB = mask.B ? iB : jB;
            const int rC = mask.C ? jC : iC, cC = mask.C ? iC : jC;
            out(i, j) = rho((rA * M + rB) * N + rC, (cA * M + cB) * N + cC);
        }
    }
    return out;
}

Matrix conjugate_c(const Matrix &rho, const TripartiteDims &dims, const Matrix &W) {
    const int N = dims.N, nb = dims.ab();
    Matrix out(rho.rows(), rho.cols());
    const Matrix Wd = W.adjoint();
#pragma omp parallel for collapse(2) schedule(static)
    for (int r = 0; r < nb; ++r)
        for (int c = 0; c < nb; ++c) {
            Matrix tmp = W * rho.block(r * N, c * N, N, N);
            out.block(r * N, c * N, N, N).noalias() = tmp * Wd;
        }
    return out;
}

Matrix block_row_gram(std::span<const Matrix> blocks) {
    const auto nb = static_cast<long>(blocks.size());
    const Eigen::Index N = nb ? blocks[0].rows() : 0;
    Matrix out(nb * N, nb * N);
#pragma omp parallel for collapse(2) schedule(static)
    for (long r = 0; r < nb; ++r)
        for (long c = 0; c < nb; ++c)
            out.block(r * N, c * N, N, N).noalias() = blocks[r].adjoint() * blocks[c];
    return out;
}

Matrix reconstruct(std::span<const ProductTerm> terms, const TripartiteDims &dims) {
    const int D = dims.side();
    const auto nt = terms.size();
    std::vector<Vector> vs(nt, Vector(D));
#pragma omp parallel for schedule(static)
    for (std::size_t n = 0; n < nt; ++n) {
        const auto &t = terms[n];
        for (int a = 0; a < dims.K; ++a)
            for (int b = 0; b < dims.M; ++b)
                for (int c = 0; c < dims.N; ++c)
                    vs[n]((a * dims.M + b) * dims.N + c) = t.a(a) * t.b(b) * t.c(c);
    }
    // Per-entry accumulation over terms in index order keeps the result
    // identical to the serial kernel for any thread count.
    Matrix out(D, D);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < D; ++i) {
        for (int j = 0; j < D; ++j) {
            Complex acc{0.0, 0.0};
            for (std::size_t n = 0; n < nt; ++n) acc += (terms[n].weight * vs[n](i)) * std::conj(vs[n](j));
            out(i, j) = acc;
        }
    }
    return out;
}

}  // namespace parallel
}  // namespace pptsep::kernels
