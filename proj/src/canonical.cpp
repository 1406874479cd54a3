#include "pptsep/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pptsep/kernels.hpp"
#include "pptsep/ppt.hpp"
#include "pptsep/rng.hpp"
#include "pptsep/tensor.hpp"

namespace pptsep {

std::vector<Matrix> CanonicalForm::generators() const {
    std::vector<Matrix> out(A_list);
    out.insert(out.end(), B_list.begin(), B_list.end());
    return out;
}

std::vector<Matrix> monomial_row(const TripartiteDims &dims, const std::vector<Matrix> &A_list,
                                 const std::vector<Matrix> &B_list) {
    const int K = dims.K, M = dims.M, N = dims.N;
    if (static_cast<int>(A_list.size()) != M - 1 || static_cast<int>(B_list.size()) != K - 1)
        throw DimensionMismatch("monomial_row: need M-1 A-generators and K-1 B-generators");
    for (const auto &G : A_list)
        if (G.rows() != N || G.cols() != N) throw DimensionMismatch("monomial_row: generator is not N x N");
    for (const auto &G : B_list)
        if (G.rows() != N || G.cols() != N) throw DimensionMismatch("monomial_row: generator is not N x N");

    std::vector<Matrix> row;
    row.reserve(static_cast<std::size_t>(K * M));
    for (int u = 0; u < K; ++u) {
        for (int v = 0; v < M; ++v) {
            const bool lastU = u == K - 1, lastV = v == M - 1;
            if (lastU && lastV)
                row.push_back(Matrix::Identity(N, N));
            else if (lastU)
                row.push_back(A_list[static_cast<std::size_t>(v)]);
            else if (lastV)
                row.push_back(B_list[static_cast<std::size_t>(u)]);
            else
                row.push_back(B_list[static_cast<std::size_t>(u)] * A_list[static_cast<std::size_t>(v)]);
        }
    }
    return row;
}

Matrix canonical_filtered_state(const CanonicalForm &cf) {
    const auto row = monomial_row(cf.dims, cf.A_list, cf.B_list);
    return kernels::parallel::block_row_gram(row);
}

Matrix canonical_state_matrix(const CanonicalForm &cf) {
    return kernels::parallel::conjugate_c(canonical_filtered_state(cf), cf.dims, psd_sqrt(cf.F));
}

double commutator_max(const std::vector<Matrix> &gens) {
    double worst = 0.0;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        const Matrix &G = gens[i];
        const Matrix Gd = G.adjoint();
        worst = std::max(worst, (G * Gd - Gd * G).norm());
        for (std::size_t j = i + 1; j < gens.size(); ++j) {
            const Matrix &H = gens[j];
            const Matrix Hd = H.adjoint();
            worst = std::max(worst, (G * H - H * G).norm());
            worst = std::max(worst, (G * Hd - Hd * G).norm());
        }
    }
    return worst;
}

namespace {

double kernel_residual_on_filtered(const Matrix &rho_f, const TripartiteDims &dims,
                                   const std::vector<Matrix> &A_list, const std::vector<Matrix> &B_list) {
    const int K = dims.K, M = dims.M, N = dims.N;
    const int last = dims.ab() - 1;
    const auto cols = [&](int blk) { return rho_f.middleCols(blk * N, N); };

    double worst = 0.0;
    auto account = [&](int blk, const Matrix &G) {
        // Column f of Psi is |blk>|f> - |last> G|f>.
        const Matrix image = cols(blk) - cols(last) * G;
        for (int f = 0; f < N; ++f) {
            const double psi_norm = std::sqrt(1.0 + G.col(f).squaredNorm());
            worst = std::max(worst, image.col(f).norm() / psi_norm);
        }
    };
    for (int v = 0; v < M - 1; ++v) account((K - 1) * M + v, A_list[static_cast<std::size_t>(v)]);
    for (int u = 0; u < K - 1; ++u) account(u * M + (M - 1), B_list[static_cast<std::size_t>(u)]);
    return worst;
}

double generator_scale(const std::vector<Matrix> &gens) {
    double s = 1.0;
    for (const auto &G : gens) s = std::max(s, G.squaredNorm());
    return s;
}

}  // namespace

Extraction extract_canonical(const TripartiteState &state, const ExtractOptions &opts) {
    const auto &dims = state.dims();
    const int K = dims.K, M = dims.M, N = dims.N;
    const int last = dims.ab() - 1;
    const Matrix &rho = state.rho();

    const auto report = ppt_report(state, opts.ppt_tol);
    if (!report.overall_ppt) throw NotPptError("extract_canonical: state is not PPT");

    ExtractionDiagnostics diag;
    const double rank_threshold = opts.rank_rtol * rho.norm();
    diag.state_rank = numeric_rank(rho, rank_threshold);
    if (diag.state_rank != N) {
        std::ostringstream os;
        os << "rank of rho is " << diag.state_rank << ", expected N = " << N;
        throw RankMismatch(os.str());
    }
    const Matrix F = block(rho, dims, last, last);
    diag.corner_rank = numeric_rank(F, rank_threshold);
    if (diag.corner_rank != N) {
        std::ostringstream os;
        os << "rank of the corner block is " << diag.corner_rank << ", expected N = " << N;
        throw RankMismatch(os.str());
    }
    diag.F_condition = condition_number(F);
    diag.F_ill_conditioned = diag.F_condition > opts.F_condition_limit;

    const Matrix filter = psd_inv_sqrt(F, rank_threshold);
    const Matrix rho_f = kernels::parallel::conjugate_c(rho, dims, filter);

    CanonicalForm cf;
    cf.dims = dims;
    cf.F = F;
    cf.localU_A = identity(K);
    cf.localU_B = identity(M);
    for (int v = 0; v < M - 1; ++v) cf.A_list.push_back(block(rho_f, dims, last, (K - 1) * M + v));
    for (int u = 0; u < K - 1; ++u) cf.B_list.push_back(block(rho_f, dims, last, u * M + (M - 1)));

    const auto row = monomial_row(dims, cf.A_list, cf.B_list);
    const Matrix gram = kernels::parallel::block_row_gram(row);
    const double filtered_norm = rho_f.norm();
    diag.reconstruction_residual = (rho_f - gram).norm() / filtered_norm;

    double block_worst = 0.0;
#pragma omp parallel for reduction(max : block_worst) schedule(static)
    for (int c = 0; c < dims.ab(); ++c) {
        const double r = (rho_f.block(last * N, c * N, N, N) - row[static_cast<std::size_t>(c)]).norm();
        block_worst = std::max(block_worst, r);
    }
    diag.block_residual_max = block_worst;

    const auto gens = cf.generators();
    diag.commutator_max = commutator_max(gens);

    // First diagonal block not pinned down by the last row/column relations.
    const int d = (K - 2) * M + (M - 2);
    const Matrix &mono = row[static_cast<std::size_t>(d)];
    diag.delta_norm = (block(rho_f, dims, d, d) - mono.adjoint() * mono).norm();

    diag.kernel_residual_max = kernel_residual_on_filtered(rho_f, dims, cf.A_list, cf.B_list);

    const double comm_limit = opts.comm_tol * generator_scale(gens);
    const double abs_limit = opts.tol * filtered_norm;
    std::ostringstream violations;
    if (!(diag.reconstruction_residual <= opts.tol))
        violations << " reconstruction_residual=" << diag.reconstruction_residual;
    if (!(diag.commutator_max <= comm_limit)) violations << " commutator_max=" << diag.commutator_max;
    if (!(diag.delta_norm <= abs_limit)) violations << " delta_norm=" << diag.delta_norm;
    if (!(diag.kernel_residual_max <= abs_limit))
        violations << " kernel_residual_max=" << diag.kernel_residual_max;
    if (!(diag.block_residual_max <= abs_limit))
        violations << " block_residual_max=" << diag.block_residual_max;
    if (!violations.str().empty())
        throw StructureViolation("state is not of the canonical form at this tolerance:" + violations.str());

    return {std::move(cf), diag};
}

double verify_kernel_vectors(const TripartiteState &state, const CanonicalForm &cf) {
    const auto &dims = state.dims();
    if (!(dims == cf.dims)) throw DimensionMismatch("verify_kernel_vectors: dims differ");
    const Matrix U = kron(kron(cf.localU_A, cf.localU_B), identity(dims.N));
    const Matrix rotated = U * state.rho() * U.adjoint();
    const Matrix rho_f = kernels::parallel::conjugate_c(rotated, dims, psd_inv_sqrt(cf.F));
    return kernel_residual_on_filtered(rho_f, dims, cf.A_list, cf.B_list);
}

// ---------------------------------------------------------------------------
// Witness search and rotation
// ---------------------------------------------------------------------------

ProductWitness evaluate_witness(const TripartiteState &state, const Vector &eA, const Vector &fB, double rank_rtol) {
    const Matrix S = sandwich_AB(state, eA, fB);
    return {eA, fB, numeric_rank(S, rank_rtol * state.rho().norm())};
}

std::optional<ProductWitness> find_witness(const TripartiteState &state, const WitnessMode &mode, double rank_rtol) {
    const auto &dims = state.dims();
    const int K = dims.K, M = dims.M, N = dims.N;

    auto accept = [&](const Vector &eA, const Vector &fB) -> std::optional<ProductWitness> {
        auto w = evaluate_witness(state, eA, fB, rank_rtol);
        if (w.sandwich_rank == N) return w;
        return std::nullopt;
    };

    if (const auto *ex = std::get_if<ExplicitWitness>(&mode)) return accept(ex->eA, ex->fB);

    auto try_pair = [&](int a, int b) { return accept(Vector::Unit(K, a), Vector::Unit(M, b)); };
    if (auto w = try_pair(K - 1, M - 1)) return w;
    for (int a = 0; a < K; ++a)
        for (int b = 0; b < M; ++b) {
            if (a == K - 1 && b == M - 1) continue;
            if (auto w = try_pair(a, b)) return w;
        }

    if (const auto *rs = std::get_if<RandomSearch>(&mode)) {
        Rng rng = Rng::stream(rs->seed, 0x77697473ull);
        for (int s = 0; s < rs->samples; ++s) {
            const Vector eA = random_unit_vector(K, rng);
            const Vector fB = random_unit_vector(M, rng);
            if (auto w = accept(eA, fB)) return w;
        }
    }
    return std::nullopt;
}

RotatedState rotate_to_corner(const TripartiteState &state, const ProductWitness &w, double vec_tol) {
    const auto &dims = state.dims();
    if (w.eA.size() != dims.K || w.fB.size() != dims.M)
        throw DimensionMismatch("rotate_to_corner: witness sizes do not match dims");
    if (std::abs(w.eA.norm() - 1.0) > vec_tol || std::abs(w.fB.norm() - 1.0) > vec_tol)
        throw NormalizationError("rotate_to_corner: witness vectors must be normalized");

    Matrix U_A = complete_to_unitary(w.eA).adjoint();
    Matrix U_B = complete_to_unitary(w.fB).adjoint();
    if (U_A.isIdentity(0.0) && U_B.isIdentity(0.0)) return {state, std::move(U_A), std::move(U_B)};

    const Matrix U = kron(kron(U_A, U_B), identity(dims.N));
    Matrix rotated = U * state.rho() * U.adjoint();
    rotated = (rotated + rotated.adjoint()) * 0.5;
    StateOptions opts;
    opts.norm_tol = 1e-8;
    return {TripartiteState(dims, std::move(rotated), opts), std::move(U_A), std::move(U_B)};
}

}  // namespace pptsep
