#include "pptsep/decompose.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pptsep/kernels.hpp"
#include "pptsep/ppt.hpp"
#include "pptsep/rng.hpp"
#include "pptsep/tensor.hpp"

namespace pptsep {

void fix_phase(Vector &v) {
    Eigen::Index best = 0;
    double best_mag = -1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        const double mag = std::abs(v(i));
        if (mag > best_mag) {
            best_mag = mag;
            best = i;
        }
    }
    if (best_mag > 0.0) v *= std::conj(v(best)) / best_mag;
}

namespace {

constexpr std::uint64_t kTagMixing = 0x6d6978ull;

double family_scale(std::span<const Matrix> gens) {
    double s = 1.0;
    for (const auto &G : gens) s = std::max(s, G.squaredNorm());
    return s;
}

class JointDiagonalizer {
public:
    JointDiagonalizer(std::span<const Matrix> gens, const DiagonalizeOptions &opts, double scale)
        : gens_(gens), opts_(opts), limit_(opts.tol * scale), rng_(Rng::stream(opts.seed, kTagMixing)) {}

    /// Orthonormal bases (columns) of the joint eigenspaces inside span(Q).
    void refine(const Matrix &Q, std::vector<Matrix> &out) {
        const auto d = Q.cols();
        if (d == 1) {
            out.push_back(Q);
            return;
        }
        std::vector<Matrix> restricted;
        restricted.reserve(gens_.size());
        bool scalar = true;
        for (const auto &G : gens_) {
            Matrix R = Q.adjoint() * G * Q;
            const Complex mean = R.trace() / static_cast<double>(d);
            R.diagonal().array() -= mean;
            if (R.norm() > limit_) scalar = false;
            restricted.push_back(std::move(R));
        }
        if (scalar) {
            out.push_back(Q);
            return;
        }

        for (int attempt = 0; attempt <= opts_.max_retries; ++attempt) {
            Matrix H = Matrix::Zero(d, d);
            for (const auto &R : restricted) {
                const double alpha = rng_.uniform(-1.0, 1.0);
                const double beta = rng_.uniform(-1.0, 1.0);
                const Matrix herm = (R + R.adjoint()) * 0.5;
                const Matrix anti = (R - R.adjoint()) * Complex{0.0, -0.5};
                H += alpha * herm + beta * anti;
            }
            H = (H + H.adjoint()) * 0.5;
            Eigen::SelfAdjointEigenSolver<Matrix> es(H);
            if (es.info() != Eigen::Success) continue;
            const RealVector &lam = es.eigenvalues();
            const double spread = lam(d - 1) - lam(0);
            const double gap = opts_.gap_tol * std::max(spread, 1e-300);

            std::vector<Eigen::Index> starts{0};
            for (Eigen::Index i = 1; i < d; ++i)
                if (lam(i) - lam(i - 1) > gap) starts.push_back(i);
            if (starts.size() < 2) continue;
            starts.push_back(d);

            const Matrix V = Q * es.eigenvectors();
            for (std::size_t c = 0; c + 1 < starts.size(); ++c)
                refine(V.middleCols(starts[c], starts[c + 1] - starts[c]), out);
            return;
        }
        throw DegeneracyUnresolved("simultaneous_diagonalize: could not separate a joint eigenspace");
    }

private:
    std::span<const Matrix> gens_;
    DiagonalizeOptions opts_;
    double limit_;
    Rng rng_;
};

/// Re-chooses the basis of each degenerate joint eigenspace as the
/// eigenvectors of F restricted to it.
void align_with_filter(EigenTable &table, const Matrix &F) {
    const auto N = table.U.cols();
    Eigen::Index start = 0;
    while (start < N) {
        Eigen::Index end = start + 1;
        while (end < N && table.space[static_cast<std::size_t>(end)] == table.space[static_cast<std::size_t>(start)])
            ++end;
        const auto d = end - start;
        if (d > 1) {
            const Matrix Q = table.U.middleCols(start, d);
            const auto [vals, vecs] = hermitian_eigen(Q.adjoint() * F * Q);
            Matrix rotated = Q * vecs;
            for (Eigen::Index j = d - 1; j >= 0; --j) {
                Vector v = rotated.col(j);
                fix_phase(v);
                table.U.col(start + (d - 1 - j)) = v;
            }
        }
        start = end;
    }
}

}  // namespace

EigenTable simultaneous_diagonalize(std::span<const Matrix> generators, const DiagonalizeOptions &opts) {
    if (generators.empty()) throw PreconditionError("simultaneous_diagonalize: empty generator family");
    const auto N = generators.front().rows();
    for (const auto &G : generators)
        if (G.rows() != N || G.cols() != N) throw DimensionMismatch("simultaneous_diagonalize: sizes differ");

    const double scale = family_scale(generators);
    const std::vector<Matrix> family(generators.begin(), generators.end());
    const double comm = commutator_max(family);
    if (!(comm <= opts.tol * scale)) {
        std::ostringstream os;
        os << "simultaneous_diagonalize: commutator/normality residual " << comm << " exceeds "
           << opts.tol * scale;
        throw CommutatorViolation(os.str());
    }

    JointDiagonalizer jd(generators, opts, scale);
    std::vector<Matrix> spaces;
    jd.refine(Matrix::Identity(N, N), spaces);

    EigenTable table;
    table.U.resize(N, N);
    Eigen::Index col = 0;
    for (std::size_t s = 0; s < spaces.size(); ++s)
        for (Eigen::Index j = 0; j < spaces[s].cols(); ++j) {
            Vector v = spaces[s].col(j);
            fix_phase(v);
            table.U.col(col++) = v;
            table.space.push_back(static_cast<int>(s));
        }

    for (const auto &G : generators) {
        Matrix D = table.U.adjoint() * G * table.U;
        std::vector<Complex> vals(static_cast<std::size_t>(N));
        for (Eigen::Index n = 0; n < N; ++n) vals[static_cast<std::size_t>(n)] = D(n, n);
        D.diagonal().setZero();
        if (!(D.norm() <= opts.tol * scale))
            throw DegeneracyUnresolved("simultaneous_diagonalize: off-diagonal residual exceeds tolerance");
        table.values.push_back(std::move(vals));
    }
    return table;
}

Matrix reconstruct(const SeparableEnsemble &ens) {
    std::vector<kernels::ProductTerm> terms;
    terms.reserve(ens.terms.size());
    for (const auto &t : ens.terms) terms.push_back({t.p, t.vecA, t.vecB, t.vecC});
    return kernels::parallel::reconstruct(terms, ens.dims);
}

EnsembleCheck verify_ensemble(const TripartiteState &state, const SeparableEnsemble &ens, double tol,
                              double norm_tol, double vec_tol) {
    const auto &dims = state.dims();
    if (!(ens.dims == dims)) throw DimensionMismatch("verify_ensemble: ensemble dims differ from state dims");
    for (const auto &t : ens.terms)
        if (t.vecA.size() != dims.K || t.vecB.size() != dims.M || t.vecC.size() != dims.N)
            throw DimensionMismatch("verify_ensemble: term vector sizes do not match dims");

    EnsembleCheck check;
    double total = 0.0;
    for (std::size_t n = 0; n < ens.terms.size(); ++n) {
        const auto &t = ens.terms[n];
        total += t.p;
        if (!(t.p > 0.0) || !std::isfinite(t.p)) {
            std::ostringstream os;
            os << "term " << n << ": weight " << t.p << " is not positive";
            check.violations.push_back(os.str());
        }
        const double norms[] = {t.vecA.norm(), t.vecB.norm(), t.vecC.norm()};
        const char *names[] = {"vecA", "vecB", "vecC"};
        for (int k = 0; k < 3; ++k)
            if (!(std::abs(norms[k] - 1.0) <= vec_tol)) {
                std::ostringstream os;
                os << "term " << n << ": " << names[k] << " has norm " << norms[k];
                check.violations.push_back(os.str());
            }
    }
    if (!(std::abs(total - 1.0) <= norm_tol)) {
        std::ostringstream os;
        os.precision(17);
        os << "weights sum to " << total << ", expected 1";
        check.violations.push_back(os.str());
    }

    const Matrix diff = state.rho() - reconstruct(ens);
    check.residual = diff.norm() / state.rho().norm();
    check.pass = check.residual <= tol && check.violations.empty();
    return check;
}

Decomposition decompose(const TripartiteState &state, const DecomposeOptions &opts) {
    const auto &dims = state.dims();
    const int K = dims.K, M = dims.M, N = dims.N;

    if (!ppt_report(state, opts.extract.ppt_tol).overall_ppt) throw NotPptError("decompose: state is not PPT");
    const int rank = numeric_rank(state.rho(), opts.extract.rank_rtol * state.rho().norm());
    if (rank != N) {
        std::ostringstream os;
        os << "rank of rho is " << rank << ", expected N = " << N;
        throw RankMismatch(os.str());
    }

    auto witness = find_witness(state, opts.witness, opts.extract.rank_rtol);
    if (!witness) throw NoWitness("decompose: no product pair with a rank-N sandwich was found");

    auto rotated = rotate_to_corner(state, *witness);
    auto [form, diag] = extract_canonical(rotated.state, opts.extract);
    form.localU_A = rotated.U_A;
    form.localU_B = rotated.U_B;

    const auto gens = form.generators();
    DiagonalizeOptions dopts;
    dopts.tol = opts.extract.comm_tol;
    dopts.seed = opts.seed;
    auto table = simultaneous_diagonalize(gens, dopts);
    align_with_filter(table, form.F);
    const Matrix sqrtF = psd_sqrt(form.F);
    const Matrix UAd = form.localU_A.adjoint();
    const Matrix UBd = form.localU_B.adjoint();

    SeparableEnsemble ens;
    ens.dims = dims;
    for (int n = 0; n < N; ++n) {
        Vector a(K), b(M);
        for (int u = 0; u < K - 1; ++u) a(u) = std::conj(table.values[static_cast<std::size_t>(M - 1 + u)][n]);
        a(K - 1) = 1.0;
        for (int v = 0; v < M - 1; ++v) b(v) = std::conj(table.values[static_cast<std::size_t>(v)][n]);
        b(M - 1) = 1.0;
        Vector c = sqrtF * table.U.col(n);

        EnsembleTerm term;
        term.p = a.squaredNorm() * b.squaredNorm() * c.squaredNorm();
        term.vecA = UAd * (a / a.norm());
        term.vecB = UBd * (b / b.norm());
        term.vecC = c / c.norm();
        fix_phase(term.vecA);
        fix_phase(term.vecB);
        fix_phase(term.vecC);
        ens.terms.push_back(std::move(term));
    }

    double cert_tol = opts.tol;
    if (diag.F_ill_conditioned) cert_tol *= std::sqrt(opts.extract.F_condition_limit / diag.F_condition);

    const auto check = verify_ensemble(state, ens, cert_tol, opts.norm_tol);
    if (!check.pass) {
        std::ostringstream os;
        os << "reconstruction residual " << check.residual << " (limit " << cert_tol << ")";
        for (const auto &v : check.violations) os << "; " << v;
        throw CertificationFailure(os.str());
    }
    return {std::move(ens), check.residual, std::move(*witness), diag, std::move(form)};
}

}  // namespace pptsep
