#include "pptsep/instance_gen.hpp"

#include <cmath>
#include <numbers>

#include "pptsep/kernels.hpp"
#include "pptsep/rng.hpp"
#include "pptsep/tensor.hpp"

namespace pptsep {

namespace {

// Stream tags, one per sampled object.
constexpr std::uint64_t kTagBasis = 1;
constexpr std::uint64_t kTagEigenvalues = 2;
constexpr std::uint64_t kTagFilter = 3;
constexpr std::uint64_t kTagPure = 4;

Vector basis_state(int n, int k) { return Vector::Unit(n, k); }

Vector kron3(const Vector &a, const Vector &b, const Vector &c) {
    Vector out(a.size() * b.size() * c.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        for (Eigen::Index j = 0; j < b.size(); ++j)
            for (Eigen::Index k = 0; k < c.size(); ++k) out((i * b.size() + j) * c.size() + k) = a(i) * b(j) * c(k);
    return out;
}

}  // namespace

std::vector<Matrix> gen_commuting_family(int N, int count, const GenSpec &spec, Spectrum spectrum) {
    if (N < 1 || count < 0) throw PreconditionError("gen_commuting_family: need N >= 1 and count >= 0");
    std::vector<Matrix> out;
    if (count == 0) return out;

    Rng basis_rng = Rng::stream(spec.seed, kTagBasis);
    const Matrix U0 = haar_unitary(N, basis_rng);
    Rng eig_rng = Rng::stream(spec.seed, kTagEigenvalues);
    out.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        Vector lambda(N);
        for (int i = 0; i < N; ++i) {
            lambda(i) = spectrum == Spectrum::Real ? Complex{eig_rng.normal(), 0.0} : eig_rng.complex_normal();
            lambda(i) *= spec.generator_scale;
        }
        out.push_back(U0 * lambda.asDiagonal() * U0.adjoint());
    }
    return out;
}

GeneratedCanonical canonical_state_from(const TripartiteDims &dims, std::vector<Matrix> A_list,
                                        std::vector<Matrix> B_list, const Matrix &F) {
    dims.validate();
    CanonicalForm cf;
    cf.dims = dims;
    cf.A_list = std::move(A_list);
    cf.B_list = std::move(B_list);
    cf.F = F;
    cf.localU_A = identity(dims.K);
    cf.localU_B = identity(dims.M);

    Matrix rho = canonical_state_matrix(cf);
    const double tr = rho.trace().real();
    rho /= tr;
    rho = (rho + rho.adjoint()) * 0.5;
    cf.F /= tr;
    StateOptions opts;
    opts.norm_tol = 1e-12;
    return {TripartiteState(dims, std::move(rho), opts), std::move(cf)};
}

GeneratedCanonical gen_canonical_state(const GenSpec &spec) {
    const auto &d = spec.dims;
    d.validate();
    auto family = gen_commuting_family(d.N, (d.M - 1) + (d.K - 1), spec);
    std::vector<Matrix> A_list(family.begin(), family.begin() + (d.M - 1));
    std::vector<Matrix> B_list(family.begin() + (d.M - 1), family.end());

    Rng f_rng = Rng::stream(spec.seed, kTagFilter);
    const Matrix Q = haar_unitary(d.N, f_rng);
    const double half_log_cap = 0.5 * std::log(spec.F_condition_cap);
    RealVector mu(d.N);
    for (int i = 0; i < d.N; ++i) mu(i) = std::exp(f_rng.uniform(-half_log_cap, half_log_cap));
    Matrix F = Q * mu.cast<Complex>().asDiagonal() * Q.adjoint();
    F = (F + F.adjoint()) * 0.5;

    return canonical_state_from(d, std::move(A_list), std::move(B_list), F);
}

TripartiteState example_i(const TripartiteDims &dims) {
    dims.validate();
    Matrix rho = Matrix::Zero(dims.side(), dims.side());
    rho.topLeftCorner(dims.N, dims.N) = Matrix::Identity(dims.N, dims.N) / static_cast<double>(dims.N);
    return {dims, std::move(rho)};
}

TripartiteState example_ii(double a) {
    if (!(std::abs(a) <= 0.5)) throw PreconditionError("example_ii: need |a| <= 1/2 for a positive state");
    Matrix rho = Matrix::Zero(8, 8);
    rho(0, 0) = 0.5;
    rho(1, 1) = 0.5;
    rho(0, 1) = a;
    rho(1, 0) = a;
    return {TripartiteDims{2, 2, 2}, std::move(rho)};
}

std::array<Vector, 4> example_iii_vectors(ExampleIiiVariant variant) {
    const double s = std::numbers::sqrt2 / 2.0;
    Vector zero = basis_state(2, 0), one = basis_state(2, 1);
    Vector plus = (zero + one) * s, minus = (zero - one) * s;
    const Vector third = variant == ExampleIiiVariant::Corrected ? kron3(plus, zero, one) : kron3(plus, one, zero);
    return {kron3(zero, one, plus), kron3(one, plus, zero), third, kron3(minus, minus, minus)};
}

Matrix example_iii_matrix(ExampleIiiVariant variant) {
    Matrix rho = Matrix::Identity(8, 8);
    for (const auto &psi : example_iii_vectors(variant)) rho -= psi * psi.adjoint();
    return rho / 8.0;
}

TripartiteState example_iii(ExampleIiiVariant variant) {
    StateOptions opts;
    opts.allow_unnormalized = true;
    Matrix rho = example_iii_matrix(variant);
    rho = (rho + rho.adjoint()) * 0.5;
    return {TripartiteDims{2, 2, 2}, std::move(rho), opts};
}

TripartiteState gen_npt_control(const TripartiteDims &dims, double p, std::uint64_t seed, NptKind kind) {
    dims.validate();
    if (!(p >= 0.0 && p <= 1.0)) throw PreconditionError("gen_npt_control: noise p must lie in [0, 1]");
    const int D = dims.side();
    Vector phi;
    if (kind == NptKind::Ghz) {
        if (dims.N < 2) throw PreconditionError("gen_npt_control: GHZ needs N >= 2");
        phi = Vector::Zero(D);
        phi(compose_index(0, 0, 0, dims)) = std::numbers::sqrt2 / 2.0;
        phi(compose_index(1, 1, 1, dims)) = std::numbers::sqrt2 / 2.0;
    } else {
        Rng rng = Rng::stream(seed, kTagPure);
        phi = random_unit_vector(D, rng);
    }
    Matrix rho = (1.0 - p) * (phi * phi.adjoint()) + (p / D) * Matrix::Identity(D, D);
    rho = (rho + rho.adjoint()) * 0.5;
    StateOptions opts;
    opts.norm_tol = 1e-12;
    return {dims, std::move(rho), opts};
}

}  // namespace pptsep
