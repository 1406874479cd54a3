#include "pptsep/decompose.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "pptsep/instance_gen.hpp"
#include "pptsep/ppt.hpp"
#include "pptsep/tensor.hpp"
#include "test_support.hpp"

using namespace pptsep;
using pptsep::testing::random_unitary;

namespace {

std::vector<double> sorted_weights(const SeparableEnsemble &ens) {
    std::vector<double> w;
    for (const auto &t : ens.terms) w.push_back(t.p);
    std::sort(w.begin(), w.end());
    return w;
}

/// Multiset distance between two complex lists of equal size (greedy match).
double multiset_distance(std::vector<Complex> a, std::vector<Complex> b) {
    double worst = 0.0;
    for (const auto &x : a) {
        auto it = std::min_element(b.begin(), b.end(),
                                   [&](const Complex &l, const Complex &r) { return std::abs(l - x) < std::abs(r - x); });
        worst = std::max(worst, std::abs(*it - x));
        b.erase(it);
    }
    return worst;
}

SeparableEnsemble equal_weight_ensemble() {
    const double s = 1.0 / std::sqrt(2.0);
    SeparableEnsemble ens;
    ens.dims = {2, 2, 2};
    Vector plus(2), minus(2);
    plus << s, s;
    minus << s, -s;
    ens.terms.push_back({0.5, Vector::Unit(2, 0), Vector::Unit(2, 0), plus});
    ens.terms.push_back({0.5, Vector::Unit(2, 0), Vector::Unit(2, 0), minus});
    return ens;
}

}  // namespace

TEST(SimultaneousDiagonalize, ZeroFamily) {
    const std::vector<Matrix> gens{Matrix::Zero(3, 3)};
    const auto t = simultaneous_diagonalize(gens);
    EXPECT_LE((t.U - identity(3)).norm(), 1e-15);
    for (const auto &v : t.values[0]) EXPECT_EQ(v, Complex{});
}

TEST(SimultaneousDiagonalize, AlreadyDiagonal) {
    Matrix a = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
    a(0, 0) = 1.0;
    a(1, 1) = 2.0;
    b(0, 0) = 3.0;
    b(1, 1) = 4.0;
    const std::vector<Matrix> gens{a, b};
    const auto t = simultaneous_diagonalize(gens);
    // Columns are basis vectors up to order; pair values column by column.
    for (int n = 0; n < 2; ++n) {
        const int k = std::abs(t.U(0, n)) > 0.5 ? 0 : 1;
        EXPECT_NEAR(std::abs(t.U(k, n)), 1.0, 1e-14);
        EXPECT_NEAR(std::abs(t.values[0][static_cast<std::size_t>(n)] - Complex(1.0 + k)), 0.0, 1e-14);
        EXPECT_NEAR(std::abs(t.values[1][static_cast<std::size_t>(n)] - Complex(3.0 + k)), 0.0, 1e-14);
    }
}

TEST(SimultaneousDiagonalize, RecoversConstructedSpectra) {
    std::mt19937_64 gen(51);
    const int N = 5;
    const Matrix U0 = random_unitary(N, gen);
    std::normal_distribution<double> nd;
    std::vector<Matrix> gens;
    std::vector<std::vector<Complex>> truth;
    for (int k = 0; k < 3; ++k) {
        std::vector<Complex> lam;
        Vector d(N);
        for (int i = 0; i < N; ++i) {
            lam.emplace_back(nd(gen), nd(gen));
            d(i) = lam.back();
        }
        gens.push_back(U0 * d.asDiagonal() * U0.adjoint());
        truth.push_back(lam);
    }
    const auto t = simultaneous_diagonalize(gens);
    EXPECT_LE((t.U.adjoint() * t.U - identity(N)).norm(), 1e-12);
    for (std::size_t k = 0; k < 3; ++k) EXPECT_LE(multiset_distance(t.values[k], truth[k]), 1e-10);
}

TEST(SimultaneousDiagonalize, DegenerateGeneratorsSplitJointly) {
    // Each generator alone is degenerate; only together do they resolve the basis.
    std::mt19937_64 gen(52);
    const Matrix U0 = random_unitary(4, gen);
    Vector d1(4), d2(4);
    d1 << 1.0, 1.0, 2.0, 2.0;
    d2 << Complex(0, 1), Complex(0, -1), Complex(0, 1), Complex(0, -1);
    const std::vector<Matrix> gens{U0 * d1.asDiagonal() * U0.adjoint(), U0 * d2.asDiagonal() * U0.adjoint()};
    const auto t = simultaneous_diagonalize(gens);
    for (std::size_t k = 0; k < 2; ++k) {
        const Matrix D = t.U.adjoint() * gens[k] * t.U;
        Matrix off = D;
        off.diagonal().setZero();
        EXPECT_LE(off.norm(), 1e-10);
    }
}

TEST(SimultaneousDiagonalize, RejectsNonCommuting) {
    Matrix z = identity(2);
    z(1, 1) = -1.0;
    Matrix x = Matrix::Zero(2, 2);
    x(0, 1) = x(1, 0) = 1.0;
    const std::vector<Matrix> gens{z, x};
    EXPECT_THROW(simultaneous_diagonalize(gens), CommutatorViolation);
    const std::vector<Matrix> none;
    EXPECT_THROW(simultaneous_diagonalize(none), PreconditionError);
}

TEST(Decompose, ExampleIForManyN) {
    for (int N = 1; N <= 8; ++N) {
        const TripartiteDims d{2, 3, N};
        const auto state = example_i(d);
        const auto res = decompose(state);
        ASSERT_EQ(res.ensemble.terms.size(), static_cast<std::size_t>(N));
        Matrix C(N, N);
        for (int n = 0; n < N; ++n) {
            const auto &t = res.ensemble.terms[static_cast<std::size_t>(n)];
            EXPECT_NEAR(t.p, 1.0 / N, 1e-12);
            EXPECT_LE((t.vecA - Vector::Unit(2, 0)).norm(), 1e-12);
            EXPECT_LE((t.vecB - Vector::Unit(3, 0)).norm(), 1e-12);
            C.col(n) = t.vecC;
        }
        EXPECT_LE((C.adjoint() * C - identity(N)).norm(), 1e-12);
        EXPECT_LE(res.residual, 1e-10);
    }
}

TEST(Decompose, ExampleIiWeightsAndVectors) {
    const double a = 0.3;
    const auto res = decompose(example_ii(a));
    ASSERT_EQ(res.ensemble.terms.size(), 2u);
    const auto w = sorted_weights(res.ensemble);
    EXPECT_NEAR(w[0], 0.5 - a, 1e-12);
    EXPECT_NEAR(w[1], 0.5 + a, 1e-12);
    const double s = 1.0 / std::sqrt(2.0);
    for (const auto &t : res.ensemble.terms) {
        EXPECT_LE((t.vecA - Vector::Unit(2, 0)).norm(), 1e-12);
        EXPECT_LE((t.vecB - Vector::Unit(2, 0)).norm(), 1e-12);
        // Heavier term sits on |+>, lighter on |->.
        const double sign = t.p > 0.5 ? 1.0 : -1.0;
        Vector expected(2);
        expected << s, sign * s;
        EXPECT_NEAR(std::abs(expected.dot(t.vecC)), 1.0, 1e-12);
    }
    EXPECT_LE(res.residual, 1e-12);
}

TEST(Decompose, ExampleIiiIsRankMismatch) { EXPECT_THROW(decompose(example_iii()), RankMismatch); }

TEST(Decompose, NptStateRejected) {
    EXPECT_THROW(decompose(gen_npt_control({2, 2, 2}, 0.1, 3, NptKind::Ghz)), NotPptError);
}

TEST(Decompose, NoWitnessWithBadExplicitPair) {
    std::mt19937_64 gen(53);
    Matrix rho = Matrix::Zero(8, 8);
    rho.topLeftCorner(2, 2) = pptsep::testing::random_density(2, gen);
    DecomposeOptions opts;
    opts.witness = ExplicitWitness{Vector::Unit(2, 1), Vector::Unit(2, 1)};
    EXPECT_THROW(decompose(TripartiteState({2, 2, 2}, rho), opts), NoWitness);
}

TEST(Decompose, WeightsMatchIndependentEigenOracle) {
    // With generators diagonal in U's columns, p_n = |a_n|^2 |b_n|^2 |c_n|^2
    // where a, b come from per-generator eigenvalues. Recompute them with a
    // general eigensolver on the truth generators.
    const auto g = gen_canonical_state({{2, 2, 3}, 17});
    const auto res = decompose(g.state);

    Eigen::ComplexEigenSolver<Matrix> es(g.truth.A_list[0] + Complex(0.37, 0.11) * g.truth.B_list[0]);
    const Matrix V = es.eigenvectors();
    std::vector<double> expected;
    for (int n = 0; n < 3; ++n) {
        Vector v = V.col(n);
        v /= v.norm();
        const Complex a = v.dot(g.truth.A_list[0] * v);
        const Complex b = v.dot(g.truth.B_list[0] * v);
        const Vector c = psd_sqrt(g.truth.F) * v;
        expected.push_back((1.0 + std::norm(a)) * (1.0 + std::norm(b)) * c.squaredNorm());
    }
    std::sort(expected.begin(), expected.end());
    const auto got = sorted_weights(res.ensemble);
    for (int n = 0; n < 3; ++n) EXPECT_NEAR(got[static_cast<std::size_t>(n)], expected[static_cast<std::size_t>(n)], 1e-8);
}

TEST(Decompose, InvariantUnderPermutationOfC) {
    const auto g = gen_canonical_state({{3, 2, 3}, 19});
    Matrix P = Matrix::Zero(3, 3);
    P(0, 2) = P(1, 0) = P(2, 1) = 1.0;
    const Matrix big = kron(identity(6), P);
    const TripartiteState permuted({3, 2, 3}, big * g.state.rho() * big.transpose());
    const auto w0 = sorted_weights(decompose(g.state).ensemble);
    const auto w1 = sorted_weights(decompose(permuted).ensemble);
    for (std::size_t n = 0; n < 3; ++n) EXPECT_NEAR(w0[n], w1[n], 1e-9);
}

TEST(Decompose, ReconstructedEnsembleIsPpt) {
    const auto g = gen_canonical_state({{3, 3, 2}, 21});
    const auto res = decompose(g.state);
    Matrix rho = reconstruct(res.ensemble);
    StateOptions loose;
    loose.norm_tol = 1e-9;
    EXPECT_TRUE(ppt_report(TripartiteState({3, 3, 2}, rho, loose), 1e-10).overall_ppt);
}

TEST(Decompose, DeterministicForSeed) {
    const auto g = gen_canonical_state({{3, 3, 3}, 23});
    DecomposeOptions opts;
    opts.seed = 5;
    const auto r1 = decompose(g.state, opts);
    const auto r2 = decompose(g.state, opts);
    ASSERT_EQ(r1.ensemble.terms.size(), r2.ensemble.terms.size());
    for (std::size_t n = 0; n < r1.ensemble.terms.size(); ++n) {
        EXPECT_EQ(r1.ensemble.terms[n].p, r2.ensemble.terms[n].p);
        EXPECT_TRUE(pptsep::testing::bitwise_equal(r1.ensemble.terms[n].vecC, r2.ensemble.terms[n].vecC));
    }
}

TEST(VerifyEnsemble, OwnReconstructionHasZeroResidual) {
    const auto ens = equal_weight_ensemble();
    const TripartiteState s({2, 2, 2}, reconstruct(ens));
    const auto c = verify_ensemble(s, ens, 1e-12);
    EXPECT_EQ(c.residual, 0.0);
    EXPECT_TRUE(c.pass);
}

TEST(VerifyEnsemble, DecomposeOutputOnExampleIi) {
    const auto state = example_ii(0.3);
    const auto c = verify_ensemble(state, decompose(state).ensemble, 1e-12);
    EXPECT_TRUE(c.pass);
    EXPECT_LE(c.residual, 1e-12);
}

TEST(VerifyEnsemble, EqualWeightsMissTheCoherence) {
    // The equal-weight mixture is |00><00| (x) I/2; the difference from the
    // a = 0.3 state is a [[0,1],[1,0]] in one block, norm a sqrt(2).
    const double a = 0.3;
    const auto c = verify_ensemble(example_ii(a), equal_weight_ensemble(), 1e-8);
    EXPECT_FALSE(c.pass);
    EXPECT_NEAR(c.residual, a * std::sqrt(2.0) / std::sqrt(0.5 + 2 * a * a), 1e-12);
    EXPECT_TRUE(c.violations.empty());
}

TEST(VerifyEnsemble, BrokenWeightSumReported) {
    auto ens = equal_weight_ensemble();
    const TripartiteState s({2, 2, 2}, reconstruct(ens));
    ens.terms[0].p = 0.6;
    const auto c = verify_ensemble(s, ens, 1.0);
    EXPECT_FALSE(c.pass);
    ASSERT_FALSE(c.violations.empty());
    EXPECT_NE(c.violations.back().find("sum"), std::string::npos);
}

TEST(VerifyEnsemble, NegativeWeightAndBadNormReported) {
    auto ens = equal_weight_ensemble();
    const TripartiteState s({2, 2, 2}, reconstruct(ens));
    ens.terms[0].p = -0.5;
    ens.terms[1].vecA *= 2.0;
    const auto c = verify_ensemble(s, ens, 10.0);
    EXPECT_FALSE(c.pass);
    EXPECT_GE(c.violations.size(), 2u);
}

TEST(VerifyEnsemble, DimsMismatch) {
    auto ens = equal_weight_ensemble();
    ens.dims = {2, 2, 3};
    EXPECT_THROW(verify_ensemble(example_ii(0.3), ens, 1e-8), DimensionMismatch);
}

TEST(FixPhase, LargestEntryBecomesRealPositive) {
    Vector v(3);
    v << Complex(0.1, 0.2), Complex(0.0, -2.0), Complex(0.5, 0.0);
    fix_phase(v);
    EXPECT_EQ(v(1).imag(), 0.0);
    EXPECT_GT(v(1).real(), 0.0);
    EXPECT_NEAR(v.norm(), std::sqrt(0.05 + 4.0 + 0.25), 1e-15);
}
