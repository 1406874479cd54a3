#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "pptsep/canonical.hpp"
#include "pptsep/types.hpp"

namespace pptsep {

struct GenSpec {
    TripartiteDims dims;
    std::uint64_t seed = 0;
    double generator_scale = 1.0;
    double F_condition_cap = 100.0;
};

enum class Spectrum { Complex, Real };

/// count matrices U0 diag(lambda_k) U0^dag sharing one Haar-random U0.
std::vector<Matrix> gen_commuting_family(int N, int count, const GenSpec &spec,
                                         Spectrum spectrum = Spectrum::Complex);

struct GeneratedCanonical {
    TripartiteState state;
    CanonicalForm truth;  ///< F already rescaled by the trace normalization
};

/// Builds the unit-trace state of the given generators and filter. Returns the
/// state together with the form whose F carries the normalization.
GeneratedCanonical canonical_state_from(const TripartiteDims &dims, std::vector<Matrix> A_list,
                                        std::vector<Matrix> B_list, const Matrix &F);

/// Random canonical-form state: M-1 + K-1 commuting generators and an F with
/// log-uniform spectrum in [1/sqrt(cap), sqrt(cap)].
GeneratedCanonical gen_canonical_state(const GenSpec &spec);

/// (1/N) I_N in block (0, 0), zero elsewhere.
TripartiteState example_i(const TripartiteDims &dims);

/// 2x2x2 state with [[1/2, a], [a, 1/2]] in the top-left corner.
/// PreconditionError for |a| > 1/2.
TripartiteState example_ii(double a);

enum class ExampleIiiVariant { Corrected, Literal };

/// The four product vectors removed from the identity. Literal: |0,1,+>,
/// |1,+,0>, |+,1,0>, |-,-,->. Corrected swaps the third for |+,0,1>.
std::array<Vector, 4> example_iii_vectors(ExampleIiiVariant variant);

/// example_iii_matrix is (1/8)(I - sum |psi_i><psi_i|), which has trace 1/2;
/// example_iii rescales it to unit trace. The literal vectors are not
/// orthogonal, so that variant also has a negative eigenvalue.
TripartiteState example_iii(ExampleIiiVariant variant = ExampleIiiVariant::Corrected);
Matrix example_iii_matrix(ExampleIiiVariant variant);

enum class NptKind { RandomPure, Ghz };

/// (1-p)|phi><phi| + p I / KMN with |phi> Haar-random (RandomPure) or
/// (|000> + |111>)/sqrt(2) (Ghz, needs N >= 2).
TripartiteState gen_npt_control(const TripartiteDims &dims, double p, std::uint64_t seed,
                                NptKind kind = NptKind::RandomPure);

}  // namespace pptsep
