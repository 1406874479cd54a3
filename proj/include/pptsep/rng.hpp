#pragma once

#include <cstdint>
#include <random>

#include "pptsep/types.hpp"

namespace pptsep {

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seedable, portable random source: std::mt19937_64 (whose output sequence
/// the standard fixes) with hand-written uniform and normal transforms, so the
/// same seed yields the same numbers on every platform.
///
/// Independent objects draw from separate streams: stream(seed, tag) seeds
/// the engine with splitmix64(seed ^ splitmix64(tag)).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static Rng stream(std::uint64_t seed, std::uint64_t tag) { return Rng(splitmix64(seed ^ splitmix64(tag))); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Standard normal via Box-Muller.
    double normal();
    /// (x + i y) / sqrt(2) with x, y standard normal.
    Complex complex_normal();

private:
    std::mt19937_64 engine_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Haar-random n x n unitary: QR of a complex Gaussian matrix with the
/// phases of R's diagonal moved into Q.
Matrix haar_unitary(int n, Rng &rng);

/// Uniformly random unit vector in C^n.
Vector random_unit_vector(int n, Rng &rng);

}  // namespace pptsep
