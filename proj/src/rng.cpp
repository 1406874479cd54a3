#include "pptsep/rng.hpp"

#include <cmath>
#include <numbers>

namespace pptsep {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

Complex Rng::complex_normal() {
    const double x = normal();
    const double y = normal();
    return Complex{x, y} * (std::numbers::sqrt2 / 2.0);
}

Matrix haar_unitary(int n, Rng &rng) {
    Matrix G(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) G(i, j) = rng.complex_normal();
    Eigen::HouseholderQR<Matrix> qr(G);
    Matrix Q = qr.householderQ() * Matrix::Identity(n, n);
    const Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        const Complex d = R(j, j);
        const double mag = std::abs(d);
        if (mag > 0.0) Q.col(j) *= d / mag;
    }
    return Q;
}

Vector random_unit_vector(int n, Rng &rng) {
    Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = rng.complex_normal();
    return v / v.norm();
}

}  // namespace pptsep
