#ifndef QJSD_RNG_HPP
#define QJSD_RNG_HPP

#include <cstdint>

#include "qjsd/types.hpp"

namespace qjsd {

// splitmix64: tiny, full-period, and identical on every platform.  All seeded
// verification draws flow through one instance of this so that emitted
// artifacts are byte-reproducible; std:: distributions are avoided because
// their output is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    cxd complex_uniform(double radius = 1.0) {
        return {uniform(-radius, radius), uniform(-radius, radius)};
    }

    Matrix complex_matrix(int rows, int cols, double radius = 1.0) {
        Matrix m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m(i, j) = complex_uniform(radius);
        return m;
    }

    Matrix hermitian(int dim, double radius = 1.0) {
        return hermitize(complex_matrix(dim, dim, radius));
    }

    // full-rank density operator: (G G^dagger + delta I) normalized
    Matrix density(int dim, double floor = 1e-3) {
        Matrix g = complex_matrix(dim, dim);
        Matrix rho = g * g.adjoint() + floor * Matrix::Identity(dim, dim);
        return rho / rho.trace().real();
    }

    // Haar-ish unitary via QR of a random complex matrix
    Matrix unitary(int dim) {
        Eigen::HouseholderQR<Matrix> qr(complex_matrix(dim, dim));
        Matrix q = qr.householderQ();
        return q;
    }

private:
    std::uint64_t state_;
};

}  // namespace qjsd

#endif
