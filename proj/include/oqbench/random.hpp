#pragma once

#include "oqbench/linalg.hpp"
#include "oqbench/rng.hpp"

namespace oqb {

// Complex standard normal via Box-Muller on the SplitMix64 stream.
inline Complex random_normal(SplitMix64& rng) {
    double u1 = rng.next_double();
    double u2 = rng.next_double();
    while (u1 == 0.0) u1 = rng.next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    return {r * std::cos(2.0 * M_PI * u2), r * std::sin(2.0 * M_PI * u2)};
}

inline StateVector random_state(std::vector<int> dims, SplitMix64& rng) {
    int d = product(dims);
    Vector v(d);
    for (int i = 0; i < d; ++i) v(i) = random_normal(rng);
    return StateVector::normalized(std::move(dims), std::move(v));
}

inline Operator random_hermitian(std::vector<int> dims, SplitMix64& rng) {
    int d = product(dims);
    Matrix g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = random_normal(rng);
    return Operator(std::move(dims), 0.5 * (g + g.adjoint()).eval());
}

// Haar-like unitary from the QR decomposition of a Gaussian matrix.
inline Operator random_unitary(std::vector<int> dims, SplitMix64& rng) {
    int d = product(dims);
    Matrix g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = random_normal(rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int k = 0; k < d; ++k) {
        Complex diag = r(k, k);
        q.col(k) *= diag / std::abs(diag);
    }
    return Operator(std::move(dims), std::move(q));
}

// Full-rank random mixed state (Gaussian Wishart, normalized).
inline DensityOperator random_density(std::vector<int> dims, SplitMix64& rng) {
    int d = product(dims);
    Matrix g(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) g(i, j) = random_normal(rng);
    Matrix w = g * g.adjoint();
    return DensityOperator(std::move(dims), w / w.trace().real());
}

}  // namespace oqb
