#pragma once

#include <catch2/catch_amalgamated.hpp>

#include "oqbench/oqbench.hpp"

namespace test_oracle {

using oqb::Complex;
using oqb::Matrix;
using oqb::Vector;

// Taylor-series matrix exponential with scaling and squaring: independent of
// the library's eigendecomposition route.
inline Matrix expm_taylor(const Matrix& a) {
    int squarings = 0;
    double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
    Matrix scaled = a;
    while (norm > 0.5) {
        scaled *= 0.5;
        norm *= 0.5;
        ++squarings;
    }
    Matrix result = Matrix::Identity(a.rows(), a.cols());
    Matrix term = result;
    for (int k = 1; k <= 40; ++k) {
        term = term * scaled / static_cast<double>(k);
        result += term;
        if (term.cwiseAbs().maxCoeff() < 1e-18) break;
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

// Elementwise double-sum partial trace over subsystem `traced` of a two-party
// system with dims {da, db}.
inline Matrix partial_trace_2party(const Matrix& rho, int da, int db, int keep) {
    if (keep == 0) {
        Matrix out = Matrix::Zero(da, da);
        for (int i = 0; i < da; ++i)
            for (int j = 0; j < da; ++j)
                for (int k = 0; k < db; ++k) out(i, j) += rho(i * db + k, j * db + k);
        return out;
    }
    Matrix out = Matrix::Zero(db, db);
    for (int i = 0; i < db; ++i)
        for (int j = 0; j < db; ++j)
            for (int k = 0; k < da; ++k) out(i, j) += rho(k * db + i, k * db + j);
    return out;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace test_oracle
