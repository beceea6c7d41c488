#pragma once

#include <algorithm>
#include <numeric>

#include "oqbench/state.hpp"

namespace oqb {

// ---- tensor products (Kronecker, big-endian: first operand is most significant) ----

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline StateVector tensor(const StateVector& a, const StateVector& b) {
    Vector out(a.dim() * b.dim());
    for (int i = 0; i < a.dim(); ++i)
        out.segment(static_cast<Eigen::Index>(i) * b.dim(), b.dim()) =
            a.amplitudes()(i) * b.amplitudes();
    return StateVector(concat_dims(a.dims(), b.dims()), std::move(out));
}

inline Operator tensor(const Operator& a, const Operator& b) {
    return Operator(concat_dims(a.dims(), b.dims()), kron(a.entries(), b.entries()));
}

inline DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
    return DensityOperator(concat_dims(a.dims(), b.dims()), kron(a.entries(), b.entries()));
}

namespace detail {

// Row-major multi-index <-> flat index for big-endian subsystem ordering.
inline int flat_index(const std::vector<int>& dims, const std::vector<int>& idx) {
    int f = 0;
    for (size_t k = 0; k < dims.size(); ++k) f = f * dims[k] + idx[k];
    return f;
}

inline bool next_multi_index(const std::vector<int>& dims, std::vector<int>& idx) {
    for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
        if (++idx[k] < dims[k]) return true;
        idx[k] = 0;
    }
    return false;
}

}  // namespace detail

// Reduced state on the subsystems listed in `keep` (ascending order preserved).
// Sums the matrix elements diagonal in every traced subsystem.
inline DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& keep) {
    const auto& dims = rho.dims();
    const int n = static_cast<int>(dims.size());
    if (keep.empty()) throw InvalidArgument("partial_trace: keep set must be non-empty");
    std::vector<char> kept(n, 0);
    for (int k : keep) {
        if (k < 0 || k >= n) throw InvalidArgument("partial_trace: subsystem index out of range");
        if (kept[k]) throw InvalidArgument("partial_trace: duplicate subsystem index");
        kept[k] = 1;
    }

    std::vector<int> keep_sorted(keep);
    std::sort(keep_sorted.begin(), keep_sorted.end());
    std::vector<int> traced;
    for (int k = 0; k < n; ++k)
        if (!kept[k]) traced.push_back(k);

    std::vector<int> keep_dims, traced_dims;
    for (int k : keep_sorted) keep_dims.push_back(dims[k]);
    for (int k : traced) traced_dims.push_back(dims[k]);
    const int dk = product(keep_dims);
    const int dt = traced.empty() ? 1 : product(traced_dims);

    Matrix out = Matrix::Zero(dk, dk);
    std::vector<int> row_idx(n, 0), col_idx(n, 0);
    std::vector<int> ki(keep_sorted.size(), 0), kj(keep_sorted.size(), 0), ti(traced.size(), 0);

    // Iterate kept row/col indices and the traced diagonal index.
    for (int i = 0; i < dk; ++i) {
        for (int j = 0; j < dk; ++j) {
            std::fill(ti.begin(), ti.end(), 0);
            Complex sum = 0.0;
            // decode i, j into kept sub-indices once per (i, j)
            int rem = i;
            for (int k = static_cast<int>(keep_dims.size()) - 1; k >= 0; --k) {
                ki[k] = rem % keep_dims[k];
                rem /= keep_dims[k];
            }
            rem = j;
            for (int k = static_cast<int>(keep_dims.size()) - 1; k >= 0; --k) {
                kj[k] = rem % keep_dims[k];
                rem /= keep_dims[k];
            }
            for (int t = 0; t < dt; ++t) {
                for (size_t k = 0; k < keep_sorted.size(); ++k) {
                    row_idx[keep_sorted[k]] = ki[k];
                    col_idx[keep_sorted[k]] = kj[k];
                }
                for (size_t k = 0; k < traced.size(); ++k) {
                    row_idx[traced[k]] = ti[k];
                    col_idx[traced[k]] = ti[k];
                }
                sum += rho.entries()(detail::flat_index(dims, row_idx),
                                     detail::flat_index(dims, col_idx));
                if (!traced.empty()) detail::next_multi_index(traced_dims, ti);
            }
            out(i, j) = sum;
        }
    }
    return DensityOperator(std::move(keep_dims), std::move(out));
}

// Tr(rho * obs). Real for Hermitian observables up to rounding.
inline Complex expectation(const DensityOperator& rho, const Operator& obs) {
    if (rho.dims() != obs.dims()) throw InvalidArgument("expectation: dimension mismatch");
    return (rho.entries() * obs.entries()).trace();
}

inline double purity(const DensityOperator& rho) {
    return (rho.entries() * rho.entries()).trace().real();
}

// (1/2)||rho - sigma||_1 via the spectrum of the Hermitian difference.
inline double trace_distance(const DensityOperator& rho, const DensityOperator& sigma) {
    if (rho.dims() != sigma.dims()) throw InvalidArgument("trace_distance: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.entries() - sigma.entries(),
                                             Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, clipped to [0, 1].
inline double fidelity(const DensityOperator& rho, const DensityOperator& sigma) {
    if (rho.dims() != sigma.dims()) throw InvalidArgument("fidelity: dimension mismatch");
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.entries());
    Matrix sqrt_rho = es.eigenvectors() *
                      es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                      es.eigenvectors().adjoint();
    Eigen::SelfAdjointEigenSolver<Matrix> es2(sqrt_rho * sigma.entries() * sqrt_rho,
                                              Eigen::EigenvaluesOnly);
    double root_sum = es2.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return std::clamp(root_sum * root_sum, 0.0, 1.0);
}

// Sum of |rho_ij| over i != j in the computational basis.
inline double l1_coherence(const DensityOperator& rho) {
    double s = rho.entries().cwiseAbs().sum();
    for (int i = 0; i < rho.dim(); ++i) s -= std::abs(rho.entries()(i, i));
    return s;
}

// exp(-i H t) for Hermitian H, built from the eigendecomposition so the result
// is unitary to rounding rather than to a series-truncation error.
inline Operator matrix_exp_hermitian(const Operator& h, double t) {
    if (!h.is_hermitian()) throw InvalidArgument("matrix_exp_hermitian: H must be Hermitian");
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.entries());
    Vector phases(h.dim());
    for (int k = 0; k < h.dim(); ++k)
        phases(k) = std::exp(Complex(0.0, -es.eigenvalues()(k) * t));
    Matrix u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    return Operator(h.dims(), std::move(u));
}

}  // namespace oqb
