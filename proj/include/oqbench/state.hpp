#pragma once

#include <cmath>
#include <utility>

#include "oqbench/common.hpp"

namespace oqb {

namespace detail {

inline void check_dims_side(const std::vector<int>& dims, Eigen::Index side, const char* what) {
    if (dims.empty()) throw InvalidArgument(std::string(what) + ": dims must be non-empty");
    if (product(dims) != side)
        throw InvalidArgument(std::string(what) + ": size does not match product of dims");
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace detail

// Normalized pure state on a tensor product of finite subsystems.
// Subsystem 0 is the leftmost tensor factor and the most significant basis
// index (big-endian ordering, fixed project-wide).
class StateVector {
  public:
    StateVector(std::vector<int> dims, Vector amplitudes)
        : dims_(std::move(dims)), amps_(std::move(amplitudes)) {
        detail::check_dims_side(dims_, amps_.size(), "StateVector");
        if (std::abs(amps_.norm() - 1.0) > kNormTol)
            throw InvalidArgument("StateVector: norm must be 1 within 1e-10");
    }

    static StateVector normalized(std::vector<int> dims, Vector amplitudes) {
        double n = amplitudes.norm();
        if (n == 0.0) throw InvalidArgument("StateVector: cannot normalize the zero vector");
        return StateVector(std::move(dims), amplitudes / n);
    }

    const std::vector<int>& dims() const { return dims_; }
    const Vector& amplitudes() const { return amps_; }
    int dim() const { return static_cast<int>(amps_.size()); }
    int n_subsystems() const { return static_cast<int>(dims_.size()); }

    Complex inner(const StateVector& other) const {  // <this|other>
        if (dim() != other.dim()) throw InvalidArgument("inner: dimension mismatch");
        return amps_.dot(other.amps_);  // Eigen dot conjugates the left operand
    }

  private:
    std::vector<int> dims_;
    Vector amps_;
};

// Square complex matrix on the same tensor-product space.
class Operator {
  public:
    Operator(std::vector<int> dims, Matrix entries)
        : dims_(std::move(dims)), m_(std::move(entries)) {
        if (m_.rows() != m_.cols()) throw InvalidArgument("Operator: matrix must be square");
        detail::check_dims_side(dims_, m_.rows(), "Operator");
    }

    const std::vector<int>& dims() const { return dims_; }
    const Matrix& entries() const { return m_; }
    int dim() const { return static_cast<int>(m_.rows()); }

    bool is_hermitian(double tol = kHermTol) const {
        double scale = std::max(1.0, detail::max_abs(m_));
        return detail::max_abs(m_ - m_.adjoint()) <= tol * scale;
    }

    bool is_unitary(double tol = kHermTol) const {
        Matrix gram = m_.adjoint() * m_;
        return detail::max_abs(gram - Matrix::Identity(m_.rows(), m_.cols())) <= tol;
    }

    StateVector apply(const StateVector& psi) const {
        if (psi.dim() != dim()) throw InvalidArgument("apply: dimension mismatch");
        return StateVector(psi.dims(), m_ * psi.amplitudes());
    }

  private:
    std::vector<int> dims_;
    Matrix m_;
};

struct ValidationOptions {
    double herm_tol = kHermTol;
    double trace_tol = kTraceTol;
    double psd_floor = kPsdFloor;
};

// Hermitian, unit-trace, positive-semidefinite matrix: the state of a possibly
// mixed system. Validation runs at construction; integrators pass a looser
// eigenvalue floor (documented at the call sites) via ValidationOptions.
class DensityOperator {
  public:
    DensityOperator(std::vector<int> dims, Matrix entries, ValidationOptions opt = {})
        : dims_(std::move(dims)), m_(std::move(entries)) {
        if (m_.rows() != m_.cols()) throw InvalidArgument("DensityOperator: matrix must be square");
        detail::check_dims_side(dims_, m_.rows(), "DensityOperator");
        if (detail::max_abs(m_ - m_.adjoint()) > opt.herm_tol)
            throw InvalidArgument("DensityOperator: not Hermitian within tolerance");
        if (std::abs(m_.trace().real() - 1.0) > opt.trace_tol ||
            std::abs(m_.trace().imag()) > opt.trace_tol)
            throw InvalidArgument("DensityOperator: trace must be 1 within tolerance");
        Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < opt.psd_floor)
            throw InvalidArgument("DensityOperator: negative eigenvalue below floor");
    }

    static DensityOperator pure(const StateVector& psi) {
        return DensityOperator(psi.dims(), psi.amplitudes() * psi.amplitudes().adjoint());
    }

    static DensityOperator maximally_mixed(std::vector<int> dims) {
        int d = product(dims);
        return DensityOperator(std::move(dims), Matrix::Identity(d, d) / static_cast<double>(d));
    }

    // Clamps eigenvalues in [psd_floor, 0) to zero and rescales the trace back
    // to 1; values below the floor still reject.
    static DensityOperator clamped(std::vector<int> dims, const Matrix& entries,
                                   double psd_floor = kPsdFloor) {
        Matrix h = 0.5 * (entries + entries.adjoint());
        Eigen::SelfAdjointEigenSolver<Matrix> es(h);
        Eigen::VectorXd ev = es.eigenvalues();
        if (ev.minCoeff() < psd_floor)
            throw InvalidArgument("DensityOperator: negative eigenvalue below clamp floor");
        ev = ev.cwiseMax(0.0);
        double tr = ev.sum();
        if (tr <= 0.0) throw InvalidArgument("DensityOperator: zero trace after clamping");
        Matrix m = es.eigenvectors() * (ev / tr).asDiagonal() * es.eigenvectors().adjoint();
        return DensityOperator(std::move(dims), std::move(m));
    }

    const std::vector<int>& dims() const { return dims_; }
    const Matrix& entries() const { return m_; }
    int dim() const { return static_cast<int>(m_.rows()); }

  private:
    std::vector<int> dims_;
    Matrix m_;
};

// ---- basis states and standard operators ----

inline StateVector basis_state(std::vector<int> dims, int index) {
    int d = product(dims);
    if (index < 0 || index >= d) throw InvalidArgument("basis_state: index out of range");
    Vector v = Vector::Zero(d);
    v(index) = 1.0;
    return StateVector(std::move(dims), std::move(v));
}

inline StateVector ket0() { return basis_state({2}, 0); }
inline StateVector ket1() { return basis_state({2}, 1); }

inline StateVector ket_plus() {
    Vector v(2);
    v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    return StateVector({2}, std::move(v));
}

inline StateVector ket_minus() {
    Vector v(2);
    v << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
    return StateVector({2}, std::move(v));
}

inline Operator identity_op(std::vector<int> dims) {
    int d = product(dims);
    return Operator(std::move(dims), Matrix::Identity(d, d));
}

inline Operator pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return Operator({2}, std::move(m));
}

inline Operator pauli_y() {
    Matrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return Operator({2}, std::move(m));
}

inline Operator pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return Operator({2}, std::move(m));
}

inline Operator sigma_minus() {  // |0><1|, lowers |1> to |0>
    Matrix m(2, 2);
    m << 0, 1, 0, 0;
    return Operator({2}, std::move(m));
}

inline Operator sigma_plus() {  // |1><0|
    Matrix m(2, 2);
    m << 0, 0, 1, 0;
    return Operator({2}, std::move(m));
}

inline Operator hadamard() {
    double s = 1.0 / std::sqrt(2.0);
    Matrix m(2, 2);
    m << s, s, s, -s;
    return Operator({2}, std::move(m));
}

}  // namespace oqb
