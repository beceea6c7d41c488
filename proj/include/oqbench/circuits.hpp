#pragma once

#include "oqbench/linalg.hpp"

namespace oqb {

// Multi-controlled single-qubit gates on n-qubit registers, applied in place
// on statevector amplitudes. Qubit 0 is the most significant basis bit, in
// line with the big-endian tensor ordering used everywhere else.

struct Gate {
    enum class Kind { X, Y, Z, H };
    Kind kind;
    int target = 0;
    std::vector<int> controls;        // qubit indices
    std::vector<int> control_values;  // required bit per control

    static Gate x(int t) { return {Kind::X, t, {}, {}}; }
    static Gate y(int t) { return {Kind::Y, t, {}, {}}; }
    static Gate z(int t) { return {Kind::Z, t, {}, {}}; }
    static Gate h(int t) { return {Kind::H, t, {}, {}}; }
    static Gate cnot(int control, int t) { return {Kind::X, t, {control}, {1}}; }
    static Gate keyed(Kind k, int t, std::vector<int> controls, std::vector<int> values) {
        return {k, t, std::move(controls), std::move(values)};
    }
};

using Circuit = std::vector<Gate>;

namespace detail {

inline int qubit_bit(int index, int qubit, int n_qubits) {
    return (index >> (n_qubits - 1 - qubit)) & 1;
}

inline bool controls_match(int index, const Gate& g, int n_qubits) {
    for (size_t c = 0; c < g.controls.size(); ++c)
        if (qubit_bit(index, g.controls[c], n_qubits) != g.control_values[c]) return false;
    return true;
}

}  // namespace detail

inline void apply_gate(Vector& amps, int n_qubits, const Gate& g) {
    const int dim = 1 << n_qubits;
    if (g.target < 0 || g.target >= n_qubits)
        throw InvalidArgument("apply_gate: target qubit out of range");
    if (g.controls.size() != g.control_values.size())
        throw InvalidArgument("apply_gate: controls/values length mismatch");
    const int bit = 1 << (n_qubits - 1 - g.target);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    for (int i = 0; i < dim; ++i) {
        if ((i & bit) != 0) continue;  // visit each target pair once, from the 0 side
        if (!detail::controls_match(i, g, n_qubits)) continue;
        const int j = i | bit;
        switch (g.kind) {
            case Gate::Kind::X:
                std::swap(amps(i), amps(j));
                break;
            case Gate::Kind::Y: {
                Complex a = amps(i), b = amps(j);
                amps(i) = Complex(0, -1) * b;
                amps(j) = Complex(0, 1) * a;
                break;
            }
            case Gate::Kind::Z:
                amps(j) = -amps(j);
                break;
            case Gate::Kind::H: {
                Complex a = amps(i), b = amps(j);
                amps(i) = inv_sqrt2 * (a + b);
                amps(j) = inv_sqrt2 * (a - b);
                break;
            }
        }
    }
}

inline void apply_circuit(Vector& amps, int n_qubits, const Circuit& circuit) {
    for (const Gate& g : circuit) apply_gate(amps, n_qubits, g);
}

inline StateVector apply_circuit(const StateVector& psi, const Circuit& circuit) {
    const int n = psi.n_subsystems();
    for (int d : psi.dims())
        if (d != 2) throw InvalidArgument("apply_circuit: qubit registers only");
    Vector amps = psi.amplitudes();
    apply_circuit(amps, n, circuit);
    return StateVector(psi.dims(), std::move(amps));
}

// Dense unitary of a circuit, column by column. Fine up to the dense ceiling;
// circuits are normally applied directly instead.
inline Operator circuit_operator(const Circuit& circuit, int n_qubits) {
    const int dim = 1 << n_qubits;
    if (dim > kMaxDim) throw InvalidArgument("circuit_operator: register above dense ceiling");
    Matrix u(dim, dim);
    for (int col = 0; col < dim; ++col) {
        Vector e = Vector::Zero(dim);
        e(col) = 1.0;
        apply_circuit(e, n_qubits, circuit);
        u.col(col) = e;
    }
    return Operator(std::vector<int>(n_qubits, 2), std::move(u));
}

}  // namespace oqb
