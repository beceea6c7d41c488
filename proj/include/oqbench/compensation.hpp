#pragma once

#include "oqbench/circuits.hpp"
#include "oqbench/evolution.hpp"

namespace oqb {

// ---------------------------------------------------------------------------
// Decoherence-free subspaces: common eigenspaces of every interaction operator,
// with one scalar per operator shared by the whole subspace.
// ---------------------------------------------------------------------------

struct InteractionSet {
    std::vector<Operator> ops;

    explicit InteractionSet(std::vector<Operator> operators) : ops(std::move(operators)) {
        if (ops.empty()) throw InvalidArgument("InteractionSet: need at least one operator");
        for (const auto& s : ops) {
            if (s.dims() != ops.front().dims())
                throw InvalidArgument("InteractionSet: operators must share dims");
            if (!s.is_hermitian())
                throw InvalidArgument("InteractionSet: operators must be Hermitian");
        }
    }
};

struct DFSBasis {
    std::vector<StateVector> vectors;  // orthonormal
    std::vector<double> labels;        // lambda^(alpha), one per interaction operator

    int dimension() const { return static_cast<int>(vectors.size()); }
};

// Maximal common eigenspaces of all interaction operators, found by refining
// candidate blocks one operator at a time: diagonalize the compression onto the
// block, cluster eigenvalues by sorted gaps, and keep only the directions whose
// residual S v - lambda v actually vanishes (the compression alone is not
// sufficient when the block is not invariant).
inline std::vector<DFSBasis> find_dfs(const InteractionSet& interactions,
                                      double degeneracy_tol = 1e-8) {
    const int d = interactions.ops.front().dim();
    const auto& dims = interactions.ops.front().dims();

    struct Block {
        Matrix basis;  // d x m, orthonormal columns
        std::vector<double> labels;
    };
    std::vector<Block> blocks{{Matrix::Identity(d, d), {}}};

    for (const auto& s_op : interactions.ops) {
        const Matrix& s = s_op.entries();
        const double scale = std::max(1.0, detail::max_abs(s));
        std::vector<Block> refined;
        for (const auto& block : blocks) {
            const Matrix& v = block.basis;
            const Eigen::Index m = v.cols();
            Eigen::SelfAdjointEigenSolver<Matrix> es(Matrix(v.adjoint() * s * v));
            const Eigen::VectorXd evals = es.eigenvalues();

            Eigen::Index lo = 0;
            while (lo < m) {
                Eigen::Index hi = lo + 1;
                while (hi < m && evals(hi) - evals(hi - 1) <= degeneracy_tol * scale) ++hi;
                const double lambda = evals.segment(lo, hi - lo).mean();
                Matrix w = v * es.eigenvectors().middleCols(lo, hi - lo);
                Matrix residual = s * w - lambda * w;
                // nullspace of the residual restricted to the cluster
                Eigen::JacobiSVD<Matrix> svd(residual, Eigen::ComputeFullV);
                Eigen::Index keep = 0;
                for (Eigen::Index k = svd.singularValues().size(); k-- > 0;) {
                    if (svd.singularValues()(k) <= degeneracy_tol * scale) ++keep;
                }
                if (keep > 0) {
                    Block nb;
                    nb.basis = w * svd.matrixV().rightCols(keep);
                    nb.labels = block.labels;
                    nb.labels.push_back(lambda);
                    refined.push_back(std::move(nb));
                }
                lo = hi;
            }
        }
        blocks = std::move(refined);
        if (blocks.empty()) break;
    }

    std::vector<DFSBasis> out;
    for (auto& block : blocks) {
        DFSBasis basis;
        basis.labels = block.labels;
        for (Eigen::Index c = 0; c < block.basis.cols(); ++c)
            basis.vectors.emplace_back(dims, Vector(block.basis.col(c)));
        out.push_back(std::move(basis));
    }
    return out;
}

// Max trace distance from the initial state over the horizon when the state
// evolves under the pure-noise Lindblad model with jumps L_alpha = S_alpha.
inline double verify_state_drift(const StateVector& psi, const InteractionSet& interactions,
                                 const std::vector<double>& rates, double horizon,
                                 int sample_points = 25) {
    if (rates.size() != interactions.ops.size())
        throw InvalidArgument("verify_state_drift: one rate per interaction operator required");
    const auto& dims = interactions.ops.front().dims();
    if (psi.dims() != dims)
        throw InvalidArgument("verify_state_drift: state does not live on the interaction space");
    std::vector<std::pair<Operator, double>> jumps;
    for (size_t a = 0; a < interactions.ops.size(); ++a)
        jumps.emplace_back(interactions.ops[a], rates[a]);
    const int d = product(dims);
    LindbladModel model(Operator(dims, Matrix::Zero(d, d)), std::move(jumps));

    std::vector<double> times;
    for (int i = 1; i <= sample_points; ++i) times.push_back(horizon * i / sample_points);
    DensityOperator rho0 = DensityOperator::pure(psi);
    Trajectory traj = evolve_lindblad(model, rho0, times);
    double worst = 0.0;
    for (const auto& st : traj.states) worst = std::max(worst, trace_distance(st, rho0));
    return worst;
}

// Evolves the equal superposition of the basis under the pure-noise model and
// reports the worst drift. A true DFS stays put to integrator accuracy.
inline double verify_dfs(const DFSBasis& basis, const InteractionSet& interactions,
                         const std::vector<double>& rates, double horizon,
                         int sample_points = 25) {
    if (basis.vectors.empty()) throw InvalidArgument("verify_dfs: empty basis");
    const auto& dims = interactions.ops.front().dims();
    Vector amps = Vector::Zero(basis.vectors.front().dim());
    for (const auto& v : basis.vectors) amps += v.amplitudes();
    StateVector psi = StateVector::normalized(dims, std::move(amps));
    return verify_state_drift(psi, interactions, rates, horizon, sample_points);
}

// ---------------------------------------------------------------------------
// Redundant encoding and coherent (measurement-free) error correction.
// ---------------------------------------------------------------------------

// One syndrome pass: fresh ancillas are appended, the extraction circuit moves
// the error footprint onto them, and the correction circuit applies Paulis
// keyed on ancilla basis states. Nothing is measured anywhere.
struct SyndromeRound {
    int n_ancilla = 0;
    Circuit extraction;
    Circuit correction;
};

// Dense-unitary view of a single round (the spec-level circuit object for the
// three-qubit codes, where 32 x 32 matrices are comfortable).
struct SyndromeCircuit {
    int n_ancilla = 0;
    Operator extraction;
    Operator correction;
};

struct StabilizerCode {
    std::string name;
    int n_physical = 0;
    int k_logical = 1;
    Circuit encoder_circuit;
    std::string correctable;  // description of the correctable error set
    std::vector<SyndromeRound> rounds;

    Operator encoder() const { return circuit_operator(encoder_circuit, n_physical); }
};

// Bit-flip repetition code: CNOT chain from qubit 0 onto qubits 1 and 2;
// syndrome ancillas take the (0,1) and (1,2) parities.
inline StabilizerCode make_bitflip_code() {
    StabilizerCode code;
    code.name = "bitflip";
    code.n_physical = 3;
    code.correctable = "single-qubit X errors and X-axis rotations";
    code.encoder_circuit = {Gate::cnot(0, 1), Gate::cnot(0, 2)};
    SyndromeRound round;
    round.n_ancilla = 2;
    round.extraction = {Gate::cnot(0, 3), Gate::cnot(1, 3), Gate::cnot(1, 4), Gate::cnot(2, 4)};
    round.correction = {Gate::keyed(Gate::Kind::X, 0, {3, 4}, {1, 0}),
                        Gate::keyed(Gate::Kind::X, 1, {3, 4}, {1, 1}),
                        Gate::keyed(Gate::Kind::X, 2, {3, 4}, {0, 1})};
    code.rounds = {std::move(round)};
    return code;
}

// Phase-flip code: the bit-flip construction conjugated by Hadamards.
inline StabilizerCode make_phaseflip_code() {
    StabilizerCode code;
    code.name = "phaseflip";
    code.n_physical = 3;
    code.correctable = "single-qubit Z errors and Z-axis rotations";
    code.encoder_circuit = {Gate::cnot(0, 1), Gate::cnot(0, 2), Gate::h(0), Gate::h(1),
                            Gate::h(2)};
    SyndromeRound round;
    round.n_ancilla = 2;
    round.extraction = {Gate::h(0),       Gate::h(1),       Gate::h(2),
                        Gate::cnot(0, 3), Gate::cnot(1, 3), Gate::cnot(1, 4),
                        Gate::cnot(2, 4), Gate::h(0),       Gate::h(1),
                        Gate::h(2)};
    round.correction = {Gate::keyed(Gate::Kind::Z, 0, {3, 4}, {1, 0}),
                        Gate::keyed(Gate::Kind::Z, 1, {3, 4}, {1, 1}),
                        Gate::keyed(Gate::Kind::Z, 2, {3, 4}, {0, 1})};
    code.rounds = {std::move(round)};
    return code;
}

// One level of concatenation: phase-flip across three bit-flip blocks.
// Rounds reuse two ancillas at a time (traced out in between) so the register
// never exceeds 11 qubits.
inline StabilizerCode make_shor9_code() {
    StabilizerCode code;
    code.name = "shor9";
    code.n_physical = 9;
    code.correctable = "arbitrary single-qubit errors";
    code.encoder_circuit = {Gate::cnot(0, 3), Gate::cnot(0, 6), Gate::h(0),
                            Gate::h(3),       Gate::h(6),       Gate::cnot(0, 1),
                            Gate::cnot(0, 2), Gate::cnot(3, 4), Gate::cnot(3, 5),
                            Gate::cnot(6, 7), Gate::cnot(6, 8)};

    for (int b = 0; b < 3; ++b) {  // bit-flip syndromes inside each block
        SyndromeRound round;
        round.n_ancilla = 2;
        const int q = 3 * b;
        round.extraction = {Gate::cnot(q, 9), Gate::cnot(q + 1, 9), Gate::cnot(q + 1, 10),
                            Gate::cnot(q + 2, 10)};
        round.correction = {Gate::keyed(Gate::Kind::X, q, {9, 10}, {1, 0}),
                            Gate::keyed(Gate::Kind::X, q + 1, {9, 10}, {1, 1}),
                            Gate::keyed(Gate::Kind::X, q + 2, {9, 10}, {0, 1})};
        code.rounds.push_back(std::move(round));
    }

    // Block-level phase syndromes: X-parity over blocks (0,1) and (1,2) via
    // phase kickback onto ancillas prepared and unprepared by Hadamards.
    SyndromeRound phase;
    phase.n_ancilla = 2;
    phase.extraction.push_back(Gate::h(9));
    for (int q = 0; q < 6; ++q) phase.extraction.push_back(Gate::cnot(9, q));
    phase.extraction.push_back(Gate::h(9));
    phase.extraction.push_back(Gate::h(10));
    for (int q = 3; q < 9; ++q) phase.extraction.push_back(Gate::cnot(10, q));
    phase.extraction.push_back(Gate::h(10));
    phase.correction = {Gate::keyed(Gate::Kind::Z, 0, {9, 10}, {1, 0}),
                        Gate::keyed(Gate::Kind::Z, 3, {9, 10}, {1, 1}),
                        Gate::keyed(Gate::Kind::Z, 6, {9, 10}, {0, 1})};
    code.rounds.push_back(std::move(phase));
    return code;
}

inline StabilizerCode make_code(const std::string& name) {
    if (name == "bitflip") return make_bitflip_code();
    if (name == "phaseflip") return make_phaseflip_code();
    if (name == "shor9") return make_shor9_code();
    throw InvalidArgument("unknown code: " + name);
}

// Dense single-round circuit; only meaningful for codes with one round.
inline SyndromeCircuit syndrome_circuit(const StabilizerCode& code) {
    if (code.rounds.size() != 1)
        throw InvalidArgument("syndrome_circuit: code uses multiple syndrome rounds");
    const int n = code.n_physical + code.rounds[0].n_ancilla;
    return {code.rounds[0].n_ancilla, circuit_operator(code.rounds[0].extraction, n),
            circuit_operator(code.rounds[0].correction, n)};
}

// encoder . (logical (x) |0...0>). Unitary on the joint space; nothing is copied.
inline StateVector encode_redundant(const StateVector& logical, const StabilizerCode& code) {
    if (logical.dim() != (1 << code.k_logical))
        throw InvalidArgument("encode_redundant: logical dim must be 2^k");
    StateVector padded = logical;
    for (int q = code.k_logical; q < code.n_physical; ++q) padded = tensor(padded, ket0());
    return apply_circuit(padded, code.encoder_circuit);
}

// Pauli expansion e = c_I I + c_X X + c_Y Y + c_Z Z with c_P = Tr(P e)/2.
struct PauliCoefficients {
    Complex c_i, c_x, c_y, c_z;
};

inline PauliCoefficients discretize_error(const Matrix& e) {
    if (e.rows() != 2 || e.cols() != 2)
        throw InvalidArgument("discretize_error: 2x2 operators only");
    return {0.5 * (e(0, 0) + e(1, 1)), 0.5 * (e(0, 1) + e(1, 0)),
            0.5 * (Complex(0, 1) * e(0, 1) - Complex(0, 1) * e(1, 0)),
            0.5 * (e(0, 0) - e(1, 1))};
}

inline Matrix pauli_reconstruct(const PauliCoefficients& c) {
    return c.c_i * Matrix::Identity(2, 2) + c.c_x * pauli_x().entries() +
           c.c_y * pauli_y().entries() + c.c_z * pauli_z().entries();
}

// Single-round coherent correction: noisy code state (x) fresh ancillas pushed
// through extraction then correction. Output lives on code (x) ancilla space.
inline StateVector correct_without_measurement(const StateVector& noisy,
                                               const StabilizerCode& code,
                                               const SyndromeCircuit& circuit) {
    if (noisy.dim() != (1 << code.n_physical))
        throw InvalidArgument("correct_without_measurement: state is not on the code space");
    StateVector reg = noisy;
    for (int a = 0; a < circuit.n_ancilla; ++a) reg = tensor(reg, ket0());
    reg = circuit.extraction.apply(reg);
    return circuit.correction.apply(reg);
}

// Weighted pure-state ensemble on the code space: the exact reduced state
// after tracing out ancillas, kept in branch form for cheap fidelities.
struct RecoveryResult {
    std::vector<double> weights;
    std::vector<Vector> branches;  // normalized, on the code space
    std::vector<int> code_dims;

    double fidelity_with(const StateVector& reference) const {
        double f = 0.0;
        for (size_t b = 0; b < branches.size(); ++b)
            f += weights[b] * std::norm(reference.amplitudes().dot(branches[b]));
        return f;
    }

    DensityOperator reduced() const {
        const Eigen::Index d = branches.front().size();
        Matrix rho = Matrix::Zero(d, d);
        for (size_t b = 0; b < branches.size(); ++b)
            rho += weights[b] * (branches[b] * branches[b].adjoint());
        return DensityOperator(code_dims, std::move(rho));
    }
};

// Runs every syndrome round of the code; between rounds the ancillas are
// traced out, tracked exactly as a branch decomposition over ancilla basis
// states rather than as a dense mixed state.
inline RecoveryResult recover(const StabilizerCode& code, const StateVector& noisy) {
    const int n = code.n_physical;
    if (noisy.dim() != (1 << n))
        throw InvalidArgument("recover: state is not on the code space");

    std::vector<double> weights{1.0};
    std::vector<Vector> branches{noisy.amplitudes()};

    for (const auto& round : code.rounds) {
        const int m = round.n_ancilla;
        const int anc_dim = 1 << m;
        std::vector<double> new_weights;
        std::vector<Vector> new_branches;
        for (size_t b = 0; b < branches.size(); ++b) {
            Vector reg = Vector::Zero(branches[b].size() * anc_dim);
            for (Eigen::Index i = 0; i < branches[b].size(); ++i)
                reg(i * anc_dim) = branches[b](i);  // ancillas appended in |0..0>
            apply_circuit(reg, n + m, round.extraction);
            apply_circuit(reg, n + m, round.correction);
            for (int a = 0; a < anc_dim; ++a) {
                Vector phi(branches[b].size());
                for (Eigen::Index i = 0; i < phi.size(); ++i) phi(i) = reg(i * anc_dim + a);
                const double w = weights[b] * phi.squaredNorm();
                if (w > 1e-24) {
                    new_weights.push_back(w);
                    new_branches.push_back(phi / phi.norm());
                }
            }
        }
        weights = std::move(new_weights);
        branches = std::move(new_branches);
    }

    RecoveryResult out;
    out.weights = std::move(weights);
    out.branches = std::move(branches);
    out.code_dims = std::vector<int>(n, 2);
    return out;
}

// Fidelity of the recovered code state against the clean codeword after a
// single-qubit error `e` (any 2x2 operator with a nonzero image) on `qubit`.
inline double recovery_fidelity(const StabilizerCode& code, const StateVector& logical,
                                const Matrix& e, int qubit) {
    if (qubit < 0 || qubit >= code.n_physical)
        throw InvalidArgument("recovery_fidelity: qubit index out of range");
    StateVector codeword = encode_redundant(logical, code);
    Matrix full = Matrix::Identity(1, 1);
    for (int q = 0; q < code.n_physical; ++q)
        full = kron(full, q == qubit ? e : Matrix::Identity(2, 2));
    Vector noisy_amps = full * codeword.amplitudes();
    const double nrm = noisy_amps.norm();
    if (nrm == 0.0) throw InvalidArgument("recovery_fidelity: error annihilates the state");
    StateVector noisy(codeword.dims(), noisy_amps / nrm);
    return recover(code, noisy).fidelity_with(codeword);
}

}  // namespace oqb
