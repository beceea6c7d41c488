#include "test_helpers.hpp"

using namespace oqb;
using test_oracle::max_abs_diff;

TEST_CASE("tensor of identities is the identity", "[core]") {
    Operator i4 = tensor(identity_op({2}), identity_op({2}));
    REQUIRE(i4.dims() == std::vector<int>{2, 2});
    REQUIRE(max_abs_diff(i4.entries(), Matrix::Identity(4, 4)) == 0.0);
}

TEST_CASE("tensor basis bookkeeping is big-endian", "[core]") {
    StateVector s = tensor(ket0(), ket1());  // |01> -> index 1
    REQUIRE(s.dim() == 4);
    REQUIRE(std::abs(s.amplitudes()(1) - 1.0) < 1e-15);
    for (int i : {0, 2, 3}) REQUIRE(std::abs(s.amplitudes()(i)) < 1e-15);
}

TEST_CASE("sigma_x tensor sigma_x flips |00> to |11>", "[core]") {
    // oracle: direct 4x4 matrix-vector multiply with a hand-built Kronecker
    Matrix xx = Matrix::Zero(4, 4);
    xx(0, 3) = xx(1, 2) = xx(2, 1) = xx(3, 0) = 1.0;
    Vector expect = xx * tensor(ket0(), ket0()).amplitudes();

    StateVector got = tensor(pauli_x(), pauli_x()).apply(tensor(ket0(), ket0()));
    REQUIRE((got.amplitudes() - expect).cwiseAbs().maxCoeff() < 1e-15);
    REQUIRE(std::abs(got.amplitudes()(3) - 1.0) < 1e-15);
}

TEST_CASE("norms and traces multiply under tensor", "[core]") {
    SplitMix64 rng(11);
    DensityOperator a = random_density({2}, rng);
    DensityOperator b = random_density({3}, rng);
    DensityOperator ab = tensor(a, b);
    REQUIRE(ab.dims() == std::vector<int>{2, 3});
    REQUIRE(std::abs(ab.entries().trace().real() - 1.0) < 1e-12);
}

TEST_CASE("partial trace of a Bell state is maximally mixed", "[core]") {
    Vector bell(4);
    bell << 1.0 / std::sqrt(2.0), 0, 0, 1.0 / std::sqrt(2.0);
    DensityOperator rho = DensityOperator::pure(StateVector({2, 2}, bell));
    DensityOperator reduced = partial_trace(rho, {0});
    REQUIRE(max_abs_diff(reduced.entries(), 0.5 * Matrix::Identity(2, 2)) < 1e-12);
}

TEST_CASE("partial trace factorizes product states", "[core]") {
    SplitMix64 rng(21);
    DensityOperator a = random_density({2}, rng);
    DensityOperator b = random_density({2}, rng);
    DensityOperator ab = tensor(a, b);
    REQUIRE(max_abs_diff(partial_trace(ab, {0}).entries(), a.entries()) < 1e-12);
    REQUIRE(max_abs_diff(partial_trace(ab, {1}).entries(), b.entries()) < 1e-12);
}

TEST_CASE("partial trace matches the double-sum oracle on random states", "[core]") {
    SplitMix64 rng(31);
    for (int trial = 0; trial < 20; ++trial) {
        DensityOperator rho = random_density({2, 2}, rng);
        Matrix oracle = test_oracle::partial_trace_2party(rho.entries(), 2, 2, 1);
        REQUIRE(max_abs_diff(partial_trace(rho, {1}).entries(), oracle) < 1e-12);
    }
}

TEST_CASE("partial trace preserves the trace and rejects bad keep sets", "[core]") {
    SplitMix64 rng(41);
    DensityOperator rho = random_density({2, 3}, rng);
    REQUIRE(std::abs(partial_trace(rho, {1}).entries().trace().real() - 1.0) < 1e-12);
    REQUIRE_THROWS_AS(partial_trace(rho, {}), InvalidArgument);
    REQUIRE_THROWS_AS(partial_trace(rho, {2}), InvalidArgument);
}

TEST_CASE("expectation values: eigenstate, mixed state, random oracle", "[core]") {
    REQUIRE(std::abs(expectation(DensityOperator::pure(ket0()), pauli_z()).real() - 1.0) <
            1e-12);
    REQUIRE(std::abs(expectation(DensityOperator::maximally_mixed({2}), pauli_x()).real()) <
            1e-12);

    SplitMix64 rng(51);
    for (int trial = 0; trial < 20; ++trial) {
        DensityOperator rho = random_density({2, 2}, rng);
        Operator obs = random_hermitian({2, 2}, rng);
        Complex oracle = 0.0;  // sum_ij rho_ij O_ji
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) oracle += rho.entries()(i, j) * obs.entries()(j, i);
        Complex got = expectation(rho, obs);
        REQUIRE(std::abs(got - oracle) < 1e-12);
        REQUIRE(std::abs(got.imag()) < 1e-10);  // Hermitian observable
    }
    REQUIRE_THROWS_AS(expectation(DensityOperator::maximally_mixed({2}), identity_op({4})),
                      InvalidArgument);
}

TEST_CASE("expectation is linear in the observable", "[core]") {
    SplitMix64 rng(61);
    DensityOperator rho = random_density({2, 2}, rng);
    Operator o1 = random_hermitian({2, 2}, rng);
    Operator o2 = random_hermitian({2, 2}, rng);
    const double a = 0.7, b = -1.3;
    Operator combo({2, 2}, a * o1.entries() + b * o2.entries());
    Complex lhs = expectation(rho, combo);
    Complex rhs = a * expectation(rho, o1) + b * expectation(rho, o2);
    REQUIRE(std::abs(lhs - rhs) < 1e-10);
}

TEST_CASE("purity, fidelity, coherence basics", "[core]") {
    REQUIRE(std::abs(purity(DensityOperator::maximally_mixed({2})) - 0.5) < 1e-12);

    SplitMix64 rng(71);
    DensityOperator rho = random_density({2, 2}, rng);
    REQUIRE(std::abs(fidelity(rho, rho) - 1.0) < 1e-10);

    DensityOperator plus = DensityOperator::pure(ket_plus());
    REQUIRE(std::abs(l1_coherence(plus) - 1.0) < 1e-12);
}

TEST_CASE("trace distance and fidelity live in [0,1] and detect equality", "[core]") {
    SplitMix64 rng(81);
    for (int trial = 0; trial < 10; ++trial) {
        DensityOperator rho = random_density({2, 2}, rng);
        DensityOperator sigma = random_density({2, 2}, rng);
        double td = trace_distance(rho, sigma);
        double f = fidelity(rho, sigma);
        REQUIRE(td >= 0.0);
        REQUIRE(td <= 1.0);
        REQUIRE(f >= 0.0);
        REQUIRE(f <= 1.0);
        REQUIRE(trace_distance(rho, rho) < 1e-12);
    }
}

TEST_CASE("purity 1 iff pure: rank-1 reconstruction", "[core]") {
    SplitMix64 rng(91);
    StateVector psi = random_state({2, 2}, rng);
    DensityOperator rho = DensityOperator::pure(psi);
    REQUIRE(std::abs(purity(rho) - 1.0) < 1e-12);
    // top eigenvector reconstructs the state
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.entries());
    Vector top = es.eigenvectors().col(3);
    Matrix rank1 = top * top.adjoint();
    REQUIRE(max_abs_diff(rank1, rho.entries()) < 1e-8);

    DensityOperator mixed = random_density({2, 2}, rng);
    REQUIRE(purity(mixed) < 1.0 - 1e-6);
}

TEST_CASE("matrix exponential: identity, sigma_z rotation, oracle", "[core]") {
    Operator h0({2}, Matrix::Zero(2, 2));
    REQUIRE(max_abs_diff(matrix_exp_hermitian(h0, 1.0).entries(), Matrix::Identity(2, 2)) <
            1e-15);

    Operator u = matrix_exp_hermitian(pauli_z(), M_PI);
    REQUIRE(max_abs_diff(u.entries(), -Matrix::Identity(2, 2)) < 1e-12);

    SplitMix64 rng(101);
    for (int trial = 0; trial < 10; ++trial) {
        Operator h = random_hermitian({2, 2}, rng);
        double t = rng.uniform(0.1, 2.0);
        Matrix oracle = test_oracle::expm_taylor(Complex(0, -t) * h.entries());
        Operator got = matrix_exp_hermitian(h, t);
        REQUIRE(got.is_unitary(1e-10));
        REQUIRE(max_abs_diff(got.entries(), oracle) < 1e-10);
    }

    Operator bad({2}, (Matrix(2, 2) << 0, 1, 0, 0).finished());
    REQUIRE_THROWS_AS(matrix_exp_hermitian(bad, 1.0), InvalidArgument);
}

TEST_CASE("density operator invariants hold for every public constructor", "[core]") {
    SplitMix64 rng(111);
    auto check = [](const DensityOperator& rho) {
        REQUIRE(max_abs_diff(rho.entries(), rho.entries().adjoint()) <= 1e-10);
        REQUIRE(std::abs(rho.entries().trace().real() - 1.0) <= 1e-10);
        Eigen::SelfAdjointEigenSolver<Matrix> es(rho.entries(), Eigen::EigenvaluesOnly);
        REQUIRE(es.eigenvalues().minCoeff() >= -1e-10);
    };
    for (int trial = 0; trial < 10; ++trial) {
        DensityOperator a = random_density({2, 2}, rng);
        DensityOperator b = random_density({2}, rng);
        check(a);
        check(tensor(b, a));
        check(partial_trace(a, {0}));
        check(partial_trace(tensor(b, a), {1, 2}));
        check(DensityOperator::pure(random_state({2, 3}, rng)));
    }
}

TEST_CASE("density operator validation rejects bad inputs", "[core]") {
    Matrix not_herm(2, 2);
    not_herm << 0.5, 0.3, 0.1, 0.5;
    REQUIRE_THROWS_AS(DensityOperator({2}, not_herm), InvalidArgument);

    Matrix bad_trace = 0.7 * Matrix::Identity(2, 2);
    REQUIRE_THROWS_AS(DensityOperator({2}, bad_trace), InvalidArgument);

    Matrix neg(2, 2);
    neg << 1.5, 0, 0, -0.5;
    REQUIRE_THROWS_AS(DensityOperator({2}, neg), InvalidArgument);
}

TEST_CASE("json round trip is exact", "[core][serialize]") {
    SplitMix64 rng(121);
    DensityOperator rho = random_density({2, 2}, rng);
    auto j = to_json(rho);
    std::string text = j.dump();
    DensityOperator back = density_from_json(nlohmann::json::parse(text));
    REQUIRE(max_abs_diff(back.entries(), rho.entries()) == 0.0);

    StateVector psi = random_state({2, 3}, rng);
    StateVector psi_back = state_from_json(nlohmann::json::parse(to_json(psi).dump()));
    REQUIRE((psi_back.amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff() == 0.0);

    Operator op = random_hermitian({2}, rng);
    Operator op_back = operator_from_json(nlohmann::json::parse(to_json(op).dump()));
    REQUIRE(max_abs_diff(op_back.entries(), op.entries()) == 0.0);
}
