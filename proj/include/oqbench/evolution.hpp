#pragma once

#include "oqbench/linalg.hpp"

namespace oqb {

// Effective Hamiltonian (Lamb shift folded in by the caller; default zero
// elsewhere) plus jump operators with nonnegative rates. Eq.-of-motion:
// d rho/dt = -i[H, rho] + sum_k gamma_k (L rho L+ - 1/2 {L+L, rho}).
struct LindbladModel {
    Operator h_eff;
    std::vector<std::pair<Operator, double>> jumps;

    LindbladModel(Operator h, std::vector<std::pair<Operator, double>> js = {})
        : h_eff(std::move(h)), jumps(std::move(js)) {
        if (!h_eff.is_hermitian())
            throw InvalidArgument("LindbladModel: h_eff must be Hermitian");
        for (const auto& [l, rate] : jumps) {
            if (l.dim() != h_eff.dim())
                throw InvalidArgument("LindbladModel: jump operator dimension mismatch");
            if (rate < 0.0) throw InvalidArgument("LindbladModel: negative rate");
        }
    }
};

// System + environment pieces, all given on the full composite space.
// The composite splits as dims = sys_dims ++ env_dims with the system first.
struct JointModel {
    Operator h_sys;
    Operator h_env;
    Operator h_int;
    DensityOperator rho_env0;

    JointModel(Operator hs, Operator he, Operator hi, DensityOperator env0)
        : h_sys(std::move(hs)), h_env(std::move(he)), h_int(std::move(hi)),
          rho_env0(std::move(env0)) {
        if (h_sys.dims() != h_env.dims() || h_sys.dims() != h_int.dims())
            throw InvalidArgument("JointModel: Hamiltonian pieces must share composite dims");
        if (!h_sys.is_hermitian() || !h_env.is_hermitian() || !h_int.is_hermitian())
            throw InvalidArgument("JointModel: all Hamiltonian pieces must be Hermitian");
    }

    Operator total_hamiltonian() const {
        return Operator(h_sys.dims(),
                        h_sys.entries() + h_env.entries() + h_int.entries());
    }
};

struct Trajectory {
    std::vector<double> times;
    std::vector<DensityOperator> states;
};

namespace detail {

inline void check_times(const std::vector<double>& times) {
    if (times.empty()) throw InvalidArgument("time grid must be non-empty");
    for (size_t i = 1; i < times.size(); ++i)
        if (times[i] <= times[i - 1])
            throw InvalidArgument("time grid must be strictly increasing");
    if (times.front() < 0.0) throw InvalidArgument("time grid must start at t >= 0");
}

// Validation for integrator output: Hermiticity restored by symmetrization,
// eigenvalue floor loosened to the documented -1e-6 integrator tolerance.
inline DensityOperator wrap_integrator_state(const std::vector<int>& dims, const Matrix& m) {
    ValidationOptions opt;
    opt.psd_floor = -1e-6;
    opt.trace_tol = 1e-6;
    return DensityOperator(dims, 0.5 * (m + m.adjoint()), opt);
}

}  // namespace detail

// rho(t) = U(t) rho0 U(t)+ with U = exp(-iHt) from one eigendecomposition.
inline Trajectory evolve_closed(const Operator& h, const DensityOperator& rho0,
                                const std::vector<double>& times) {
    if (h.dims() != rho0.dims()) throw InvalidArgument("evolve_closed: dimension mismatch");
    if (!h.is_hermitian()) throw InvalidArgument("evolve_closed: H must be Hermitian");
    detail::check_times(times);
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.entries());
    const Matrix v = es.eigenvectors();
    const Matrix rho_eig = v.adjoint() * rho0.entries() * v;

    Trajectory traj;
    traj.times = times;
    for (double t : times) {
        Vector phases(h.dim());
        for (int k = 0; k < h.dim(); ++k)
            phases(k) = std::exp(Complex(0.0, -es.eigenvalues()(k) * t));
        Matrix rho_t =
            v * (phases.asDiagonal() * rho_eig * phases.conjugate().asDiagonal()) * v.adjoint();
        traj.states.push_back(
            DensityOperator(rho0.dims(), 0.5 * (rho_t + rho_t.adjoint())));
    }
    return traj;
}

// Exact joint evolution of rho_s0 (x) rho_env0 under H = h_sys + h_env + h_int,
// traced to the system at each time. The joint flow is unitary; the reduced
// trajectory generally is not.
inline Trajectory evolve_joint_trace(const JointModel& joint, const DensityOperator& rho_s0,
                                     const std::vector<double>& times) {
    detail::check_times(times);
    const auto composite_dims = concat_dims(rho_s0.dims(), joint.rho_env0.dims());
    if (composite_dims != joint.h_sys.dims())
        throw InvalidArgument("evolve_joint_trace: system (x) environment dims do not match "
                              "the composite Hamiltonian dims");
    if (product(composite_dims) > kMaxDim)
        throw InvalidArgument("evolve_joint_trace: composite dimension above the dense ceiling");

    DensityOperator rho_joint0 = tensor(rho_s0, joint.rho_env0);
    Trajectory joint_traj = evolve_closed(joint.total_hamiltonian(), rho_joint0, times);

    std::vector<int> keep(rho_s0.dims().size());
    for (size_t i = 0; i < keep.size(); ++i) keep[i] = static_cast<int>(i);

    Trajectory traj;
    traj.times = times;
    for (const auto& st : joint_traj.states) traj.states.push_back(partial_trace(st, keep));
    return traj;
}

namespace detail {

struct LindbladRhs {
    Matrix h;
    std::vector<Matrix> ls;        // sqrt(rate) * L
    std::vector<Matrix> ldag_ls;   // rate * L+L

    explicit LindbladRhs(const LindbladModel& m) : h(m.h_eff.entries()) {
        for (const auto& [l, rate] : m.jumps) {
            ls.push_back(std::sqrt(rate) * l.entries());
            ldag_ls.push_back(rate * (l.entries().adjoint() * l.entries()));
        }
    }

    Matrix operator()(const Matrix& rho) const {
        Matrix out = Complex(0.0, -1.0) * (h * rho - rho * h);
        for (size_t k = 0; k < ls.size(); ++k) {
            out += ls[k] * rho * ls[k].adjoint();
            out -= 0.5 * (ldag_ls[k] * rho + rho * ldag_ls[k]);
        }
        return out;
    }
};

inline Matrix rk4_step(const LindbladRhs& rhs, const Matrix& rho, double dt) {
    Matrix k1 = rhs(rho);
    Matrix k2 = rhs(rho + 0.5 * dt * k1);
    Matrix k3 = rhs(rho + 0.5 * dt * k2);
    Matrix k4 = rhs(rho + dt * k3);
    return rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace detail

struct IntegratorConfig {
    int initial_substeps = 16;       // per interval of the output grid
    int max_refinements = 14;        // step-halving rounds
    double trace_tol = 1e-8;
    double state_tol = 1e-9;         // max entry change between refinements
};

// Fixed-step RK4 with deterministic step halving: the whole trajectory is
// recomputed with doubled substeps until the trace drift stays below tol and
// the final state stops moving between refinements.
inline Trajectory evolve_lindblad(const LindbladModel& model, const DensityOperator& rho0,
                                  const std::vector<double>& times, IntegratorConfig cfg = {}) {
    if (model.h_eff.dims() != rho0.dims())
        throw InvalidArgument("evolve_lindblad: dimension mismatch");
    detail::check_times(times);
    detail::LindbladRhs rhs(model);

    auto run = [&](int substeps) {
        std::vector<Matrix> samples;
        samples.reserve(times.size());
        Matrix rho = rho0.entries();
        double t = 0.0;
        for (double target : times) {
            double span = target - t;
            if (span > 0.0) {
                double dt = span / substeps;
                for (int s = 0; s < substeps; ++s) rho = detail::rk4_step(rhs, rho, dt);
            }
            t = target;
            samples.push_back(rho);
        }
        return samples;
    };

    int substeps = cfg.initial_substeps;
    std::vector<Matrix> samples = run(substeps);
    double achieved = std::numeric_limits<double>::infinity();
    for (int round = 0; round < cfg.max_refinements; ++round) {
        double drift = 0.0;
        for (const auto& m : samples) drift = std::max(drift, std::abs(m.trace().real() - 1.0));
        std::vector<Matrix> refined = run(substeps * 2);
        double delta = 0.0;
        for (size_t i = 0; i < samples.size(); ++i)
            delta = std::max(delta, detail::max_abs(refined[i] - samples[i]));
        achieved = std::max(drift, delta);
        samples = std::move(refined);
        substeps *= 2;
        if (drift <= cfg.trace_tol && delta <= cfg.state_tol) {
            Trajectory traj;
            traj.times = times;
            for (const auto& m : samples)
                traj.states.push_back(detail::wrap_integrator_state(rho0.dims(), m));
            return traj;
        }
    }
    throw NumericFailure("evolve_lindblad: step halving failed; achieved error " +
                         std::to_string(achieved));
}

}  // namespace oqb
