#pragma once

#include "oqbench/evolution.hpp"
#include "oqbench/random.hpp"

namespace oqb {

// Per-time divergence between the exact joint-then-trace evolution and a
// fitted Markovian model, plus a coherence-revival flag. A revival (the exact
// |rho01| dropping below 0.25x its initial value and later climbing back above
// 0.5x) is impossible for the monotone Markovian fit, which is the point.
struct DivergenceReport {
    std::vector<double> times;
    std::vector<double> trace_distances;
    std::vector<double> exact_coherence;   // |rho01(t)| of the exact reduced state
    std::vector<double> markov_coherence;  // |rho01(t)| of the Lindblad trajectory
    bool revival = false;
    double max_divergence = 0.0;
};

inline DivergenceReport born_markov_diagnostic(const JointModel& joint,
                                               const LindbladModel& fitted,
                                               const DensityOperator& rho_s0,
                                               const std::vector<double>& times) {
    if (fitted.h_eff.dims() != rho_s0.dims())
        throw InvalidArgument("born_markov_diagnostic: fitted model dims mismatch");
    Trajectory exact = evolve_joint_trace(joint, rho_s0, times);
    Trajectory markov = evolve_lindblad(fitted, rho_s0, times);

    DivergenceReport rep;
    rep.times = times;
    for (size_t i = 0; i < times.size(); ++i) {
        double td = trace_distance(exact.states[i], markov.states[i]);
        rep.trace_distances.push_back(td);
        rep.max_divergence = std::max(rep.max_divergence, td);
        rep.exact_coherence.push_back(std::abs(exact.states[i].entries()(0, 1)));
        rep.markov_coherence.push_back(std::abs(markov.states[i].entries()(0, 1)));
    }

    const double c0 = rep.exact_coherence.front();
    bool dipped = false;
    for (double c : rep.exact_coherence) {
        if (!dipped && c < 0.25 * c0) dipped = true;
        if (dipped && c > 0.5 * c0) {
            rep.revival = true;
            break;
        }
    }
    return rep;
}

// Dephasing rate matched to the initial decay of a coherence curve: least
// squares of ln|c(t)| against t on the first `fraction` of the window, with
// |c(t)| = |c(0)| e^{-2 gamma t} as the model.
inline double fit_dephasing_rate(const std::vector<double>& times,
                                 const std::vector<double>& coherence,
                                 double fraction = 0.1) {
    if (times.size() != coherence.size() || times.size() < 3)
        throw InvalidArgument("fit_dephasing_rate: need matching series with >= 3 points");
    const double t_end = times.front() + fraction * (times.back() - times.front());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (size_t i = 0; i < times.size(); ++i) {
        if (times[i] > t_end && n >= 3) break;
        if (coherence[i] <= 0.0) continue;
        double x = times[i], y = std::log(coherence[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) throw NumericFailure("fit_dephasing_rate: too few usable points");
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return std::max(0.0, -0.5 * slope);
}

// Central qubit dephasing-coupled to `n_bath` qubits, couplings drawn
// uniform[0.5, 1.5] from the seeded generator; bath starts in |+>^n so the
// exact reduced coherence is prod_k cos(2 g_k t) (quasi-periodic, revives).
inline JointModel make_central_spin_bath(int n_bath, std::uint64_t seed,
                                         double coupling_scale = 1.0) {
    if (n_bath < 1) throw InvalidArgument("make_central_spin_bath: need >= 1 bath qubit");
    if ((1 << (n_bath + 1)) > kMaxDim)
        throw InvalidArgument("make_central_spin_bath: bath too large for the dense ceiling");
    SplitMix64 rng(seed);

    std::vector<int> dims(static_cast<size_t>(n_bath) + 1, 2);
    const int d = product(dims);
    Matrix h_int = Matrix::Zero(d, d);
    for (int k = 0; k < n_bath; ++k) {
        double g = coupling_scale * rng.uniform(0.5, 1.5);
        Matrix term = pauli_z().entries();  // system sigma_z
        for (int b = 0; b < n_bath; ++b)
            term = kron(term, b == k ? pauli_z().entries() : Matrix::Identity(2, 2));
        h_int += g * term;
    }

    DensityOperator env_plus = DensityOperator::pure(ket_plus());
    DensityOperator env = env_plus;
    for (int k = 1; k < n_bath; ++k) env = tensor(env, env_plus);

    Operator zero(dims, Matrix::Zero(d, d));
    return JointModel(zero, zero, Operator(dims, std::move(h_int)), std::move(env));
}

// Survival probability <psi0| rho(horizon) |psi0> per freeze rate. Strong
// coupling to the freeze channel pins the state: survival climbs toward 1
// beyond a crossover rate.
struct ZenoPoint {
    double rate;
    double survival;
};

inline std::vector<ZenoPoint> zeno_freeze(const Operator& base_h, const Operator& freeze_jump,
                                          const std::vector<double>& rates,
                                          const DensityOperator& rho0, double horizon) {
    if (rates.empty()) throw InvalidArgument("zeno_freeze: empty rate list");
    if (base_h.dims() != rho0.dims() || freeze_jump.dims() != rho0.dims())
        throw InvalidArgument("zeno_freeze: dimension mismatch");
    std::vector<ZenoPoint> out;
    std::vector<double> times{horizon};
    for (double rate : rates) {
        std::vector<std::pair<Operator, double>> jumps;
        if (rate > 0.0) jumps.emplace_back(freeze_jump, rate);
        LindbladModel model(base_h, std::move(jumps));
        IntegratorConfig cfg;
        // stiff jump rates need a finer starting step
        double scale = std::clamp(16.0 * std::max(1.0, rate * horizon), 16.0, 262144.0);
        cfg.initial_substeps = static_cast<int>(scale);
        Trajectory traj = evolve_lindblad(model, rho0, times, cfg);
        double surv = (rho0.entries() * traj.states.back().entries()).trace().real();
        out.push_back({rate, surv});
    }
    return out;
}

}  // namespace oqb
