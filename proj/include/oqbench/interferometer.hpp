#pragma once

#include <functional>

#include "oqbench/linalg.hpp"

namespace oqb {

using PhaseFn = std::function<double(double)>;

// One fringe per unit screen coordinate unless the caller says otherwise.
inline PhaseFn default_phase_fn() {
    return [](double x) { return 2.0 * M_PI * x; };
}

// Two-slit state with per-path environment records E1, E2. The record overlap
// <E2|E1> is the only environmental quantity the screen can see.
struct TwoPathState {
    Complex amp1;
    Complex amp2;
    StateVector env1;
    StateVector env2;
    PhaseFn phase_fn = default_phase_fn();

    TwoPathState(Complex a1, Complex a2, StateVector e1, StateVector e2,
                 PhaseFn phase = default_phase_fn())
        : amp1(a1), amp2(a2), env1(std::move(e1)), env2(std::move(e2)),
          phase_fn(std::move(phase)) {
        if (std::abs(std::norm(amp1) + std::norm(amp2) - 1.0) > kNormTol)
            throw InvalidArgument("TwoPathState: |amp1|^2 + |amp2|^2 must be 1");
        if (env1.dims() != env2.dims())
            throw InvalidArgument("TwoPathState: environment records must share dims");
    }

    Complex record_overlap() const { return env2.inner(env1); }  // <E2|E1>
};

struct ScreenProfile {
    std::vector<double> xs;
    std::vector<double> intensities;
};

// N-path model: per-path screen phases, complex weights, and alive flags so
// decoherence can prune paths outright. Weights over alive paths are
// renormalized before any intensity evaluation.
struct MultiPathModel {
    std::vector<PhaseFn> path_phases;
    std::vector<Complex> weights;
    std::vector<bool> alive;
    double global_shift = 0.0;

    int n_paths() const { return static_cast<int>(path_phases.size()); }
};

// Density operator on path (x) environment built from the two-path state:
// |Psi> = amp1 |0>|E1> + amp2 |1>|E2|.
inline DensityOperator joint_density(const TwoPathState& s) {
    StateVector joint1 = tensor(ket0(), s.env1);
    StateVector joint2 = tensor(ket1(), s.env2);
    Vector amps = s.amp1 * joint1.amplitudes() + s.amp2 * joint2.amplitudes();
    return DensityOperator::pure(StateVector(joint1.dims(), std::move(amps)));
}

// I(x) = |amp1|^2 + |amp2|^2 + 2 Re[amp1 conj(amp2) <E2|E1> e^{i phi(x)}].
inline ScreenProfile screen_intensity(const TwoPathState& s, const std::vector<double>& xs) {
    ScreenProfile out;
    out.xs = xs;
    out.intensities.reserve(xs.size());
    const Complex cross = s.amp1 * std::conj(s.amp2) * s.record_overlap();
    const double dc = std::norm(s.amp1) + std::norm(s.amp2);
    for (double x : xs) {
        double i = dc + 2.0 * (cross * std::exp(Complex(0.0, s.phase_fn(x)))).real();
        if (i < -1e-12) throw NumericFailure("screen_intensity: negative intensity");
        out.intensities.push_back(std::max(i, 0.0));
    }
    return out;
}

// (Imax - Imin) / (Imax + Imin). The grid must span at least one fringe.
inline double visibility(const ScreenProfile& p) {
    if (p.intensities.size() < 2)
        throw InvalidArgument("visibility: need at least two samples");
    double imax = p.intensities[0], imin = p.intensities[0];
    for (double i : p.intensities) {
        imax = std::max(imax, i);
        imin = std::min(imin, i);
    }
    if (imax + imin <= 0.0)
        throw InvalidArgument("visibility: undefined for an all-zero profile");
    return (imax - imin) / (imax + imin);
}

// Quantum-eraser step: a unitary applied to the path-2 environment record only
// (a path-conditioned operation). Mapping env2 onto env1 restores visibility;
// the path probabilities never change.
inline TwoPathState recohere(const TwoPathState& s, const Operator& env_unitary) {
    if (env_unitary.dim() != s.env1.dim())
        throw InvalidArgument("recohere: unitary must act on the environment space");
    if (!env_unitary.is_unitary(1e-9))
        throw InvalidArgument("recohere: operator is not unitary");
    return TwoPathState(s.amp1, s.amp2, s.env1, env_unitary.apply(s.env2), s.phase_fn);
}

// I(x) = |sum_alive w_k e^{i(phi_k(x) + global_shift)}|^2 after renormalizing
// the alive weights. The global shift multiplies every alive path, so the
// intensity is exactly invariant under it.
inline ScreenProfile multipath_intensity(const MultiPathModel& m, const std::vector<double>& xs) {
    if (m.path_phases.size() != m.weights.size() || m.weights.size() != m.alive.size())
        throw InvalidArgument("multipath_intensity: field lengths differ");
    double alive_norm = 0.0;
    for (int k = 0; k < m.n_paths(); ++k)
        if (m.alive[k]) alive_norm += std::norm(m.weights[k]);
    if (alive_norm <= 0.0) throw InvalidArgument("multipath_intensity: no alive paths");
    const double scale = 1.0 / std::sqrt(alive_norm);

    ScreenProfile out;
    out.xs = xs;
    out.intensities.reserve(xs.size());
    for (double x : xs) {
        Complex sum = 0.0;
        for (int k = 0; k < m.n_paths(); ++k) {
            if (!m.alive[k]) continue;
            sum += scale * m.weights[k] *
                   std::exp(Complex(0.0, m.path_phases[k](x) + m.global_shift));
        }
        out.intensities.push_back(std::norm(sum));
    }
    return out;
}

// Default desk-scale geometry: 12 paths split into two slit groups of 6 with
// small quadratic phase offsets inside each group. `group_shift` adds a
// constant phase to the second group, which translates the fringe pattern
// (the phase-shifted-action picture) without touching the visibility.
inline MultiPathModel make_two_slit_multipath(int n_paths = 12, double quad_offset = 0.1,
                                              double group_shift = 0.0) {
    if (n_paths < 2 || n_paths % 2 != 0)
        throw InvalidArgument("make_two_slit_multipath: need an even path count >= 2");
    MultiPathModel m;
    const int half = n_paths / 2;
    const double w = 1.0 / std::sqrt(static_cast<double>(n_paths));
    for (int k = 0; k < n_paths; ++k) {
        const double sign = k < half ? +1.0 : -1.0;
        const int j = k % half;
        const double quad = quad_offset * (j - 0.5 * (half - 1)) * (j - 0.5 * (half - 1));
        const double grp = k < half ? 0.0 : group_shift;
        m.path_phases.push_back(
            [sign, quad, grp](double x) { return sign * M_PI * x + quad + grp; });
        m.weights.push_back(w);
        m.alive.push_back(true);
    }
    return m;
}

inline std::vector<double> linspace(double lo, double hi, int n, bool include_end = false) {
    if (n < 1) throw InvalidArgument("linspace: need at least one point");
    std::vector<double> xs(n);
    const double step = n > 1 ? (hi - lo) / (include_end ? n - 1 : n) : 0.0;
    for (int i = 0; i < n; ++i) xs[i] = lo + step * i;
    return xs;
}

}  // namespace oqb
