#pragma once

#include <array>
#include <optional>

#include "oqbench/evolution.hpp"

namespace oqb {

// Minimal radical pair: two electron spins plus one spin-1/2 nucleus
// hyperfine-coupled to electron 1, ordered e1 (x) e2 (x) n. Everything runs in
// physical units (fields muT/mT, rates 1/s, time s) with the Hamiltonian in
// rad/s.
struct RadicalPairModel {
    double a_iso = 0.0;                      // isotropic hyperfine constant, mT
    double a_axial = 0.0;                    // axial anisotropy along molecular z, mT
    std::array<double, 3> b_static{0, 0, 0}; // static field, muT
    double rf_amplitude = 0.0;               // muT
    double rf_frequency = 0.0;               // Hz
    std::array<double, 3> rf_axis{1, 0, 0};  // unit vector when rf_amplitude > 0
    double k_singlet = 0.0;                  // 1/s
    double k_triplet = 0.0;                  // 1/s

    // electron gyromagnetic ratio, MHz/mT; physical constant, not a tunable
    static constexpr double gamma_e_mhz_per_mt = 28.025;

    void validate() const {
        if (k_singlet < 0.0 || k_triplet < 0.0)
            throw InvalidArgument("RadicalPairModel: recombination rates must be >= 0");
        if (rf_amplitude < 0.0)
            throw InvalidArgument("RadicalPairModel: rf_amplitude must be >= 0");
        if (rf_amplitude > 0.0) {
            double n2 = rf_axis[0] * rf_axis[0] + rf_axis[1] * rf_axis[1] +
                        rf_axis[2] * rf_axis[2];
            if (std::abs(std::sqrt(n2) - 1.0) > 1e-9)
                throw InvalidArgument("RadicalPairModel: rf_axis must be a unit vector");
            if (rf_frequency <= 0.0)
                throw InvalidArgument("RadicalPairModel: rf_frequency must be > 0 with RF on");
        }
    }
};

namespace rp_detail {

inline const std::array<Matrix, 3>& half_spin() {
    static const std::array<Matrix, 3> s = [] {
        std::array<Matrix, 3> out;
        out[0] = 0.5 * pauli_x().entries();
        out[1] = 0.5 * pauli_y().entries();
        out[2] = 0.5 * pauli_z().entries();
        return out;
    }();
    return s;
}

inline Matrix embed(const Matrix& op, int slot) {  // slot 0..2 of e1, e2, n
    Matrix out = Matrix::Identity(1, 1);
    for (int k = 0; k < 3; ++k) out = kron(out, k == slot ? op : Matrix::Identity(2, 2));
    return out;
}

inline const std::array<Matrix, 3>& spin1() {
    static const std::array<Matrix, 3> s = {embed(half_spin()[0], 0), embed(half_spin()[1], 0),
                                            embed(half_spin()[2], 0)};
    return s;
}
inline const std::array<Matrix, 3>& spin2() {
    static const std::array<Matrix, 3> s = {embed(half_spin()[0], 1), embed(half_spin()[1], 1),
                                            embed(half_spin()[2], 1)};
    return s;
}
inline const std::array<Matrix, 3>& nuc() {
    static const std::array<Matrix, 3> s = {embed(half_spin()[0], 2), embed(half_spin()[1], 2),
                                            embed(half_spin()[2], 2)};
    return s;
}

}  // namespace rp_detail

inline const std::vector<int>& radical_pair_dims() {
    static const std::vector<int> dims{2, 2, 2};
    return dims;
}

// Electron-singlet projector extended over the nucleus.
inline Operator singlet_projector() {
    Vector s(4);
    s << 0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0;
    Matrix q2 = s * s.adjoint();
    return Operator(radical_pair_dims(), kron(q2, Matrix::Identity(2, 2)));
}

inline Operator triplet_projector() {
    Matrix q = Matrix::Identity(8, 8) - singlet_projector().entries();
    return Operator(radical_pair_dims(), std::move(q));
}

// Electron singlet (x) unpolarized nucleus: the standard radical-pair birth state.
inline DensityOperator radical_pair_initial_state() {
    Matrix rho = singlet_projector().entries() / 2.0;  // Tr Q_S = 2
    return DensityOperator(radical_pair_dims(), std::move(rho));
}

// Effective scalar hyperfine coupling at angle theta between the static field
// and the molecular z axis: a(theta) = a_iso + a_axial cos^2(theta). With no
// static field the axis-aligned value a_iso + a_axial applies.
inline double effective_hyperfine(const RadicalPairModel& m) {
    double bmag = std::sqrt(m.b_static[0] * m.b_static[0] + m.b_static[1] * m.b_static[1] +
                            m.b_static[2] * m.b_static[2]);
    if (m.a_axial == 0.0) return m.a_iso;
    if (bmag == 0.0) return m.a_iso + m.a_axial;
    double cos_theta = m.b_static[2] / bmag;
    return m.a_iso + m.a_axial * cos_theta * cos_theta;
}

// H(t) = gamma_e [ B_total(t) . (S1 + S2) + a(theta) I . S1 ] in rad/s, with
// B_total = B_static + rf_amplitude cos(2 pi f t) rf_axis.
inline Operator build_hamiltonian(const RadicalPairModel& m, double t) {
    m.validate();
    const double w = 2.0 * M_PI * RadicalPairModel::gamma_e_mhz_per_mt * 1e6;  // rad/s per mT
    const double drive = m.rf_amplitude * std::cos(2.0 * M_PI * m.rf_frequency * t);

    Matrix h = Matrix::Zero(8, 8);
    for (int ax = 0; ax < 3; ++ax) {
        const double b_mt = (m.b_static[ax] + drive * m.rf_axis[ax]) * 1e-3;  // muT -> mT
        if (b_mt != 0.0)
            h += w * b_mt * (rp_detail::spin1()[ax] + rp_detail::spin2()[ax]);
    }
    const double a = effective_hyperfine(m);
    if (a != 0.0) {
        for (int ax = 0; ax < 3; ++ax)
            h += w * a * (rp_detail::nuc()[ax] * rp_detail::spin1()[ax]);
    }
    return Operator(radical_pair_dims(), std::move(h));
}

namespace rp_detail {

inline Matrix expm_step(const Matrix& h, double dt) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Vector phases(h.rows());
    for (Eigen::Index k = 0; k < h.rows(); ++k)
        phases(k) = std::exp(Complex(0.0, -es.eigenvalues()(k) * dt));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// Substep count per interval: at least 64 steps per RF period when driving,
// refined further by step doubling at the call sites.
inline int base_substeps(const RadicalPairModel& m, double interval, int refine) {
    double dt_max = interval;
    if (m.rf_amplitude > 0.0 && m.rf_frequency > 0.0)
        dt_max = std::min(dt_max, 1.0 / (64.0 * m.rf_frequency));
    int n = static_cast<int>(std::ceil(interval / dt_max));
    return std::max(1, n) << refine;
}

}  // namespace rp_detail

// p_S(t) with recombination off: piecewise-constant Hamiltonian propagation
// (midpoint-frozen within each substep), step-doubled until converged.
struct SingletCurve {
    std::vector<double> times;
    std::vector<double> p_singlet;
};

inline SingletCurve singlet_probability(const RadicalPairModel& m,
                                        const std::vector<double>& times) {
    m.validate();
    if (m.k_singlet != 0.0 || m.k_triplet != 0.0)
        throw InvalidArgument("singlet_probability: recombination must be off here "
                              "(singlet_yield handles open channels)");
    detail::check_times(times);
    const Matrix qs = singlet_projector().entries();

    auto run = [&](int refine) {
        std::vector<double> ps;
        Matrix rho = radical_pair_initial_state().entries();
        double t = 0.0;
        for (double target : times) {
            const double span = target - t;
            if (span > 0.0) {
                const int n = rp_detail::base_substeps(m, span, refine);
                const double dt = span / n;
                for (int s = 0; s < n; ++s) {
                    Matrix u = rp_detail::expm_step(
                        build_hamiltonian(m, t + (s + 0.5) * dt).entries(), dt);
                    rho = u * rho * u.adjoint();
                }
            }
            t = target;
            ps.push_back((qs * rho).trace().real());
        }
        return ps;
    };

    std::vector<double> ps = run(0);
    for (int refine = 1; refine <= 10; ++refine) {
        std::vector<double> finer = run(refine);
        double delta = 0.0;
        for (size_t i = 0; i < ps.size(); ++i) delta = std::max(delta, std::abs(finer[i] - ps[i]));
        ps = std::move(finer);
        if (delta < 1e-10) break;
        if (refine == 10)
            throw NumericFailure("singlet_probability: step doubling did not converge");
    }
    return {times, ps};
}

// Haberkorn recombination: drho/dt = -i[H,rho] - ks/2 {Q_S,rho} - kt/2 {Q_T,rho},
// with the singlet/triplet yields accumulated as quadrature variables of the
// same RK4 pass so the bookkeeping identity yield_S + yield_T + survivors = 1
// is preserved by construction.
struct YieldResult {
    double singlet_yield = 0.0;
    double triplet_yield = 0.0;
    double surviving_norm = 0.0;
    std::optional<SingletCurve> curve;
};

inline YieldResult singlet_yield(const RadicalPairModel& m, double horizon,
                                 bool keep_curve = false, int curve_points = 200) {
    m.validate();
    if (m.k_singlet <= 0.0 && m.k_triplet <= 0.0)
        throw InvalidArgument("singlet_yield: needs an open recombination channel");
    if (horizon <= 0.0) throw InvalidArgument("singlet_yield: horizon must be > 0");

    const Matrix qs = singlet_projector().entries();
    const Matrix qt = triplet_projector().entries();
    const Matrix decay = 0.5 * (m.k_singlet * qs + m.k_triplet * qt);

    struct Deriv {
        Matrix drho;
        double dys, dyt;
    };
    auto rhs = [&](const Matrix& rho, double t) {
        Matrix h = build_hamiltonian(m, t).entries();
        Deriv d;
        d.drho = Complex(0, -1) * (h * rho - rho * h) - decay * rho - rho * decay;
        d.dys = m.k_singlet * (qs * rho).trace().real();
        d.dyt = m.k_triplet * (qt * rho).trace().real();
        return d;
    };

    const int base_steps = std::max(64, rp_detail::base_substeps(m, horizon, 0));
    auto run = [&](int refine, SingletCurve* curve) {
        Matrix rho = radical_pair_initial_state().entries();
        double ys = 0.0, yt = 0.0, t = 0.0;
        const int n = base_steps << refine;
        const double dt = horizon / n;
        const int stride = std::max(1, n / std::max(1, curve_points));
        if (curve) {
            curve->times.push_back(0.0);
            curve->p_singlet.push_back((qs * rho).trace().real());
        }
        for (int s = 0; s < n; ++s) {
            Deriv k1 = rhs(rho, t);
            Deriv k2 = rhs(rho + 0.5 * dt * k1.drho, t + 0.5 * dt);
            Deriv k3 = rhs(rho + 0.5 * dt * k2.drho, t + 0.5 * dt);
            Deriv k4 = rhs(rho + dt * k3.drho, t + dt);
            rho += (dt / 6.0) * (k1.drho + 2.0 * k2.drho + 2.0 * k3.drho + k4.drho);
            ys += (dt / 6.0) * (k1.dys + 2.0 * k2.dys + 2.0 * k3.dys + k4.dys);
            yt += (dt / 6.0) * (k1.dyt + 2.0 * k2.dyt + 2.0 * k3.dyt + k4.dyt);
            t += dt;
            if (curve && ((s + 1) % stride == 0 || s + 1 == n)) {
                curve->times.push_back(t);
                curve->p_singlet.push_back((qs * rho).trace().real());
            }
        }
        YieldResult out;
        out.singlet_yield = ys;
        out.triplet_yield = yt;
        out.surviving_norm = rho.trace().real();
        return out;
    };

    YieldResult result = run(0, nullptr);
    int converged_refine = 0;
    for (int refine = 1; refine <= 10; ++refine) {
        YieldResult finer = run(refine, nullptr);
        double delta = std::max(std::abs(finer.singlet_yield - result.singlet_yield),
                                std::abs(finer.surviving_norm - result.surviving_norm));
        result = finer;
        converged_refine = refine;
        if (delta < 1e-9) break;
        if (refine == 10) throw NumericFailure("singlet_yield: step doubling did not converge");
    }
    if (result.surviving_norm >= 1e-4)
        throw NumericFailure("singlet_yield: horizon too short, surviving norm " +
                             std::to_string(result.surviving_norm));
    if (keep_curve) {
        SingletCurve curve;
        run(converged_refine, &curve);
        result.curve = std::move(curve);
    }
    return result;
}

// Distinct positive eigenvalue gaps of the static Hamiltonian, in Hz.
inline std::vector<double> resonance_frequencies(const RadicalPairModel& m,
                                                 double merge_tol_hz = 1.0) {
    RadicalPairModel quiet = m;
    quiet.rf_amplitude = 0.0;
    Eigen::SelfAdjointEigenSolver<Matrix> es(build_hamiltonian(quiet, 0.0).entries(),
                                             Eigen::EigenvaluesOnly);
    std::vector<double> gaps;
    for (int i = 0; i < 8; ++i)
        for (int j = i + 1; j < 8; ++j) {
            double f = std::abs(es.eigenvalues()(j) - es.eigenvalues()(i)) / (2.0 * M_PI);
            if (f > merge_tol_hz) gaps.push_back(f);
        }
    std::sort(gaps.begin(), gaps.end());
    std::vector<double> merged;
    for (double f : gaps)
        if (merged.empty() || f - merged.back() > merge_tol_hz) merged.push_back(f);
    return merged;
}

struct ScanPoint {
    double param;
    double yield;
};

struct RfScanResult {
    std::vector<ScanPoint> curve;
    double yield_no_rf = 0.0;
    double extremal_frequency = 0.0;  // grid point with the largest |yield - yield_no_rf|
    double extremal_deviation = 0.0;
};

// Singlet yield against RF frequency; the largest deviation from the RF-free
// yield marks the disruption resonance.
inline RfScanResult rf_disruption_scan(const RadicalPairModel& m,
                                       const std::vector<double>& freq_grid, double horizon) {
    m.validate();
    if (freq_grid.empty()) throw InvalidArgument("rf_disruption_scan: empty frequency grid");
    if (m.rf_amplitude <= 0.0)
        throw InvalidArgument("rf_disruption_scan: rf_amplitude must be > 0");

    RfScanResult out;
    RadicalPairModel quiet = m;
    quiet.rf_amplitude = 0.0;
    quiet.rf_frequency = 0.0;
    out.yield_no_rf = singlet_yield(quiet, horizon).singlet_yield;

    for (double f : freq_grid) {
        RadicalPairModel probe = m;
        probe.rf_frequency = f;
        double y = singlet_yield(probe, horizon).singlet_yield;
        out.curve.push_back({f, y});
        double dev = std::abs(y - out.yield_no_rf);
        if (dev > out.extremal_deviation) {
            out.extremal_deviation = dev;
            out.extremal_frequency = f;
        }
    }
    return out;
}

// Yield against the angle between the static field and the molecular axis;
// the field magnitude is taken from the model and rotated in the xz plane.
inline std::vector<ScanPoint> orientation_sweep(const RadicalPairModel& m,
                                                const std::vector<double>& angle_grid,
                                                double horizon) {
    m.validate();
    if (angle_grid.empty()) throw InvalidArgument("orientation_sweep: empty angle grid");
    double bmag = std::sqrt(m.b_static[0] * m.b_static[0] + m.b_static[1] * m.b_static[1] +
                            m.b_static[2] * m.b_static[2]);
    std::vector<ScanPoint> out;
    for (double theta : angle_grid) {
        RadicalPairModel probe = m;
        probe.b_static = {bmag * std::sin(theta), 0.0, bmag * std::cos(theta)};
        out.push_back({theta, singlet_yield(probe, horizon).singlet_yield});
    }
    return out;
}

}  // namespace oqb
