#pragma once

#include <cmath>
#include <functional>

#include "oqbench/common.hpp"

namespace oqb {

// Gaussian (linearly coupled harmonic) baths only: the influence functional is
// evaluated in its exact kernel-reduced form, never by sampling histories.

enum class SpectralFamily { ohmic, supraohmic, single_mode };

struct SpectralDensity {
    SpectralFamily family = SpectralFamily::ohmic;
    double exponent = 1.0;     // s: 1 ohmic, 3 default supraohmic
    double coupling = 1.0;     // eta > 0
    double cutoff = 1.0;       // Lambda > 0, exponential cutoff e^{-w/Lambda}
    double mode_freq = 1.0;    // single_mode only
    double temperature = 0.0;  // T >= 0; T = 0 uses coth -> 1

    void validate() const {
        if (coupling <= 0.0) throw InvalidArgument("SpectralDensity: coupling must be > 0");
        if (cutoff <= 0.0) throw InvalidArgument("SpectralDensity: cutoff must be > 0");
        if (exponent < 1.0) throw InvalidArgument("SpectralDensity: exponent must be >= 1");
        if (temperature < 0.0) throw InvalidArgument("SpectralDensity: temperature must be >= 0");
        if (family == SpectralFamily::single_mode && mode_freq <= 0.0)
            throw InvalidArgument("SpectralDensity: single_mode needs mode_freq > 0");
    }

    // J(w) = eta * w^s * Lambda^{1-s} * e^{-w/Lambda} for the continuum families.
    double j(double omega) const {
        if (family == SpectralFamily::single_mode)
            throw InvalidArgument("SpectralDensity: J(w) of a delta mode is not pointwise");
        return coupling * std::pow(omega, exponent) * std::pow(cutoff, 1.0 - exponent) *
               std::exp(-omega / cutoff);
    }
};

struct QuadratureSpec {
    double omega_max_factor = 20.0;  // integrate w in [0, factor * Lambda]
    int intervals = 4096;            // composite Simpson subintervals (even)
};

namespace detail {

inline double coth_factor(double omega, double temperature) {
    if (temperature <= 0.0) return 1.0;
    double x = omega / (2.0 * temperature);
    // 1/tanh with the small-argument limit handled by the caller
    return 1.0 / std::tanh(x);
}

// Composite Simpson over [0, b] with the w = 0 node supplied separately
// because the thermal factor has a finite limit there.
inline double simpson(const std::function<double(double)>& f, double f0, double b, int n) {
    if (n < 2 || n % 2 != 0) throw InvalidArgument("simpson: need an even interval count >= 2");
    const double h = b / n;
    double sum = f0 + f(b);
    for (int i = 1; i < n; ++i) sum += f(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

}  // namespace detail

// nu(t) = int_0^inf dw J(w) coth(w/2T) cos(wt): the noise (decoherence) kernel.
inline double noise_kernel(const SpectralDensity& jd, double t, QuadratureSpec q = {}) {
    jd.validate();
    if (jd.family == SpectralFamily::single_mode)
        return jd.coupling * detail::coth_factor(jd.mode_freq, jd.temperature) *
               std::cos(jd.mode_freq * t);
    // w -> 0 limit of J coth cos: 2 T eta for s = 1, zero for s > 1 or T = 0.
    double f0 = (jd.temperature > 0.0 && jd.exponent == 1.0) ? 2.0 * jd.temperature * jd.coupling
                                                             : 0.0;
    auto f = [&](double w) {
        return jd.j(w) * detail::coth_factor(w, jd.temperature) * std::cos(w * t);
    };
    return detail::simpson(f, f0, q.omega_max_factor * jd.cutoff, q.intervals);
}

// eta(t) = int_0^inf dw J(w) sin(wt): the dissipation kernel (odd in t).
inline double dissipation_kernel(const SpectralDensity& jd, double t, QuadratureSpec q = {}) {
    jd.validate();
    if (jd.family == SpectralFamily::single_mode)
        return jd.coupling * std::sin(jd.mode_freq * t);
    auto f = [&](double w) { return jd.j(w) * std::sin(w * t); };
    return detail::simpson(f, 0.0, q.omega_max_factor * jd.cutoff, q.intervals);
}

// A discretized pair of histories x(t), x'(t) on a uniform grid.
struct PathPair {
    std::vector<double> tgrid;
    std::vector<double> x;
    std::vector<double> x_prime;

    PathPair(std::vector<double> t, std::vector<double> a, std::vector<double> b)
        : tgrid(std::move(t)), x(std::move(a)), x_prime(std::move(b)) {
        if (tgrid.size() < 2) throw InvalidArgument("PathPair: need at least two grid points");
        if (x.size() != tgrid.size() || x_prime.size() != tgrid.size())
            throw InvalidArgument("PathPair: path lengths must match the grid");
        const double dt = tgrid[1] - tgrid[0];
        if (dt <= 0.0) throw InvalidArgument("PathPair: grid must increase");
        for (size_t i = 1; i < tgrid.size(); ++i)
            if (std::abs((tgrid[i] - tgrid[i - 1]) - dt) > 1e-12 * std::max(1.0, std::abs(dt)))
                throw InvalidArgument("PathPair: grid must be uniform within 1e-12");
    }

    double dt() const { return tgrid[1] - tgrid[0]; }
    int n() const { return static_cast<int>(tgrid.size()); }

    static PathPair static_separation(double d, double horizon, int n_steps) {
        if (n_steps < 2) throw InvalidArgument("static_separation: need >= 2 points");
        std::vector<double> t(n_steps), a(n_steps, d / 2.0), b(n_steps, -d / 2.0);
        for (int i = 0; i < n_steps; ++i) t[i] = horizon * i / (n_steps - 1);
        return PathPair(std::move(t), std::move(a), std::move(b));
    }
};

// Kernels sampled on a lag grid starting at t = 0; nu is even and eta odd, so
// these samples cover every pairwise time difference of a matching path grid.
struct BathKernels {
    std::vector<double> tgrid;
    std::vector<double> nu;
    std::vector<double> eta;
};

inline BathKernels kernels_from_spectral_density(const SpectralDensity& jd,
                                                 const std::vector<double>& tgrid,
                                                 QuadratureSpec q = {}) {
    if (tgrid.size() < 2) throw InvalidArgument("kernels: need at least two grid points");
    const double dt = tgrid[1] - tgrid[0];
    for (size_t i = 1; i < tgrid.size(); ++i)
        if (std::abs((tgrid[i] - tgrid[i - 1]) - dt) > 1e-12 * std::max(1.0, std::abs(dt)))
            throw InvalidArgument("kernels: grid must be uniform");
    BathKernels out;
    out.tgrid = tgrid;
    out.nu.reserve(tgrid.size());
    out.eta.reserve(tgrid.size());
    for (double t : tgrid) {
        out.nu.push_back(noise_kernel(jd, t, q));
        out.eta.push_back(dissipation_kernel(jd, t, q));
    }
    return out;
}

// F = exp(-gamma + i phi).
struct InfluenceResult {
    double gamma = 0.0;  // -ln|F|, >= 0 for positive-definite noise kernels
    double phi = 0.0;    // phase of F
};

namespace detail {

inline double trap_weight(int i, int n) { return (i == 0 || i == n - 1) ? 0.5 : 1.0; }

inline void check_kernel_grid(const PathPair& paths, const BathKernels& kernels) {
    if (kernels.tgrid.size() != paths.tgrid.size())
        throw InvalidArgument("influence: kernel and path grids differ in length");
    const double dt_k = kernels.tgrid[1] - kernels.tgrid[0];
    if (std::abs(dt_k - paths.dt()) > 1e-12 * std::max(1.0, paths.dt()))
        throw InvalidArgument("influence: kernel and path grid steps differ");
    if (std::abs(kernels.tgrid.front()) > 1e-12)
        throw InvalidArgument("influence: kernels must be sampled on a lag grid from t = 0");
}

}  // namespace detail

// Double-sum discretization of the Gaussian influence phase and exponent,
// with Delta = x - x' and Sigma = x + x':
//   gamma = dt^2 sum_{ij} w_i w_j Delta_i nu(t_i - t_j) Delta_j      (full square)
//   phi   = dt^2 sum_i w_i Delta_i sum_{j<=i} u_j eta(t_i - t_j) Sigma_j
// Both use trapezoid weights; folding gamma to ordered form puts the familiar
// 1/2 on the diagonal. nu(-t) = nu(t) and eta(-t) = -eta(t) supply negative lags.
inline InfluenceResult influence_functional(const PathPair& paths, const BathKernels& kernels) {
    detail::check_kernel_grid(paths, kernels);
    const int n = paths.n();
    const double dt2 = paths.dt() * paths.dt();

    std::vector<double> delta(n), sigma(n);
    for (int i = 0; i < n; ++i) {
        delta[i] = paths.x[i] - paths.x_prime[i];
        sigma[i] = paths.x[i] + paths.x_prime[i];
    }

    double gamma = 0.0;
    for (int i = 0; i < n; ++i) {
        if (delta[i] == 0.0) continue;
        const double wi = detail::trap_weight(i, n) * delta[i];
        for (int j = 0; j < n; ++j) {
            gamma += wi * detail::trap_weight(j, n) * kernels.nu[std::abs(i - j)] * delta[j];
        }
    }
    gamma *= dt2;

    double phi = 0.0;
    for (int i = 1; i < n; ++i) {
        if (delta[i] == 0.0) continue;
        double inner = 0.0;
        for (int j = 0; j <= i; ++j) {
            const double u = (j == 0 || j == i) ? 0.5 : 1.0;
            inner += u * kernels.eta[i - j] * sigma[j];
        }
        phi += detail::trap_weight(i, n) * delta[i] * inner;
    }
    phi *= dt2;

    return {gamma, phi};
}

using Lagrangian = std::function<double(double x, double xdot, double t)>;

// mass = 1, hbar = 1 free particle unless the caller supplies more.
inline Lagrangian free_particle_lagrangian() {
    return [](double, double xdot, double) { return 0.5 * xdot * xdot; };
}

namespace detail {

inline double action_of_path(const std::vector<double>& t, const std::vector<double>& x,
                             const Lagrangian& lagrangian) {
    const int n = static_cast<int>(t.size());
    const double dt = t[1] - t[0];
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
        double xdot;
        if (i == 0)
            xdot = (x[1] - x[0]) / dt;
        else if (i == n - 1)
            xdot = (x[n - 1] - x[n - 2]) / dt;
        else
            xdot = (x[i + 1] - x[i - 1]) / (2.0 * dt);
        s += trap_weight(i, n) * lagrangian(x[i], xdot, t[i]);
    }
    return s * dt;
}

}  // namespace detail

// Effective open-system action A with exp(iA) = exp(i(S[x] - S[x'])) * F,
// i.e. A = S[x] - S[x'] + phi + i*gamma. Zero kernels collapse it to the bare
// closed-system action difference.
inline Complex effective_action(const PathPair& paths, const Lagrangian& bare_lagrangian,
                                const BathKernels& kernels) {
    const double s_x = detail::action_of_path(paths.tgrid, paths.x, bare_lagrangian);
    const double s_xp = detail::action_of_path(paths.tgrid, paths.x_prime, bare_lagrangian);
    InfluenceResult f = influence_functional(paths, kernels);
    return Complex(s_x - s_xp + f.phi, f.gamma);
}

struct ExponentCurve {
    std::vector<double> times;
    std::vector<double> gamma;
    std::vector<double> phi;
};

// gamma over growing windows [0, t_k] for two static paths at +-d/2, computed
// incrementally from the lag samples (O(N^2) total). Static symmetric paths
// have Sigma = 0, so phi vanishes identically here.
inline ExponentCurve decoherence_exponent_curve(const SpectralDensity& jd, double separation,
                                                double horizon, int n_steps,
                                                QuadratureSpec q = {}) {
    if (separation < 0.0) throw InvalidArgument("decoherence_exponent_curve: d must be >= 0");
    if (n_steps < 2) throw InvalidArgument("decoherence_exponent_curve: need >= 2 steps");
    PathPair paths = PathPair::static_separation(separation, horizon, n_steps);
    BathKernels kernels = kernels_from_spectral_density(jd, paths.tgrid, q);

    const double d2dt2 = separation * separation * paths.dt() * paths.dt();
    ExponentCurve out;
    out.times = paths.tgrid;
    out.gamma.assign(n_steps, 0.0);
    out.phi.assign(n_steps, 0.0);

    // Running sums: U_k = sum_{i,j<=k} nu_|i-j| (unit weights) and
    // P_k = sum_{m=1..k} nu_m. Appending row/column k adds 2 P_k + nu_0.
    // Trapezoid endpoint corrections then give
    //   Q_k = U_k - 2 P_k - 1.5 nu_0 + 0.5 nu_k.
    double u = kernels.nu[0];
    double p = 0.0;
    out.gamma[0] = 0.0;
    for (int k = 1; k < n_steps; ++k) {
        p += kernels.nu[k];
        u += 2.0 * p + kernels.nu[0];
        const double q_k = u - 2.0 * p - 1.5 * kernels.nu[0] + 0.5 * kernels.nu[k];
        out.gamma[k] = d2dt2 * q_k;
    }
    return out;
}

}  // namespace oqb
