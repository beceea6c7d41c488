#pragma once

#include "oqbench/evolution.hpp"
#include "oqbench/influence.hpp"
#include "oqbench/interferometer.hpp"
#include "oqbench/radical_pair.hpp"
#include "oqbench/serialize.hpp"

namespace oqb {

// All CSV emitters format doubles with shortest-round-trip digits so a fixed
// seed reproduces artifacts byte for byte.

inline std::string screen_profile_csv(const ScreenProfile& p) {
    std::string out = "x,intensity\n";
    for (size_t i = 0; i < p.xs.size(); ++i)
        out += format_double(p.xs[i]) + "," + format_double(p.intensities[i]) + "\n";
    return out;
}

// t, row-major upper-triangle re/im entries, purity, l1_coherence.
inline std::string trajectory_csv(const Trajectory& traj) {
    if (traj.states.empty()) throw InvalidArgument("trajectory_csv: empty trajectory");
    const int d = traj.states.front().dim();
    std::string out = "t";
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
            out += ",re_" + std::to_string(i) + std::to_string(j);
            out += ",im_" + std::to_string(i) + std::to_string(j);
        }
    out += ",purity,l1_coherence\n";
    for (size_t k = 0; k < traj.times.size(); ++k) {
        out += format_double(traj.times[k]);
        const Matrix& m = traj.states[k].entries();
        for (int i = 0; i < d; ++i)
            for (int j = i; j < d; ++j) {
                out += "," + format_double(m(i, j).real());
                out += "," + format_double(m(i, j).imag());
            }
        out += "," + format_double(purity(traj.states[k]));
        out += "," + format_double(l1_coherence(traj.states[k])) + "\n";
    }
    return out;
}

inline std::string exponent_curve_csv(const ExponentCurve& curve) {
    std::string out = "t,gamma,phi\n";
    for (size_t i = 0; i < curve.times.size(); ++i)
        out += format_double(curve.times[i]) + "," + format_double(curve.gamma[i]) + "," +
               format_double(curve.phi[i]) + "\n";
    return out;
}

inline std::string scan_csv(const std::vector<ScanPoint>& points, const std::string& param) {
    std::string out = param + ",yield\n";
    for (const auto& p : points)
        out += format_double(p.param) + "," + format_double(p.yield) + "\n";
    return out;
}

}  // namespace oqb
