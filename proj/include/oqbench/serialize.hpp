#pragma once

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "oqbench/state.hpp"

namespace oqb {

// JSON wire format: dims array plus row-major interleaved [re, im] pairs.
// nlohmann::json prints doubles with shortest-round-trip formatting, so the
// round trip is exact at binary64.

inline nlohmann::json to_json(const StateVector& psi) {
    nlohmann::json j;
    j["dims"] = psi.dims();
    std::vector<double> amps;
    amps.reserve(2 * psi.dim());
    for (int i = 0; i < psi.dim(); ++i) {
        amps.push_back(psi.amplitudes()(i).real());
        amps.push_back(psi.amplitudes()(i).imag());
    }
    j["amplitudes"] = amps;
    return j;
}

inline nlohmann::json matrix_to_json(const std::vector<int>& dims, const Matrix& m) {
    nlohmann::json j;
    j["dims"] = dims;
    std::vector<double> entries;
    entries.reserve(2 * m.size());
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            entries.push_back(m(r, c).real());
            entries.push_back(m(r, c).imag());
        }
    j["entries"] = entries;
    return j;
}

inline nlohmann::json to_json(const Operator& op) { return matrix_to_json(op.dims(), op.entries()); }
inline nlohmann::json to_json(const DensityOperator& rho) {
    return matrix_to_json(rho.dims(), rho.entries());
}

inline StateVector state_from_json(const nlohmann::json& j) {
    std::vector<int> dims = j.at("dims").get<std::vector<int>>();
    std::vector<double> amps = j.at("amplitudes").get<std::vector<double>>();
    if (amps.size() % 2 != 0) throw InvalidArgument("state json: odd amplitude array length");
    Vector v(amps.size() / 2);
    for (size_t i = 0; i + 1 < amps.size(); i += 2)
        v(static_cast<Eigen::Index>(i / 2)) = Complex(amps[i], amps[i + 1]);
    return StateVector(std::move(dims), std::move(v));
}

inline Matrix matrix_from_json(const nlohmann::json& j, std::vector<int>& dims_out) {
    dims_out = j.at("dims").get<std::vector<int>>();
    std::vector<double> entries = j.at("entries").get<std::vector<double>>();
    int d = product(dims_out);
    if (entries.size() != static_cast<size_t>(2 * d * d))
        throw InvalidArgument("matrix json: entry count does not match dims");
    Matrix m(d, d);
    size_t k = 0;
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c, k += 2) m(r, c) = Complex(entries[k], entries[k + 1]);
    return m;
}

inline Operator operator_from_json(const nlohmann::json& j) {
    std::vector<int> dims;
    Matrix m = matrix_from_json(j, dims);
    return Operator(std::move(dims), std::move(m));
}

inline DensityOperator density_from_json(const nlohmann::json& j) {
    std::vector<int> dims;
    Matrix m = matrix_from_json(j, dims);
    return DensityOperator(std::move(dims), std::move(m));
}

// Shortest-round-trip decimal formatting, used by every CSV writer so repeated
// runs emit byte-identical artifacts.
inline std::string format_double(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

}  // namespace oqb
