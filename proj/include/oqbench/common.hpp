#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace oqb {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Dimension ceiling for dense composite-space work (12 qubits).
inline constexpr int kMaxDim = 4096;

// Default validation tolerances.
inline constexpr double kHermTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdFloor = -1e-10;
inline constexpr double kNormTol = 1e-10;

// Base error for everything thrown by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad user-supplied values or mismatched shapes.
struct InvalidArgument : Error {
    explicit InvalidArgument(const std::string& msg) : Error(msg) {}
};

// A numeric procedure could not reach its required tolerance.
struct NumericFailure : Error {
    explicit NumericFailure(const std::string& msg) : Error(msg) {}
};

inline int product(const std::vector<int>& dims) {
    int p = 1;
    for (int d : dims) {
        if (d <= 0) throw InvalidArgument("subsystem dimensions must be positive");
        p *= d;
    }
    return p;
}

inline std::vector<int> concat_dims(const std::vector<int>& a, const std::vector<int>& b) {
    std::vector<int> out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

}  // namespace oqb
