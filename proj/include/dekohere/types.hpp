// types.hpp — Shared scalar/matrix aliases, Pauli matrices and error types

#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace dekohere {

using Complex = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

namespace pauli {

inline Mat2 identity() { return Mat2::Identity(); }

inline Mat2 x() {
    Mat2 m;
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

inline Mat2 y() {
    Mat2 m;
    m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
    return m;
}

inline Mat2 z() {
    Mat2 m;
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

// |0><1|: moves population from level 1 into level 0.
inline Mat2 lowering() {
    Mat2 m;
    m << 0.0, 1.0, 0.0, 0.0;
    return m;
}

} // namespace pauli

// Which system operator couples to the bath.
enum class CouplingKind { Dephasing, Lowering };

std::string to_string(CouplingKind kind);

// Invalid model/pulse/grid parameters.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Envelope evaluation produced a non-finite phase.
class EnvelopeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Quadrature or integration failure.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Metric requested on a trajectory where it is undefined.
class MetricError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace dekohere
