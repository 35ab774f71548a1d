#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rotirs {

using cplx = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using RotationMatrix = Eigen::Matrix3d;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2.0;
inline constexpr double kSpeedOfLight = 299792458.0;

// Input outside an operation's mathematical domain (e.g. an angle outside the feasible box).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Operand shapes that do not line up.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Base for failures of the numerics themselves; the CLI maps these to exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegenerateGeometryError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DegenerateChannelError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// Malformed or out-of-range experiment configuration; the CLI maps these to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

}  // namespace rotirs
