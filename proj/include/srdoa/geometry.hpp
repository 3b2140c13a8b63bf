// Planar array geometries and steering responses.
//
// All positions are stored in normalized wavelength units (|p|/lambda), so
// carrier frequency never appears. Angles are radians internally; degrees at
// user-facing interfaces only.
#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace srdoa {

inline constexpr double kPi = std::numbers::pi;

inline double deg2rad(double d) { return d * kPi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / kPi; }

// Wrap into (-pi, pi].
inline double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * kPi);
    if (a <= -kPi) a += 2.0 * kPi;
    if (a > kPi) a -= 2.0 * kPi;
    return a;
}

// Signed circular difference a-b wrapped into (-pi, pi].
inline double circ_diff(double a, double b) { return wrap_angle(a - b); }

struct SensorPosition {
    double radius = 0.0;   // |p|/lambda, >= 0
    double azimuth = 0.0;  // angle of p, radians in (-pi, pi]
};

struct ArrayGeometry {
    std::vector<SensorPosition> sensors;  // order fixes row order downstream

    int size() const { return static_cast<int>(sensors.size()); }
    double max_radius() const;
};

// Unit-modulus response a_m(theta) = exp(-j 2 pi r_m cos(theta - phi_m)).
Eigen::VectorXcd steering_response(const ArrayGeometry& g, double theta);

// Columns = steering_response at each angle (M x D).
Eigen::MatrixXcd steering_matrix(const ArrayGeometry& g,
                                 const std::vector<double>& thetas);

// Uniform circular array, sensor 0 at azimuth 0.
ArrayGeometry make_uca(int M, double radius);

// Uniform linear array along azimuth 0; sensor m at radius m*spacing.
ArrayGeometry make_ula(int M, double spacing);

// Random planar array by uniform rejection sampling in the disk of
// max_radius, enforcing pairwise spacing >= min_spacing. Deterministic for a
// given seed; throws if packing fails after bounded attempts.
ArrayGeometry make_rpa(int M, double min_spacing, double max_radius,
                       std::uint64_t seed);

// Plain-text (x, y) positions in wavelengths, one sensor per line.
ArrayGeometry load_geometry_csv(const std::string& path);
void save_geometry_csv(const ArrayGeometry& g, const std::string& path);

}  // namespace srdoa
