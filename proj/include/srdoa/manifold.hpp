// Truncated Fourier-series representation of the array manifold.
//
// Column m of G holds the P-point DFT approximation of the Fourier-series
// coefficients of conj(a_m(theta)), indexed k = -N..N top to bottom with
// P = 2N+1. The dual function a(theta)^H c then equals the trigonometric
// polynomial sum_k (G c)_k e^{j k theta}.
#pragma once

#include <complex>

#include <Eigen/Dense>

#include "srdoa/geometry.hpp"

namespace srdoa {

struct ManifoldModel {
    Eigen::MatrixXcd G;       // P x M, entry (k+N, m) = FS coeff k of sensor m
    int P = 1;                // odd, = 2N+1
    int N = 0;                // bandwidth index
    double gamma_db = -160.0; // truncation threshold used to pick P
};

inline constexpr double kDefaultGammaDb = -160.0;
inline constexpr int kOversampleP = 8193;  // reference DFT length for scans

// P-point DFT approximation of the FS coefficients of conj(a(theta)) for one
// sensor; returns a vector indexed k = -N..N. P must be odd.
Eigen::VectorXcd fs_coefficients(const SensorPosition& s, int P);

// Smallest odd P that keeps truncation error below gamma_db for the given
// maximum sensor radius. Uses the fitted line 15.9 r + 27.03 when it applies
// (gamma = -160 dB, r >= 2); otherwise falls back to a direct spectral scan.
int min_dft_length(double max_radius, double gamma_db = kDefaultGammaDb);

// Largest |k| whose reference-DFT power is within |gamma_db| of the peak.
// Throws if the reference spectrum has not decayed at the edge bins.
int scan_bandwidth(const SensorPosition& s, double gamma_db = kDefaultGammaDb,
                   int oversample_P = kOversampleP);

// Build the full model; P_override forces a specific (odd) P >= the minimum.
ManifoldModel build_manifold(const ArrayGeometry& g,
                             double gamma_db = kDefaultGammaDb,
                             int P_override = 0);

// Evaluate sum_k h_k e^{j k theta} for h indexed k = -N..N.
std::complex<double> dual_poly_eval(const Eigen::VectorXcd& h, double theta);

}  // namespace srdoa
