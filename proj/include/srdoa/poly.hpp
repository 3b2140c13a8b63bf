// The nonnegative trigonometric polynomial p(z) = 1 - |b(z)|^2 built from the
// dual polynomial coefficients, its roots, and the near-unit-circle angle
// candidates.
#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace srdoa {

inline constexpr double kDefaultCircleTol = 0.02;
inline constexpr double kDefaultClusterTolDeg = 0.5;

struct Polynomial {
    // coeffs(i) multiplies z^i; for p built from length-P h this has length
    // 2P-1 (degree 2P-2), already multiplied through by z^{P-1}.
    Eigen::VectorXcd coeffs;
    bool degenerate = false;  // identically zero (|b| == 1 everywhere)
};

struct RootSet {
    std::vector<std::complex<double>> roots;  // all polynomial roots
    std::vector<double> unit_circle_angles;   // clustered candidates, sorted,
                                              // radians in (-pi, pi]
    bool degenerate = false;
};

// r_k = sum_j h_j conj(h_{j-k}), k = -(P-1)..(P-1); result index k+P-1.
// Hermitian: r_{-k} = conj(r_k); sum_k r_k e^{jk theta} = |b(e^{j theta})|^2.
Eigen::VectorXcd autocorrelation(const Eigen::VectorXcd& h);

// Coefficients of z^{P-1} (1 - |b(z)|^2) ascending in z.
Polynomial build_p(const Eigen::VectorXcd& h);

// All roots via a balanced companion-matrix eigenvalue computation, after
// trimming leading/trailing coefficients below 1e-12 relative magnitude.
std::vector<std::complex<double>> poly_roots(const Eigen::VectorXcd& coeffs);

// Roots with ||z|-1| <= circle_tol, clustered circularly within
// cluster_tol_deg and collapsed to cluster means.
RootSet find_unit_circle_angles(const Polynomial& p,
                                double circle_tol = kDefaultCircleTol,
                                double cluster_tol_deg = kDefaultClusterTolDeg);

}  // namespace srdoa
