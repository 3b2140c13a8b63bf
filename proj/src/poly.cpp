#include "srdoa/poly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "srdoa/geometry.hpp"

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace srdoa {

Eigen::VectorXcd autocorrelation(const Eigen::VectorXcd& h) {
    const int P = static_cast<int>(h.size());
    if (P < 1) throw std::invalid_argument("autocorrelation: empty input");
    Eigen::VectorXcd r(2 * P - 1);
    for (int k = -(P - 1); k <= P - 1; ++k) {
        std::complex<double> s(0.0, 0.0);
        for (int j = std::max(0, k); j < std::min(P, P + k); ++j)
            s += h(j) * std::conj(h(j - k));
        r(k + P - 1) = s;
    }
    return r;
}

Polynomial build_p(const Eigen::VectorXcd& h) {
    const Eigen::VectorXcd r = autocorrelation(h);
    Polynomial p;
    p.coeffs = -r;
    const int P = static_cast<int>(h.size());
    p.coeffs(P - 1) += 1.0;  // the "1 -" term lands on the z^{P-1} coefficient
    const double maxc = p.coeffs.cwiseAbs().maxCoeff();
    p.degenerate = maxc < 1e-12 * std::max(1.0, std::abs(r(P - 1)));
    return p;
}

std::vector<std::complex<double>> poly_roots(const Eigen::VectorXcd& coeffs) {
    const int len = static_cast<int>(coeffs.size());
    const double maxc = len ? coeffs.cwiseAbs().maxCoeff() : 0.0;
    if (maxc == 0.0) return {};
    int lo = 0, hi = len - 1;
    while (hi >= 0 && std::abs(coeffs(hi)) <= 1e-12 * maxc) --hi;  // leading
    while (lo < hi && std::abs(coeffs(lo)) <= 1e-12 * maxc) ++lo;  // z = 0 roots dropped
    const int deg = hi - lo;
    if (deg < 1) return {};

    // Monic companion matrix, subdiagonal ones; zgeev balances internally.
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(deg, deg);
    for (int i = 0; i < deg; ++i) C(0, i) = -coeffs(hi - 1 - i) / coeffs(hi);
    for (int i = 1; i < deg; ++i) C(i, i - 1) = 1.0;

    Eigen::VectorXcd w(deg);
    const lapack_int info = LAPACKE_zgeev(
        LAPACK_COL_MAJOR, 'N', 'N', deg, C.data(), deg, w.data(), nullptr, 1,
        nullptr, 1);
    if (info != 0)
        throw std::runtime_error("poly_roots: eigenvalue iteration failed (info " +
                                 std::to_string(info) + ")");
    return {w.data(), w.data() + deg};
}

RootSet find_unit_circle_angles(const Polynomial& p, double circle_tol,
                                double cluster_tol_deg) {
    RootSet out;
    if (p.degenerate) {
        out.degenerate = true;
        return out;
    }
    out.roots = poly_roots(p.coeffs);

    std::vector<double> ang;
    for (const auto& z : out.roots)
        if (std::abs(std::abs(z) - 1.0) <= circle_tol) ang.push_back(std::arg(z));
    if (ang.empty()) return out;
    std::sort(ang.begin(), ang.end());

    // Group sorted angles with successive gaps <= tol; merge across the
    // -pi/pi wrap; collapse each group to its mean.
    const double tol = deg2rad(cluster_tol_deg);
    std::vector<std::vector<double>> groups{{ang[0]}};
    for (size_t i = 1; i < ang.size(); ++i) {
        if (ang[i] - groups.back().back() <= tol)
            groups.back().push_back(ang[i]);
        else
            groups.push_back({ang[i]});
    }
    if (groups.size() > 1 &&
        groups.front().front() + 2.0 * kPi - groups.back().back() <= tol) {
        std::vector<double> merged;
        for (double a : groups.back()) merged.push_back(a - 2.0 * kPi);
        merged.insert(merged.end(), groups.front().begin(), groups.front().end());
        groups.front() = std::move(merged);
        groups.pop_back();
    }
    for (const auto& g : groups) {
        double mean = 0.0;
        for (double a : g) mean += a;
        out.unit_circle_angles.push_back(wrap_angle(mean / g.size()));
    }
    std::sort(out.unit_circle_angles.begin(), out.unit_circle_angles.end());
    return out;
}

}  // namespace srdoa
