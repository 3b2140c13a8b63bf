#include "srdoa/manifold.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include <fftw3.h>

namespace srdoa {

namespace {

// FFTW planning is not thread-safe; executions on distinct buffers are.
// Plans are cached per length and reused via fftw_execute_dft on caller
// buffers (same alignment contract: we always pass fftw_malloc'd arrays).
class FftCache {
  public:
    static FftCache& instance() {
        static FftCache c;
        return c;
    }

    // In-place forward DFT of length n on buf.
    void forward(fftw_complex* buf, int n) {
        fftw_plan plan;
        {
            std::lock_guard<std::mutex> lock(mu_);
            auto it = plans_.find(n);
            if (it == plans_.end()) {
                fftw_complex* tmp = fftw_alloc_complex(n);
                plan = fftw_plan_dft_1d(n, tmp, tmp, FFTW_FORWARD, FFTW_ESTIMATE);
                fftw_free(tmp);
                plans_[n] = plan;
            } else {
                plan = it->second;
            }
        }
        fftw_execute_dft(plan, buf, buf);
    }

  private:
    FftCache() = default;
    ~FftCache() {
        for (auto& [n, p] : plans_) fftw_destroy_plan(p);
    }
    std::mutex mu_;
    std::map<int, fftw_plan> plans_;
};

// DFT of conj(a(theta)) sampled at theta_l = 2 pi l / P, l = 0..P-1, scaled
// by 1/P. Bin k of the result approximates FS coefficient k (k mod P).
Eigen::VectorXcd sampled_dft(const SensorPosition& s, int P) {
    fftw_complex* buf = fftw_alloc_complex(P);
    for (int l = 0; l < P; ++l) {
        const double th = 2.0 * kPi * l / P;
        const double phase = 2.0 * kPi * s.radius * std::cos(th - s.azimuth);
        buf[l][0] = std::cos(phase);
        buf[l][1] = std::sin(phase);
    }
    FftCache::instance().forward(buf, P);
    Eigen::VectorXcd out(P);
    for (int k = 0; k < P; ++k)
        out(k) = std::complex<double>(buf[k][0], buf[k][1]) / double(P);
    fftw_free(buf);
    return out;
}

}  // namespace

Eigen::VectorXcd fs_coefficients(const SensorPosition& s, int P) {
    if (P < 1 || P % 2 == 0)
        throw std::invalid_argument("fs_coefficients: P must be odd and >= 1");
    const int N = (P - 1) / 2;
    const Eigen::VectorXcd dft = sampled_dft(s, P);
    Eigen::VectorXcd out(P);
    for (int k = -N; k <= N; ++k) out(k + N) = dft(((k % P) + P) % P);
    return out;
}

int scan_bandwidth(const SensorPosition& s, double gamma_db, int oversample_P) {
    if (oversample_P < 3 || oversample_P % 2 == 0)
        throw std::invalid_argument("scan_bandwidth: oversample_P must be odd and >= 3");
    const int Nov = (oversample_P - 1) / 2;
    const Eigen::VectorXcd coeffs = fs_coefficients(s, oversample_P);

    double peak_db = -INFINITY;
    Eigen::VectorXd pw(oversample_P);
    for (int i = 0; i < oversample_P; ++i) {
        pw(i) = 10.0 * std::log10(std::norm(coeffs(i)) + 1e-300);
        peak_db = std::max(peak_db, pw(i));
    }
    const double thresh_db = peak_db - std::abs(gamma_db);

    if (pw(0) > thresh_db || pw(oversample_P - 1) > thresh_db)
        throw std::runtime_error(
            "scan_bandwidth: spectrum not decayed at edge bins; increase "
            "oversample_P (edge power " + std::to_string(pw(0)) + " dB vs threshold " +
            std::to_string(thresh_db) + " dB)");

    int N = 0;
    for (int k = -Nov; k <= Nov; ++k)
        if (pw(k + Nov) > thresh_db) N = std::max(N, std::abs(k));
    return N;
}

int min_dft_length(double max_radius, double gamma_db) {
    if (max_radius < 0.0) throw std::invalid_argument("min_dft_length: negative radius");
    if (max_radius == 0.0) return 1;
    if (gamma_db == kDefaultGammaDb && max_radius >= 2.0) {
        int P = static_cast<int>(std::ceil(15.9 * max_radius + 27.03));
        if (P % 2 == 0) ++P;
        return P;
    }
    const int N = scan_bandwidth({max_radius, 0.0}, gamma_db, kOversampleP);
    return 2 * N + 1;
}

ManifoldModel build_manifold(const ArrayGeometry& g, double gamma_db,
                             int P_override) {
    if (g.size() < 1) throw std::invalid_argument("build_manifold: empty geometry");
    int P = min_dft_length(g.max_radius(), gamma_db);
    if (P_override > 0) {
        if (P_override % 2 == 0)
            throw std::invalid_argument("build_manifold: P override must be odd");
        if (P_override < P)
            throw std::invalid_argument("build_manifold: P override below minimum " +
                                        std::to_string(P));
        P = P_override;
    }
    ManifoldModel mm;
    mm.P = P;
    mm.N = (P - 1) / 2;
    mm.gamma_db = gamma_db;
    mm.G.resize(P, g.size());
    for (int m = 0; m < g.size(); ++m)
        mm.G.col(m) = fs_coefficients(g.sensors[m], P);
    return mm;
}

std::complex<double> dual_poly_eval(const Eigen::VectorXcd& h, double theta) {
    const int P = static_cast<int>(h.size());
    const int N = (P - 1) / 2;
    std::complex<double> acc(0.0, 0.0);
    const std::complex<double> w = std::polar(1.0, theta);
    // Horner over k = N..-N: sum h_k w^k = w^{-N} * sum_{i} h_{i-N} w^i
    for (int k = N; k >= -N; --k) acc = acc * w + h(k + N);
    return acc * std::polar(1.0, -N * theta);
}

}  // namespace srdoa
