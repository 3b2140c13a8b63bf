// Deterministic single-snapshot synthesis: point sources on an arbitrary
// planar array plus white or 1/f-shaped circular Gaussian noise.
#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "srdoa/geometry.hpp"

namespace srdoa {

struct Source {
    double doa_deg = 0.0;
    double magnitude = 1.0;
    double phase_deg = 0.0;

    std::complex<double> amplitude() const {
        const double ph = deg2rad(phase_deg);
        return {magnitude * std::cos(ph), magnitude * std::sin(ph)};
    }
};

enum class NoiseKind { White, OneOverF };

// Reproducible stream independent of the standard library's distribution
// implementations: raw mt19937_64 bits mapped to [0,1) doubles, Gaussians
// via Box-Muller.
class Rng {
   public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * kPi * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * kPi * u2);
    }

    // Circular complex Gaussian, E|z|^2 = 1.
    std::complex<double> cnormal() {
        const double re = normal();
        const double im = normal();
        return {re / std::sqrt(2.0), im / std::sqrt(2.0)};
    }

    std::mt19937_64& engine() { return eng_; }

   private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

struct Snapshot {
    Eigen::VectorXcd y;      // clean + noise
    Eigen::VectorXcd clean;  // steering matrix times source amplitudes
    Eigen::VectorXcd noise;
    double sigma = 0.0;  // per-sensor noise scale, E|n_m|^2 = sigma^2

    // Expected noise norm sqrt(E ||n||^2) = sigma * sqrt(M); the natural
    // choice for the dual constraint level delta.
    double expected_noise_norm() const {
        return sigma * std::sqrt(static_cast<double>(y.size()));
    }
};

// Noise vector with E||n||^2 = M sigma^2. White: i.i.d. CN(0, sigma^2).
// OneOverF: power 1/(k+1) across the M spatial DFT bins, normalized to the
// same total power, transformed back to the element domain.
Eigen::VectorXcd make_noise(int M, double sigma, NoiseKind kind, Rng& rng);

// sigma chosen from the SNR as mean(|source magnitude|) * 10^(-snr_db/20).
Snapshot synth_snapshot(const ArrayGeometry& g, const std::vector<Source>& sources,
                        double snr_db, Rng& rng, NoiseKind kind = NoiseKind::White);

// Circular angle errors (degrees) under the pairing that minimizes the total
// squared error; min(sizes) entries. Exhaustive search, so both lists must
// stay small (at most eight entries).
std::vector<double> match_errors_deg(const std::vector<double>& est_deg,
                                     const std::vector<double>& true_deg);

// Same, but with the noise scale given directly.
Snapshot synth_snapshot_sigma(const ArrayGeometry& g, const std::vector<Source>& sources,
                              double sigma, Rng& rng, NoiseKind kind = NoiseKind::White);

}  // namespace srdoa
