#include "srdoa/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace srdoa {

Eigen::VectorXcd make_noise(int M, double sigma, NoiseKind kind, Rng& rng) {
    if (M <= 0) throw std::invalid_argument("make_noise: M must be positive");
    Eigen::VectorXcd n(M);
    if (kind == NoiseKind::White || sigma == 0.0) {
        for (int m = 0; m < M; ++m) n(m) = sigma * rng.cnormal();
        return n;
    }

    // Spectral shaping: bin k carries power proportional to 1/(k+1),
    // normalized so the bin powers sum to M sigma^2, then an inverse DFT
    // (direct O(M^2) evaluation; M is small) maps the bins to the elements.
    // The extra sqrt(M) compensates the 1/M of the inverse transform so that
    // E||n||^2 = M sigma^2, matching the white case.
    Eigen::VectorXd p(M);
    for (int k = 0; k < M; ++k) p(k) = 1.0 / static_cast<double>(k + 1);
    p *= (static_cast<double>(M) * sigma * sigma) / p.sum();

    Eigen::VectorXcd bins(M);
    for (int k = 0; k < M; ++k) bins(k) = std::sqrt(p(k)) * rng.cnormal();

    const double scale = std::sqrt(static_cast<double>(M)) / static_cast<double>(M);
    for (int m = 0; m < M; ++m) {
        std::complex<double> acc = 0.0;
        for (int k = 0; k < M; ++k) {
            const double ang = 2.0 * kPi * static_cast<double>(k) *
                               static_cast<double>(m) / static_cast<double>(M);
            acc += bins(k) * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        n(m) = acc * scale;
    }
    return n;
}

Snapshot synth_snapshot_sigma(const ArrayGeometry& g, const std::vector<Source>& sources,
                              double sigma, Rng& rng, NoiseKind kind) {
    const int M = static_cast<int>(g.size());
    std::vector<double> thetas;
    Eigen::VectorXcd amps(static_cast<Eigen::Index>(sources.size()));
    thetas.reserve(sources.size());
    for (std::size_t k = 0; k < sources.size(); ++k) {
        thetas.push_back(deg2rad(sources[k].doa_deg));
        amps(static_cast<Eigen::Index>(k)) = sources[k].amplitude();
    }

    Snapshot snap;
    snap.clean = sources.empty() ? Eigen::VectorXcd::Zero(M).eval()
                                 : (steering_matrix(g, thetas) * amps).eval();
    snap.noise = make_noise(M, sigma, kind, rng);
    snap.y = snap.clean + snap.noise;
    snap.sigma = sigma;
    return snap;
}

std::vector<double> match_errors_deg(const std::vector<double>& est_deg,
                                     const std::vector<double>& true_deg) {
    const std::vector<double>& small =
        est_deg.size() <= true_deg.size() ? est_deg : true_deg;
    const std::vector<double>& big =
        est_deg.size() <= true_deg.size() ? true_deg : est_deg;
    const std::size_t k = small.size();
    if (k == 0) return {};
    if (big.size() > 8)
        throw std::invalid_argument("match_errors_deg: too many angles for exhaustive matching");

    std::vector<std::size_t> idx(big.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    double best = std::numeric_limits<double>::infinity();
    std::vector<double> best_errs;
    do {
        double total = 0.0;
        std::vector<double> errs(k);
        for (std::size_t i = 0; i < k; ++i) {
            const double d =
                rad2deg(circ_diff(deg2rad(small[i]), deg2rad(big[idx[i]])));
            errs[i] = std::abs(d);
            total += d * d;
        }
        if (total < best) {
            best = total;
            best_errs = errs;
        }
    } while (std::next_permutation(idx.begin(), idx.end()));
    return best_errs;
}

Snapshot synth_snapshot(const ArrayGeometry& g, const std::vector<Source>& sources,
                        double snr_db, Rng& rng, NoiseKind kind) {
    if (sources.empty())
        throw std::invalid_argument("synth_snapshot: need at least one source for an SNR");
    double mean_mag = 0.0;
    for (const Source& s : sources) mean_mag += std::abs(s.magnitude);
    mean_mag /= static_cast<double>(sources.size());
    const double sigma = mean_mag * std::pow(10.0, -snr_db / 20.0);
    return synth_snapshot_sigma(g, sources, sigma, rng, kind);
}

}  // namespace srdoa
