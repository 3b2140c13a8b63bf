#include "srdoa/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "srdoa/poly.hpp"

namespace srdoa {

namespace {

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

namespace {

// One absorption pass: heaviest unused angle anchors a group, absorbs
// everything within tol, and is replaced by the group's weighted circular
// mean carrying the group's total weight.
void absorb_pass(std::vector<double>& angles, std::vector<double>& weights,
                 double tol_rad) {
    const std::size_t n = angles.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return weights[a] > weights[b]; });

    std::vector<bool> used(n, false);
    std::vector<double> out_ang, out_w;
    for (std::size_t i : order) {
        if (used[i]) continue;
        double wsum = 0.0;
        double devsum = 0.0;  // weighted offsets relative to the group anchor
        for (std::size_t j = 0; j < n; ++j) {
            if (used[j]) continue;
            const double d = circ_diff(angles[j], angles[i]);
            if (std::abs(d) <= tol_rad) {
                used[j] = true;
                wsum += weights[j];
                devsum += weights[j] * d;
            }
        }
        out_ang.push_back(wrap_angle(angles[i] + devsum / wsum));
        out_w.push_back(wsum);
    }
    angles = std::move(out_ang);
    weights = std::move(out_w);
}

}  // namespace

std::vector<double> merge_support(const std::vector<double>& angles,
                                  const std::vector<double>& weights, double tol_rad) {
    if (weights.size() != angles.size())
        throw std::invalid_argument("merge_support: angle/weight size mismatch");

    std::vector<double> ang = angles, w = weights;
    // Weighted means can pull two group centers to within tol of each other;
    // repeat until the centers are pairwise separated (each extra pass
    // strictly reduces the count, so this terminates).
    while (true) {
        const std::size_t before = ang.size();
        absorb_pass(ang, w, tol_rad);
        if (ang.size() == before) break;
    }
    std::sort(ang.begin(), ang.end());
    return ang;
}

Eigen::VectorXcd recover_amplitudes(const ArrayGeometry& g, const Eigen::VectorXcd& y,
                                    const std::vector<double>& doas_rad,
                                    double min_sep_deg) {
    if (doas_rad.empty()) return Eigen::VectorXcd(0);
    const double min_sep = deg2rad(min_sep_deg);
    for (std::size_t a = 0; a < doas_rad.size(); ++a) {
        for (std::size_t b = a + 1; b < doas_rad.size(); ++b) {
            if (std::abs(circ_diff(doas_rad[a], doas_rad[b])) < min_sep) {
                std::ostringstream msg;
                msg << "recover_amplitudes: angles " << rad2deg(doas_rad[a]) << " and "
                    << rad2deg(doas_rad[b]) << " deg are closer than " << min_sep_deg
                    << " deg";
                throw std::invalid_argument(msg.str());
            }
        }
    }
    const Eigen::MatrixXcd A = steering_matrix(g, doas_rad);
    return A.colPivHouseholderQr().solve(y);
}

Eigen::VectorXd cbf_spectrum(const ArrayGeometry& g, const Eigen::VectorXcd& y,
                             const std::vector<double>& thetas_rad) {
    const Eigen::MatrixXcd A = steering_matrix(g, thetas_rad);
    return (A.adjoint() * y).cwiseAbs() / static_cast<double>(g.size());
}

SourceEstimate estimate(const ArrayGeometry& g, const ManifoldModel& model,
                        const Eigen::VectorXcd& y, const EstimatorConfig& config) {
    if (!(config.delta > 0.0))
        throw std::invalid_argument("estimate: delta must be positive");
    if (y.size() != static_cast<Eigen::Index>(g.size()))
        throw std::invalid_argument("estimate: snapshot length does not match the array");
    const auto t0 = std::chrono::steady_clock::now();

    SourceEstimate est;
    PipelineDiagnostics& diag = est.diagnostics;
    diag.P = model.P;
    diag.delta = config.delta;
    diag.beta = config.effective_beta();

    // Stage 1: dual certificate.
    DualProblem dual_prob{y, model, config.delta};
    est.dual = conic::solve(dual_prob, config.solver_tol);
    diag.dual_status = est.dual.status;
    diag.dual_seconds = est.dual.diag.solve_seconds;
    if (est.dual.status == SolveStatus::Failed)
        throw SolverError("dual", "interior-point solve did not converge");

    // Stage 2: unit-circle roots of 1 - |b(theta)|^2.
    const Polynomial p = build_p(est.dual.h_star);
    std::vector<double> candidates;
    if (p.degenerate) {
        diag.degenerate = true;
    } else {
        const RootSet roots =
            find_unit_circle_angles(p, config.circle_tol, config.cluster_tol_deg);
        candidates = roots.unit_circle_angles;
    }
    diag.n_roots = static_cast<int>(candidates.size());
    est.root_candidates_deg.reserve(candidates.size());
    for (double a : candidates) est.root_candidates_deg.push_back(rad2deg(a));

    if (candidates.empty()) {
        diag.total_seconds = seconds_since(t0);
        return est;
    }

    // Stage 3: sparse recovery over the augmented dictionary.
    const auto t1 = std::chrono::steady_clock::now();
    AugmentedDictionary dict = build_dictionary(g, candidates, config.n_fill,
                                                config.seed, config.cluster_tol_deg);
    est.dictionary_angles = dict.angles;
    est.prune = lasso_prune(y, dict, diag.beta, config.support_thresh);
    diag.lasso_status = est.prune.status;
    diag.lasso_seconds = seconds_since(t1);
    if (est.prune.status == SolveStatus::Failed)
        throw SolverError("prune", "sparse-recovery solve did not converge");
    diag.n_support = static_cast<int>(est.prune.support.size());

    // Stage 4: merge the surviving atoms and refit amplitudes.
    std::vector<double> support_weights;
    support_weights.reserve(est.prune.support.size());
    for (int idx : est.prune.support)
        support_weights.push_back(std::abs(est.prune.x(idx)));
    const double merge_tol =
        deg2rad(std::max(config.merge_tol_deg, config.cluster_tol_deg));
    const std::vector<double> doas_rad =
        merge_support(est.prune.support_angles, support_weights, merge_tol);
    diag.n_final = static_cast<int>(doas_rad.size());

    est.amplitudes = recover_amplitudes(g, y, doas_rad, config.cluster_tol_deg);
    est.doas_deg.reserve(doas_rad.size());
    for (double a : doas_rad) est.doas_deg.push_back(rad2deg(a));

    diag.total_seconds = seconds_since(t0);
    return est;
}

SourceEstimate estimate(const ArrayGeometry& g, const Eigen::VectorXcd& y,
                        const EstimatorConfig& config) {
    const ManifoldModel model = build_manifold(g, config.gamma_db, config.P_override);
    return estimate(g, model, y, config);
}

}  // namespace srdoa
