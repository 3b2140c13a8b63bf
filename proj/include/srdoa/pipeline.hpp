// End-to-end estimator: dual conic solve -> polynomial rooting -> dictionary
// pruning -> amplitude recovery. Input is one snapshot from an arbitrary
// planar array; output is a set of azimuth estimates in degrees with complex
// amplitudes, plus solver certificates.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "srdoa/conic.hpp"
#include "srdoa/geometry.hpp"
#include "srdoa/manifold.hpp"
#include "srdoa/prune.hpp"

namespace srdoa {

struct EstimatorConfig {
    double gamma_db = kDefaultGammaDb;  // bandwidth truncation level
    double delta = 0.0;                 // noise-norm bound; must be > 0
    double circle_tol = 0.02;           // |.|-1 tolerance for unit-circle roots
    double cluster_tol_deg = 0.5;       // root clustering width
    double merge_tol_deg = 0.5;         // post-prune merge width
    double beta = 0.1;                  // l1 weight (relative to delta by default)
    bool beta_absolute = false;         // if true, beta is used as-is
    int n_fill = 180;                   // fill atoms in the pruning dictionary
    double support_thresh = 0.05;       // relative support cutoff
    std::uint64_t seed = 0;             // fill-angle seed
    int P_override = 0;                 // 0 = automatic dimension selection
    double solver_tol = 1e-8;

    double effective_beta() const { return beta_absolute ? beta : beta * delta; }
};

class SolverError : public std::runtime_error {
   public:
    SolverError(const std::string& stage, const std::string& what)
        : std::runtime_error(stage + ": " + what), stage_(stage) {}
    const std::string& stage() const { return stage_; }

   private:
    std::string stage_;
};

struct PipelineDiagnostics {
    int P = 0;
    double delta = 0.0;
    double beta = 0.0;          // effective l1 weight
    int n_roots = 0;            // unit-circle candidates before pruning
    int n_support = 0;          // dictionary atoms kept by the prune
    int n_final = 0;            // estimates after merging
    bool degenerate = false;    // flat dual certificate, no discrete support
    SolveStatus dual_status = SolveStatus::Failed;
    SolveStatus lasso_status = SolveStatus::Failed;
    double dual_seconds = 0.0;
    double lasso_seconds = 0.0;
    double total_seconds = 0.0;
};

struct SourceEstimate {
    std::vector<double> doas_deg;  // ascending, in (-180, 180]
    Eigen::VectorXcd amplitudes;   // least-squares amplitudes, same order
    std::vector<double> root_candidates_deg;  // pre-prune root angles
    std::vector<double> dictionary_angles;    // radians, aligns with prune.x
    DualSolution dual;
    PruneResult prune;
    PipelineDiagnostics diagnostics;
};

// Greedy circular clustering: repeatedly take the heaviest unused angle,
// absorb everything within tol_rad of it, and emit the weighted circular
// mean of the group. Returns sorted angles in radians.
std::vector<double> merge_support(const std::vector<double>& angles,
                                  const std::vector<double>& weights, double tol_rad);

// Least-squares amplitudes on fixed angles (radians). Throws if two angles
// are closer than min_sep_deg, which would make the fit ill-posed.
Eigen::VectorXcd recover_amplitudes(const ArrayGeometry& g, const Eigen::VectorXcd& y,
                                    const std::vector<double>& doas_rad,
                                    double min_sep_deg);

// Conventional beamformer spectrum |a(theta)^H y| / M over the given angles.
Eigen::VectorXd cbf_spectrum(const ArrayGeometry& g, const Eigen::VectorXcd& y,
                             const std::vector<double>& thetas_rad);

// Full chain. Throws SolverError if a conic solve fails outright and
// std::invalid_argument on bad configuration.
SourceEstimate estimate(const ArrayGeometry& g, const Eigen::VectorXcd& y,
                        const EstimatorConfig& config);

// Variant reusing a prebuilt manifold model (must match g and config).
SourceEstimate estimate(const ArrayGeometry& g, const ManifoldModel& model,
                        const Eigen::VectorXcd& y, const EstimatorConfig& config);

}  // namespace srdoa
