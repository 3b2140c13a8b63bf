// Removal of extraneous unit-circle root angles by sparse recovery over an
// augmented steering dictionary:
//
//     min_x  (1/2) ||y - A x||_2  +  beta ||x||_1      (square-root form)
//
// with complex amplitudes (||x||_1 = sum of moduli). A squared-residual
// variant is available behind a flag. Both are second-order-cone programs
// solved by the embedded interior-point solver.
#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "srdoa/cone_solver.hpp"
#include "srdoa/geometry.hpp"

namespace srdoa {

struct AugmentedDictionary {
    std::vector<double> angles;  // radians; candidates first, then fill
    Eigen::MatrixXcd A;          // M x D steering matrix
    int n_candidates = 0;
};

// Candidates plus n_fill uniform angles in (-pi, pi]; fill angles landing
// within avoid_tol_deg of a candidate are resampled. Deterministic per seed.
AugmentedDictionary build_dictionary(const ArrayGeometry& g,
                                     const std::vector<double>& candidates,
                                     int n_fill, std::uint64_t seed,
                                     double avoid_tol_deg = 0.5);

struct PruneResult {
    Eigen::VectorXcd x;              // full coefficient vector, length D
    std::vector<int> support;        // indices with |x_i| > thresh * max|x|
    std::vector<double> support_angles;  // dictionary angles on the support
    SolveStatus status = SolveStatus::Failed;
};

PruneResult lasso_prune(const Eigen::VectorXcd& y, const AugmentedDictionary& dict,
                        double beta, double support_thresh = 0.05,
                        bool squared_residual = false);

}  // namespace srdoa
