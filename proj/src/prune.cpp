#include "srdoa/prune.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace srdoa {

AugmentedDictionary build_dictionary(const ArrayGeometry& g,
                                     const std::vector<double>& candidates,
                                     int n_fill, std::uint64_t seed,
                                     double avoid_tol_deg) {
    if (n_fill < 0) throw std::invalid_argument("build_dictionary: n_fill must be >= 0");
    const double tol = deg2rad(avoid_tol_deg);

    AugmentedDictionary dict;
    dict.angles = candidates;
    dict.n_candidates = static_cast<int>(candidates.size());

    std::mt19937_64 eng(seed);
    auto unit = [&eng]() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; };
    for (int i = 0; i < n_fill; ++i) {
        double theta = 0.0;
        for (int attempt = 0; attempt < 1000; ++attempt) {
            theta = wrap_angle(2.0 * kPi * unit() - kPi);
            bool clear = true;
            for (double c : candidates) {
                if (std::abs(circ_diff(theta, c)) < tol) {
                    clear = false;
                    break;
                }
            }
            if (clear) break;
        }
        dict.angles.push_back(theta);
    }

    dict.A = steering_matrix(g, dict.angles);
    return dict;
}

namespace {

// Shared tail of both variants: D blocks (g_i, Re x_i, Im x_i) in SOC(3),
// each weighted by beta in the objective. `base0` is the variable index of
// the first such block.
void append_l1_blocks(ConicProblem& prob, int D, int base0, double beta) {
    for (int i = 0; i < D; ++i) {
        prob.c(base0 + 3 * i) = beta;
        prob.cones.push_back({ConeKind::Soc, 3});
    }
}

}  // namespace

PruneResult lasso_prune(const Eigen::VectorXcd& y, const AugmentedDictionary& dict,
                        double beta, double support_thresh, bool squared_residual) {
    const int M = static_cast<int>(y.size());
    const int D = static_cast<int>(dict.angles.size());
    if (dict.A.rows() != M)
        throw std::invalid_argument("lasso_prune: dictionary/snapshot size mismatch");

    PruneResult result;
    result.x = Eigen::VectorXcd::Zero(D);
    if (D == 0) {
        result.status = SolveStatus::Optimal;
        return result;
    }

    // Residual block: square-root form uses (r0, w) in SOC(2M+1) with
    // w = y - A x and objective (1/2) r0. Squared form uses (u0, u1, wt) in
    // SOC(2M+2) with wt = sqrt(2) (y - A x) and (u0 - u1)/2 = 1, so that
    // (u0 + u1)/2 >= ||y - A x||^2 / 2; objective (u0 + u1)/2.
    const int res_len = squared_residual ? (2 * M + 2) : (2 * M + 1);
    const int w_off = squared_residual ? 2 : 1;  // first residual coordinate
    const double w_scale = squared_residual ? (1.0 / std::sqrt(2.0)) : 1.0;
    const int base0 = res_len;  // first l1 block
    const int nvar = res_len + 3 * D;
    const int nrow = 2 * M + (squared_residual ? 1 : 0);

    ConicProblem prob;
    prob.c = Eigen::VectorXd::Zero(nvar);
    prob.b = Eigen::VectorXd::Zero(nrow);
    prob.A.assign(nrow, SparseRow{});
    if (squared_residual) {
        prob.c(0) = 0.5;
        prob.c(1) = 0.5;
    } else {
        prob.c(0) = 0.5;
    }
    prob.cones.push_back({ConeKind::Soc, res_len});
    append_l1_blocks(prob, D, base0, beta);

    // w + A x = y (w holds Re then Im of the residual).
    for (int m = 0; m < M; ++m) {
        SparseRow& re = prob.A[m];
        SparseRow& im = prob.A[M + m];
        re.add(w_off + m, w_scale);
        im.add(w_off + M + m, w_scale);
        for (int i = 0; i < D; ++i) {
            const std::complex<double> a = dict.A(m, i);
            re.add(base0 + 3 * i + 1, a.real());
            re.add(base0 + 3 * i + 2, -a.imag());
            im.add(base0 + 3 * i + 1, a.imag());
            im.add(base0 + 3 * i + 2, a.real());
        }
        prob.b(m) = y(m).real();
        prob.b(M + m) = y(m).imag();
    }
    if (squared_residual) {
        SparseRow& row = prob.A[2 * M];
        row.add(0, 0.5);
        row.add(1, -0.5);
        prob.b(2 * M) = 1.0;
    }

    SolveResult sol = solve_conic(prob);
    result.status = sol.status;
    if (sol.status == SolveStatus::Failed) return result;

    for (int i = 0; i < D; ++i)
        result.x(i) = {sol.x(base0 + 3 * i + 1), sol.x(base0 + 3 * i + 2)};

    // The support rule is relative to max|x|; when the whole vector is
    // numerical dust (a penalty large enough to zero every coefficient), a
    // relative rule would promote noise, so gate it by an absolute floor.
    const double xmax = result.x.cwiseAbs().maxCoeff();
    if (xmax > 1e-9 * std::max(1.0, y.norm())) {
        for (int i = 0; i < D; ++i) {
            if (std::abs(result.x(i)) > support_thresh * xmax) {
                result.support.push_back(i);
                result.support_angles.push_back(dict.angles[i]);
            }
        }
    }
    return result;
}

}  // namespace srdoa
