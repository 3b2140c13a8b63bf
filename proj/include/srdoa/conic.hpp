// Assembly and solution of the dual semidefinite program
//
//     max Re{c^H y} - delta ||c||_2
//     s.t. [[H, G c],[(G c)^H, 1]] >= 0,  sum_i H_{i,i+j} = (j == 0),
//
// over c in C^M and Hermitian H (P x P). The complex Hermitian PSD cone is
// embedded as a real symmetric cone of twice the dimension via
// [[Re, -Im],[Im, Re]]; ||c||_2 enters through an epigraph second-order cone,
// keeping the objective linear. Solved as a minimization of the negated
// objective by the embedded interior-point solver.
#pragma once

#include <Eigen/Dense>

#include "srdoa/cone_solver.hpp"
#include "srdoa/manifold.hpp"

namespace srdoa {

struct DualProblem {
    Eigen::VectorXcd y;      // snapshot, length M
    ManifoldModel manifold;  // G is P x M
    double delta = 0.0;      // noise-norm bound, >= 0
};

struct DualSolution {
    Eigen::VectorXcd c_star;  // optimal dual vector, length M
    Eigen::VectorXcd h_star;  // G c_star, recomputed, length P
    double objective = 0.0;   // Re{c^H y} - delta ||c||
    SolveStatus status = SolveStatus::Failed;

    Eigen::MatrixXcd H;  // Hermitian block, for feasibility certificates

    struct Diagnostics {
        int iters = 0;
        double pres = 0.0, dres = 0.0, relgap = 0.0;
        double min_eig_H = 0.0;      // should be >= -1e-8
        double trace_resid = 0.0;    // max_j |sum_i H_{i,i+j} - (j==0)|
        double corner_resid = 0.0;   // |Z_{P,P} - 1|
        double max_dual_mag = 0.0;   // max |b(e^{j theta})| on a 4096 grid
        double solve_seconds = 0.0;
    } diag;
};

namespace conic {

// Index layout of the assembled program: variables are
// [ svec of the real-embedded bordered PSD matrix (dim 2(P+1)) | t, Re c, Im c ].
struct Layout {
    int P = 0, M = 0;
    int embed_dim = 0;  // 2(P+1)
    int nsv = 0;        // svec length of the PSD block
    int soc_off = 0;    // == nsv; SOC block is (t, Re c, Im c)
};

ConicProblem assemble(const DualProblem& prob, Layout* layout = nullptr);

// Solve to relative KKT tolerance tol. Never returns a silently wrong
// answer: on non-convergence status is Failed and diagnostics are populated;
// an "optimal" result additionally passes the bounded-dual-polynomial check.
DualSolution solve(const DualProblem& prob, double tol = 1e-8);

}  // namespace conic
}  // namespace srdoa
