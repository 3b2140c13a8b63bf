// Self-contained primal-dual interior-point solver for conic programs in
// standard form:
//
//     min c'x   s.t.  A x = b,   x in K,
//
// where K is a product of nonnegative orthants, second-order cones, and
// (svec-packed) positive semidefinite cones. Nesterov-Todd scaling with a
// Mehrotra predictor-corrector step; the Schur complement is formed densely
// from sparse constraint rows.
//
// svec packing: upper triangle, column-major, off-diagonal entries scaled by
// sqrt(2), so <svec(A), svec(B)> = <A, B>_F.
#pragma once

#include <ostream>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace srdoa {

inline constexpr double kSq2 = 1.4142135623730951;

inline int svec_len(int d) { return d * (d + 1) / 2; }
inline int svec_index(int r, int c) { return c * (c + 1) / 2 + r; }  // r <= c

Eigen::VectorXd svec(const Eigen::MatrixXd& S);
Eigen::MatrixXd smat(const Eigen::VectorXd& v, int d);

enum class ConeKind { NonNeg, Soc, Psd };

struct ConeSpec {
    ConeKind kind;
    int size;  // NonNeg/Soc: vector length; Psd: matrix dimension d

    int vlen() const { return kind == ConeKind::Psd ? svec_len(size) : size; }
    // Barrier degree, i.e. the cone's contribution to the complementarity
    // normalization rho = sum of degrees.
    int degree() const {
        switch (kind) {
            case ConeKind::NonNeg: return size;
            case ConeKind::Soc: return 2;
            default: return size;
        }
    }
};

// One equality row, stored sparse; indices are global over the stacked
// cone-variable vector.
struct SparseRow {
    std::vector<std::pair<int, double>> nz;
    void add(int idx, double v) { if (v != 0.0) nz.emplace_back(idx, v); }
};

struct ConicProblem {
    Eigen::VectorXd c;
    std::vector<SparseRow> A;
    Eigen::VectorXd b;
    std::vector<ConeSpec> cones;

    int num_vars() const {
        int n = 0;
        for (const auto& cn : cones) n += cn.vlen();
        return n;
    }
};

enum class SolveStatus { Optimal, NearOptimal, Failed };

const char* to_string(SolveStatus s);

struct SolveResult {
    SolveStatus status = SolveStatus::Failed;
    Eigen::VectorXd x, y, z;
    int iters = 0;
    double pres = 0.0, dres = 0.0, relgap = 0.0;
    double obj = 0.0;  // c'x at the returned point
};

SolveResult solve_conic(const ConicProblem& prob, double tol = 1e-8,
                        int max_iter = 100, std::ostream* log = nullptr);

// Strict interior test with margin (smallest eigenvalue / slack > margin).
bool cone_inside(const ConeSpec& cone, const Eigen::VectorXd& x,
                 double margin = 0.0);

}  // namespace srdoa
