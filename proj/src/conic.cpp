#include "srdoa/conic.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace srdoa::conic {

namespace {

// Constraint functionals on the embedded PSD variable Xhat (real symmetric,
// dimension 2p). Any PSD Xhat = [[S1, B],[B', S2]] acts through the
// effective Hermitian matrix Z = (S1 + S2)/2 + j (B' - B)/2 (itself PSD), and
// the rows below read exactly Re Z_ab / Im Z_ab of that effective matrix.
constexpr double kQ = 0.25 * kSq2;  // svec value of a 1/4 matrix entry

void add_re(SparseRow& row, int a, int b, int p, double scale = 1.0) {
    if (a == b) {
        row.add(svec_index(a, a), 0.5 * scale);
        row.add(svec_index(p + a, p + a), 0.5 * scale);
    } else {
        if (a > b) std::swap(a, b);
        row.add(svec_index(a, b), kQ * scale);
        row.add(svec_index(p + a, p + b), kQ * scale);
    }
}

void add_im(SparseRow& row, int a, int b, int p, double scale = 1.0) {
    // Im Z_ab with a != b (Im Z_aa = 0 for Hermitian Z)
    row.add(svec_index(a, p + b), -kQ * scale);
    row.add(svec_index(b, p + a), kQ * scale);
}

}  // namespace

ConicProblem assemble(const DualProblem& prob, Layout* layout) {
    const auto& G = prob.manifold.G;  // P x M
    const int P = prob.manifold.P;
    const int M = static_cast<int>(prob.y.size());
    if (G.cols() != M)
        throw std::invalid_argument("conic::assemble: snapshot/manifold size mismatch");
    if (prob.delta < 0.0)
        throw std::invalid_argument("conic::assemble: delta must be >= 0");

    const int p = P + 1;      // bordered Hermitian dimension
    const int d = 2 * p;      // real embedding dimension
    const int nsv = svec_len(d);
    const int nsoc = 2 * M + 1;

    ConicProblem cp;
    cp.cones = {ConeSpec{ConeKind::Psd, d}, ConeSpec{ConeKind::Soc, nsoc}};
    const int n = nsv + nsoc;

    // Trace constraints: sum_i Z_{i,i+j} = (j == 0) for j = 0..P-1; the
    // j = 0 row is real, each j > 0 contributes a real and an imaginary row.
    std::vector<double> rhs;
    for (int j = 0; j < P; ++j) {
        SparseRow re;
        for (int i = 0; i + j < P; ++i) add_re(re, i, i + j, p);
        cp.A.push_back(std::move(re));
        rhs.push_back(j == 0 ? 1.0 : 0.0);
        if (j > 0) {
            SparseRow im;
            for (int i = 0; i + j < P; ++i) add_im(im, i, i + j, p);
            cp.A.push_back(std::move(im));
            rhs.push_back(0.0);
        }
    }
    // Border: Z_{i,P} = (G c)_i, i.e. Re/Im Z_{i,P} minus the matching linear
    // combination of (Re c, Im c) vanishes.
    for (int i = 0; i < P; ++i) {
        SparseRow re;
        add_re(re, i, P, p);
        for (int m = 0; m < M; ++m) {
            re.add(nsv + 1 + m, -G(i, m).real());
            re.add(nsv + 1 + M + m, G(i, m).imag());
        }
        cp.A.push_back(std::move(re));
        rhs.push_back(0.0);

        SparseRow im;
        add_im(im, i, P, p);
        for (int m = 0; m < M; ++m) {
            im.add(nsv + 1 + m, -G(i, m).imag());
            im.add(nsv + 1 + M + m, -G(i, m).real());
        }
        cp.A.push_back(std::move(im));
        rhs.push_back(0.0);
    }
    // Corner: Z_{P,P} = 1.
    {
        SparseRow corner;
        add_re(corner, P, P, p);
        cp.A.push_back(std::move(corner));
        rhs.push_back(1.0);
    }

    cp.b = Eigen::Map<Eigen::VectorXd>(rhs.data(), static_cast<int>(rhs.size()));

    // min delta*t - Re(y)'(Re c) - Im(y)'(Im c)  ==  -(Re{c^H y} - delta||c||)
    cp.c = Eigen::VectorXd::Zero(n);
    cp.c(nsv) = prob.delta;
    for (int m = 0; m < M; ++m) {
        cp.c(nsv + 1 + m) = -prob.y(m).real();
        cp.c(nsv + 1 + M + m) = -prob.y(m).imag();
    }

    if (layout) *layout = {P, M, d, nsv, nsv};
    return cp;
}

DualSolution solve(const DualProblem& prob, double tol) {
    Layout lo;
    const ConicProblem cp = assemble(prob, &lo);

    const auto t0 = std::chrono::steady_clock::now();
    const SolveResult res = solve_conic(cp, tol);
    const auto t1 = std::chrono::steady_clock::now();

    DualSolution out;
    out.status = res.status;
    out.diag.iters = res.iters;
    out.diag.pres = res.pres;
    out.diag.dres = res.dres;
    out.diag.relgap = res.relgap;
    out.diag.solve_seconds = std::chrono::duration<double>(t1 - t0).count();

    const int P = lo.P, M = lo.M, p = P + 1;
    out.c_star.resize(M);
    for (int m = 0; m < M; ++m)
        out.c_star(m) = std::complex<double>(res.x(lo.nsv + 1 + m),
                                             res.x(lo.nsv + 1 + M + m));
    out.h_star = prob.manifold.G * out.c_star;  // recomputed, never trusted
    out.objective = prob.y.dot(out.c_star).real() - prob.delta * out.c_star.norm();

    // Effective Hermitian matrix of the embedded PSD block.
    const Eigen::MatrixXd Xhat = smat(res.x.head(lo.nsv), lo.embed_dim);
    const Eigen::MatrixXd S1 = Xhat.topLeftCorner(p, p);
    const Eigen::MatrixXd S2 = Xhat.bottomRightCorner(p, p);
    const Eigen::MatrixXd Bt = Xhat.bottomLeftCorner(p, p);
    const Eigen::MatrixXd Bu = Xhat.topRightCorner(p, p);
    const Eigen::MatrixXcd Z =
        0.5 * (S1 + S2).cast<std::complex<double>>() +
        std::complex<double>(0, 0.5) * (Bt - Bu).cast<std::complex<double>>();
    out.H = Z.topLeftCorner(P, P);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(out.H, Eigen::EigenvaluesOnly);
    out.diag.min_eig_H = es.eigenvalues().minCoeff();
    double tr = 0.0;
    for (int j = 0; j < P; ++j) {
        std::complex<double> s(0.0, 0.0);
        for (int i = 0; i + j < P; ++i) s += out.H(i, i + j);
        tr = std::max(tr, std::abs(s - (j == 0 ? 1.0 : 0.0)));
    }
    out.diag.trace_resid = tr;
    out.diag.corner_resid = std::abs(Z(P, P) - 1.0);

    double bmax = 0.0;
    for (int i = 0; i < 4096; ++i)
        bmax = std::max(bmax,
                        std::abs(dual_poly_eval(out.h_star, -kPi + 2.0 * kPi * i / 4096)));
    out.diag.max_dual_mag = bmax;

    // An optimal certificate must come with a bounded dual polynomial.
    if (out.status == SolveStatus::Optimal && bmax > 1.0 + 1e-4)
        out.status = SolveStatus::NearOptimal;
    return out;
}

}  // namespace srdoa::conic
