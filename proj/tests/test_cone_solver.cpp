#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "srdoa/cone_solver.hpp"

using namespace srdoa;

namespace {

Eigen::MatrixXd random_symmetric(int d, std::mt19937& eng) {
    std::normal_distribution<double> N(0.0, 1.0);
    Eigen::MatrixXd A(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) A(i, j) = N(eng);
    return 0.5 * (A + A.transpose()).eval();
}

// Interior point of a cone, with slack.
Eigen::VectorXd interior_point(const ConeSpec& cone, std::mt19937& eng) {
    std::normal_distribution<double> N(0.0, 1.0);
    if (cone.kind == ConeKind::NonNeg) {
        Eigen::VectorXd v(cone.size);
        for (int i = 0; i < cone.size; ++i) v(i) = 0.5 + std::abs(N(eng));
        return v;
    }
    if (cone.kind == ConeKind::Soc) {
        Eigen::VectorXd v(cone.size);
        for (int i = 1; i < cone.size; ++i) v(i) = N(eng);
        v(0) = v.tail(cone.size - 1).norm() + 0.5 + std::abs(N(eng));
        return v;
    }
    const Eigen::MatrixXd A = random_symmetric(cone.size, eng);
    const Eigen::MatrixXd X =
        A * A.transpose() + 0.3 * Eigen::MatrixXd::Identity(cone.size, cone.size);
    return svec(X);
}

}  // namespace

TEST_SUITE("cone_solver") {
    TEST_CASE("svec and smat invert each other and preserve inner products") {
        std::mt19937 eng(11);
        const Eigen::MatrixXd X = random_symmetric(5, eng);
        const Eigen::MatrixXd Y = random_symmetric(5, eng);
        CHECK((smat(svec(X), 5) - X).cwiseAbs().maxCoeff() < 1e-14);
        const double frob = (X.transpose() * Y).trace();
        CHECK(svec(X).dot(svec(Y)) == doctest::Approx(frob).epsilon(1e-12));
        CHECK(svec(X).size() == svec_len(5));
        CHECK(svec_index(2, 4) == 4 * 5 / 2 + 2);
    }

    TEST_CASE("linear program with a known vertex solution") {
        // min x1 + 2 x2  s.t.  x1 + x2 = 1,  x >= 0   ->  x = (1, 0).
        ConicProblem prob;
        prob.c = Eigen::Vector2d(1.0, 2.0);
        prob.b = Eigen::VectorXd::Constant(1, 1.0);
        SparseRow row;
        row.add(0, 1.0);
        row.add(1, 1.0);
        prob.A = {row};
        prob.cones = {{ConeKind::NonNeg, 2}};
        const SolveResult res = solve_conic(prob);
        REQUIRE(res.status == SolveStatus::Optimal);
        CHECK(res.x(0) == doctest::Approx(1.0).epsilon(1e-6));
        CHECK(res.x(1) == doctest::Approx(0.0).epsilon(1e-6));
        CHECK(res.obj == doctest::Approx(1.0).epsilon(1e-7));
    }

    TEST_CASE("second-order cone: minimal norm bound equals the vector norm") {
        // min t  s.t.  (t, u) in SOC,  u = (3, 4)   ->  t = 5.
        ConicProblem prob;
        prob.c = Eigen::Vector3d(1.0, 0.0, 0.0);
        prob.b = Eigen::Vector2d(3.0, 4.0);
        SparseRow r1, r2;
        r1.add(1, 1.0);
        r2.add(2, 1.0);
        prob.A = {r1, r2};
        prob.cones = {{ConeKind::Soc, 3}};
        const SolveResult res = solve_conic(prob);
        REQUIRE(res.status == SolveStatus::Optimal);
        CHECK(res.x(0) == doctest::Approx(5.0).epsilon(1e-7));
    }

    TEST_CASE("semidefinite program recovers the smallest eigenvalue") {
        // min tr(C X)  s.t.  tr(X) = 1,  X >= 0   ->  lambda_min(C).
        const int d = 6;
        std::mt19937 eng(23);
        const Eigen::MatrixXd C = random_symmetric(d, eng);
        const double lmin =
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(C).eigenvalues().minCoeff();

        ConicProblem prob;
        prob.c = svec(C);
        prob.b = Eigen::VectorXd::Constant(1, 1.0);
        SparseRow tr;
        for (int i = 0; i < d; ++i) tr.add(svec_index(i, i), 1.0);
        prob.A = {tr};
        prob.cones = {{ConeKind::Psd, d}};
        const SolveResult res = solve_conic(prob);
        REQUIRE(res.status == SolveStatus::Optimal);
        CHECK(res.obj == doctest::Approx(lmin).epsilon(1e-6));

        // The optimizer is (close to) the projector onto the bottom eigenvector.
        const Eigen::MatrixXd X = smat(res.x, d);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(X);
        CHECK(es.eigenvalues().minCoeff() > -1e-8);
        CHECK(X.trace() == doctest::Approx(1.0).epsilon(1e-8));
    }

    TEST_CASE("random mixed-cone problems satisfy the KKT conditions") {
        for (int seed = 0; seed < 10; ++seed) {
            CAPTURE(seed);
            std::mt19937 eng(100 + seed);
            std::normal_distribution<double> N(0.0, 1.0);

            std::vector<ConeSpec> cones{{ConeKind::NonNeg, 4},
                                        {ConeKind::Soc, 4},
                                        {ConeKind::Psd, 4}};
            int n = 0;
            for (const auto& cn : cones) n += cn.vlen();
            const int m = 7;

            // Feasible by construction: b = A x0 with x0 interior, and
            // c = A' y0 + z0 with z0 interior, so strong duality holds.
            Eigen::VectorXd x0(n), z0(n);
            int o = 0;
            for (const auto& cn : cones) {
                x0.segment(o, cn.vlen()) = interior_point(cn, eng);
                z0.segment(o, cn.vlen()) = interior_point(cn, eng);
                o += cn.vlen();
            }
            Eigen::MatrixXd Ad(m, n);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < n; ++j) Ad(i, j) = N(eng);
            Eigen::VectorXd y0(m);
            for (int i = 0; i < m; ++i) y0(i) = N(eng);

            ConicProblem prob;
            prob.b = Ad * x0;
            prob.c = Ad.transpose() * y0 + z0;
            prob.cones = cones;
            prob.A.resize(m);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < n; ++j) prob.A[i].add(j, Ad(i, j));

            const SolveResult res = solve_conic(prob);
            REQUIRE(res.status == SolveStatus::Optimal);

            // Independent KKT check at the returned triple.
            const double pres =
                (prob.b - Ad * res.x).norm() / (1.0 + prob.b.norm());
            const double dres =
                (prob.c - Ad.transpose() * res.y - res.z).norm() /
                (1.0 + prob.c.norm());
            CHECK(pres < 1e-7);
            CHECK(dres < 1e-7);
            CHECK(std::abs(res.x.dot(res.z)) /
                      (1.0 + std::abs(prob.c.dot(res.x))) < 1e-6);
            o = 0;
            for (const auto& cn : cones) {
                CHECK(cone_inside(cn, res.x.segment(o, cn.vlen()), -1e-9));
                CHECK(cone_inside(cn, res.z.segment(o, cn.vlen()), -1e-9));
                o += cn.vlen();
            }
        }
    }

    TEST_CASE("an infeasible program is never reported optimal") {
        // x1 + x2 = -1 with x >= 0 has no feasible point.
        ConicProblem prob;
        prob.c = Eigen::Vector2d(1.0, 1.0);
        prob.b = Eigen::VectorXd::Constant(1, -1.0);
        SparseRow row;
        row.add(0, 1.0);
        row.add(1, 1.0);
        prob.A = {row};
        prob.cones = {{ConeKind::NonNeg, 2}};
        const SolveResult res = solve_conic(prob);
        CHECK(res.status == SolveStatus::Failed);
    }

    TEST_CASE("duplicate equality rows are handled by regularization") {
        ConicProblem prob;
        prob.c = Eigen::Vector2d(1.0, 2.0);
        prob.b = Eigen::Vector2d(1.0, 1.0);
        SparseRow row;
        row.add(0, 1.0);
        row.add(1, 1.0);
        prob.A = {row, row};  // rank-deficient but consistent
        prob.cones = {{ConeKind::NonNeg, 2}};
        const SolveResult res = solve_conic(prob);
        REQUIRE(res.status == SolveStatus::Optimal);
        CHECK(res.x(0) == doctest::Approx(1.0).epsilon(1e-6));
    }

    TEST_CASE("cone membership test accepts interior and rejects exterior points") {
        const ConeSpec nn{ConeKind::NonNeg, 2};
        CHECK(cone_inside(nn, Eigen::Vector2d(0.5, 1.0)));
        CHECK(!cone_inside(nn, Eigen::Vector2d(-0.1, 1.0)));

        const ConeSpec soc{ConeKind::Soc, 3};
        CHECK(cone_inside(soc, Eigen::Vector3d(5.0, 3.0, 3.9)));
        CHECK(!cone_inside(soc, Eigen::Vector3d(4.9, 3.0, 4.0)));

        const ConeSpec psd{ConeKind::Psd, 2};
        Eigen::MatrixXd X(2, 2);
        X << 2.0, 0.5, 0.5, 1.0;
        CHECK(cone_inside(psd, svec(X)));
        X(0, 0) = -0.1;
        CHECK(!cone_inside(psd, svec(X)));
    }
}
