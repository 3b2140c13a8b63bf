#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>

#include "srdoa/geometry.hpp"
#include "srdoa/prune.hpp"

using namespace srdoa;
using cd = std::complex<double>;

TEST_SUITE("prune") {
    TEST_CASE("dictionary layout: candidates first, fill avoids them, columns match") {
        const ArrayGeometry g = make_uca(12, 1.0);
        const std::vector<double> cand = {deg2rad(40.0), deg2rad(110.0),
                                          deg2rad(-75.0)};
        const AugmentedDictionary dict = build_dictionary(g, cand, 64, 7, 0.5);

        REQUIRE(dict.n_candidates == 3);
        REQUIRE(static_cast<int>(dict.angles.size()) == 3 + 64);
        REQUIRE(dict.A.rows() == 12);
        REQUIRE(dict.A.cols() == 3 + 64);

        for (int i = 0; i < 3; ++i) CHECK(dict.angles[i] == cand[i]);

        // Every fill angle keeps its distance from every candidate, and all
        // angles live in the principal interval.
        for (std::size_t i = 3; i < dict.angles.size(); ++i) {
            CHECK(dict.angles[i] > -kPi);
            CHECK(dict.angles[i] <= kPi);
            for (double c : cand)
                CHECK(std::abs(circ_diff(dict.angles[i], c)) >= deg2rad(0.5));
        }

        // Columns are steering vectors at the stored angles.
        for (int j = 0; j < dict.A.cols(); ++j) {
            const Eigen::VectorXcd a = steering_response(g, dict.angles[j]);
            CHECK((dict.A.col(j) - a).cwiseAbs().maxCoeff() < 1e-14);
        }

        // Deterministic per seed, different across seeds.
        const AugmentedDictionary again = build_dictionary(g, cand, 64, 7, 0.5);
        CHECK(std::equal(dict.angles.begin(), dict.angles.end(),
                         again.angles.begin()));
        const AugmentedDictionary other = build_dictionary(g, cand, 64, 8, 0.5);
        CHECK(!std::equal(dict.angles.begin(), dict.angles.end(),
                          other.angles.begin()));
    }

    TEST_CASE("noiseless sparse recovery lands on the true atoms") {
        const ArrayGeometry g = make_uca(16, 1.0);
        const double t1 = deg2rad(40.0), t2 = deg2rad(110.0);
        // Candidate list mixes the true angles with decoys.
        const std::vector<double> cand = {t1, deg2rad(-20.0), t2,
                                          deg2rad(160.0)};
        const AugmentedDictionary dict = build_dictionary(g, cand, 40, 3);

        const cd a1(1.0, 0.0), a2(0.4, 0.55);
        const Eigen::VectorXcd y =
            a1 * steering_response(g, t1) + a2 * steering_response(g, t2);

        const PruneResult res = lasso_prune(y, dict, 1e-4, 0.05);
        REQUIRE(res.status != SolveStatus::Failed);
        REQUIRE(res.support.size() == 2);
        CHECK(res.support[0] == 0);
        CHECK(res.support[1] == 2);
        CHECK(res.support_angles[0] == doctest::Approx(t1));
        CHECK(res.support_angles[1] == doctest::Approx(t2));
        // With a tiny penalty the recovered amplitudes are nearly exact.
        CHECK(std::abs(res.x(0) - a1) < 1e-2);
        CHECK(std::abs(res.x(2) - a2) < 1e-2);
        // Decoys and fill are negligible next to the true atoms.
        double off = 0.0;
        for (int j = 0; j < dict.A.cols(); ++j)
            if (j != 0 && j != 2) off = std::max(off, std::abs(res.x(j)));
        CHECK(off < 0.05 * std::abs(res.x(0)));
    }

    TEST_CASE("a large penalty zeroes everything") {
        const ArrayGeometry g = make_uca(10, 1.0);
        const std::vector<double> cand = {deg2rad(25.0)};
        const AugmentedDictionary dict = build_dictionary(g, cand, 20, 5);
        const Eigen::VectorXcd y = steering_response(g, cand[0]);

        // beta far above the dual-norm threshold forces x = 0 in the
        // square-root form (the residual term's subgradient is bounded).
        const PruneResult res = lasso_prune(y, dict, 50.0, 0.05);
        REQUIRE(res.status != SolveStatus::Failed);
        CHECK(res.support.empty());
        CHECK(res.support_angles.empty());
        CHECK(res.x.cwiseAbs().maxCoeff() < 1e-6);
    }

    TEST_CASE("squared-residual variant agrees on the support") {
        const ArrayGeometry g = make_uca(14, 1.0);
        const double t1 = deg2rad(-60.0), t2 = deg2rad(75.0);
        const std::vector<double> cand = {t1, t2, deg2rad(10.0)};
        const AugmentedDictionary dict = build_dictionary(g, cand, 30, 11);
        const Eigen::VectorXcd y =
            steering_response(g, t1) + cd(0.0, 0.8) * steering_response(g, t2);

        const PruneResult sqrt_form = lasso_prune(y, dict, 1e-3, 0.1, false);
        const PruneResult sq_form = lasso_prune(y, dict, 1e-3, 0.1, true);
        REQUIRE(sqrt_form.status != SolveStatus::Failed);
        REQUIRE(sq_form.status != SolveStatus::Failed);
        CHECK(sqrt_form.support == sq_form.support);
        REQUIRE(sqrt_form.support.size() == 2);
        // Near-noiseless with tiny beta: both recover almost the same x.
        CHECK((sqrt_form.x - sq_form.x).cwiseAbs().maxCoeff() < 5e-2);
    }

    TEST_CASE("support threshold trims relative to the dominant coefficient") {
        const ArrayGeometry g = make_uca(16, 1.0);
        const double t1 = deg2rad(30.0), t2 = deg2rad(-120.0);
        const std::vector<double> cand = {t1, t2};
        const AugmentedDictionary dict = build_dictionary(g, cand, 0, 1);
        const Eigen::VectorXcd y =
            steering_response(g, t1) + 0.2 * steering_response(g, t2);

        const PruneResult loose = lasso_prune(y, dict, 1e-4, 0.05);
        REQUIRE(loose.support.size() == 2);
        const PruneResult tight = lasso_prune(y, dict, 1e-4, 0.5);
        REQUIRE(tight.support.size() == 1);
        CHECK(tight.support[0] == 0);
    }

    TEST_CASE("empty dictionary short-circuits") {
        const ArrayGeometry g = make_uca(8, 1.0);
        const AugmentedDictionary dict = build_dictionary(g, {}, 0, 0);
        const Eigen::VectorXcd y = steering_response(g, 0.3);
        const PruneResult res = lasso_prune(y, dict, 0.1);
        CHECK(res.status == SolveStatus::Optimal);
        CHECK(res.x.size() == 0);
        CHECK(res.support.empty());
    }
}
