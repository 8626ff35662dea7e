#include <doctest.h>

#include <cmath>

#include <Eigen/Dense>

#include "generators.hpp"
#include "hamkrylov/error.hpp"
#include "hamkrylov/problems.hpp"
#include "hamkrylov/projection.hpp"

using namespace hamkrylov;

namespace {

Eigen::VectorXd eigenvalues(const DenseMatrix& a) {
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(hktest::to_eigen(a)).eigenvalues();
}

} // namespace

TEST_CASE("family and initial mode names round trip") {
    for (ProblemFamily f : {ProblemFamily::RandomBlockDiagSPD, ProblemFamily::RandomSkewHamiltonian, ProblemFamily::RandomFull,
                            ProblemFamily::SpecialH12ZeroH22I, ProblemFamily::Wave2D, ProblemFamily::Maxwell1D,
                            ProblemFamily::Maxwell3D})
        CHECK(parse_family(to_string(f)) == f);
    for (InitialMode m : {InitialMode::RandomUnit, InitialMode::Prescribed, InitialMode::ZeroQRandomP})
        CHECK(parse_initial_mode(to_string(m)) == m);
    CHECK_FALSE(parse_family("Heat").has_value());
}

TEST_CASE("random skew-Hamiltonian family") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Problem p = gen_random(ProblemFamily::RandomSkewHamiltonian, 12, seed);
        const DenseMatrix a = p.system.materialize_a();
        const DenseMatrix j = SymplecticOperator(12).dense();
        CHECK(max_abs_diff(a, scale(a.transpose(), -1.0)) <= 1e-13);
        CHECK(max_abs_diff(multiply(j, a), multiply(a, j)) <= 1e-13);
        CHECK(norm2(p.y0) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("random SPD families have spectrum in [0.1, 2]") {
    for (ProblemFamily f : {ProblemFamily::RandomBlockDiagSPD, ProblemFamily::RandomFull}) {
        const Problem p = gen_random(f, 10, 3);
        const Eigen::VectorXd ev = eigenvalues(to_dense(p.system.h()));
        CHECK(ev.minCoeff() >= 0.1 - 1e-10);
        CHECK(ev.maxCoeff() <= 2.0 + 1e-10);
    }
}

TEST_CASE("generators are deterministic") {
    for (ProblemFamily f : {ProblemFamily::RandomBlockDiagSPD, ProblemFamily::RandomSkewHamiltonian, ProblemFamily::RandomFull,
                            ProblemFamily::SpecialH12ZeroH22I}) {
        const Problem a = gen_random(f, 7, 42);
        const Problem b = gen_random(f, 7, 42);
        CHECK(max_abs_diff(to_dense(a.system.h()), to_dense(b.system.h())) == 0.0);
        CHECK(a.y0 == b.y0);
        const Problem c = gen_random(f, 7, 43);
        CHECK(a.y0 != c.y0);
    }
}

TEST_CASE("special family has H = blkdiag(H11, I) and zero q-part") {
    const Problem p = gen_random(ProblemFamily::SpecialH12ZeroH22I, 6, 1);
    const DenseMatrix h = to_dense(p.system.h());
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(p.y0[i] == 0.0);
        for (std::size_t k = 0; k < 6; ++k) {
            CHECK(h(i, 6 + k) == 0.0);
            CHECK(h(6 + i, 6 + k) == (i == k ? 1.0 : 0.0));
        }
    }
    CHECK_NOTHROW(run_method(p.system, p.y0, Method::SpecialMR, 4, Schedule{0.01, 0.1, std::nullopt}));
}

TEST_CASE("Wave2D") {
    SUBCASE("N=2") {
        const DenseMatrix g = wave2d_laplacian(2).to_dense();
        REQUIRE(g.rows() == 1);
        CHECK(g(0, 0) == -16.0);
    }
    SUBCASE("N=3 stencil") {
        const DenseMatrix g = wave2d_laplacian(3).to_dense();
        REQUIRE(g.rows() == 4);
        const double c = 9.0;
        const DenseMatrix expected(4, 4, {-4 * c, c, c, 0, c, -4 * c, 0, c, c, 0, -4 * c, c, 0, c, c, -4 * c});
        CHECK(max_abs_diff(g, expected) <= 1e-12);
        CHECK(eigenvalues(g).maxCoeff() < 0.0);
    }
    SUBCASE("energy along the reference") {
        const Problem p = wave2d(6, 2);
        CHECK(p.system.dim() == 50);
        const TrajectoryRecord r = reference_solution(p.system, p.y0, Schedule{0.004, 1.0, std::nullopt});
        CHECK(r.max_abs_energy_error() <= 1e-11 * std::abs(r.energy.front()));
    }
}

TEST_CASE("Maxwell1D") {
    SUBCASE("N=4 coupling matrix") {
        const DenseMatrix g = maxwell1d_coupling(4);
        const DenseMatrix expected(3, 5, {-2, 0, 1, 0, 0, 0, -1, 0, 1, 0, 0, 0, -1, 0, 2});
        CHECK(max_abs_diff(g, expected) == 0.0);
    }
    SUBCASE("D and S") {
        const std::size_t n = 4;
        const Problem p = maxwell1d(n);
        const DenseMatrix d = to_dense(p.system.h());
        REQUIRE(d.rows() == 2 * n);
        for (std::size_t i = 0; i < 2 * n; ++i) {
            const bool half = (i + 1 == n) || (i + 1 == 2 * n);
            CHECK(d(i, i) == (half ? 0.5 : 1.0));
        }
        REQUIRE(p.system.structure() != nullptr);
        const DenseMatrix s = p.system.structure()->to_dense();
        CHECK(max_abs_diff(s, scale(s.transpose(), -1.0)) == 0.0);
        CHECK(p.y0.size() == 2 * n);
    }
    SUBCASE("APMH on the weighted reading") {
        const Problem p = maxwell1d(16);
        const TrajectoryRecord r = run_method(p.system, p.y0, Method::APMH, 8, Schedule{0.004, 1.0, std::nullopt});
        CHECK(r.max_abs_energy_error() <= 1e-10);
    }
}

TEST_CASE("Maxwell3D") {
    SUBCASE("N=2 collapses") {
        const DenseMatrix g = maxwell3d_curl_surrogate(2).to_dense();
        REQUIRE(g.rows() == 1);
        CHECK(g(0, 0) == 0.0);
    }
    SUBCASE("structure and APMH rejection") {
        const Problem p = maxwell3d(4, 1);
        const DenseMatrix g = maxwell3d_curl_surrogate(4).to_dense();
        CHECK(max_abs_diff(g, g.transpose()) == 0.0);
        const DenseMatrix a = p.system.materialize_a();
        CHECK(max_abs_diff(a, scale(a.transpose(), -1.0)) == 0.0);
        const Eigen::VectorXd ev = eigenvalues(g);
        CHECK(ev.minCoeff() < 0.0);
        CHECK(ev.maxCoeff() > 0.0);
        CHECK_FALSE(p.system.h_positive_definite());
        CHECK_THROWS_AS(build_projection(p.system, p.y0, Method::APMH, 4), IndefiniteWeightError);
        CHECK_NOTHROW(run_method(p.system, p.y0, Method::APM, 4, Schedule{0.004, 0.4, std::nullopt}));
    }
}

TEST_CASE("make_problem initial modes") {
    ProblemSpec spec;
    spec.family = ProblemFamily::RandomFull;
    spec.size = 5;
    spec.seed = 9;
    spec.initial = InitialMode::ZeroQRandomP;
    const Problem p = make_problem(spec);
    for (std::size_t i = 0; i < 5; ++i) CHECK(p.y0[i] == 0.0);
    CHECK(norm2(p.y0) == doctest::Approx(1.0));
    spec.size = 0;
    CHECK_THROWS(make_problem(spec));
}
