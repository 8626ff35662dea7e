#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "hamkrylov/error.hpp"
#include "hamkrylov/krylov.hpp"
#include "hamkrylov/problems.hpp"

using namespace hamkrylov;
using hktest::Gen;

namespace {

LinearOperator op(const DenseMatrix& a) { return LinearOperator::from_matrix(AnyMatrix(a)); }

double orthonormality(const DenseMatrix& v) {
    return max_abs_diff(multiply_transposed(v, v), DenseMatrix::identity(v.cols()));
}

} // namespace

TEST_CASE("Arnoldi on J from e1") {
    const KrylovBasis kb = arnoldi(op(SymplecticOperator(1).dense()), Vector{1, 0}, 2, InnerProduct::euclidean());
    REQUIRE(kb.dim() == 2);
    CHECK(kb.basis(0, 0) == 1.0);
    CHECK(kb.basis(1, 0) == 0.0);
    CHECK(kb.basis(0, 1) == 0.0);
    CHECK(kb.basis(1, 1) == -1.0);
    CHECK(kb.small_matrix(0, 0) == 0.0);
    CHECK(kb.small_matrix(0, 1) == -1.0);
    CHECK(kb.small_matrix(1, 0) == 1.0);
    CHECK(kb.small_matrix(1, 1) == 0.0);
    CHECK(kb.breakdown_step.has_value());
    CHECK(relation_residual(op(SymplecticOperator(1).dense()), kb) == 0.0);
}

TEST_CASE("Arnoldi stops on an invariant vector") {
    const DenseMatrix a = DenseMatrix::diagonal(Vector{2, 3, 5});
    const KrylovBasis kb = arnoldi(op(a), Vector{0, 4, 0}, 3, InnerProduct::euclidean());
    CHECK(kb.dim() == 1);
    REQUIRE(kb.breakdown_step.has_value());
    CHECK(*kb.breakdown_step == 1);
    CHECK(kb.basis(1, 0) == 1.0);
    CHECK(kb.small_matrix(0, 0) == 3.0);
}

TEST_CASE("weighted Arnoldi with identity weight equals the Euclidean one") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Gen g(seed);
        const DenseMatrix a = g.matrix(8, 8);
        const Vector b = g.vector(8);
        const KrylovBasis e = arnoldi(op(a), b, 5, InnerProduct::euclidean());
        const KrylovBasis w = arnoldi(op(a), b, 5,
                                      InnerProduct::weighted_by(std::make_shared<const AnyMatrix>(DenseMatrix::identity(8))));
        CHECK(max_abs_diff(e.basis, w.basis) <= 1e-13);
        CHECK(max_abs_diff(e.small_matrix, w.small_matrix) <= 1e-13);
    }
}

TEST_CASE("Arnoldi relation on a sparse m=50 system") {
    const Problem p = gen_random(ProblemFamily::RandomBlockDiagSPD, 50, 3);
    const LinearOperator a = p.system.a_operator();
    const KrylovBasis kb = arnoldi(a, p.y0, 8, InnerProduct::euclidean());
    CHECK(kb.dim() == 8);
    CHECK(relation_residual(a, kb) <= 1e-11);
    CHECK(orthonormality(kb.basis) <= 1e-10);
}

TEST_CASE("weighted Arnoldi gives an H-orthonormal basis and a skew Hessenberg matrix") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Gen g(20 + seed);
        const std::size_t m = g.index(3, 12);
        const HamiltonianSystem sys = g.spd_system(m);
        const Vector y0 = g.unit_vector(2 * m);
        const std::size_t n = g.index(2, m);
        const KrylovBasis kb = arnoldi(sys.a_operator(), y0, n, InnerProduct::weighted_by(sys.shared_h()));
        const DenseMatrix hd = to_dense(sys.h());
        const DenseMatrix hv = multiply(hd, kb.basis);
        CHECK(max_abs_diff(multiply_transposed(kb.basis, hv), DenseMatrix::identity(kb.dim())) <= 1e-10);
        CHECK(max_abs_diff(kb.small_matrix, scale(kb.small_matrix.transpose(), -1.0)) <= 1e-10);
        CHECK(max_abs(matvec_transposed(hv, kb.residual)) <= 1e-10 * (1.0 + norm2(kb.residual)));
        CHECK(relation_residual(sys.a_operator(), kb) <= 1e-10 * norm_inf(sys.materialize_a()));
    }
}

TEST_CASE("symplectic Lanczos single step") {
    const HamiltonianSystem sys(DenseMatrix::identity(2));
    const KrylovBasis kb = symplectic_lanczos(sys.a_operator(), Vector{1, 0}, 1);
    REQUIRE(kb.basis.rows() == 2);
    REQUIRE(kb.basis.cols() == 2);
    const DenseMatrix s = kb.basis;
    const double omega = s(0, 0) * s(1, 1) - s(1, 0) * s(0, 1);
    CHECK(omega == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(j_orthogonality_defect(s) <= 1e-15);
}

TEST_CASE("symplectic Lanczos on m=25: H_{2n} equals J S^T H S") {
    Gen g(25);
    const HamiltonianSystem sys = g.spd_system(25);
    const Vector y0 = g.unit_vector(50);
    const KrylovBasis kb = symplectic_lanczos(sys.a_operator(), y0, 5);
    REQUIRE(kb.basis.cols() == 10);
    CHECK(j_orthogonality_defect(kb.basis) <= 1e-8);
    const DenseMatrix sths = multiply_transposed(kb.basis, multiply(to_dense(sys.h()), kb.basis));
    const DenseMatrix expected = multiply(SymplecticOperator(5).dense(), sths);
    CHECK(max_abs_diff(kb.small_matrix, expected) <= 1e-8);
    CHECK(relation_residual(sys.a_operator(), kb) <= 1e-8);
}

TEST_CASE("symplectic Lanczos J-orthogonality on random systems") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Gen g(900 + seed);
        const std::size_t m = g.index(2, 20);
        const HamiltonianSystem sys = g.spd_system(m);
        const std::size_t n = g.index(1, m);
        try {
            const KrylovBasis kb = symplectic_lanczos(sys.a_operator(), g.unit_vector(2 * m), n);
            CHECK(j_orthogonality_defect(kb.basis) <= 1e-8);
        } catch (const BreakdownError&) {
            // a serious breakdown is a legitimate outcome and reported as such
        }
    }
}

TEST_CASE("symplectic Lanczos reports a serious breakdown") {
    // H = diag(1, -1): omega(v, A v) = 0 for v = (e1 + e2) / sqrt(2)
    const HamiltonianSystem sys(DenseMatrix::diagonal(Vector{1, -1}));
    const double s = 1.0 / std::sqrt(2.0);
    CHECK_THROWS_AS(symplectic_lanczos(sys.a_operator(), Vector{s, s}, 1), BreakdownError);
}

TEST_CASE("block J basis examples") {
    const HamiltonianSystem id(DenseMatrix::identity(4));
    SUBCASE("canonical spans") {
        const KrylovBasis kb = block_j_basis(id.a_operator(), Vector{1, 0, 0, 1}, 1);
        CHECK(kb.basis.cols() == 4);
        CHECK(max_abs_diff(multiply_transposed(kb.basis, kb.basis), DenseMatrix::identity(4)) <= 1e-15);
        CHECK(j_orthogonality_defect(kb.basis) <= 1e-15);
    }
    SUBCASE("duplicate halves collapse the rank") {
        for (bool stabilized : {true, false}) {
            const KrylovBasis kb = block_j_basis(id.a_operator(), Vector{1, 0, 1, 0}, 1, stabilized);
            REQUIRE(kb.basis.cols() == 2);
            CHECK(std::abs(kb.basis(0, 0)) == 1.0);
            CHECK(kb.basis(1, 0) == 0.0);
            CHECK(std::abs(kb.basis(2, 1)) == 1.0);
            CHECK(j_orthogonality_defect(kb.basis) <= 1e-15);
        }
    }
    SUBCASE("random m=40, n=6") {
        Gen g(40);
        const HamiltonianSystem sys = g.spd_system(40);
        const KrylovBasis kb = block_j_basis(sys.a_operator(), g.unit_vector(80), 6, true);
        CHECK(kb.basis.cols() % 2 == 0);
        CHECK(kb.basis.cols() <= 24);
        CHECK(j_orthogonality_defect(kb.basis) <= 1e-12);
    }
}
