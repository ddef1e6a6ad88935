#include <cmath>
#include <complex>

#include "doctest.h"
#include "helpers.hpp"
#include "qjsd/errors.hpp"
#include "qjsd/spectral.hpp"

using namespace qjsd;
using testutil::sigma_x;
using testutil::sigma_z;

TEST_CASE("hermitian operator validates and symmetrizes") {
    Matrix m = sigma_x();
    m(0, 1) += cxd(0, 5e-14);  // below tolerance: accepted, symmetrized away
    const HermitianOperator h(m);
    CHECK(hermiticity_residual(h.entries()) == 0.0);

    m(0, 1) += cxd(1e-3, 0);
    CHECK_THROWS_AS(HermitianOperator{m}, InvalidOperatorError);

    CHECK_THROWS_AS(HermitianOperator(Matrix(0, 0)), InvalidOperatorError);
    CHECK_THROWS_AS(HermitianOperator(Matrix::Zero(2, 3)), InvalidOperatorError);
}

TEST_CASE("eigendecompose sigma_z: ordering, projectors, residuals") {
    const SpectralMeasure e = eigendecompose(HermitianOperator(sigma_z()));
    REQUIRE(e.atoms.size() == 2);
    CHECK(e.atoms[0].value == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(e.atoms[1].value == doctest::Approx(1.0).epsilon(1e-12));
    Matrix p_minus = Matrix::Zero(2, 2);
    p_minus(1, 1) = 1;
    CHECK(max_abs_diff(e.atoms[0].projector, p_minus) <= 1e-12);
    CHECK(e.invariant_residual() <= 1e-10);
    CHECK(e.reconstruction_residual(sigma_z()) <= 1e-12);
    CHECK(max_abs_diff(e.reconstruct(), sigma_z()) <= 1e-12);
}

TEST_CASE("near-degenerate eigenvalues merge into one atom with mean value") {
    Matrix m = Matrix::Zero(3, 3);
    m(0, 0) = 1.0;
    m(1, 1) = 1.0 + 1e-12;  // within default tol 1e-8 * spectral radius
    m(2, 2) = 3.0;
    const SpectralMeasure e = eigendecompose(HermitianOperator(m));
    REQUIRE(e.atoms.size() == 2);
    CHECK(e.atoms[0].value == doctest::Approx(1.0 + 0.5e-12).epsilon(1e-12));
    CHECK(e.atoms[0].projector.trace().real() == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(e.invariant_residual() <= 1e-10);
}

TEST_CASE("grouping is single linkage: chains within tol collapse") {
    // gaps of 0.9*tol chain 0 .. 1.8*tol into one atom even though the
    // endpoints are farther than tol apart
    const double tol = 1e-6;
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = 0.0;
    m(1, 1) = 0.9 * tol;
    m(2, 2) = 1.8 * tol;
    m(3, 3) = 1.0;
    const SpectralMeasure e = eigendecompose(HermitianOperator(m), tol);
    REQUIRE(e.atoms.size() == 2);
    CHECK(e.atoms[0].projector.trace().real() == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("find_atom honors the match tolerance") {
    const SpectralMeasure e = eigendecompose(HermitianOperator(sigma_z()));
    auto hit = e.find_atom(1.0 + 1e-9, 1e-6);
    REQUIRE(hit.has_value());
    CHECK(e.atoms[*hit].value == doctest::Approx(1.0));
    CHECK_FALSE(e.find_atom(0.5, 1e-6).has_value());
}

TEST_CASE("joint spectral measure of a commuting pair") {
    Matrix a = Matrix::Zero(3, 3);
    a(2, 2) = 1.0;  // eigenvalues 0,0,1
    Matrix b = Matrix::Zero(3, 3);
    b(1, 1) = 1.0;
    b(2, 2) = 1.0;  // eigenvalues 0,1,1
    const SpectralMeasure ea = eigendecompose(HermitianOperator(a));
    const SpectralMeasure eb = eigendecompose(HermitianOperator(b));
    CHECK(strongly_commutes(ea, eb));

    const JointSpectralMeasure j = joint_spectral_measure({ea, eb});
    // (1,0) has projector P_{a=1} P_{b=0} = 0 and is dropped
    REQUIRE(j.atoms.size() == 3);
    CHECK(j.atoms[0].point == std::vector<double>{0.0, 0.0});
    CHECK(j.atoms[1].point == std::vector<double>{0.0, 1.0});
    CHECK(j.atoms[2].point == std::vector<double>{1.0, 1.0});
    Matrix sum = Matrix::Zero(3, 3);
    for (const auto& atom : j.atoms) sum += atom.projector;
    CHECK(max_abs_diff(sum, Matrix::Identity(3, 3)) <= 1e-12);
}

TEST_CASE("joint measure of a non-commuting pair is rejected") {
    const SpectralMeasure ex = eigendecompose(HermitianOperator(sigma_x()));
    const SpectralMeasure ez = eigendecompose(HermitianOperator(sigma_z()));
    CHECK_FALSE(strongly_commutes(ex, ez));
    CHECK_THROWS_AS(joint_spectral_measure({ex, ez}), CommutativityViolationError);
}

TEST_CASE("functional calculus reproduces polynomials of the operator") {
    const SpectralMeasure ez = eigendecompose(HermitianOperator(sigma_z()));
    const Matrix sq = functional_calculus([](double x) { return cxd(x * x, 0); }, ez);
    CHECK(max_abs_diff(sq, Matrix::Identity(2, 2)) <= 1e-12);

    Matrix a = Matrix::Zero(3, 3);
    a(2, 2) = 1.0;
    Matrix b = Matrix::Zero(3, 3);
    b(1, 1) = 1.0;
    b(2, 2) = 1.0;
    const JointSpectralMeasure j = joint_spectral_measure(
        {eigendecompose(HermitianOperator(a)), eigendecompose(HermitianOperator(b))});
    const Matrix s = functional_calculus(
        PointFunction([](const std::vector<double>& pt) { return cxd(pt[0] + pt[1], 0); }), j);
    CHECK(max_abs_diff(s, a + b) <= 1e-12);
}

TEST_CASE("born distribution of a diagonal state") {
    const SpectralMeasure ez = eigendecompose(HermitianOperator(sigma_z()));
    const JointSpectralMeasure j = joint_spectral_measure({ez});
    Matrix rho = Matrix::Zero(2, 2);
    rho(0, 0) = 0.3;
    rho(1, 1) = 0.7;
    const BornDistribution p = born_distribution(j, DensityOperator(rho));
    REQUIRE(p.atoms.size() == 2);
    CHECK(p.atoms[0].point == std::vector<double>{-1.0});
    CHECK(p.atoms[0].reported == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(p.atoms[1].reported == doctest::Approx(0.3).epsilon(1e-14));
}

TEST_CASE("density operator invariants") {
    Matrix neg = Matrix::Zero(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS(DensityOperator{neg}, InvalidOperatorError);

    CHECK_THROWS_AS(DensityOperator(0.5 * Matrix::Identity(3, 3)), InvalidOperatorError);

    Vector short_ket(2);
    short_ket << 0.9, 0.0;
    CHECK_THROWS_AS(DensityOperator::pure(short_ket), InvalidOperatorError);

    Vector ok(2);
    ok << std::sqrt(0.5), cxd(0, std::sqrt(0.5));
    const DensityOperator rho = DensityOperator::pure(ok);
    CHECK(rho.entries().trace().real() == doctest::Approx(1.0).epsilon(1e-12));
}
