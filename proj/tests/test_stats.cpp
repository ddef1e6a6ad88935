#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "qjsd/errors.hpp"
#include "qjsd/qjsd.hpp"
#include "qjsd/stats.hpp"

using namespace qjsd;
using testutil::sigma_x;
using testutil::sigma_z;

namespace {

const ScalarFunction id_fn = [](double x) { return cxd(x, 0); };

}  // namespace

TEST_CASE("tabulated scalar lookup") {
    TabulatedFunction t;
    t.points = {{-1.0}, {1.0}};
    t.values = {cxd(3, 0), cxd(-2, 1)};
    const ScalarFunction f = tabulated_scalar(t);
    CHECK(f(-1.0) == cxd(3, 0));
    CHECK(f(1.0 + 1e-10) == cxd(-2, 1));  // within the default tolerance
    CHECK_THROWS_AS(f(1.5), DomainError);

    TabulatedFunction pair;
    pair.points = {{1.0, 2.0}};
    pair.values = {cxd(0, 0)};
    CHECK_THROWS_AS(tabulated_scalar(pair)(1.0), DimensionMismatchError);
}

TEST_CASE("covariance of (sigma_x, sigma_z) in a circular state is purely imaginary") {
    // <A> = <B> = {A,B} = 0 and <[B,A]/2i> = <sigma_y> = 1 for (|0>+i|1>)/sqrt2,
    // so the KD covariance reduces to its antisymmetric part: exactly i
    const DiscreteQJSD q = testutil::kd_xz();
    const DensityOperator rho = testutil::ket_state(cxd(1, 0), cxd(0, 1));
    CHECK(std::abs(quantum_covariance(id_fn, id_fn, q, rho) - cxd(0, 1)) <= 1e-12);
    CHECK(std::abs(quasi_correlation(id_fn, id_fn, q, rho) - cxd(0, 1)) <= 1e-12);
}

TEST_CASE("correlation functionals require a two-axis distribution") {
    HashingSpec single;
    single.n_axes = 1;
    single.terms = {{cxd(1, 0), {{1, 1.0}}}};
    const DiscreteQJSD qz = build_qjsd(single, {HermitianOperator(sigma_z())});
    const DensityOperator rho = testutil::ket_state(cxd(1, 0), cxd(0, 1));
    CHECK_THROWS_AS(quasi_correlation(id_fn, id_fn, qz, rho), DimensionMismatchError);
}

TEST_CASE("non-finite function values are rejected") {
    const DiscreteQJSD q = testutil::kd_xz();
    const DensityOperator rho = testutil::ket_state(cxd(1, 0), cxd(0, 1));
    const ScalarFunction bad = [](double) {
        return cxd(std::numeric_limits<double>::quiet_NaN(), 0);
    };
    CHECK_THROWS_AS(quasi_correlation(bad, id_fn, q, rho), DomainError);
}

TEST_CASE("conditional expectation: atoms, exclusions, operator form") {
    const DiscreteQJSD q = testutil::kd_xz();

    SUBCASE("pole state: one branch has zero probability") {
        Matrix m = Matrix::Zero(2, 2);
        m(0, 0) = 1.0;
        const ConditionalExpectation ce = conditional_expectation(id_fn, q, DensityOperator(m));
        REQUIRE(ce.atoms.size() == 1);
        CHECK(ce.atoms[0].b == doctest::Approx(1.0));
        CHECK(std::abs(ce.atoms[0].value) <= 1e-12);
        CHECK(ce.atoms[0].probability == doctest::Approx(1.0).epsilon(1e-12));
        REQUIRE(ce.excluded.size() == 1);
        CHECK(ce.excluded[0].b == doctest::Approx(-1.0));
        CHECK(std::abs(ce.excluded[0].probability) <= 1e-12);
        CHECK(max_abs(ce.operator_form) <= 1e-12);

        CHECK_THROWS_AS(conditional_expectation(id_fn, q, DensityOperator(m), 2.0),
                        DegenerateConditioningError);
    }

    SUBCASE("circular state: complex conditional values, i*sigma_z operator form") {
        // E[A|B=b] = Tr[E_B(b) A rho]/Tr[E_B(b) rho] at the KD ordering: +-i here
        const DensityOperator rho = testutil::ket_state(cxd(1, 0), cxd(0, 1));
        const ConditionalExpectation ce = conditional_expectation(id_fn, q, rho);
        REQUIRE(ce.atoms.size() == 2);
        CHECK(std::abs(ce.atoms[0].value - cxd(0, -1)) <= 1e-12);
        CHECK(std::abs(ce.atoms[1].value - cxd(0, 1)) <= 1e-12);
        CHECK(ce.atoms[0].probability == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(ce.excluded.empty());

        Matrix i_sz = cxd(0, 1) * sigma_z();
        CHECK(max_abs_diff(ce.operator_form, i_sz) <= 1e-12);

        // tower property: sum over branches recovers the unconditional mean
        cxd tower(0, 0);
        for (const auto& atom : ce.atoms) tower += atom.value * atom.probability;
        CHECK(std::abs(tower - trace_product(sigma_x(), rho.entries())) <= 1e-12);

        const ScalarFunction g = [](double b) { return cxd(b * b - 0.5 * b, 0); };
        CHECK(verify_correlation_preservation(id_fn, g, q, rho) <= 1e-12);
    }
}

TEST_CASE("weak values: anomalous amplification and degenerate guards") {
    const HermitianOperator a{sigma_x()}, b{sigma_z()};

    const DensityOperator nearly_up = testutil::ket_state(cxd(1, 0), cxd(0.1, 0));
    const cxd w = weak_value(a, b, -1.0, nearly_up);
    CHECK(std::abs(w - cxd(10, 0)) <= 1e-9);  // outside the eigenvalue range [-1, 1]

    Matrix up = Matrix::Zero(2, 2);
    up(0, 0) = 1.0;
    bool threw = false;
    try {
        weak_value(a, b, -1.0, DensityOperator(up));
    } catch (const DegeneratePostSelectionError& e) {
        threw = true;
        CHECK(e.raw_probability <= 1e-12);
        CHECK(e.code() == "degenerate-post-selection");
    }
    CHECK(threw);

    CHECK_THROWS_AS(weak_value(a, b, 0.5, nearly_up), DomainError);
}

TEST_CASE("two-state value interpolates between the weak value and its conjugate") {
    const HermitianOperator a{sigma_x()}, b{sigma_z()};
    const DensityOperator rho = testutil::ket_state(cxd(1, 0), cxd(0, 1));
    // A_w = i for post-selection on sigma_z = +1
    CHECK(std::abs(two_state_value(a, b, 1.0, rho, cxd(1, 0)) - cxd(0, 1)) <= 1e-12);
    CHECK(std::abs(two_state_value(a, b, 1.0, rho, cxd(-1, 0)) - cxd(0, -1)) <= 1e-12);
    CHECK(std::abs(two_state_value(a, b, 1.0, rho, cxd(0, 0))) <= 1e-12);
    CHECK(std::abs(two_state_value(a, b, 1.0, rho, cxd(0, 1)) - cxd(-1, 0)) <= 1e-12);
}

TEST_CASE("conditional expectation agrees with the direct trace ratio") {
    // same circular state; the alpha=1 conditional value at b=+1 must equal
    // T = Tr[E_B(+1) A rho] / Tr[E_B(+1) rho] = i, matching the weak value
    const DiscreteQJSD q = testutil::kd_xz();
    const DensityOperator rho = testutil::ket_state(cxd(1, 0), cxd(0, 1));
    const ConditionalExpectation ce = conditional_expectation(id_fn, q, rho);
    const cxd direct = weak_value(HermitianOperator(sigma_x()), HermitianOperator(sigma_z()),
                                  1.0, rho);
    CHECK(std::abs(ce.atoms[1].value - direct) <= 1e-12);
}
