#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "qjsd/errors.hpp"
#include "qjsd/qjsd.hpp"
#include "qjsd/spectral.hpp"

using namespace qjsd;
using testutil::sigma_x;
using testutil::sigma_z;

namespace {

HermitianOperator diag_op(std::vector<double> d) {
    Matrix m = Matrix::Zero(static_cast<int>(d.size()), static_cast<int>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<int>(i), static_cast<int>(i)) = d[i];
    return HermitianOperator(m);
}

}  // namespace

TEST_CASE("hashing spec validation") {
    HashingSpec spec = alpha_hashing(cxd(0, 0));
    CHECK_NOTHROW(spec.validate());

    HashingSpec bad_fraction = spec;
    bad_fraction.terms[0].factors[0].fraction = 0.9;
    CHECK_THROWS_AS(bad_fraction.validate(), SpecInvariantError);

    HashingSpec bad_coeff = spec;
    bad_coeff.terms[0].coeff = 0.4;  // coefficients now sum to 0.9
    CHECK_THROWS_AS(bad_coeff.validate(), SpecInvariantError);

    HashingSpec missing_axis = spec;
    missing_axis.terms[0].factors.erase(missing_axis.terms[0].factors.begin());
    CHECK_THROWS_AS(missing_axis.validate(), SpecInvariantError);

    HashingSpec bad_axis = spec;
    bad_axis.terms[0].factors[0].axis = 5;
    CHECK_THROWS_AS(bad_axis.validate(), SpecInvariantError);
}

TEST_CASE("hashing families: structure and degenerate members") {
    const HashingSpec kd = alpha_hashing(cxd(1, 0));
    REQUIRE(kd.terms.size() == 1);  // the zero-coefficient term is dropped
    REQUIRE(kd.terms[0].factors.size() == 2);
    CHECK(kd.terms[0].factors[0].axis == 2);
    CHECK(kd.terms[0].factors[1].axis == 1);

    const HashingSpec anti = alpha_hashing(cxd(-1, 0));
    REQUIRE(anti.terms.size() == 1);
    CHECK(anti.terms[0].factors[0].axis == 1);

    const HashingSpec mh = alpha_hashing(cxd(0, 0));
    REQUIRE(mh.terms.size() == 2);
    CHECK(mh.terms[0].coeff == cxd(0.5, 0));
    CHECK(mh.terms[1].coeff == cxd(0.5, 0));

    const HashingSpec k0 = kappa_hashing(0.5);
    REQUIRE(k0.terms.size() == 1);
    REQUIRE(k0.terms[0].factors.size() == 3);
    CHECK(k0.terms[0].factors[0].fraction == 0.25);
    CHECK(k0.terms[0].factors[2].fraction == 0.75);

    // kappa = 1 drops its zero-fraction leading factor and coincides with KD
    const HashingSpec k1 = kappa_hashing(1.0);
    REQUIRE(k1.terms[0].factors.size() == 2);
    CHECK(k1.terms[0].factors[0].axis == 2);
}

TEST_CASE("KD expansion of (sigma_x, sigma_z): support and frozen weight") {
    const DiscreteQJSD q = testutil::kd_xz();
    REQUIRE(q.n_axes == 2);
    REQUIRE(q.support.size() == 4);
    CHECK(testutil::point_near(q.support[0].point, {-1.0, -1.0}));
    CHECK(testutil::point_near(q.support[3].point, {1.0, 1.0}));

    // P_z(+1) P_x(+1) = [[1,0],[0,0]] * 0.5[[1,1],[1,1]] = 0.5[[1,1],[0,0]]
    Matrix expected(2, 2);
    expected << 0.5, 0.5, 0, 0;
    CHECK(max_abs_diff(q.support[3].weight, expected) <= 1e-15);

    CHECK(q.normalization_residual() <= 1e-12);
    REQUIRE(q.observables.size() == 2);
    CHECK(q.observables[0].atoms.size() == 2);
}

TEST_CASE("colliding coordinate sums merge; zero products are pruned") {
    // kappa=0 splits axis 1 into two half-fraction factors, so the mixed
    // products (0,2) and (2,0) both land at coordinate 1 and merge
    const HashingSpec spec = kappa_hashing(0.0);
    const DiscreteQJSD q =
        build_qjsd(spec, {diag_op({0.0, 2.0}), HermitianOperator(sigma_x())});
    REQUIRE(q.support.size() == 6);  // a in {0,1,2} x b in {-1,1}
    Matrix half_sx(2, 2);
    half_sx << 0, 0.5, 0.5, 0;
    bool found = false;
    for (const auto& atom : q.support)
        if (testutil::point_near(atom.point, {1.0, 1.0})) {
            found = true;
            CHECK(max_abs_diff(atom.weight, half_sx) <= 1e-15);
        }
    CHECK(found);
    CHECK(q.normalization_residual() <= 1e-12);

    // with a commuting second observable those mixed products vanish entirely
    const DiscreteQJSD qc =
        build_qjsd(spec, {diag_op({0.0, 2.0}), diag_op({5.0, 7.0})});
    REQUIRE(qc.support.size() == 2);
    CHECK(testutil::point_near(qc.support[0].point, {0.0, 5.0}));
    CHECK(testutil::point_near(qc.support[1].point, {2.0, 7.0}));
}

TEST_CASE("expansion honors the product budget") {
    const std::vector<HermitianOperator> obs{HermitianOperator(sigma_x()),
                                             HermitianOperator(sigma_z())};
    CHECK_THROWS_AS(build_qjsd(alpha_hashing(cxd(0, 0)), obs, -1.0, 2), ResourceError);
}

TEST_CASE("observable arity and dimensions are checked") {
    CHECK_THROWS_AS(build_qjsd(alpha_hashing(cxd(1, 0)), {HermitianOperator(sigma_x())}),
                    DimensionMismatchError);
    CHECK_THROWS_AS(build_qjsd(alpha_hashing(cxd(1, 0)),
                               {HermitianOperator(sigma_x()), diag_op({1, 2, 3})}),
                    DimensionMismatchError);
}

TEST_CASE("marginals reclaim the single-axis spectral measures") {
    const DiscreteQJSD q = testutil::kd_xz();
    const DiscreteQJSD qa = marginal_qjsd(q, 2);  // integrate out sigma_z
    REQUIRE(qa.support.size() == 2);
    const SpectralMeasure ex = eigendecompose(HermitianOperator(sigma_x()));
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(qa.support[i].point[0] == doctest::Approx(ex.atoms[i].value).epsilon(1e-12));
        CHECK(max_abs_diff(qa.support[i].weight, ex.atoms[i].projector) <= 1e-12);
    }

    const DiscreteQJSD qb = marginal_qjsd(q, 1);
    const SpectralMeasure ez = eigendecompose(HermitianOperator(sigma_z()));
    for (std::size_t i = 0; i < 2; ++i)
        CHECK(max_abs_diff(qb.support[i].weight, ez.atoms[i].projector) <= 1e-12);

    CHECK_THROWS_AS(marginal_qjsd(q, 3), DomainError);
}

TEST_CASE("conjugation swaps the exponential order") {
    const DiscreteQJSD kd = testutil::kd_xz();
    const DiscreteQJSD conj = conjugate_qjsd(kd);
    const DiscreteQJSD anti =
        build_qjsd(alpha_hashing(cxd(-1, 0)), {HermitianOperator(sigma_x()),
                                               HermitianOperator(sigma_z())});
    REQUIRE(conj.support.size() == anti.support.size());
    for (std::size_t i = 0; i < conj.support.size(); ++i) {
        CHECK(conj.support[i].point == anti.support[i].point);
        CHECK(max_abs_diff(conj.support[i].weight, anti.support[i].weight) <= 1e-15);
    }
}

TEST_CASE("realness of the weight family distinguishes MH from KD") {
    const std::vector<HermitianOperator> obs{HermitianOperator(sigma_x()),
                                             HermitianOperator(sigma_z())};
    CHECK(is_real_qjsd(build_qjsd(alpha_hashing(cxd(0, 0)), obs), 1e-12));
    CHECK_FALSE(is_real_qjsd(build_qjsd(alpha_hashing(cxd(1, 0)), obs), 1e-12));
}

TEST_CASE("expansion is the inverse Fourier transform of the characteristic function") {
    const std::vector<HermitianOperator> obs{HermitianOperator(sigma_x()),
                                             HermitianOperator(sigma_z())};
    const HashingSpec spec = alpha_hashing(cxd(0.3, 0.7));
    const DiscreteQJSD q = build_qjsd(spec, obs);
    const DensityOperator rho = testutil::ket_state(cxd(1, 0), cxd(0.2, 0.4));

    const std::vector<std::vector<double>> grid{{0.0, 0.0}, {0.7, -0.3}, {-1.1, 2.4}};
    const std::vector<cxd> chi = characteristic_function(spec, obs, rho, grid);
    REQUIRE(chi.size() == grid.size());
    CHECK(std::abs(chi[0] - cxd(1, 0)) <= 1e-12);  // #(0) = Id

    for (std::size_t g = 0; g < grid.size(); ++g) {
        cxd direct(0, 0);
        for (const auto& atom : q.support) {
            const double phase =
                grid[g][0] * atom.point[0] + grid[g][1] * atom.point[1];
            direct += std::exp(cxd(0, -phase)) * trace_product(atom.weight, rho.entries());
        }
        CHECK(std::abs(direct - chi[g]) <= 1e-12);
    }
}

TEST_CASE("exact mixed characteristic function matches a direct exponential") {
    const HermitianOperator a{sigma_x()}, b{sigma_z()};
    const DensityOperator rho = testutil::ket_state(cxd(0.6, 0), cxd(0, 0.8));
    const double s = 0.9, t = -0.4;

    const std::vector<cxd> exact =
        trotter_characteristic(a, b, rho, {{s, t}}, 1, /*exact=*/true);

    const Matrix h = s * a.entries() + t * b.entries();
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    Matrix u = es.eigenvectors();
    Matrix e = Matrix::Zero(2, 2);
    for (int i = 0; i < 2; ++i) e(i, i) = std::exp(cxd(0, -es.eigenvalues()[i]));
    const cxd direct = trace_product(u * e * u.adjoint(), rho.entries());
    CHECK(std::abs(exact[0] - direct) <= 1e-12);

    // the product approximant converges toward the exact value
    const double e8 = std::abs(trotter_characteristic(a, b, rho, {{s, t}}, 8)[0] - direct);
    const double e64 = std::abs(trotter_characteristic(a, b, rho, {{s, t}}, 64)[0] - direct);
    CHECK(e64 < e8);
    CHECK_THROWS_AS(trotter_characteristic(a, b, rho, {{s, t}}, 0), DomainError);
}

TEST_CASE("rebuilding with the same inputs is bitwise reproducible") {
    const DiscreteQJSD q1 = testutil::kd_xz();
    const DiscreteQJSD q2 = testutil::kd_xz();
    REQUIRE(q1.support.size() == q2.support.size());
    for (std::size_t i = 0; i < q1.support.size(); ++i) {
        CHECK(q1.support[i].point == q2.support[i].point);
        CHECK(max_abs_diff(q1.support[i].weight, q2.support[i].weight) == 0.0);
    }
}
