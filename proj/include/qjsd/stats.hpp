#ifndef QJSD_STATS_HPP
#define QJSD_STATS_HPP

// Correlation functionals over a two-axis QJSD: the sesquilinear form
// <g,f> = sum g*(b) f(a) QJP(a,b), covariances, conditional expectations
// (affine in the ordering parameter), and pre/post-selected weak values.

#include <complex>
#include <functional>
#include <vector>

#include "qjsd/qjsd.hpp"
#include "qjsd/spectral.hpp"
#include "qjsd/transform.hpp"
#include "qjsd/types.hpp"

namespace qjsd {

using ScalarFunction = std::function<cxd(double)>;

// nearest-point lookup into a tabulation; points further than tol away from
// every tabulated abscissa raise DomainError("unmatched-support-point")
ScalarFunction tabulated_scalar(const TabulatedFunction& f, double tol = 1e-9);

// sum over the joint support of g*(b) f(a) Tr[W_{a,b} rho]
cxd quasi_correlation(const ScalarFunction& f, const ScalarFunction& g, const DiscreteQJSD& q,
                      const DensityOperator& rho);

// quasi_correlation minus the product of marginal means
cxd quantum_covariance(const ScalarFunction& f, const ScalarFunction& g, const DiscreteQJSD& q,
                       const DensityOperator& rho);

struct ConditionalExpectation {
    struct Atom {
        double b;
        cxd value;
        double probability;  // rho_B(b)
    };
    struct Excluded {
        double b;
        double probability;
    };
    std::vector<Atom> atoms;  // ascending in b
    std::vector<Excluded> excluded;
    Matrix operator_form;  // sum of value(b) * E_B(b) over retained atoms
};

// E[f(A)|B=b] = (sum_a f(a) QJP(a,b)) / rho_B(b), conditioning on the second
// axis; atoms with rho_B(b) <= threshold are excluded (reported, not NaN),
// and if nothing survives a DegenerateConditioningError is raised
ConditionalExpectation conditional_expectation(const ScalarFunction& f, const DiscreteQJSD& q,
                                               const DensityOperator& rho,
                                               double threshold = 1e-12);

// | sum_b g*(b) E[f(A)|B=b] rho_B(b)  -  quasi_correlation(f,g) |
double verify_correlation_preservation(const ScalarFunction& f, const ScalarFunction& g,
                                       const DiscreteQJSD& q, const DensityOperator& rho);

// Tr[E_B(b) A rho] / Tr[E_B(b) rho]; post-selection probability at or below
// threshold raises DegeneratePostSelectionError carrying the raw probability
cxd weak_value(const HermitianOperator& a, const HermitianOperator& b_obs, double b,
               const DensityOperator& rho, double threshold = 1e-12);

// (1+alpha)/2 * A_w + (1-alpha)/2 * conj(A_w)
cxd two_state_value(const HermitianOperator& a, const HermitianOperator& b_obs, double b,
                    const DensityOperator& rho, cxd alpha, double threshold = 1e-12);

}  // namespace qjsd

#endif
