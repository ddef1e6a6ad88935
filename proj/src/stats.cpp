#include "qjsd/stats.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "qjsd/errors.hpp"

namespace qjsd {

namespace {

cxd checked(const ScalarFunction& f, double x) {
    const cxd v = f(x);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw DomainError("non-finite-function",
                          "function value at " + std::to_string(x) + " is not finite");
    return v;
}

void require_pair(const DiscreteQJSD& q, const DensityOperator& rho) {
    if (q.n_axes != 2)
        throw DimensionMismatchError("correlation functionals need a two-axis QJSD, got n_axes=" +
                                     std::to_string(q.n_axes));
    if (!q.support.empty() && q.dim() != rho.dim())
        throw DimensionMismatchError("state dimension does not match QJSD weights");
}

}  // namespace

ScalarFunction tabulated_scalar(const TabulatedFunction& f, double tol) {
    for (const auto& p : f.points)
        if (p.size() != 1)
            throw DimensionMismatchError("scalar tabulation needs one-coordinate points");
    return [f, tol](double x) -> cxd {
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < f.points.size(); ++i) {
            const double d = std::abs(f.points[i][0] - x);
            if (d < best_d) {
                best_d = d;
                best = i;
            }
        }
        if (!(best_d <= tol))
            throw DomainError("unmatched-support-point",
                              "no tabulated point within tolerance of " + std::to_string(x));
        return f.values[best];
    };
}

cxd quasi_correlation(const ScalarFunction& f, const ScalarFunction& g, const DiscreteQJSD& q,
                      const DensityOperator& rho) {
    require_pair(q, rho);
    cxd acc(0.0, 0.0);
    for (const auto& atom : q.support) {
        const cxd qjp = trace_product(atom.weight, rho.entries());
        acc += std::conj(checked(g, atom.point[1])) * checked(f, atom.point[0]) * qjp;
    }
    return acc;
}

cxd quantum_covariance(const ScalarFunction& f, const ScalarFunction& g, const DiscreteQJSD& q,
                       const DensityOperator& rho) {
    require_pair(q, rho);
    cxd corr(0.0, 0.0), mean_f(0.0, 0.0), mean_g(0.0, 0.0);
    for (const auto& atom : q.support) {
        const cxd qjp = trace_product(atom.weight, rho.entries());
        const cxd fv = checked(f, atom.point[0]);
        const cxd gv = checked(g, atom.point[1]);
        corr += std::conj(gv) * fv * qjp;
        mean_f += fv * qjp;
        mean_g += gv * qjp;
    }
    return corr - std::conj(mean_g) * mean_f;
}

ConditionalExpectation conditional_expectation(const ScalarFunction& f, const DiscreteQJSD& q,
                                               const DensityOperator& rho, double threshold) {
    require_pair(q, rho);
    if (q.support.empty()) throw DegenerateConditioningError("empty QJSD support");

    struct Group {
        Matrix projector;  // sum_a W_{a,b} = E_B(b)
        cxd numerator{0.0, 0.0};
    };
    std::map<double, Group> groups;  // canonical support coordinates repeat exactly
    const int d = q.dim();
    for (const auto& atom : q.support) {
        auto [it, inserted] = groups.try_emplace(atom.point[1]);
        if (inserted) it->second.projector = Matrix::Zero(d, d);
        it->second.projector += atom.weight;
        it->second.numerator += checked(f, atom.point[0]) * trace_product(atom.weight, rho.entries());
    }

    ConditionalExpectation out;
    out.operator_form = Matrix::Zero(d, d);
    for (const auto& [b, grp] : groups) {
        const double prob = trace_product(grp.projector, rho.entries()).real();
        if (prob <= threshold) {
            out.excluded.push_back({b, prob});
            continue;
        }
        const cxd value = grp.numerator / prob;
        out.atoms.push_back({b, value, prob});
        out.operator_form += value * grp.projector;
    }
    if (out.atoms.empty())
        throw DegenerateConditioningError("every conditioning outcome fell below the threshold");
    return out;
}

double verify_correlation_preservation(const ScalarFunction& f, const ScalarFunction& g,
                                       const DiscreteQJSD& q, const DensityOperator& rho) {
    const ConditionalExpectation ce = conditional_expectation(f, q, rho);
    cxd via_conditional(0.0, 0.0);
    for (const auto& atom : ce.atoms)
        via_conditional += std::conj(checked(g, atom.b)) * atom.value * atom.probability;
    return std::abs(via_conditional - quasi_correlation(f, g, q, rho));
}

cxd weak_value(const HermitianOperator& a, const HermitianOperator& b_obs, double b,
               const DensityOperator& rho, double threshold) {
    if (a.dim() != b_obs.dim() || a.dim() != rho.dim())
        throw DimensionMismatchError("operator and state dimensions differ");
    const SpectralMeasure eb = eigendecompose(b_obs);
    double scale = 0.0;
    for (const auto& atom : eb.atoms) scale = std::max(scale, std::abs(atom.value));
    const auto idx = eb.find_atom(b, 1e-6 * (1.0 + scale));
    if (!idx)
        throw DomainError("unknown-outcome",
                          std::to_string(b) + " is not an eigenvalue of the post-selection observable");
    const Matrix& proj = eb.atoms[*idx].projector;
    const double prob = trace_product(proj, rho.entries()).real();
    if (prob <= threshold)
        throw DegeneratePostSelectionError(
            "post-selection probability " + std::to_string(prob) + " at or below threshold", prob);
    const cxd numerator = (proj * a.entries() * rho.entries()).trace();
    return numerator / prob;
}

cxd two_state_value(const HermitianOperator& a, const HermitianOperator& b_obs, double b,
                    const DensityOperator& rho, cxd alpha, double threshold) {
    const cxd w = weak_value(a, b_obs, b, rho, threshold);
    return 0.5 * (1.0 + alpha) * w + 0.5 * (1.0 - alpha) * std::conj(w);
}

}  // namespace qjsd
