#include "qjsd/qjsd.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "qjsd/errors.hpp"

namespace qjsd {

void HashingSpec::validate() const {
    if (n_axes < 1) throw SpecInvariantError("hashing needs at least one axis");
    if (terms.empty()) throw SpecInvariantError("hashing needs at least one term");
    cxd coeff_sum(0.0, 0.0);
    for (std::size_t t = 0; t < terms.size(); ++t) {
        const auto& term = terms[t];
        coeff_sum += term.coeff;
        std::vector<double> axis_sum(static_cast<std::size_t>(n_axes), 0.0);
        std::vector<bool> seen(static_cast<std::size_t>(n_axes), false);
        for (const auto& f : term.factors) {
            if (f.axis < 1 || f.axis > n_axes)
                throw SpecInvariantError("term " + std::to_string(t) + " uses axis " +
                                         std::to_string(f.axis) + " outside 1.." +
                                         std::to_string(n_axes));
            axis_sum[static_cast<std::size_t>(f.axis - 1)] += f.fraction;
            seen[static_cast<std::size_t>(f.axis - 1)] = true;
        }
        for (int k = 0; k < n_axes; ++k) {
            if (!seen[static_cast<std::size_t>(k)])
                throw SpecInvariantError("term " + std::to_string(t) + " misses axis " +
                                         std::to_string(k + 1));
            if (std::abs(axis_sum[static_cast<std::size_t>(k)] - 1.0) > 1e-12)
                throw SpecInvariantError("term " + std::to_string(t) + " fractions on axis " +
                                         std::to_string(k + 1) + " sum to " +
                                         std::to_string(axis_sum[static_cast<std::size_t>(k)]));
        }
    }
    if (std::abs(coeff_sum - cxd(1.0, 0.0)) > 1e-12)
        throw SpecInvariantError("term coefficients do not sum to 1");
}

HashingSpec alpha_hashing(cxd alpha) {
    HashingSpec spec;
    spec.n_axes = 2;
    const cxd c_ba = 0.5 * (cxd(1.0, 0.0) + alpha);
    const cxd c_ab = 0.5 * (cxd(1.0, 0.0) - alpha);
    if (c_ba != cxd(0.0, 0.0)) spec.terms.push_back({c_ba, {{2, 1.0}, {1, 1.0}}});
    if (c_ab != cxd(0.0, 0.0)) spec.terms.push_back({c_ab, {{1, 1.0}, {2, 1.0}}});
    return spec;
}

HashingSpec kappa_hashing(double kappa) {
    HashingSpec spec;
    spec.n_axes = 2;
    HashingTerm term;
    term.coeff = cxd(1.0, 0.0);
    const double left = 0.5 * (1.0 - kappa);
    const double right = 0.5 * (1.0 + kappa);
    if (left != 0.0) term.factors.push_back({1, left});
    term.factors.push_back({2, 1.0});
    if (right != 0.0) term.factors.push_back({1, right});
    spec.terms.push_back(std::move(term));
    return spec;
}

double DiscreteQJSD::normalization_residual() const {
    if (support.empty()) return 1.0;
    const int d = dim();
    Matrix sum = Matrix::Zero(d, d);
    for (const auto& a : support) sum += a.weight;
    return max_abs_diff(sum, Matrix::Identity(d, d));
}

cxd QJPDistribution::total() const {
    cxd s(0.0, 0.0);
    for (const auto& a : support) s += a.value;
    return s;
}

namespace {

// snap every coordinate to the mean of its single-linkage cluster (per axis)
void snap_coordinates(std::vector<DiscreteQJSD::Atom>& atoms, std::size_t n_axes,
                      double merge_tol) {
    for (std::size_t ax = 0; ax < n_axes; ++ax) {
        std::vector<double> vals;
        vals.reserve(atoms.size());
        for (const auto& a : atoms) vals.push_back(a.point[ax]);
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        // cluster the deduplicated sorted values; snapped[i] = cluster mean
        std::vector<double> snapped(vals.size());
        std::size_t start = 0;
        for (std::size_t i = 1; i <= vals.size(); ++i) {
            if (i == vals.size() || vals[i] - vals[i - 1] > merge_tol) {
                const double mean =
                    std::accumulate(vals.begin() + static_cast<std::ptrdiff_t>(start),
                                    vals.begin() + static_cast<std::ptrdiff_t>(i), 0.0) /
                    static_cast<double>(i - start);
                for (std::size_t k = start; k < i; ++k) snapped[k] = mean;
                start = i;
            }
        }
        for (auto& a : atoms) {
            const auto it = std::lower_bound(vals.begin(), vals.end(), a.point[ax]);
            a.point[ax] = snapped[static_cast<std::size_t>(it - vals.begin())];
        }
    }
}

}  // namespace

std::vector<DiscreteQJSD::Atom> canonicalize_support(std::vector<DiscreteQJSD::Atom> contributions,
                                                     double merge_tol, double prune_tol) {
    if (contributions.empty()) return contributions;
    const std::size_t n_axes = contributions.front().point.size();
    snap_coordinates(contributions, n_axes, merge_tol);
    std::stable_sort(contributions.begin(), contributions.end(),
                     [](const auto& a, const auto& b) { return lex_less(a.point, b.point); });
    std::vector<DiscreteQJSD::Atom> merged;
    for (auto& c : contributions) {
        if (!merged.empty() && merged.back().point == c.point)
            merged.back().weight += c.weight;
        else
            merged.push_back(std::move(c));
    }
    std::erase_if(merged, [prune_tol](const auto& a) { return max_abs(a.weight) <= prune_tol; });
    return merged;
}

namespace {

struct TermPlan {
    cxd coeff;
    std::vector<int> factor_axis;           // 0-based
    std::vector<double> factor_fraction;
    std::vector<std::size_t> factor_atoms;  // spectrum size per factor
    std::size_t products = 1;
};

DiscreteQJSD::Atom expand_product(const TermPlan& plan,
                                  const std::vector<SpectralMeasure>& spectra, int n_axes,
                                  std::size_t choice) {
    const std::size_t nf = plan.factor_axis.size();
    // decompose the choice index, leftmost factor slowest
    std::vector<std::size_t> digit(nf);
    for (std::size_t f = nf; f-- > 0;) {
        digit[f] = choice % plan.factor_atoms[f];
        choice /= plan.factor_atoms[f];
    }
    DiscreteQJSD::Atom atom;
    atom.point.assign(static_cast<std::size_t>(n_axes), 0.0);
    const auto& first =
        spectra[static_cast<std::size_t>(plan.factor_axis[0])].atoms[digit[0]];
    Matrix op = plan.coeff * first.projector;
    atom.point[static_cast<std::size_t>(plan.factor_axis[0])] +=
        plan.factor_fraction[0] * first.value;
    for (std::size_t f = 1; f < nf; ++f) {
        const auto& a = spectra[static_cast<std::size_t>(plan.factor_axis[f])].atoms[digit[f]];
        op = op * a.projector;
        atom.point[static_cast<std::size_t>(plan.factor_axis[f])] +=
            plan.factor_fraction[f] * a.value;
    }
    atom.weight = std::move(op);
    return atom;
}

}  // namespace

DiscreteQJSD build_qjsd(const HashingSpec& spec, const std::vector<HermitianOperator>& observables,
                        double merge_tol, std::size_t budget) {
    spec.validate();
    if (static_cast<int>(observables.size()) != spec.n_axes)
        throw DimensionMismatchError("hashing has " + std::to_string(spec.n_axes) +
                                     " axes but " + std::to_string(observables.size()) +
                                     " observables were given");
    const int d = observables.front().dim();
    for (const auto& o : observables)
        if (o.dim() != d) throw DimensionMismatchError("observables act on different dimensions");

    std::vector<SpectralMeasure> spectra;
    spectra.reserve(observables.size());
    double max_eig = 0.0;
    for (const auto& o : observables) {
        spectra.push_back(eigendecompose(o));
        for (const auto& a : spectra.back().atoms) max_eig = std::max(max_eig, std::abs(a.value));
    }
    if (merge_tol < 0.0) merge_tol = 1e-9 * (1.0 + max_eig);

    std::vector<TermPlan> plans;
    std::size_t total = 0;
    for (const auto& term : spec.terms) {
        TermPlan plan;
        plan.coeff = term.coeff;
        for (const auto& f : term.factors) {
            plan.factor_axis.push_back(f.axis - 1);
            plan.factor_fraction.push_back(f.fraction);
            const std::size_t na = spectra[static_cast<std::size_t>(f.axis - 1)].atoms.size();
            plan.factor_atoms.push_back(na);
            plan.products *= na;
        }
        total += plan.products;
        plans.push_back(std::move(plan));
    }
    if (total > budget)
        throw ResourceError("hashing expansion needs " + std::to_string(total) +
                            " projector products, over the budget of " + std::to_string(budget));

    // term offsets into the flattened product index space
    std::vector<std::size_t> offset(plans.size() + 1, 0);
    for (std::size_t t = 0; t < plans.size(); ++t) offset[t + 1] = offset[t] + plans[t].products;

    // fixed-size blocks expanded in parallel, concatenated in block order, so
    // the contribution list is identical for any worker count
    constexpr std::size_t kBlock = 256;
    const std::size_t n_blocks = (total + kBlock - 1) / kBlock;
    std::vector<std::vector<DiscreteQJSD::Atom>> block_out(n_blocks);

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(n_blocks); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
        const std::size_t hi = std::min(total, lo + kBlock);
        auto& out = block_out[static_cast<std::size_t>(b)];
        out.reserve(hi - lo);
        for (std::size_t g = lo; g < hi; ++g) {
            const std::size_t t =
                static_cast<std::size_t>(std::upper_bound(offset.begin(), offset.end(), g) -
                                         offset.begin()) - 1;
            out.push_back(expand_product(plans[t], spectra, spec.n_axes, g - offset[t]));
        }
    }

    std::vector<DiscreteQJSD::Atom> contributions;
    contributions.reserve(total);
    for (auto& blk : block_out)
        for (auto& a : blk) contributions.push_back(std::move(a));

    DiscreteQJSD q;
    q.n_axes = spec.n_axes;
    q.merge_tol = merge_tol;
    q.observables = std::move(spectra);
    q.support = canonicalize_support(std::move(contributions), merge_tol);
    const double res = q.normalization_residual();
    if (res > 1e-9)
        throw InvariantViolationError("QJSD weights do not sum to the identity", res);
    return q;
}

DiscreteQJSD marginal_qjsd(const DiscreteQJSD& q, int drop_axis) {
    if (drop_axis < 1 || drop_axis > q.n_axes)
        throw DomainError("axis-out-of-range", "axis " + std::to_string(drop_axis) +
                                                   " outside 1.." + std::to_string(q.n_axes));
    DiscreteQJSD out;
    out.n_axes = q.n_axes - 1;
    out.merge_tol = q.merge_tol;
    for (std::size_t ax = 0; ax < q.observables.size(); ++ax)
        if (static_cast<int>(ax) != drop_axis - 1) out.observables.push_back(q.observables[ax]);
    std::vector<DiscreteQJSD::Atom> contributions;
    contributions.reserve(q.support.size());
    for (const auto& a : q.support) {
        DiscreteQJSD::Atom c;
        for (std::size_t ax = 0; ax < a.point.size(); ++ax)
            if (static_cast<int>(ax) != drop_axis - 1) c.point.push_back(a.point[ax]);
        c.weight = a.weight;
        contributions.push_back(std::move(c));
    }
    if (out.n_axes == 0) {
        // all axes integrated out: single atom at the empty point
        DiscreteQJSD::Atom all;
        all.point = {};
        all.weight = Matrix::Zero(q.dim(), q.dim());
        for (const auto& c : contributions) all.weight += c.weight;
        out.support = {std::move(all)};
        return out;
    }
    out.support = canonicalize_support(std::move(contributions), q.merge_tol);
    return out;
}

DiscreteQJSD conjugate_qjsd(const DiscreteQJSD& q) {
    DiscreteQJSD out = q;
    for (auto& a : out.support) a.weight = a.weight.adjoint().eval();
    return out;
}

bool is_real_qjsd(const DiscreteQJSD& q, double tol) {
    for (const auto& a : q.support)
        if (hermiticity_residual(a.weight) > tol) return false;
    return true;
}

namespace {

// exp(-i theta A) through the spectral resolution
Matrix factor_exponential(const SpectralMeasure& spec, double theta) {
    const int d = spec.dim();
    Matrix u = Matrix::Zero(d, d);
    for (const auto& a : spec.atoms)
        u += std::exp(cxd(0.0, -theta * a.value)) * a.projector;
    return u;
}

}  // namespace

std::vector<cxd> characteristic_function(const HashingSpec& spec,
                                         const std::vector<HermitianOperator>& observables,
                                         const DensityOperator& rho,
                                         const std::vector<std::vector<double>>& s_grid) {
    spec.validate();
    if (static_cast<int>(observables.size()) != spec.n_axes)
        throw DimensionMismatchError("axis count mismatch");
    const int d = observables.front().dim();
    if (rho.dim() != d) throw DimensionMismatchError("state dimension mismatch");
    std::vector<SpectralMeasure> spectra;
    for (const auto& o : observables) spectra.push_back(eigendecompose(o));
    for (const auto& s : s_grid)
        if (static_cast<int>(s.size()) != spec.n_axes)
            throw DimensionMismatchError("grid point arity mismatch");

    std::vector<cxd> out(s_grid.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(s_grid.size()); ++i) {
        const auto& s = s_grid[static_cast<std::size_t>(i)];
        Matrix hashed = Matrix::Zero(d, d);
        for (const auto& term : spec.terms) {
            Matrix prod = Matrix::Identity(d, d);
            for (const auto& f : term.factors)
                prod = prod * factor_exponential(spectra[static_cast<std::size_t>(f.axis - 1)],
                                                 f.fraction *
                                                     s[static_cast<std::size_t>(f.axis - 1)]);
            hashed += term.coeff * prod;
        }
        out[static_cast<std::size_t>(i)] = trace_product(hashed, rho.entries());
    }
    return out;
}

std::vector<cxd> trotter_characteristic(const HermitianOperator& a, const HermitianOperator& b,
                                        const DensityOperator& rho,
                                        const std::vector<std::vector<double>>& s_grid, int n,
                                        bool exact) {
    if (n < 1) throw DomainError("invalid-trotter-order", "N must be >= 1");
    const int d = a.dim();
    if (b.dim() != d || rho.dim() != d) throw DimensionMismatchError("dimension mismatch");
    const SpectralMeasure sa = eigendecompose(a);
    const SpectralMeasure sb = eigendecompose(b);
    for (const auto& st : s_grid)
        if (st.size() != 2) throw DimensionMismatchError("grid points must be (s, t) pairs");

    std::vector<cxd> out(s_grid.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(s_grid.size()); ++i) {
        const auto& st = s_grid[static_cast<std::size_t>(i)];
        Matrix u;
        if (exact) {
            const Matrix h = st[0] * a.entries() + st[1] * b.entries();
            Eigen::SelfAdjointEigenSolver<Matrix> es(h);
            const RealVector& vals = es.eigenvalues();
            const Matrix& vecs = es.eigenvectors();
            Vector phases(d);
            for (int k = 0; k < d; ++k) phases[k] = std::exp(cxd(0.0, -vals[k]));
            u = vecs * phases.asDiagonal() * vecs.adjoint();
        } else {
            const Matrix step = factor_exponential(sa, st[0] / n) *
                                factor_exponential(sb, st[1] / n);
            u = Matrix::Identity(d, d);
            for (int k = 0; k < n; ++k) u = u * step;
        }
        out[static_cast<std::size_t>(i)] = trace_product(u, rho.entries());
    }
    return out;
}

}  // namespace qjsd
