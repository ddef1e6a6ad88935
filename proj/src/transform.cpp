#include "qjsd/transform.hpp"

#include <algorithm>
#include <cmath>

#include "qjsd/errors.hpp"

namespace qjsd {

std::vector<cxd> align_tabulated(const TabulatedFunction& f, const DiscreteQJSD& q) {
    if (f.points.size() != f.values.size())
        throw SchemaError("/values", "tabulated function points/values length mismatch");
    std::vector<cxd> out(q.support.size());
    const double tol = std::max(q.merge_tol, 1e-9);
    for (std::size_t i = 0; i < q.support.size(); ++i) {
        const auto& pt = q.support[i].point;
        std::size_t best = f.points.size();
        double best_dist = tol;
        for (std::size_t j = 0; j < f.points.size(); ++j) {
            if (f.points[j].size() != pt.size()) continue;
            double dist = 0.0;
            for (std::size_t k = 0; k < pt.size(); ++k)
                dist = std::max(dist, std::abs(f.points[j][k] - pt[k]));
            if (dist <= best_dist) {
                best = j;
                best_dist = dist;
            }
        }
        if (best == f.points.size())
            throw DomainError("unmatched-support-point",
                              "tabulated function has no value for a support point");
        out[i] = f.values[best];
    }
    return out;
}

Matrix quantise(const PointFunction& f, const DiscreteQJSD& q) {
    if (q.support.empty()) throw DomainError("empty-support", "QJSD has no support");
    const int d = q.dim();
    Matrix sum = Matrix::Zero(d, d);
    for (const auto& a : q.support) {
        const cxd v = f(a.point);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw DomainError("non-finite-function",
                              "function value is not finite on a support point");
        sum += v * a.weight;
    }
    return sum;
}

Matrix quantise(const std::vector<cxd>& aligned_values, const DiscreteQJSD& q) {
    if (aligned_values.size() != q.support.size())
        throw DimensionMismatchError("aligned values do not match support size");
    const int d = q.dim();
    Matrix sum = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < q.support.size(); ++i)
        sum += aligned_values[i] * q.support[i].weight;
    return sum;
}

QJPDistribution quasi_classicalise(const DiscreteQJSD& q, const DensityOperator& rho) {
    if (q.dim() != rho.dim())
        throw DimensionMismatchError("QJSD and state act on different dimensions");
    QJPDistribution out;
    out.support.reserve(q.support.size());
    for (const auto& a : q.support)
        out.support.push_back({a.point, trace_product(a.weight, rho.entries())});
    const cxd total = out.total();
    if (std::abs(total - cxd(1.0, 0.0)) > 1e-9)
        throw InvariantViolationError("QJP values do not sum to 1",
                                      std::abs(total - cxd(1.0, 0.0)));
    return out;
}

double verify_adjointness(const PointFunction& f, const DiscreteQJSD& q,
                          const DensityOperator& rho) {
    const cxd quantum = trace_product(quantise(f, q), rho.entries());
    const QJPDistribution qjp = quasi_classicalise(q, rho);
    cxd classical(0.0, 0.0);
    for (const auto& a : qjp.support) classical += f(a.point) * a.value;
    return std::abs(quantum - classical);
}

DiscreteQJSD affine_transform(const DiscreteQJSD& q, const RealMatrix& t, const RealVector& b) {
    if (t.rows() != q.n_axes || t.cols() != q.n_axes || b.size() != q.n_axes)
        throw DimensionMismatchError("affine map shape does not match axis count");
    std::vector<DiscreteQJSD::Atom> contributions;
    contributions.reserve(q.support.size());
    double max_coord = 0.0;
    for (const auto& a : q.support) {
        RealVector p(q.n_axes);
        for (int k = 0; k < q.n_axes; ++k) p[k] = a.point[static_cast<std::size_t>(k)];
        RealVector mapped = t * p + b;
        DiscreteQJSD::Atom c;
        c.point.resize(static_cast<std::size_t>(q.n_axes));
        for (int k = 0; k < q.n_axes; ++k) {
            c.point[static_cast<std::size_t>(k)] = mapped[k];
            max_coord = std::max(max_coord, std::abs(mapped[k]));
        }
        c.weight = a.weight;
        contributions.push_back(std::move(c));
    }
    DiscreteQJSD out;
    out.n_axes = q.n_axes;
    out.merge_tol = 1e-9 * (1.0 + max_coord);
    // axes no longer correspond to the source observables
    out.observables.clear();
    out.support = canonicalize_support(std::move(contributions), out.merge_tol,
                                       /*prune_tol=*/0.0);
    return out;
}

std::size_t RasterGrid::size() const {
    std::size_t s = 1;
    for (int n : shape) s *= static_cast<std::size_t>(n);
    return s;
}

double RasterGrid::cell_volume() const {
    double v = 1.0;
    for (double s : step) v *= s;
    return v;
}

cxd RasterGrid::total_mass() const {
    cxd s(0.0, 0.0);
    for (const auto& z : values) s += z;
    return s * cell_volume();
}

RasterGrid rasterize(const QJPDistribution& p, const std::vector<double>& origin,
                     const std::vector<double>& step, const std::vector<int>& shape) {
    const std::size_t n = shape.size();
    if (n < 1 || n > 2)
        throw DomainError("unsupported-arity", "rasterization supports 1 or 2 axes");
    if (origin.size() != n || step.size() != n)
        throw DimensionMismatchError("raster metadata arity mismatch");
    RasterGrid g;
    g.origin = origin;
    g.step = step;
    g.shape = shape;
    g.values.assign(g.size(), cxd(0.0, 0.0));
    const double vol = g.cell_volume();
    for (const auto& atom : p.support) {
        if (atom.point.size() != n)
            throw DimensionMismatchError("distribution arity does not match raster");
        std::size_t flat = 0;
        for (std::size_t k = 0; k < n; ++k) {
            const double x = (atom.point[k] - origin[k]) / step[k];
            const long idx = std::lround(x);
            if (idx < 0 || idx >= shape[k])
                throw GridMismatchError("support point falls outside the raster grid");
            flat = flat * static_cast<std::size_t>(shape[k]) + static_cast<std::size_t>(idx);
        }
        // store densities: point mass spread over one cell
        g.values[flat] += atom.value / vol;
    }
    return g;
}

double kernel_mass_residual(const RasterGrid& h) {
    return std::abs(h.total_mass() - cxd(1.0, 0.0));
}

RasterGrid convolve_distribution(const RasterGrid& h, const RasterGrid& p) {
    const std::size_t n = p.shape.size();
    if (h.shape.size() != n) throw DimensionMismatchError("kernel arity mismatch");
    for (std::size_t k = 0; k < n; ++k)
        if (std::abs(h.step[k] - p.step[k]) > 1e-12 * (1.0 + std::abs(p.step[k])))
            throw GridMismatchError("kernel grid step does not match distribution grid");
    const double residual = kernel_mass_residual(h);
    if (residual > 1e-6)
        throw DomainError("kernel-mass",
                          "kernel mass deviates from 1 by " + std::to_string(residual));

    RasterGrid out;
    out.origin = p.origin;
    out.step = p.step;
    out.shape = p.shape;
    out.values.assign(p.size(), cxd(0.0, 0.0));
    const double vol = h.cell_volume();

    const int rows = p.shape[0];
    const int cols = n == 2 ? p.shape[1] : 1;
    const int hrows = h.shape[0];
    const int hcols = n == 2 ? h.shape[1] : 1;
    // out(x) = sum_y p(y) h(x - y) vol; index offset of h origin in cells
    const double or0 = h.origin[0] / h.step[0];
    const double oc0 = n == 2 ? h.origin[1] / h.step[1] : 0.0;
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            const cxd pv = p.values[static_cast<std::size_t>(i * cols + j)];
            if (pv == cxd(0.0, 0.0)) continue;
            for (int hi = 0; hi < hrows; ++hi) {
                const long ti = i + hi + std::lround(or0);
                if (ti < 0 || ti >= rows) continue;
                for (int hj = 0; hj < hcols; ++hj) {
                    const long tj = j + hj + std::lround(oc0);
                    if (tj < 0 || tj >= cols) continue;
                    out.values[static_cast<std::size_t>(ti * cols + tj)] +=
                        pv * h.values[static_cast<std::size_t>(hi * hcols + hj)] * vol;
                }
            }
        }
    return out;
}

RasterGrid convolve_distribution(const RasterGrid& h, const QJPDistribution& p,
                                 const std::vector<double>& origin,
                                 const std::vector<double>& step, const std::vector<int>& shape) {
    return convolve_distribution(h, rasterize(p, origin, step, shape));
}

namespace {

// orthonormal Hermitian basis of d x d matrices (d^2 elements)
std::vector<Matrix> hermitian_basis(int d) {
    std::vector<Matrix> basis;
    basis.reserve(static_cast<std::size_t>(d) * static_cast<std::size_t>(d));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < d; ++i) {
        Matrix e = Matrix::Zero(d, d);
        e(i, i) = 1.0;
        basis.push_back(e);
    }
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            Matrix s = Matrix::Zero(d, d);
            s(i, j) = inv_sqrt2;
            s(j, i) = inv_sqrt2;
            basis.push_back(s);
            Matrix a = Matrix::Zero(d, d);
            a(i, j) = cxd(0.0, -inv_sqrt2);
            a(j, i) = cxd(0.0, inv_sqrt2);
            basis.push_back(a);
        }
    return basis;
}

}  // namespace

int faithfulness_rank(const DiscreteQJSD& q) {
    const int d = q.dim();
    const int d2 = d * d;
    const auto basis = hermitian_basis(d);
    const std::size_t m = q.support.size();
    // real-linear map: 2m x d^2 (Re and Im of each QJP functional)
    RealMatrix map(2 * static_cast<int>(m), d2);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(d2); ++k) {
        for (std::size_t i = 0; i < m; ++i) {
            const cxd v = trace_product(q.support[i].weight, basis[static_cast<std::size_t>(k)]);
            map(static_cast<int>(2 * i), static_cast<int>(k)) = v.real();
            map(static_cast<int>(2 * i + 1), static_cast<int>(k)) = v.imag();
        }
    }
    Eigen::JacobiSVD<RealMatrix> svd(map);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv[0] == 0.0) return 0;
    const double threshold = 1e-10 * sv[0];
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > threshold) ++rank;
    return rank;
}

}  // namespace qjsd
