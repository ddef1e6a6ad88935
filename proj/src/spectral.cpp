#include "qjsd/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "qjsd/errors.hpp"

namespace qjsd {

HermitianOperator::HermitianOperator(const Matrix& entries) {
    if (entries.rows() != entries.cols() || entries.rows() == 0)
        throw InvalidOperatorError("operator matrix must be square and non-empty");
    const double res = hermiticity_residual(entries);
    if (res > kHermiticityTol)
        throw InvalidOperatorError("operator is not Hermitian: max-abs deviation " +
                                   std::to_string(res));
    entries_ = hermitize(entries);
}

double SpectralMeasure::invariant_residual() const {
    if (atoms.empty()) return 0.0;
    const int d = dim();
    double res = 0.0;
    Matrix sum = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const Matrix& p = atoms[i].projector;
        res = std::max(res, max_abs_diff(p * p, p));
        res = std::max(res, hermiticity_residual(p));
        for (std::size_t j = i + 1; j < atoms.size(); ++j)
            res = std::max(res, max_abs(p * atoms[j].projector));
        sum += p;
    }
    res = std::max(res, max_abs_diff(sum, Matrix::Identity(d, d)));
    return res;
}

Matrix SpectralMeasure::reconstruct() const {
    const int d = dim();
    Matrix sum = Matrix::Zero(d, d);
    for (const auto& a : atoms) sum += a.value * a.projector;
    return sum;
}

double SpectralMeasure::reconstruction_residual(const Matrix& source) const {
    return max_abs_diff(reconstruct(), source);
}

std::optional<std::size_t> SpectralMeasure::find_atom(double b, double match_tol) const {
    std::optional<std::size_t> best;
    double best_dist = match_tol;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        const double dist = std::abs(atoms[i].value - b);
        if (dist <= best_dist) {
            best = i;
            best_dist = dist;
        }
    }
    return best;
}

double default_cluster_tol(const HermitianOperator& h) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.entries(), Eigen::EigenvaluesOnly);
    return 1e-8 * es.eigenvalues().cwiseAbs().maxCoeff();
}

SpectralMeasure eigendecompose(const HermitianOperator& h, double tol) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.entries());
    if (es.info() != Eigen::Success)
        throw InvalidOperatorError("eigendecomposition failed to converge");
    const RealVector& vals = es.eigenvalues();  // ascending
    const Matrix& vecs = es.eigenvectors();
    if (tol < 0.0) tol = 1e-8 * vals.cwiseAbs().maxCoeff();
    const int d = h.dim();

    SpectralMeasure out;
    out.tol = tol;
    int start = 0;
    for (int i = 1; i <= d; ++i) {
        // single-linkage: break the cluster when the gap to the next eigenvalue exceeds tol
        if (i == d || vals[i] - vals[i - 1] > tol) {
            Matrix p = Matrix::Zero(d, d);
            double mean = 0.0;
            for (int k = start; k < i; ++k) {
                p += vecs.col(k) * vecs.col(k).adjoint();
                mean += vals[k];
            }
            mean /= static_cast<double>(i - start);
            out.atoms.push_back({mean, hermitize(p)});
            start = i;
        }
    }
    return out;
}

bool strongly_commutes(const SpectralMeasure& e, const SpectralMeasure& f, double tol) {
    if (e.dim() != f.dim())
        throw DimensionMismatchError("spectral measures act on different dimensions");
    for (const auto& a : e.atoms)
        for (const auto& b : f.atoms)
            if (max_abs_diff(a.projector * b.projector, b.projector * a.projector) > tol)
                return false;
    return true;
}

JointSpectralMeasure joint_spectral_measure(const std::vector<SpectralMeasure>& measures) {
    if (measures.empty()) throw SpecInvariantError("joint measure needs at least one axis");
    const int d = measures.front().dim();
    for (const auto& m : measures)
        if (m.dim() != d) throw DimensionMismatchError("axes act on different dimensions");
    for (std::size_t i = 0; i < measures.size(); ++i)
        for (std::size_t j = i + 1; j < measures.size(); ++j)
            if (!strongly_commutes(measures[i], measures[j]))
                throw CommutativityViolationError(
                    "axes " + std::to_string(i) + " and " + std::to_string(j) +
                    " do not strongly commute");

    JointSpectralMeasure out;
    out.axes = measures;
    const std::size_t n = measures.size();
    std::vector<std::size_t> idx(n, 0);
    while (true) {
        Matrix p = measures[0].atoms[idx[0]].projector;
        std::vector<double> point{measures[0].atoms[idx[0]].value};
        for (std::size_t k = 1; k < n; ++k) {
            p = p * measures[k].atoms[idx[k]].projector;
            point.push_back(measures[k].atoms[idx[k]].value);
        }
        if (max_abs(p) > 1e-12) out.atoms.push_back({std::move(point), hermitize(p)});
        // odometer over atom indices; axis 0 slowest => lexicographic output order
        std::size_t k = n;
        while (k > 0) {
            --k;
            if (++idx[k] < measures[k].atoms.size()) break;
            idx[k] = 0;
            if (k == 0) return out;
        }
    }
}

Matrix functional_calculus(const PointFunction& f, const JointSpectralMeasure& j) {
    const int d = j.dim();
    Matrix sum = Matrix::Zero(d, d);
    for (const auto& atom : j.atoms) {
        const cxd v = f(atom.point);
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw DomainError("non-finite-function",
                              "function value is not finite at a spectral atom");
        sum += v * atom.projector;
    }
    return sum;
}

Matrix functional_calculus(const std::function<cxd(double)>& f, const SpectralMeasure& e) {
    JointSpectralMeasure j;
    j.axes = {e};
    for (const auto& a : e.atoms) j.atoms.push_back({{a.value}, a.projector});
    return functional_calculus([&f](const std::vector<double>& p) { return f(p[0]); }, j);
}

BornDistribution born_distribution(const JointSpectralMeasure& j, const DensityOperator& rho) {
    if (j.dim() != rho.dim())
        throw DimensionMismatchError("measure and state act on different dimensions");
    BornDistribution out;
    double sum = 0.0;
    for (const auto& atom : j.atoms) {
        const double raw = trace_product(atom.projector, rho.entries()).real();
        const double reported = (raw < 0.0 && raw >= -1e-12) ? 0.0 : raw;
        out.atoms.push_back({atom.point, raw, reported});
        sum += raw;
    }
    if (std::abs(sum - 1.0) > 1e-10)
        throw InvariantViolationError("Born probabilities do not sum to 1", std::abs(sum - 1.0));
    return out;
}

DensityOperator::DensityOperator(const Matrix& entries) {
    if (entries.rows() != entries.cols() || entries.rows() == 0)
        throw InvalidOperatorError("density matrix must be square and non-empty");
    const double herm = hermiticity_residual(entries);
    if (herm > kHermiticityTol)
        throw InvalidOperatorError("density matrix is not Hermitian: deviation " +
                                   std::to_string(herm));
    Matrix sym = hermitize(entries);
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym, Eigen::EigenvaluesOnly);
    const double min_eig = es.eigenvalues().minCoeff();
    if (min_eig < -1e-10)
        throw InvalidOperatorError("density matrix has negative eigenvalue " +
                                   std::to_string(min_eig));
    const double tr = sym.trace().real();
    if (std::abs(tr - 1.0) > 1e-10)
        throw InvalidOperatorError("density matrix trace deviates from 1 by " +
                                   std::to_string(std::abs(tr - 1.0)));
    entries_ = std::move(sym);
}

DensityOperator DensityOperator::pure(const Vector& ket) {
    const double norm = ket.norm();
    if (std::abs(norm - 1.0) > 1e-8)
        throw InvalidOperatorError("ket norm deviates from 1 by " +
                                   std::to_string(std::abs(norm - 1.0)));
    Vector v = ket / norm;
    return DensityOperator(v * v.adjoint());
}

}  // namespace qjsd
