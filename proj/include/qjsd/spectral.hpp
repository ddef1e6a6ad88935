#ifndef QJSD_SPECTRAL_HPP
#define QJSD_SPECTRAL_HPP

#include <functional>
#include <optional>
#include <vector>

#include "qjsd/types.hpp"

namespace qjsd {

// Tolerances shared across the spectral layer.
inline constexpr double kHermiticityTol = 1e-12;
inline constexpr double kProjectorTol = 1e-10;

// A quantum observable: dense complex square matrix, Hermitian within
// kHermiticityTol; stored symmetrized.
class HermitianOperator {
public:
    explicit HermitianOperator(const Matrix& entries);
    int dim() const { return static_cast<int>(entries_.rows()); }
    const Matrix& entries() const { return entries_; }

private:
    Matrix entries_;
};

// Eigenvalue -> orthogonal projector map with degeneracy grouping; atoms are
// ordered by ascending eigenvalue.
struct SpectralMeasure {
    struct Atom {
        double value;
        Matrix projector;
    };
    std::vector<Atom> atoms;
    double tol = 0.0;  // grouping tolerance used at construction

    int dim() const { return atoms.empty() ? 0 : static_cast<int>(atoms.front().projector.rows()); }
    // max residual over the idempotency / orthogonality / completeness checks
    double invariant_residual() const;
    // || sum a_i P_i - H ||_max
    double reconstruction_residual(const Matrix& source) const;
    Matrix reconstruct() const;
    // index of the atom nearest to b; nullopt when off by more than match_tol
    std::optional<std::size_t> find_atom(double b, double match_tol) const;
};

// Product measure of pairwise strongly-commuting observables.
struct JointSpectralMeasure {
    struct Atom {
        std::vector<double> point;
        Matrix projector;
    };
    std::vector<SpectralMeasure> axes;
    std::vector<Atom> atoms;  // lexicographically sorted, zero products dropped

    int dim() const { return atoms.empty() ? 0 : static_cast<int>(atoms.front().projector.rows()); }
};

class DensityOperator {
public:
    explicit DensityOperator(const Matrix& entries);
    int dim() const { return static_cast<int>(entries_.rows()); }
    const Matrix& entries() const { return entries_; }
    static DensityOperator pure(const Vector& ket);  // requires unit norm within 1e-8

private:
    Matrix entries_;
};

// default grouping tolerance: 1e-8 x spectral radius
double default_cluster_tol(const HermitianOperator& h);

// Eigenvalues within tol (single linkage) are merged into one atom whose
// projector is the sum of the merged rank-1 projectors, re-symmetrized.
SpectralMeasure eigendecompose(const HermitianOperator& h, double tol = -1.0);

// true iff every projector pair commutes within tol max-abs
bool strongly_commutes(const SpectralMeasure& e, const SpectralMeasure& f,
                       double tol = kProjectorTol);

JointSpectralMeasure joint_spectral_measure(const std::vector<SpectralMeasure>& measures);

using PointFunction = std::function<cxd(const std::vector<double>&)>;

// sum_a f(a) E(a); Hermitian when f is real-valued on the atoms
Matrix functional_calculus(const PointFunction& f, const JointSpectralMeasure& j);

// single-measure convenience: f over scalar eigenvalues
Matrix functional_calculus(const std::function<cxd(double)>& f, const SpectralMeasure& e);

struct BornDistribution {
    struct Atom {
        std::vector<double> point;
        double raw;       // Tr[E rho] as computed (may be slightly negative)
        double reported;  // raw clamped to 0 when within [-1e-12, 0)
    };
    std::vector<Atom> atoms;
};

BornDistribution born_distribution(const JointSpectralMeasure& j, const DensityOperator& rho);

}  // namespace qjsd

#endif
