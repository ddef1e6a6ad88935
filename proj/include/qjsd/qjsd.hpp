#ifndef QJSD_QJSD_HPP
#define QJSD_QJSD_HPP

//
// Hashed operators and their exact inverse Fourier transforms.
//
// A hashing of an ordered tuple (A_1..A_n) of observables is a formal mixture
//
//     #(s_1..s_n) = sum_t  c_t * prod_f  exp(-i phi_f s_{k_f} A_{k_f})
//
// where each factor f carries an axis k_f and a real fraction phi_f, the
// fractions on every axis sum to 1 within each term (so zeroing all other
// parameters reclaims exp(-i s_k A_k)), and sum_t c_t = 1 (so #(0) = Id).
//
// Expanding every factor through the spectral resolution
// exp(-i phi s A) = sum_l exp(-i phi s l) P_l turns #(s) into a finite sum of
// plane waves exp(-i <s, point>) with operator coefficients; its inverse
// Fourier transform is therefore an exactly delta-supported operator-valued
// measure: at the point whose k-th coordinate is sum over that term's k-axis
// factors of (fraction x chosen eigenvalue), with weight
// c_t * (projectors in factor order).  That finite weighted family is the
// discrete quasi-joint-spectral distribution (QJSD) this module computes.
//

#include <cstddef>
#include <vector>

#include "qjsd/spectral.hpp"
#include "qjsd/types.hpp"

namespace qjsd {

struct HashingTerm {
    cxd coeff;
    struct Factor {
        int axis;         // 1-based observable index
        double fraction;  // scalar multiplying s_axis in this exponential
    };
    std::vector<Factor> factors;  // leftmost entry = leftmost exponential
};

struct HashingSpec {
    int n_axes = 0;
    std::vector<HashingTerm> terms;

    // throws SpecInvariantError unless per-term axis fractions sum to 1,
    // every axis appears in every term, and term coefficients sum to 1
    void validate() const;
};

// (1+alpha)/2 * e^{-itB} e^{-isA}  +  (1-alpha)/2 * e^{-isA} e^{-itB}
// (axis 1 = A, axis 2 = B); exactly-zero coefficient terms are dropped
HashingSpec alpha_hashing(cxd alpha);

// e^{-i(1-kappa)/2 sA} e^{-itB} e^{-i(1+kappa)/2 sA}; zero fractions dropped
HashingSpec kappa_hashing(double kappa);

struct DiscreteQJSD {
    struct Atom {
        std::vector<double> point;
        Matrix weight;
    };
    int n_axes = 0;
    std::vector<Atom> support;               // unique points, lexicographically sorted
    std::vector<SpectralMeasure> observables;  // per-axis spectra (empty after affine maps)
    double merge_tol = 0.0;

    int dim() const { return support.empty() ? 0 : static_cast<int>(support.front().weight.rows()); }
    // || sum weights - Id ||_max
    double normalization_residual() const;
};

struct QJPDistribution {
    struct Atom {
        std::vector<double> point;
        cxd value;
    };
    std::vector<Atom> support;  // sorted lexicographically

    cxd total() const;
};

inline constexpr std::size_t kDefaultExpansionBudget = 10'000'000;
inline constexpr double kWeightPruneTol = 1e-12;

// Spectral expansion of the hashing into its delta-supported QJSD.
// merge_tol < 0 selects the default 1e-9 * (1 + max |eigenvalue|);
// expansion products beyond `budget` raise ResourceError.
DiscreteQJSD build_qjsd(const HashingSpec& spec, const std::vector<HermitianOperator>& observables,
                        double merge_tol = -1.0, std::size_t budget = kDefaultExpansionBudget);

// integrate out one axis (1-based); equals the QJSD of the reduced hashing
DiscreteQJSD marginal_qjsd(const DiscreteQJSD& q, int drop_axis);

// adjoint of every weight operator; the involution of the hashing
DiscreteQJSD conjugate_qjsd(const DiscreteQJSD& q);

// true iff every weight operator is Hermitian within tol
bool is_real_qjsd(const DiscreteQJSD& q, double tol);

// Tr[#(s) rho] by exact factor exponentials, evaluated on each grid point
std::vector<cxd> characteristic_function(const HashingSpec& spec,
                                         const std::vector<HermitianOperator>& observables,
                                         const DensityOperator& rho,
                                         const std::vector<std::vector<double>>& s_grid);

// Tr[e^{-i(sA+tB)} rho]: exact (eigendecomposition of sA+tB) or the finite
// Lie-Trotter approximant (e^{-isA/N} e^{-itB/N})^N
std::vector<cxd> trotter_characteristic(const HermitianOperator& a, const HermitianOperator& b,
                                        const DensityOperator& rho,
                                        const std::vector<std::vector<double>>& s_grid, int n,
                                        bool exact = false);

// shared canonicalization: per-axis single-linkage snap of coordinates within
// merge_tol, lexicographic sort, accumulate equal points, prune weights with
// max-abs <= prune_tol
std::vector<DiscreteQJSD::Atom> canonicalize_support(std::vector<DiscreteQJSD::Atom> contributions,
                                                     double merge_tol,
                                                     double prune_tol = kWeightPruneTol);

}  // namespace qjsd

#endif
