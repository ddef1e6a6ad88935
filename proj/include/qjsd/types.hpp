#ifndef QJSD_TYPES_HPP
#define QJSD_TYPES_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace qjsd {

using cxd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RealMatrix = Eigen::MatrixXd;

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

// (M + M^dagger)/2, removes anti-Hermitian round-off
inline Matrix hermitize(const Matrix& m) { return 0.5 * (m + m.adjoint()); }

inline double hermiticity_residual(const Matrix& m) {
    return max_abs_diff(m, m.adjoint());
}

inline cxd trace_product(const Matrix& a, const Matrix& b) {
    // Tr[a b] without forming the product
    return (a.transpose().cwiseProduct(b)).sum();
}

// lexicographic comparison of support points
inline bool lex_less(const std::vector<double>& a, const std::vector<double>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace qjsd

#endif
