#ifndef QJSD_TRANSFORM_HPP
#define QJSD_TRANSFORM_HPP

#include <vector>

#include "qjsd/qjsd.hpp"
#include "qjsd/spectral.hpp"
#include "qjsd/types.hpp"

namespace qjsd {

// serializable function form: values keyed by support index
struct TabulatedFunction {
    std::vector<std::vector<double>> points;
    std::vector<cxd> values;
};

// match a tabulated function to a QJSD support (nearest point within tol per
// atom; throws on unmatched atoms); returns values aligned with q.support
std::vector<cxd> align_tabulated(const TabulatedFunction& f, const DiscreteQJSD& q);

// sum over support of f(point) * weight_operator
Matrix quantise(const PointFunction& f, const DiscreteQJSD& q);
Matrix quantise(const std::vector<cxd>& aligned_values, const DiscreteQJSD& q);

// value at each support point = Tr[weight rho]; values sum to 1 within 1e-9
QJPDistribution quasi_classicalise(const DiscreteQJSD& q, const DensityOperator& rho);

// | Tr[quantise(f) rho] - sum f(point) QJP(point) |
double verify_adjointness(const PointFunction& f, const DiscreteQJSD& q,
                          const DensityOperator& rho);

// support points p -> T p + b (weights unchanged, merged on collision);
// observables no longer correspond to axes and are cleared
DiscreteQJSD affine_transform(const DiscreteQJSD& q, const RealMatrix& t, const RealVector& b);

// uniform rectangular raster over n <= 2 axes
struct RasterGrid {
    std::vector<double> origin;
    std::vector<double> step;
    std::vector<int> shape;
    std::vector<cxd> values;  // row-major, last axis fastest

    int n_axes() const { return static_cast<int>(shape.size()); }
    std::size_t size() const;
    double cell_volume() const;
    cxd total_mass() const;  // sum * cell volume
};

// nearest-bin mass assignment; throws GridMismatchError when a support point
// falls outside the raster
RasterGrid rasterize(const QJPDistribution& p, const std::vector<double>& origin,
                     const std::vector<double>& step, const std::vector<int>& shape);

// |sum h * cell_volume - 1|: the necessary condition for a smoothing kernel to
// map QJSDs to QJSDs (normalization preservation); sufficiency is not asserted
double kernel_mass_residual(const RasterGrid& h);

// zero-padded discrete convolution; kernel grid must share the step sizes of p
// and have unit mass within 1e-6; output mass preserved within 1e-8 when the
// smeared support stays inside the grid
RasterGrid convolve_distribution(const RasterGrid& h, const RasterGrid& p);
RasterGrid convolve_distribution(const RasterGrid& h, const QJPDistribution& p,
                                 const std::vector<double>& origin,
                                 const std::vector<double>& step, const std::vector<int>& shape);

// rank of the real-linear map (Hermitian operators) -> (QJP values), singular
// values above 1e-10 x largest; the representation is faithful iff rank = d^2
int faithfulness_rank(const DiscreteQJSD& q);

}  // namespace qjsd

#endif
