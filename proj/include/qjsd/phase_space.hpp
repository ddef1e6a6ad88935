#ifndef QJSD_PHASE_SPACE_HPP
#define QJSD_PHASE_SPACE_HPP

#include <functional>
#include <string>
#include <vector>

#include "qjsd/types.hpp"

namespace qjsd {

// Sampled wave function on a uniform grid q_j = q0 + j dq, N a power of two,
// discretely normalized: sum |psi_j|^2 dq = 1 within 1e-8.
struct WavefunctionGrid {
    double q0 = 0.0;
    double dq = 0.0;
    std::vector<cxd> samples;

    int n() const { return static_cast<int>(samples.size()); }
    double q(int j) const { return q0 + dq * j; }
    double norm_sq() const;
    void validate() const;
};

// Uniform N x N phase-space sample grid, row-major q-then-p, with
// Fourier-conjugate axes: dp * dq = 2 pi / N.  Values are densities with
// respect to dq dp (plain Lebesgue storage; the tag records this), so a
// normalized state carries total mass sum W dq dp = 1.
struct PhaseSpaceGrid {
    double q0 = 0.0, dq = 0.0;
    double p0 = 0.0, dp = 0.0;
    int n = 0;
    std::vector<cxd> values;  // values[j*n + k] at (q_j, p_k)
    std::string convention = "lebesgue";

    cxd& at(int j, int k) { return values[static_cast<std::size_t>(j) * n + k]; }
    const cxd& at(int j, int k) const { return values[static_cast<std::size_t>(j) * n + k]; }
    double q(int j) const { return q0 + dq * j; }
    double p(int k) const { return p0 + dp * k; }
    cxd mass() const;
    double max_abs_imag() const;
    void validate() const;  // conjugate-axis invariant
};

// Fourier-plane multiplier ghat(omega) selecting a member of the
// quasi-distribution family; ghat(0) must equal 1 (unit kernel mass).
struct CohenKernel {
    enum class Kind { One, KD, AntiKD, MH, BJ, Kappa, Tabulated };
    Kind kind = Kind::One;
    double kappa = 0.0;
    std::function<cxd(double)> tabulated;
    std::string name = "wigner";

    cxd eval(double omega) const;
    static CohenKernel one();
    static CohenKernel kd();
    static CohenKernel anti_kd();
    static CohenKernel mh();
    static CohenKernel bj();
    static CohenKernel with_kappa(double k);
    static CohenKernel from_function(std::function<cxd(double)> g, std::string name);
    // parse a preset name: wigner | kd | anti-kd | mh | bj | kappa:<value>
    static CohenKernel parse(const std::string& name);
};

// W(q,p) = (1/2pi) integral psi*(q + t/2) psi(q - t/2) e^{i p t} dt on the
// conjugate grid p_k = (k - N/2) dp; half-step samples by bandlimited
// interpolation; the unpaired t = -(N/2) dq autocorrelation sample is dropped
// to keep the slice exactly conjugate-symmetric (its magnitude is below the
// wrap-around noise floor for states resolved by the grid).
PhaseSpaceGrid wigner(const WavefunctionGrid& psi);

// 2-D Fourier transform, multiply by ghat(s t / 2), transform back; preserves
// total mass and both marginals since ghat(0) = 1
PhaseSpaceGrid cohen_transform(const PhaseSpaceGrid& w, const CohenKernel& kernel);

// convolution with the unit-mass vacuum Gaussian (Fourier multiplier
// e^{-(s^2+t^2)/4}); nonnegative within -1e-9 on physical Wigner inputs
PhaseSpaceGrid husimi(const PhaseSpaceGrid& w);

// Tikhonov-regularized Gaussian deconvolution: multiplier G/(G^2 + eps);
// approximate inverse of husimi, exact only in the eps -> 0 limit
PhaseSpaceGrid glauber_sudarshan(const PhaseSpaceGrid& w, double eps);

// midpoint-kernel quantisation of a tabulated symbol f(q,p): the matrix acts
// on position-basis grid vectors, truncated to the centered basis_dim window;
// Hermitian within 1e-8 for real f
Matrix weyl_quantise_grid(const PhaseSpaceGrid& f, int basis_dim);

// analytic states sampled on a grid, discretely renormalized
WavefunctionGrid gaussian_wavefunction(double sigma, double center, double momentum, double q0,
                                       double dq, int n);
WavefunctionGrid hermite_wavefunction(int level, double q0, double dq, int n);
WavefunctionGrid superposition_wavefunction(const std::vector<cxd>& coeffs, double q0, double dq,
                                            int n);  // coeffs over levels 0..k-1

// helpers shared with tests: centered 2-D transform of a conjugate-axis grid
// forward: X(s_a, t_b) = sum W e^{-i(s_a q_j + t_b p_k)} dq dp,
//   s_a = (a - N/2) dp, t_b = (b - N/2) dq
// inverse: W = (1/2pi)^2 sum X e^{+i(...)} dp dq
std::vector<cxd> grid_fft2_centered(const PhaseSpaceGrid& w);
PhaseSpaceGrid grid_ifft2_centered(const std::vector<cxd>& x, const PhaseSpaceGrid& like);

}  // namespace qjsd

#endif
