#include "qjsd/phase_space.hpp"

#include <cmath>
#include <numbers>

#include "qjsd/errors.hpp"
#include "qjsd/fft.hpp"

namespace qjsd {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

double WavefunctionGrid::norm_sq() const {
    double s = 0.0;
    for (const auto& z : samples) s += std::norm(z);
    return s * dq;
}

void WavefunctionGrid::validate() const {
    if (!is_pow2(samples.size()) || samples.size() < 2)
        throw GridMismatchError("wavefunction length must be a power of two >= 2");
    if (dq <= 0.0) throw GridMismatchError("dq must be positive");
    const double dev = std::abs(norm_sq() - 1.0);
    if (dev > 1e-8)
        throw DomainError("non-normalized-state",
                          "wavefunction norm^2 deviates from 1 by " + std::to_string(dev));
}

cxd PhaseSpaceGrid::mass() const {
    cxd s(0.0, 0.0);
    for (const auto& z : values) s += z;
    return s * dq * dp;
}

double PhaseSpaceGrid::max_abs_imag() const {
    double m = 0.0;
    for (const auto& z : values) m = std::max(m, std::abs(z.imag()));
    return m;
}

void PhaseSpaceGrid::validate() const {
    if (!is_pow2(static_cast<std::size_t>(n)) || n < 2)
        throw GridMismatchError("grid size must be a power of two >= 2");
    if (values.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
        throw GridMismatchError("grid value count does not match axis lengths");
    if (std::abs(dp * dq - kTwoPi / n) > 1e-9 * (kTwoPi / n))
        throw GridMismatchError("axes are not Fourier-conjugate: dp*dq != 2pi/N");
}

cxd CohenKernel::eval(double omega) const {
    switch (kind) {
        case Kind::One:
            return {1.0, 0.0};
        case Kind::KD:
            return std::exp(cxd(0.0, -omega));
        case Kind::AntiKD:
            return std::exp(cxd(0.0, omega));
        case Kind::MH:
            return {std::cos(omega), 0.0};
        case Kind::BJ:
            return {std::abs(omega) < 1e-12 ? 1.0 - omega * omega / 6.0
                                            : std::sin(omega) / omega,
                    0.0};
        case Kind::Kappa:
            return std::exp(cxd(0.0, -kappa * omega));
        case Kind::Tabulated:
            return tabulated(omega);
    }
    return {1.0, 0.0};
}

CohenKernel CohenKernel::one() { return {Kind::One, 0.0, nullptr, "wigner"}; }
CohenKernel CohenKernel::kd() { return {Kind::KD, 0.0, nullptr, "kd"}; }
CohenKernel CohenKernel::anti_kd() { return {Kind::AntiKD, 0.0, nullptr, "anti-kd"}; }
CohenKernel CohenKernel::mh() { return {Kind::MH, 0.0, nullptr, "mh"}; }
CohenKernel CohenKernel::bj() { return {Kind::BJ, 0.0, nullptr, "bj"}; }
CohenKernel CohenKernel::with_kappa(double k) {
    return {Kind::Kappa, k, nullptr, "kappa:" + std::to_string(k)};
}
CohenKernel CohenKernel::from_function(std::function<cxd(double)> g, std::string name) {
    CohenKernel k{Kind::Tabulated, 0.0, std::move(g), std::move(name)};
    if (std::abs(k.eval(0.0) - cxd(1.0, 0.0)) > 1e-12)
        throw DomainError("kernel-normalization", "Cohen kernel has ghat(0) != 1");
    return k;
}
CohenKernel CohenKernel::parse(const std::string& name) {
    if (name == "wigner" || name == "1" || name == "one") return one();
    if (name == "kd") return kd();
    if (name == "anti-kd") return anti_kd();
    if (name == "mh") return mh();
    if (name == "bj") return bj();
    if (name.rfind("kappa:", 0) == 0) return with_kappa(std::stod(name.substr(6)));
    throw DomainError("unknown-kernel", "unknown Cohen kernel '" + name + "'");
}

namespace {

// in-place unnormalized 1-D transforms over the rows / columns of an n x n
// row-major array; independent lines parallelize without changing results
void fft_rows(std::vector<cxd>& a, int n, bool inverse) {
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) fft_pow2(a.data() + static_cast<std::size_t>(j) * n, n, inverse);
}

void fft_cols(std::vector<cxd>& a, int n, bool inverse) {
#pragma omp parallel for schedule(static)
    for (int k = 0; k < n; ++k) {
        std::vector<cxd> col(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) col[static_cast<std::size_t>(j)] = a[static_cast<std::size_t>(j) * n + k];
        fft_pow2(col, inverse);
        for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(j) * n + k] = col[static_cast<std::size_t>(j)];
    }
}

}  // namespace

std::vector<cxd> grid_fft2_centered(const PhaseSpaceGrid& w) {
    w.validate();
    const int n = w.n;
    std::vector<cxd> x(w.values);
    // e^{-i s_a q_j} = e^{-i s_a q0} (-1)^j e^{-2pi i a j / N} and likewise in p
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
            if ((j + k) & 1) x[static_cast<std::size_t>(j) * n + k] *= -1.0;
    fft_rows(x, n, false);
    fft_cols(x, n, false);
    const double scale = w.dq * w.dp;
    for (int a = 0; a < n; ++a) {
        const double s = (a - n / 2) * w.dp;
        for (int b = 0; b < n; ++b) {
            const double t = (b - n / 2) * w.dq;
            x[static_cast<std::size_t>(a) * n + b] *=
                scale * std::exp(cxd(0.0, -(s * w.q0 + t * w.p0)));
        }
    }
    return x;
}

PhaseSpaceGrid grid_ifft2_centered(const std::vector<cxd>& x, const PhaseSpaceGrid& like) {
    const int n = like.n;
    std::vector<cxd> y(x);
    for (int a = 0; a < n; ++a) {
        const double s = (a - n / 2) * like.dp;
        for (int b = 0; b < n; ++b) {
            const double t = (b - n / 2) * like.dq;
            y[static_cast<std::size_t>(a) * n + b] *=
                std::exp(cxd(0.0, s * like.q0 + t * like.p0));
        }
    }
    fft_rows(y, n, true);
    fft_cols(y, n, true);
    PhaseSpaceGrid out = like;
    const double scale = like.dp * like.dq / (kTwoPi * kTwoPi);
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            cxd v = y[static_cast<std::size_t>(j) * n + k] * scale;
            if ((j + k) & 1) v *= -1.0;
            out.values[static_cast<std::size_t>(j) * n + k] = v;
        }
    return out;
}

PhaseSpaceGrid wigner(const WavefunctionGrid& psi) {
    psi.validate();
    const int n = psi.n();
    PhaseSpaceGrid w;
    w.n = n;
    w.q0 = psi.q0;
    w.dq = psi.dq;
    w.dp = kTwoPi / (n * psi.dq);
    w.p0 = -(n / 2) * w.dp;
    w.values.assign(static_cast<std::size_t>(n) * n, cxd(0.0, 0.0));

    const std::vector<cxd> up = upsample2(psi.samples);  // step dq/2, length 2n
    const int n2 = 2 * n;

#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) {
        // autocorrelation slice over t_m = (m - N/2) dq, conjugate-symmetric
        std::vector<cxd> c(static_cast<std::size_t>(n));
        for (int m = 0; m < n; ++m) {
            const int mp = m - n / 2;
            const int ip = ((2 * j + mp) % n2 + n2) % n2;
            const int im = ((2 * j - mp) % n2 + n2) % n2;
            c[static_cast<std::size_t>(m)] =
                std::conj(up[static_cast<std::size_t>(ip)]) * up[static_cast<std::size_t>(im)];
        }
        c[0] = cxd(0.0, 0.0);  // unpaired Nyquist sample
        // centered transform: W[j,k] = (dq/2pi) sum_m c[m] e^{2pi i (k-N/2)(m-N/2)/N}
        std::vector<cxd> ct(static_cast<std::size_t>(n));
        for (int m = 0; m < n; ++m) {
            const int mt = (m + n / 2) % n;  // fftshift
            cxd v = c[static_cast<std::size_t>(mt)];
            if (m & 1) v *= -1.0;  // (-1)^{m~}
            ct[static_cast<std::size_t>(m)] = v;
        }
        fft_pow2(ct, true);  // e^{+2 pi i k m / N}, unnormalized
        const double scale = psi.dq / kTwoPi;
        for (int k = 0; k < n; ++k)
            w.values[static_cast<std::size_t>(j) * n + k] = scale * ct[static_cast<std::size_t>(k)];
    }

    const double im = w.max_abs_imag();
    if (im > 1e-9)
        throw InvariantViolationError("Wigner transform produced imaginary part", im);
    for (auto& z : w.values) z = cxd(z.real(), 0.0);
    const double mass_dev = std::abs(w.mass() - cxd(1.0, 0.0));
    if (mass_dev > 1e-6)
        throw InvariantViolationError("Wigner mass deviates from 1", mass_dev);
    return w;
}

PhaseSpaceGrid cohen_transform(const PhaseSpaceGrid& w, const CohenKernel& kernel) {
    w.validate();
    if (std::abs(kernel.eval(0.0) - cxd(1.0, 0.0)) > 1e-12)
        throw DomainError("kernel-normalization", "Cohen kernel has ghat(0) != 1");
    std::vector<cxd> x = grid_fft2_centered(w);
    const int n = w.n;
    for (int a = 0; a < n; ++a) {
        const double s = (a - n / 2) * w.dp;
        for (int b = 0; b < n; ++b) {
            const double t = (b - n / 2) * w.dq;
            x[static_cast<std::size_t>(a) * n + b] *= kernel.eval(0.5 * s * t);
        }
    }
    return grid_ifft2_centered(x, w);
}

namespace {

PhaseSpaceGrid gaussian_multiplier(const PhaseSpaceGrid& w,
                                   const std::function<cxd(double)>& filter) {
    w.validate();
    std::vector<cxd> x = grid_fft2_centered(w);
    const int n = w.n;
    for (int a = 0; a < n; ++a) {
        const double s = (a - n / 2) * w.dp;
        for (int b = 0; b < n; ++b) {
            const double t = (b - n / 2) * w.dq;
            const double ghat = std::exp(-0.25 * (s * s + t * t));
            x[static_cast<std::size_t>(a) * n + b] *= filter(ghat);
        }
    }
    PhaseSpaceGrid out = grid_ifft2_centered(x, w);
    if (out.max_abs_imag() <= 1e-9)
        for (auto& z : out.values) z = cxd(z.real(), 0.0);
    return out;
}

}  // namespace

PhaseSpaceGrid husimi(const PhaseSpaceGrid& w) {
    const cxd mass_in = w.mass();
    PhaseSpaceGrid out = gaussian_multiplier(w, [](double g) { return cxd(g, 0.0); });
    const double mass_dev = std::abs(out.mass() - mass_in);
    if (mass_dev > 1e-6 * (1.0 + std::abs(mass_in)))
        throw InvariantViolationError("Husimi smoothing changed the total mass", mass_dev);
    return out;
}

PhaseSpaceGrid glauber_sudarshan(const PhaseSpaceGrid& w, double eps) {
    if (eps <= 0.0) throw DomainError("invalid-epsilon", "regularization eps must be positive");
    return gaussian_multiplier(
        w, [eps](double g) { return cxd(g / (g * g + eps), 0.0); });
}

Matrix weyl_quantise_grid(const PhaseSpaceGrid& f, int basis_dim) {
    f.validate();
    const int n = f.n;
    if (basis_dim < 1 || basis_dim > n)
        throw GridMismatchError("basis_dim must lie in 1..N");

    // 2x Fourier upsampling of f along q for every p column
    const int n2 = 2 * n;
    std::vector<cxd> fup(static_cast<std::size_t>(n2) * n);
#pragma omp parallel for schedule(static)
    for (int k = 0; k < n; ++k) {
        std::vector<cxd> col(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) col[static_cast<std::size_t>(j)] = f.at(j, k);
        const std::vector<cxd> colup = upsample2(col);
        for (int u = 0; u < n2; ++u) fup[static_cast<std::size_t>(u) * n + k] = colup[static_cast<std::size_t>(u)];
    }

    // g[u][m] = sum_k fup[u,k] e^{2 pi i k m / N}  (unnormalized inverse DFT rows)
    std::vector<cxd> g(fup);
#pragma omp parallel for schedule(static)
    for (int u = 0; u < n2; ++u) fft_pow2(g.data() + static_cast<std::size_t>(u) * n, n, true);

    Matrix m(basis_dim, basis_dim);
    const int j0 = (n - basis_dim) / 2;
    for (int r = 0; r < basis_dim; ++r)
        for (int c = 0; c < basis_dim; ++c) {
            const int j = j0 + r, jp = j0 + c;
            const int diff = j - jp;
            const int mm = ((diff % n) + n) % n;
            const cxd phase = std::exp(cxd(0.0, f.p0 * diff * f.dq));
            m(r, c) = phase * g[static_cast<std::size_t>(j + jp) * n + mm] /
                      static_cast<double>(n);
        }
    return m;
}

WavefunctionGrid gaussian_wavefunction(double sigma, double center, double momentum, double q0,
                                       double dq, int n) {
    if (sigma <= 0.0) throw DomainError("invalid-width", "sigma must be positive");
    WavefunctionGrid psi;
    psi.q0 = q0;
    psi.dq = dq;
    psi.samples.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        const double x = q0 + dq * j;
        psi.samples[static_cast<std::size_t>(j)] =
            std::exp(cxd(-(x - center) * (x - center) / (2.0 * sigma * sigma), momentum * x));
    }
    double nrm = std::sqrt(psi.norm_sq());
    for (auto& z : psi.samples) z /= nrm;
    return psi;
}

namespace {

// normalized Hermite functions h_0..h_max at x by the stable recurrence
std::vector<double> hermite_ladder(int max_level, double x) {
    std::vector<double> h(static_cast<std::size_t>(max_level) + 1);
    h[0] = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
    if (max_level >= 1) h[1] = std::sqrt(2.0) * x * h[0];
    for (int k = 2; k <= max_level; ++k)
        h[static_cast<std::size_t>(k)] =
            std::sqrt(2.0 / k) * x * h[static_cast<std::size_t>(k - 1)] -
            std::sqrt((k - 1.0) / k) * h[static_cast<std::size_t>(k - 2)];
    return h;
}

}  // namespace

WavefunctionGrid hermite_wavefunction(int level, double q0, double dq, int n) {
    if (level < 0) throw DomainError("invalid-level", "Hermite level must be >= 0");
    WavefunctionGrid psi;
    psi.q0 = q0;
    psi.dq = dq;
    psi.samples.resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        psi.samples[static_cast<std::size_t>(j)] =
            hermite_ladder(level, q0 + dq * j)[static_cast<std::size_t>(level)];
    double nrm = std::sqrt(psi.norm_sq());
    for (auto& z : psi.samples) z /= nrm;
    return psi;
}

WavefunctionGrid superposition_wavefunction(const std::vector<cxd>& coeffs, double q0, double dq,
                                            int n) {
    if (coeffs.empty()) throw DomainError("invalid-superposition", "need at least one term");
    const int top = static_cast<int>(coeffs.size()) - 1;
    WavefunctionGrid psi;
    psi.q0 = q0;
    psi.dq = dq;
    psi.samples.assign(static_cast<std::size_t>(n), cxd(0.0, 0.0));
    for (int j = 0; j < n; ++j) {
        const auto ladder = hermite_ladder(top, q0 + dq * j);
        cxd v(0.0, 0.0);
        for (std::size_t k = 0; k < coeffs.size(); ++k) v += coeffs[k] * ladder[k];
        psi.samples[static_cast<std::size_t>(j)] = v;
    }
    double nrm = std::sqrt(psi.norm_sq());
    if (nrm == 0.0) throw DomainError("invalid-superposition", "zero state");
    for (auto& z : psi.samples) z /= nrm;
    return psi;
}

}  // namespace qjsd
