#include "qjsd/fft.hpp"

#include <cmath>
#include <numbers>

#include "qjsd/errors.hpp"

namespace qjsd {

bool is_pow2(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

void fft_pow2(cxd* data, std::size_t n, bool inverse) {
    if (!is_pow2(n)) throw GridMismatchError("fft length must be a power of two");
    if (n == 1) return;

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }

    // exact twiddle table: w[j] = e^{sign * 2 pi i j / n}
    const double sign = inverse ? 1.0 : -1.0;
    std::vector<cxd> w(n / 2);
    for (std::size_t j = 0; j < n / 2; ++j) {
        const double ang = sign * 2.0 * std::numbers::pi * static_cast<double>(j) /
                           static_cast<double>(n);
        w[j] = cxd(std::cos(ang), std::sin(ang));
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                cxd u = data[i + k];
                cxd v = data[i + k + len / 2] * w[k * stride];
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
            }
        }
    }
}

std::vector<cxd> upsample2(const std::vector<cxd>& in) {
    const std::size_t n = in.size();
    if (!is_pow2(n)) throw GridMismatchError("upsample2 length must be a power of two");
    std::vector<cxd> spec(in);
    fft_pow2(spec, false);
    std::vector<cxd> pad(2 * n, cxd(0.0, 0.0));
    for (std::size_t k = 0; k < n / 2; ++k) pad[k] = spec[k];
    for (std::size_t k = n / 2 + 1; k < n; ++k) pad[n + k] = spec[k];
    pad[n / 2] = 0.5 * spec[n / 2];
    pad[2 * n - n / 2] = 0.5 * spec[n / 2];
    fft_pow2(pad, true);
    const double scale = 1.0 / static_cast<double>(n);  // = 2 * (1 / 2n) inverse normalization
    for (auto& z : pad) z *= scale;
    return pad;
}

}  // namespace qjsd
