#ifndef QJSD_FFT_HPP
#define QJSD_FFT_HPP

#include <vector>

#include "qjsd/types.hpp"

namespace qjsd {

bool is_pow2(std::size_t n);

// In-place radix-2 DIT transform, unnormalized:
//   forward:  X[k] = sum_j x[j] e^{-2 pi i j k / n}
//   inverse:  X[k] = sum_j x[j] e^{+2 pi i j k / n}   (no 1/n)
// n must be a power of two.  The butterfly order is fixed, so results are
// bitwise deterministic; batches of independent transforms may run on
// separate threads.
void fft_pow2(cxd* data, std::size_t n, bool inverse);

inline void fft_pow2(std::vector<cxd>& v, bool inverse) { fft_pow2(v.data(), v.size(), inverse); }

// 2x bandlimited upsampling of a periodic sequence (spectral zero padding with
// symmetric Nyquist split); output length 2n, out[2j] == in[j] up to round-off.
std::vector<cxd> upsample2(const std::vector<cxd>& in);

}  // namespace qjsd

#endif
