#ifndef QJSD_REFERENCE_HPP
#define QJSD_REFERENCE_HPP

// Plain serial implementations of the parallel kernels.  They trade speed for
// obviousness (direct sums, no FFT, no blocking) and back the equivalence
// tests and the benchmark baseline.

#include <vector>

#include "qjsd/phase_space.hpp"
#include "qjsd/qjsd.hpp"
#include "qjsd/spectral.hpp"

namespace qjsd::reference {

// direct-sum Wigner transform: explicit DFT, trigonometric interpolation to
// half-step samples, centered autocorrelation DFT, all as nested loops
PhaseSpaceGrid wigner(const WavefunctionGrid& psi);

// serial odometer-driven spectral expansion; produces a bitwise-identical
// support to the parallel qjsd::build_qjsd
DiscreteQJSD build_qjsd(const HashingSpec& spec,
                        const std::vector<HermitianOperator>& observables,
                        double merge_tol = -1.0);

}  // namespace qjsd::reference

#endif
