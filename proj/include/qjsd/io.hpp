#ifndef QJSD_IO_HPP
#define QJSD_IO_HPP

// File ingestion and deterministic emitters shared by the CLI and the tests.
// All numeric output is %.16e (17 significant digits) so emitted CSV
// round-trips through the loaders without loss.

#include <string>
#include <vector>

#include "qjsd/errors.hpp"
#include "qjsd/phase_space.hpp"
#include "qjsd/qjsd.hpp"
#include "qjsd/spectral.hpp"
#include "qjsd/transform.hpp"
#include "qjsd/types.hpp"

namespace qjsd::io {

std::string fmt(double x);

// "1", "-0.5", "i", "-i", "0.7i", "0.3+0.7i", "1e-3-2e-1i", ...
cxd parse_complex(std::string s);

HermitianOperator load_operator(const std::string& path);
DensityOperator load_state(const std::string& path, bool renormalize = false);

// named preset ("kd", "anti-kd", "mh", "alpha:<v>", "kappa:<v>") or, when the
// name matches no preset, a HashingSpec JSON file path
HashingSpec load_hashing(const std::string& name_or_path);
HashingSpec preset_hashing(const std::string& name);
bool is_preset_name(const std::string& name);

TabulatedFunction load_tabulated(const std::string& path);

// analytic-state spec sampled onto a position grid:
//   {"kind":"gaussian","sigma":s,"center":c,"momentum":p}
//   {"kind":"hermite","level":k}
//   {"kind":"superposition","coeffs":[[re,im],...]}   (harmonic-basis weights)
WavefunctionGrid load_wavefunction(const std::string& path, double q0, double dq, int n);

std::string operator_json(const Matrix& m);
std::string state_json(const Matrix& density);
std::string spectra_json(const SpectralMeasure& e);

// header a,re,im / a,b,re,im / ... by axis count
std::string qjp_csv(const QJPDistribution& p);
QJPDistribution load_qjp_csv(const std::string& path);

// header q,p,re,im, row-major q-then-p
std::string grid_csv(const PhaseSpaceGrid& g);
std::string grid_meta_json(const PhaseSpaceGrid& g);
PhaseSpaceGrid load_grid_csv(const std::string& csv_path, const std::string& meta_path);

std::string read_file(const std::string& path);
// path "-" streams to stdout
void write_output(const std::string& path, const std::string& content);

std::string error_json(const Error& e);

}  // namespace qjsd::io

#endif
