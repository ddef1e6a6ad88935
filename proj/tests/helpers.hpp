#ifndef QJSD_TESTS_HELPERS_HPP
#define QJSD_TESTS_HELPERS_HPP

// Fixtures shared by the unit tests: Pauli matrices, hand-sized states, and a
// self-cleaning scratch directory for file round trips.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "qjsd/qjsd.hpp"
#include "qjsd/spectral.hpp"
#include "qjsd/types.hpp"

namespace testutil {

using qjsd::cxd;
using qjsd::Matrix;
using qjsd::Vector;

inline Matrix sigma_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

inline Matrix sigma_y() {
    Matrix m(2, 2);
    m << cxd(0, 0), cxd(0, -1), cxd(0, 1), cxd(0, 0);
    return m;
}

inline Matrix sigma_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

inline qjsd::DensityOperator ket_state(cxd a0, cxd a1) {
    Vector v(2);
    v << a0, a1;
    v /= v.norm();
    return qjsd::DensityOperator::pure(v);
}

// support coordinates come out of the eigensolver, so ``expected'' integer
// points are only reached up to round-off
inline bool point_near(const std::vector<double>& a, const std::vector<double>& b,
                       double tol = 1e-12) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > tol) return false;
    return true;
}

// KD hashing of (sigma_x, sigma_z): the workhorse two-axis fixture
inline qjsd::DiscreteQJSD kd_xz() {
    return qjsd::build_qjsd(qjsd::alpha_hashing(cxd(1, 0)),
                            {qjsd::HermitianOperator(sigma_x()),
                             qjsd::HermitianOperator(sigma_z())});
}

class ScratchDir {
public:
    ScratchDir() {
        base_ = std::filesystem::temp_directory_path() /
                ("qjsd-test-" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        std::filesystem::create_directories(base_);
    }
    ~ScratchDir() {
        std::error_code ec;
        std::filesystem::remove_all(base_, ec);
    }

    std::string path(const std::string& name) const { return (base_ / name).string(); }

    std::string write(const std::string& name, const std::string& content) const {
        const std::string p = path(name);
        std::ofstream(p) << content;
        return p;
    }

    std::string read(const std::string& name) const {
        std::ifstream in(path(name));
        return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    }

private:
    std::filesystem::path base_;
};

}  // namespace testutil

#endif
