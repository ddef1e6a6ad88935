#include <sys/wait.h>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

#include "doctest.h"
#include "helpers.hpp"
#include "json.hpp"
#include "qjsd/errors.hpp"
#include "qjsd/io.hpp"
#include "qjsd/phase_space.hpp"
#include "qjsd/qjsd.hpp"
#include "qjsd/transform.hpp"

using namespace qjsd;
using nlohmann::json;
using testutil::ScratchDir;

namespace {

const std::string kSigmaX =
    R"({"dim": 2, "matrix": [[[0,0],[1,0]],[[1,0],[0,0]]]})";
const std::string kSigmaZ =
    R"({"dim": 2, "matrix": [[[1,0],[0,0]],[[0,0],[-1,0]]]})";
const std::string kKetCircular =
    R"({"dim": 2, "kind": "ket", "matrix": [[0.7071067811865476,0],[0,0.7071067811865476]]})";

int run_cli(const std::string& args) {
    const std::string cmd = std::string(QJSD_CLI_BIN) + " " + args;
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

json read_json(const std::string& path) { return json::parse(io::read_file(path)); }

}  // namespace

TEST_CASE("complex literal parsing") {
    CHECK(io::parse_complex("1") == cxd(1, 0));
    CHECK(io::parse_complex("-0.5") == cxd(-0.5, 0));
    CHECK(io::parse_complex("i") == cxd(0, 1));
    CHECK(io::parse_complex("-i") == cxd(0, -1));
    CHECK(io::parse_complex("0.7i") == cxd(0, 0.7));
    CHECK(io::parse_complex("0.3+0.7i") == cxd(0.3, 0.7));
    CHECK(io::parse_complex("1e-3-2e-1i") == cxd(1e-3, -0.2));
    CHECK_THROWS_AS(io::parse_complex("fish"), DomainError);
    CHECK_THROWS_AS(io::parse_complex("1+2"), DomainError);
}

TEST_CASE("full-precision formatting survives a parse round trip") {
    for (double x : {1.0 / 3.0, -2.7182818284590452e-7, 1e300, 0.0}) {
        const double back = std::stod(io::fmt(x));
        CHECK(back == x);
    }
}

TEST_CASE("operator files: load, validate, report residuals") {
    ScratchDir dir;
    const std::string good = dir.write("sx.json", kSigmaX);
    const HermitianOperator h = io::load_operator(good);
    CHECK(max_abs_diff(h.entries(), testutil::sigma_x()) == 0.0);

    const std::string skew = dir.write(
        "skew.json", R"({"dim": 2, "matrix": [[[0,0],[1.001,0]],[[1,0],[0,0]]]})");
    bool threw = false;
    try {
        io::load_operator(skew);
    } catch (const InvariantViolationError& e) {
        threw = true;
        CHECK(e.residual == doctest::Approx(1e-3).epsilon(1e-9));
    }
    CHECK(threw);

    const std::string gap = dir.write("gap.json", R"({"dim": 2})");
    CHECK_THROWS_AS(io::load_operator(gap), SchemaError);
    CHECK_THROWS_AS(io::load_operator(dir.path("missing.json")), DomainError);
    const std::string junk = dir.write("junk.json", "not json");
    CHECK_THROWS_AS(io::load_operator(junk), SchemaError);
}

TEST_CASE("state files: kets promote to densities; renormalization is opt-in") {
    ScratchDir dir;
    const std::string ket = dir.write("psi.json", kKetCircular);
    const DensityOperator rho = io::load_state(ket);
    CHECK(rho.entries()(0, 0).real() == doctest::Approx(0.5).epsilon(1e-12));

    const std::string weak = dir.write(
        "weak.json", R"({"dim": 2, "kind": "ket", "matrix": [[0.9,0],[0,0]]})");
    CHECK_THROWS_AS(io::load_state(weak), InvalidOperatorError);
    const DensityOperator fixed = io::load_state(weak, /*renormalize=*/true);
    CHECK(fixed.entries()(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));

    const std::string hot = dir.write(
        "hot.json", R"({"dim": 2, "kind": "density", "matrix": [[[1,0],[0,0]],[[0,0],[1,0]]]})");
    CHECK_THROWS_AS(io::load_state(hot), InvalidOperatorError);
    CHECK_NOTHROW(io::load_state(hot, true));

    const std::string odd = dir.write(
        "odd.json", R"({"dim": 2, "kind": "wavelet", "matrix": []})");
    CHECK_THROWS_AS(io::load_state(odd), SchemaError);
}

TEST_CASE("hashing presets and spec files") {
    CHECK(io::is_preset_name("kd"));
    CHECK(io::is_preset_name("kappa:0.25"));
    CHECK_FALSE(io::is_preset_name("spec.json"));

    const HashingSpec kd = io::load_hashing("kd");
    REQUIRE(kd.terms.size() == 1);
    CHECK(kd.terms[0].factors[0].axis == 2);

    const HashingSpec al = io::load_hashing("alpha:0.3+0.7i");
    REQUIRE(al.terms.size() == 2);
    CHECK(std::abs(al.terms[0].coeff - cxd(0.65, 0.35)) <= 1e-15);

    const HashingSpec kp = io::load_hashing("kappa:0.5");
    CHECK(kp.terms[0].factors[0].fraction == 0.25);

    CHECK_THROWS_AS(io::preset_hashing("alpha:fish"), DomainError);

    ScratchDir dir;
    const std::string path = dir.write("hash.json", R"({
      "n_axes": 2,
      "terms": [
        {"coeff": [0.5, 0], "factors": [{"axis": 1, "fraction": 1.0},
                                         {"axis": 2, "fraction": 1.0}]},
        {"coeff": [0.5, 0], "factors": [{"axis": 2, "fraction": 1.0},
                                         {"axis": 1, "fraction": 0.5},
                                         {"axis": 1, "fraction": 0.5}]}
      ]})");
    const HashingSpec file_spec = io::load_hashing(path);
    CHECK(file_spec.n_axes == 2);
    REQUIRE(file_spec.terms.size() == 2);
    CHECK(file_spec.terms[1].factors.size() == 3);

    const std::string bad = dir.write("bad.json", R"({"n_axes": 2, "terms": []})");
    CHECK_THROWS_AS(io::load_hashing(bad), SpecInvariantError);
    CHECK_THROWS_AS(io::load_hashing(dir.path("absent.json")), DomainError);
}

TEST_CASE("tabulated functions load with validation") {
    ScratchDir dir;
    const std::string path = dir.write("fn.json", R"([
      {"point": [-1.0, -1.0], "value": [1, 0]},
      {"point": [1.0, 1.0], "value": [0, -2]}
    ])");
    const TabulatedFunction f = io::load_tabulated(path);
    REQUIRE(f.points.size() == 2);
    CHECK(f.values[1] == cxd(0, -2));

    const std::string bad = dir.write("bad.json", R"([{"point": [], "value": [1, 0]}])");
    CHECK_THROWS_AS(io::load_tabulated(bad), SchemaError);
}

TEST_CASE("analytic wavefunction specs match the direct constructors") {
    ScratchDir dir;
    const int n = 64;
    const double q0 = -8.0, dq = 16.0 / n;

    const std::string g = dir.write(
        "g.json", R"({"kind": "gaussian", "sigma": 1.0, "center": 0.5, "momentum": -1.0})");
    const WavefunctionGrid wg = io::load_wavefunction(g, q0, dq, n);
    const WavefunctionGrid direct = gaussian_wavefunction(1.0, 0.5, -1.0, q0, dq, n);
    for (int j = 0; j < n; ++j) CHECK(wg.samples[j] == direct.samples[j]);

    const std::string h = dir.write("h.json", R"({"kind": "hermite", "level": 2})");
    CHECK(io::load_wavefunction(h, q0, dq, n).samples ==
          hermite_wavefunction(2, q0, dq, n).samples);

    const std::string s = dir.write(
        "s.json", R"({"kind": "superposition", "coeffs": [[0.6, 0], [0, 0.8]]})");
    CHECK(io::load_wavefunction(s, q0, dq, n).samples ==
          superposition_wavefunction({cxd(0.6, 0), cxd(0, 0.8)}, q0, dq, n).samples);

    const std::string bad = dir.write("bad.json", R"({"kind": "plane-wave"})");
    CHECK_THROWS_AS(io::load_wavefunction(bad, q0, dq, n), SchemaError);
}

TEST_CASE("QJP CSV round-trips bitwise") {
    const DiscreteQJSD q = testutil::kd_xz();
    const QJPDistribution p =
        quasi_classicalise(q, testutil::ket_state(cxd(0.8, 0.1), cxd(-0.3, 0.5)));
    ScratchDir dir;
    const std::string path = dir.write("p.csv", io::qjp_csv(p));
    const QJPDistribution back = io::load_qjp_csv(path);
    REQUIRE(back.support.size() == p.support.size());
    for (std::size_t i = 0; i < p.support.size(); ++i) {
        CHECK(back.support[i].point == p.support[i].point);
        CHECK(back.support[i].value == p.support[i].value);
    }
}

TEST_CASE("phase-space grid CSV round-trips bitwise with its metadata") {
    const PhaseSpaceGrid w = wigner(gaussian_wavefunction(1.0, 0, 0, -8.0, 16.0 / 64, 64));
    ScratchDir dir;
    const std::string csv = dir.write("w.csv", io::grid_csv(w));
    const std::string meta = dir.write("w.meta.json", io::grid_meta_json(w));
    const PhaseSpaceGrid back = io::load_grid_csv(csv, meta);
    CHECK(back.n == w.n);
    CHECK(back.q0 == w.q0);
    CHECK(back.dp == w.dp);
    CHECK(back.convention == w.convention);
    CHECK(back.values == w.values);
}

TEST_CASE("error JSON carries code, message, and typed extras") {
    const json inv = json::parse(io::error_json(InvariantViolationError("drift", 2.5e-7)));
    CHECK(inv["error"] == "invariant-violation");
    CHECK(inv["residual"] == 2.5e-7);

    const json sch = json::parse(io::error_json(SchemaError("/matrix/1", "bad row")));
    CHECK(sch["error"] == "schema-violation");
    CHECK(sch["where"] == "/matrix/1");

    const json post = json::parse(io::error_json(DegeneratePostSelectionError("tiny", 1e-15)));
    CHECK(post["raw_probability"] == 1e-15);
}

TEST_CASE("command line: QJP emission, determinism, exit codes") {
    ScratchDir dir;
    dir.write("A.json", kSigmaX);
    dir.write("B.json", kSigmaZ);
    dir.write("psi.json", kKetCircular);
    const std::string base = " --obs " + dir.path("A.json") + " --obs " + dir.path("B.json") +
                             " --hash kd --state " + dir.path("psi.json");

    CHECK(run_cli("qjp" + base + " --out " + dir.path("p.csv") + " 2>" + dir.path("err")) == 0);
    const QJPDistribution p = io::load_qjp_csv(dir.path("p.csv"));
    CHECK(std::abs(p.total() - cxd(1, 0)) <= 1e-9);

    CHECK(run_cli("qjp" + base + " --out " + dir.path("p2.csv")) == 0);
    CHECK(dir.read("p.csv") == dir.read("p2.csv"));

    SUBCASE("usage errors exit 2 with a JSON diagnostic") {
        CHECK(run_cli("qjp --hash kd 2>" + dir.path("usage.json")) == 2);
        CHECK(json::parse(dir.read("usage.json"))["error"] == "usage");

        CHECK(run_cli("frobnicate 2>" + dir.path("unknown.json")) == 2);
        CHECK(json::parse(dir.read("unknown.json"))["error"] == "unknown-subcommand");
    }

    SUBCASE("library errors exit 1 with the error code on stderr") {
        CHECK(run_cli("spectra --obs " + dir.path("absent.json") + " 2>" +
                      dir.path("e1.json")) == 1);
        CHECK(json::parse(dir.read("e1.json"))["error"] == "unreadable-file");

        dir.write("w.json", R"({"dim": 2, "kind": "ket", "matrix": [[0.9,0],[0,0]]})");
        const std::string weak_base = " --obs " + dir.path("A.json") + " --obs " +
                                      dir.path("B.json") + " --hash kd --state " +
                                      dir.path("w.json");
        CHECK(run_cli("qjp" + weak_base + " --out " + dir.path("x.csv") + " 2>" +
                      dir.path("e2.json")) == 1);
        CHECK(json::parse(dir.read("e2.json"))["error"] == "invalid-operator");
        CHECK(run_cli("qjp" + weak_base + " --renormalize --out " + dir.path("x.csv")) == 0);
    }
}

TEST_CASE("command line: spectra to stdout and phase-space emitters") {
    ScratchDir dir;
    dir.write("A.json", kSigmaX);
    CHECK(run_cli("spectra --obs " + dir.path("A.json") + " > " + dir.path("spec.json")) == 0);
    const json spec = read_json(dir.path("spec.json"));
    REQUIRE(spec["atoms"].size() == 2);
    CHECK(spec["atoms"][0]["value"].get<double>() == doctest::Approx(-1.0).epsilon(1e-12));

    dir.write("g.json", R"({"kind": "gaussian", "sigma": 1.0, "center": 0.0, "momentum": 0.0})");
    CHECK(run_cli("wigner --state " + dir.path("g.json") + " --n 64 --domain -8:8 --out " +
                  dir.path("w.csv")) == 0);
    REQUIRE(std::filesystem::exists(dir.path("w.csv.meta.json")));
    const PhaseSpaceGrid w = io::load_grid_csv(dir.path("w.csv"), dir.path("w.csv.meta.json"));
    const WavefunctionGrid psi = gaussian_wavefunction(1.0, 0, 0, -8.0, 16.0 / 64, 64);
    double worst = 0.0;
    for (int j = 0; j < w.n; ++j) {
        cxd sum(0, 0);
        for (int k = 0; k < w.n; ++k) sum += w.at(j, k);
        worst = std::max(worst, std::abs(sum * w.dp - std::norm(psi.samples[j])));
    }
    CHECK(worst <= 1e-6);

    CHECK(run_cli("wigner --state " + dir.path("g.json") + " --n 63 --domain -8:8 --out " +
                  dir.path("bad.csv") + " 2>" + dir.path("e.json")) == 1);
    CHECK(json::parse(dir.read("e.json"))["error"] == "bad-grid");
}

TEST_CASE("command line: weak value with a negative post-selection target") {
    ScratchDir dir;
    dir.write("A.json", kSigmaX);
    dir.write("B.json", kSigmaZ);
    dir.write("psi.json",
              R"({"dim": 2, "kind": "ket", "matrix": [[1,0],[0.1,0]]})");

    const int rc = run_cli("weak-value --obs " + dir.path("A.json") + " --obs " +
                           dir.path("B.json") + " --state " + dir.path("psi.json") +
                           " --renormalize --post-select -1 --alpha 0.5 --out " +
                           dir.path("wv.json"));
    CHECK(rc == 0);
    const json wv = read_json(dir.path("wv.json"));
    CHECK(wv["weak_value"][0] == doctest::Approx(10.0).epsilon(1e-9));
    CHECK(std::abs(wv["weak_value"][1].get<double>()) <= 1e-9);
    CHECK(wv["two_state_value"][0] == doctest::Approx(10.0).epsilon(1e-9));
}
