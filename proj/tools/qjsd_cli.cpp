// command-line front end: one subcommand per library construction

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "json.hpp"
#include "qjsd/errors.hpp"
#include "qjsd/io.hpp"
#include "qjsd/phase_space.hpp"
#include "qjsd/qjsd.hpp"
#include "qjsd/spectral.hpp"
#include "qjsd/stats.hpp"
#include "qjsd/transform.hpp"
#include "qjsd/types.hpp"
#include "qjsd/verify.hpp"

using namespace qjsd;
using nlohmann::json;

namespace {

void apply_thread_cap() {
#ifdef _OPENMP
    if (const char* env = std::getenv("QJSD_NUM_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) omp_set_num_threads(n);
    }
#endif
}

std::pair<double, double> parse_domain(const std::string& s) {
    const auto pos = s.find(':');
    if (pos == std::string::npos || pos == 0 || pos + 1 == s.size())
        throw DomainError("bad-domain", "--domain expects lo:hi, got '" + s + "'");
    double lo, hi;
    try {
        lo = std::stod(s.substr(0, pos));
        hi = std::stod(s.substr(pos + 1));
    } catch (const std::exception&) {
        throw DomainError("bad-domain", "--domain expects lo:hi, got '" + s + "'");
    }
    if (!(lo < hi)) throw DomainError("bad-domain", "--domain needs lo < hi");
    return {lo, hi};
}

json pair_json(cxd z) { return json::array({z.real(), z.imag()}); }

struct Options {
    std::vector<std::string> obs;
    std::string state, hash = "kd", fn, gn, out = "-";
    std::string domain = "-10:10", kernel = "wigner", suite = "all";
    bool renormalize = false;
    double tol = -1.0, merge_tol = -1.0, threshold = 1e-12;
    double post_select = 0.0, eps = 1e-8;
    std::string alpha;
    int n = 256;
    std::uint64_t seed = 7;
};

std::vector<HermitianOperator> load_observables(const Options& o, std::size_t expected) {
    if (expected != 0 && o.obs.size() != expected)
        throw DomainError("bad-arity",
                          "expected " + std::to_string(expected) + " --obs arguments");
    std::vector<HermitianOperator> ops;
    for (const auto& path : o.obs) ops.push_back(io::load_operator(path));
    return ops;
}

DiscreteQJSD build_from(const Options& o) {
    const HashingSpec spec = io::load_hashing(o.hash);
    return build_qjsd(spec, load_observables(o, static_cast<std::size_t>(spec.n_axes)),
                      o.merge_tol);
}

WavefunctionGrid state_on_grid(const Options& o) {
    const auto [lo, hi] = parse_domain(o.domain);
    if (o.n < 2 || (o.n & (o.n - 1)) != 0)
        throw DomainError("bad-grid", "--n must be a power of two >= 2");
    return io::load_wavefunction(o.state, lo, (hi - lo) / o.n, o.n);
}

void emit_grid(const PhaseSpaceGrid& g, const std::string& out) {
    io::write_output(out, io::grid_csv(g));
    if (out != "-") io::write_output(out + ".meta.json", io::grid_meta_json(g));
}

ScalarFunction scalar_fn_or_identity(const std::string& path) {
    if (path.empty()) return [](double x) { return cxd(x, 0.0); };
    return tabulated_scalar(io::load_tabulated(path), 1e-6);
}

}  // namespace

int main(int argc, char** argv) {
    apply_thread_cap();
    Options o;
    int rc = 0;

    CLI::App app{"quasi-joint spectral distribution toolkit"};
    app.require_subcommand(1);

    auto add_obs = [&](CLI::App* c, int n_req) {
        c->add_option("--obs", o.obs, "observable JSON file (repeatable)")
            ->required()
            ->expected(n_req, -1);
    };

    auto* spectra = app.add_subcommand("spectra", "eigen-decompose an observable");
    add_obs(spectra, 1);
    spectra->add_option("--tol", o.tol, "eigenvalue grouping tolerance");
    spectra->add_option("--out", o.out, "output path or - for stdout");
    spectra->callback([&] {
        const auto ops = load_observables(o, 1);
        io::write_output(o.out, io::spectra_json(eigendecompose(ops.front(), o.tol)));
    });

    auto qjp_action = [&] {
        const DiscreteQJSD q = build_from(o);
        const DensityOperator rho = io::load_state(o.state, o.renormalize);
        io::write_output(o.out, io::qjp_csv(quasi_classicalise(q, rho)));
    };
    for (const char* name : {"qjp", "classicalise"}) {
        auto* c = app.add_subcommand(
            name, "quasi-joint probabilities of a state under a hashing");
        add_obs(c, 1);
        c->add_option("--hash", o.hash, "hashing preset or spec file");
        c->add_option("--state", o.state, "state JSON file")->required();
        c->add_option("--merge-tol", o.merge_tol, "support merge tolerance");
        c->add_flag("--renormalize", o.renormalize, "rescale non-normalized states");
        c->add_option("--out", o.out, "output path or - for stdout");
        c->callback(qjp_action);
    }

    auto* quant = app.add_subcommand("quantise", "integrate a function against a QJSD");
    add_obs(quant, 1);
    quant->add_option("--hash", o.hash, "hashing preset or spec file");
    quant->add_option("--fn", o.fn, "tabulated function JSON")->required();
    quant->add_option("--merge-tol", o.merge_tol, "support merge tolerance");
    quant->add_option("--out", o.out, "output path or - for stdout");
    quant->callback([&] {
        const DiscreteQJSD q = build_from(o);
        const auto aligned = align_tabulated(io::load_tabulated(o.fn), q);
        io::write_output(o.out, io::operator_json(quantise(aligned, q)));
    });

    auto* vadj = app.add_subcommand("verify-adjoint",
                                    "pairing of quantisation against quasi-classicalisation");
    add_obs(vadj, 1);
    vadj->add_option("--hash", o.hash, "hashing preset or spec file");
    vadj->add_option("--state", o.state, "state JSON file")->required();
    vadj->add_option("--fn", o.fn, "tabulated function JSON")->required();
    vadj->add_flag("--renormalize", o.renormalize, "rescale non-normalized states");
    vadj->add_option("--out", o.out, "output path or - for stdout");
    vadj->callback([&] {
        const DiscreteQJSD q = build_from(o);
        const DensityOperator rho = io::load_state(o.state, o.renormalize);
        const auto aligned = align_tabulated(io::load_tabulated(o.fn), q);
        const cxd lhs = trace_product(quantise(aligned, q), rho.entries());
        const QJPDistribution p = quasi_classicalise(q, rho);
        cxd rhs(0, 0);
        for (std::size_t i = 0; i < p.support.size(); ++i) rhs += aligned[i] * p.support[i].value;
        json out;
        out["residual"] = std::abs(lhs - rhs);
        out["operator_side"] = pair_json(lhs);
        out["distribution_side"] = pair_json(rhs);
        io::write_output(o.out, out.dump(2) + "\n");
    });

    auto* faith = app.add_subcommand("faithfulness",
                                     "rank of the state -> QJP linear map");
    add_obs(faith, 1);
    faith->add_option("--hash", o.hash, "hashing preset or spec file");
    faith->add_option("--out", o.out, "output path or - for stdout");
    faith->callback([&] {
        const DiscreteQJSD q = build_from(o);
        const int rank = faithfulness_rank(q);
        const int d2 = q.dim() * q.dim();
        json out;
        out["rank"] = rank;
        out["dim_squared"] = d2;
        out["faithful"] = rank == d2;
        io::write_output(o.out, out.dump(2) + "\n");
    });

    auto add_grid_flags = [&](CLI::App* c) {
        c->add_option("--state", o.state, "analytic-state JSON file")->required();
        c->add_option("--n", o.n, "grid size (power of two)");
        c->add_option("--domain", o.domain, "position range lo:hi");
        c->add_option("--out", o.out, "output path or - for stdout");
    };

    auto* wig = app.add_subcommand("wigner", "Wigner function of a pure state");
    add_grid_flags(wig);
    wig->callback([&] { emit_grid(wigner(state_on_grid(o)), o.out); });

    auto* coh = app.add_subcommand("cohen", "Cohen-class transform of the Wigner function");
    add_grid_flags(coh);
    coh->add_option("--kernel", o.kernel, "wigner|kd|anti-kd|mh|bj|kappa:<v>");
    coh->callback([&] {
        emit_grid(cohen_transform(wigner(state_on_grid(o)), CohenKernel::parse(o.kernel)), o.out);
    });

    auto* hus = app.add_subcommand("husimi", "Gaussian-smoothed (Husimi) distribution");
    add_grid_flags(hus);
    hus->callback([&] { emit_grid(husimi(wigner(state_on_grid(o))), o.out); });

    auto* gsc = app.add_subcommand("gs", "regularized Gaussian deconvolution");
    add_grid_flags(gsc);
    gsc->add_option("--eps", o.eps, "deconvolution regularization");
    gsc->callback([&] { emit_grid(glauber_sudarshan(wigner(state_on_grid(o)), o.eps), o.out); });

    auto* wv = app.add_subcommand("weak-value", "pre/post-selected conditional value");
    add_obs(wv, 2);
    wv->add_option("--state", o.state, "state JSON file")->required();
    wv->add_option("--post-select", o.post_select, "eigenvalue of the second observable")
        ->required();
    wv->add_option("--threshold", o.threshold, "minimum post-selection probability");
    wv->add_option("--alpha", o.alpha, "also report the two-state value at this alpha");
    wv->add_flag("--renormalize", o.renormalize, "rescale non-normalized states");
    wv->add_option("--out", o.out, "output path or - for stdout");
    wv->callback([&] {
        const auto ops = load_observables(o, 2);
        const DensityOperator rho = io::load_state(o.state, o.renormalize);
        const cxd w = weak_value(ops[0], ops[1], o.post_select, rho, o.threshold);
        json out;
        out["weak_value"] = pair_json(w);
        if (!o.alpha.empty()) {
            const cxd al = io::parse_complex(o.alpha);
            out["alpha"] = pair_json(al);
            out["two_state_value"] =
                pair_json(two_state_value(ops[0], ops[1], o.post_select, rho, al, o.threshold));
        }
        io::write_output(o.out, out.dump(2) + "\n");
    });

    auto* ce = app.add_subcommand("cond-exp", "conditional expectation given the second axis");
    add_obs(ce, 1);
    ce->add_option("--hash", o.hash, "hashing preset or spec file");
    ce->add_option("--state", o.state, "state JSON file")->required();
    ce->add_option("--fn", o.fn, "tabulated function of the first axis (default: identity)");
    ce->add_option("--threshold", o.threshold, "conditioning probability threshold");
    ce->add_flag("--renormalize", o.renormalize, "rescale non-normalized states");
    ce->add_option("--out", o.out, "output path or - for stdout");
    ce->callback([&] {
        const DiscreteQJSD q = build_from(o);
        const DensityOperator rho = io::load_state(o.state, o.renormalize);
        const ConditionalExpectation result =
            conditional_expectation(scalar_fn_or_identity(o.fn), q, rho, o.threshold);
        json out;
        out["atoms"] = json::array();
        for (const auto& a : result.atoms)
            out["atoms"].push_back(
                {{"b", a.b}, {"value", pair_json(a.value)}, {"probability", a.probability}});
        out["excluded"] = json::array();
        for (const auto& e : result.excluded)
            out["excluded"].push_back({{"b", e.b}, {"probability", e.probability}});
        json op;
        op["dim"] = static_cast<int>(result.operator_form.rows());
        json rows = json::array();
        for (int r = 0; r < result.operator_form.rows(); ++r) {
            json row = json::array();
            for (int c = 0; c < result.operator_form.cols(); ++c)
                row.push_back(pair_json(result.operator_form(r, c)));
            rows.push_back(std::move(row));
        }
        op["matrix"] = std::move(rows);
        out["operator_form"] = std::move(op);
        io::write_output(o.out, out.dump(2) + "\n");
    });

    auto* cov = app.add_subcommand("covariance", "quasi-correlation and quantum covariance");
    add_obs(cov, 1);
    cov->add_option("--hash", o.hash, "hashing preset or spec file");
    cov->add_option("--state", o.state, "state JSON file")->required();
    cov->add_option("--fn", o.fn, "tabulated function of the first axis (default: identity)");
    cov->add_option("--gn", o.gn, "tabulated function of the second axis (default: identity)");
    cov->add_flag("--renormalize", o.renormalize, "rescale non-normalized states");
    cov->add_option("--out", o.out, "output path or - for stdout");
    cov->callback([&] {
        const DiscreteQJSD q = build_from(o);
        const DensityOperator rho = io::load_state(o.state, o.renormalize);
        const ScalarFunction f = scalar_fn_or_identity(o.fn);
        const ScalarFunction g = scalar_fn_or_identity(o.gn);
        json out;
        out["correlation"] = pair_json(quasi_correlation(f, g, q, rho));
        out["covariance"] = pair_json(quantum_covariance(f, g, q, rho));
        io::write_output(o.out, out.dump(2) + "\n");
    });

    auto* ver = app.add_subcommand("verify", "run the invariant batteries");
    ver->add_option("--suite", o.suite, "acceptance|properties|all");
    ver->add_option("--seed", o.seed, "seed for the randomized draws");
    ver->add_option("--out", o.out, "output path or - for stdout");
    ver->callback([&] {
        const auto results = verify::run_suite(o.suite, o.seed);
        io::write_output(o.out, verify::format_report(results));
        for (const auto& r : results)
            if (!r.pass) rc = 1;
    });

    // allow flag values that begin with '-' (e.g. --domain -10:10) by fusing
    // them into --flag=value form before CLI11 sees them
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    if (!args.empty() && !args.front().empty() && args.front()[0] != '-' &&
        app.get_subcommand_no_throw(args.front()) == nullptr) {
        json err;
        err["error"] = "unknown-subcommand";
        err["message"] = "no subcommand named '" + args.front() + "'";
        std::cerr << err.dump() << "\n";
        return 2;
    }
    for (std::size_t i = 0; i + 1 < args.size(); ++i) {
        if ((args[i] == "--domain" || args[i] == "--post-select" || args[i] == "--alpha") &&
            args[i + 1].size() > 1 && args[i + 1][0] == '-') {
            args[i] += "=" + args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i) + 1);
        }
    }
    std::reverse(args.begin(), args.end());  // the vector overload expects reversed argv

    try {
        app.parse(args);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ExtrasError& e) {
        json err;
        err["error"] = "unknown-subcommand";
        err["message"] = e.what();
        std::cerr << err.dump() << "\n";
        return 2;
    } catch (const CLI::ParseError& e) {
        json err;
        err["error"] = "usage";
        err["message"] = e.what();
        std::cerr << err.dump() << "\n";
        return 2;
    } catch (const qjsd::Error& e) {
        std::cerr << io::error_json(e);
        return 1;
    } catch (const std::exception& e) {
        json err;
        err["error"] = "internal";
        err["message"] = e.what();
        std::cerr << err.dump() << "\n";
        return 1;
    }
    return rc;
}
