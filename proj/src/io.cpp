#include "qjsd/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

namespace qjsd::io {

using nlohmann::json;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

namespace {

double parse_double(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw DomainError("bad-number", std::string(what) + ": cannot parse '" + s + "'");
    }
}

}  // namespace

cxd parse_complex(std::string s) {
    std::erase_if(s, [](unsigned char c) { return std::isspace(c); });
    if (s.empty()) throw DomainError("bad-number", "empty complex literal");
    // split before the sign that separates the two components (not a leading
    // sign, not an exponent sign)
    std::size_t split = std::string::npos;
    for (std::size_t i = 1; i < s.size(); ++i)
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') split = i;
    auto imag_of = [](std::string t) {
        t.pop_back();  // trailing 'i'
        if (t.empty() || t == "+") return 1.0;
        if (t == "-") return -1.0;
        return parse_double(t, "imaginary part");
    };
    if (split == std::string::npos) {
        if (s.back() == 'i') return {0.0, imag_of(s)};
        return {parse_double(s, "real part"), 0.0};
    }
    if (s.back() != 'i')
        throw DomainError("bad-number", "two-component complex literal must end in 'i': " + s);
    return {parse_double(s.substr(0, split), "real part"), imag_of(s.substr(split))};
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("unreadable-file", "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_output(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DomainError("write-failed", "cannot open " + path + " for writing");
    out << content;
    if (!out) throw DomainError("write-failed", "short write to " + path);
}

namespace {

json parse_json_text(const std::string& text, const std::string& origin) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw SchemaError("/", origin + " is not valid JSON");
    return j;
}

json parse_json_file(const std::string& path) { return parse_json_text(read_file(path), path); }

cxd parse_pair(const json& e, const std::string& where) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw SchemaError(where, "expected a [re, im] number pair");
    return {e[0].get<double>(), e[1].get<double>()};
}

int parse_dim(const json& j) {
    if (!j.is_object()) throw SchemaError("/", "expected a JSON object");
    if (!j.contains("dim") || !j["dim"].is_number_integer() || j["dim"].get<int>() < 1)
        throw SchemaError("/dim", "expected a positive integer");
    return j["dim"].get<int>();
}

Matrix parse_square_matrix(const json& j, int dim, const std::string& where) {
    if (!j.is_array() || static_cast<int>(j.size()) != dim)
        throw SchemaError(where, "expected " + std::to_string(dim) + " rows");
    Matrix m(dim, dim);
    for (int r = 0; r < dim; ++r) {
        const json& row = j[static_cast<std::size_t>(r)];
        const std::string rw = where + "/" + std::to_string(r);
        if (!row.is_array() || static_cast<int>(row.size()) != dim)
            throw SchemaError(rw, "expected " + std::to_string(dim) + " entries");
        for (int c = 0; c < dim; ++c)
            m(r, c) = parse_pair(row[static_cast<std::size_t>(c)], rw + "/" + std::to_string(c));
    }
    return m;
}

}  // namespace

HermitianOperator load_operator(const std::string& path) {
    const json j = parse_json_file(path);
    const int dim = parse_dim(j);
    if (!j.contains("matrix")) throw SchemaError("/matrix", "missing field");
    const Matrix m = parse_square_matrix(j["matrix"], dim, "/matrix");
    const double res = hermiticity_residual(m);
    if (res > kHermiticityTol)
        throw InvariantViolationError(path + ": matrix is not Hermitian", res);
    return HermitianOperator(m);
}

DensityOperator load_state(const std::string& path, bool renormalize) {
    const json j = parse_json_file(path);
    const int dim = parse_dim(j);
    if (!j.contains("kind") || !j["kind"].is_string())
        throw SchemaError("/kind", "expected \"density\" or \"ket\"");
    const std::string kind = j["kind"].get<std::string>();
    if (!j.contains("matrix")) throw SchemaError("/matrix", "missing field");
    if (kind == "density") {
        Matrix m = parse_square_matrix(j["matrix"], dim, "/matrix");
        const double res = hermiticity_residual(m);
        if (res > kHermiticityTol)
            throw InvariantViolationError(path + ": density matrix is not Hermitian", res);
        if (renormalize) {
            const double tr = m.trace().real();
            if (tr > 0.0) m /= tr;
        }
        return DensityOperator(m);
    }
    if (kind == "ket") {
        const json& arr = j["matrix"];
        if (!arr.is_array() || static_cast<int>(arr.size()) != dim)
            throw SchemaError("/matrix", "ket needs " + std::to_string(dim) + " amplitudes");
        Vector ket(dim);
        for (int r = 0; r < dim; ++r)
            ket[r] = parse_pair(arr[static_cast<std::size_t>(r)],
                                "/matrix/" + std::to_string(r));
        if (renormalize) {
            const double nrm = ket.norm();
            if (nrm > 0.0) ket /= nrm;
        }
        return DensityOperator::pure(ket);
    }
    throw SchemaError("/kind", "expected \"density\" or \"ket\", got \"" + kind + "\"");
}

bool is_preset_name(const std::string& name) {
    return name == "kd" || name == "anti-kd" || name == "mh" ||
           name.rfind("alpha:", 0) == 0 || name.rfind("kappa:", 0) == 0;
}

HashingSpec preset_hashing(const std::string& name) {
    if (name == "kd") return alpha_hashing(cxd(1.0, 0.0));
    if (name == "anti-kd") return alpha_hashing(cxd(-1.0, 0.0));
    if (name == "mh") return alpha_hashing(cxd(0.0, 0.0));
    if (name.rfind("alpha:", 0) == 0) return alpha_hashing(parse_complex(name.substr(6)));
    if (name.rfind("kappa:", 0) == 0)
        return kappa_hashing(parse_double(name.substr(6), "kappa"));
    throw DomainError("unknown-preset", "no hashing preset named '" + name + "'");
}

HashingSpec load_hashing(const std::string& name_or_path) {
    if (is_preset_name(name_or_path)) return preset_hashing(name_or_path);
    const json j = parse_json_file(name_or_path);
    if (!j.is_object()) throw SchemaError("/", "expected a JSON object");
    if (!j.contains("n_axes") || !j["n_axes"].is_number_integer())
        throw SchemaError("/n_axes", "expected an integer");
    HashingSpec spec;
    spec.n_axes = j["n_axes"].get<int>();
    if (!j.contains("terms") || !j["terms"].is_array())
        throw SchemaError("/terms", "expected an array");
    for (std::size_t t = 0; t < j["terms"].size(); ++t) {
        const json& jt = j["terms"][t];
        const std::string tw = "/terms/" + std::to_string(t);
        if (!jt.is_object()) throw SchemaError(tw, "expected an object");
        HashingTerm term;
        if (!jt.contains("coeff")) throw SchemaError(tw + "/coeff", "missing field");
        term.coeff = parse_pair(jt["coeff"], tw + "/coeff");
        if (!jt.contains("factors") || !jt["factors"].is_array())
            throw SchemaError(tw + "/factors", "expected an array");
        for (std::size_t f = 0; f < jt["factors"].size(); ++f) {
            const json& jf = jt["factors"][f];
            const std::string fw = tw + "/factors/" + std::to_string(f);
            if (!jf.is_object() || !jf.contains("axis") || !jf["axis"].is_number_integer() ||
                !jf.contains("fraction") || !jf["fraction"].is_number())
                throw SchemaError(fw, "expected {\"axis\": int, \"fraction\": number}");
            term.factors.push_back({jf["axis"].get<int>(), jf["fraction"].get<double>()});
        }
        spec.terms.push_back(std::move(term));
    }
    spec.validate();
    return spec;
}

TabulatedFunction load_tabulated(const std::string& path) {
    const json j = parse_json_file(path);
    if (!j.is_array()) throw SchemaError("/", "expected a JSON array of {point, value}");
    TabulatedFunction f;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const json& e = j[i];
        const std::string ew = "/" + std::to_string(i);
        if (!e.is_object() || !e.contains("point") || !e.contains("value"))
            throw SchemaError(ew, "expected {\"point\": [...], \"value\": [re, im]}");
        const json& pt = e["point"];
        if (!pt.is_array() || pt.empty())
            throw SchemaError(ew + "/point", "expected a non-empty coordinate array");
        std::vector<double> coords;
        for (std::size_t c = 0; c < pt.size(); ++c) {
            if (!pt[c].is_number())
                throw SchemaError(ew + "/point/" + std::to_string(c), "expected a number");
            coords.push_back(pt[c].get<double>());
        }
        f.points.push_back(std::move(coords));
        f.values.push_back(parse_pair(e["value"], ew + "/value"));
    }
    return f;
}

WavefunctionGrid load_wavefunction(const std::string& path, double q0, double dq, int n) {
    const json j = parse_json_file(path);
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw SchemaError("/kind", "expected \"gaussian\", \"hermite\", or \"superposition\"");
    const std::string kind = j["kind"].get<std::string>();
    auto number = [&](const char* field, double fallback) {
        if (!j.contains(field)) return fallback;
        if (!j[field].is_number())
            throw SchemaError(std::string("/") + field, "expected a number");
        return j[field].get<double>();
    };
    if (kind == "gaussian")
        return gaussian_wavefunction(number("sigma", 1.0), number("center", 0.0),
                                     number("momentum", 0.0), q0, dq, n);
    if (kind == "hermite") {
        if (!j.contains("level") || !j["level"].is_number_integer())
            throw SchemaError("/level", "expected an integer");
        return hermite_wavefunction(j["level"].get<int>(), q0, dq, n);
    }
    if (kind == "superposition") {
        if (!j.contains("coeffs") || !j["coeffs"].is_array() || j["coeffs"].empty())
            throw SchemaError("/coeffs", "expected a non-empty array of [re, im] pairs");
        std::vector<cxd> coeffs;
        for (std::size_t i = 0; i < j["coeffs"].size(); ++i)
            coeffs.push_back(parse_pair(j["coeffs"][i], "/coeffs/" + std::to_string(i)));
        return superposition_wavefunction(coeffs, q0, dq, n);
    }
    throw SchemaError("/kind", "unknown state kind \"" + kind + "\"");
}

namespace {

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c)
            row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

std::string operator_json(const Matrix& m) {
    json j;
    j["dim"] = static_cast<int>(m.rows());
    j["matrix"] = matrix_to_json(m);
    return j.dump(2) + "\n";
}

std::string state_json(const Matrix& density) {
    json j;
    j["dim"] = static_cast<int>(density.rows());
    j["kind"] = "density";
    j["matrix"] = matrix_to_json(density);
    return j.dump(2) + "\n";
}

std::string spectra_json(const SpectralMeasure& e) {
    json j;
    j["dim"] = e.dim();
    j["tol"] = e.tol;
    json atoms = json::array();
    for (const auto& a : e.atoms) {
        json ja;
        ja["value"] = a.value;
        ja["projector"] = matrix_to_json(a.projector);
        atoms.push_back(std::move(ja));
    }
    j["atoms"] = std::move(atoms);
    return j.dump(2) + "\n";
}

std::string qjp_csv(const QJPDistribution& p) {
    const std::size_t n_axes = p.support.empty() ? 0 : p.support.front().point.size();
    std::string out;
    for (std::size_t ax = 0; ax < n_axes; ++ax) {
        out += static_cast<char>('a' + ax);
        out += ',';
    }
    out += "re,im\n";
    for (const auto& atom : p.support) {
        for (const double c : atom.point) {
            out += fmt(c);
            out += ',';
        }
        out += fmt(atom.value.real());
        out += ',';
        out += fmt(atom.value.imag());
        out += '\n';
    }
    return out;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    for (const char c : line) {
        if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

}  // namespace

QJPDistribution load_qjp_csv(const std::string& path) {
    std::istringstream in(read_file(path));
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("/", path + " is empty");
    const auto header = split_csv_line(line);
    if (header.size() < 3 || header[header.size() - 2] != "re" || header.back() != "im")
        throw SchemaError("/", path + " lacks the ...,re,im header");
    const std::size_t n_axes = header.size() - 2;
    QJPDistribution p;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw SchemaError("/" + std::to_string(row), path + ": wrong field count");
        QJPDistribution::Atom atom;
        for (std::size_t ax = 0; ax < n_axes; ++ax)
            atom.point.push_back(parse_double(fields[ax], "coordinate"));
        atom.value = {parse_double(fields[n_axes], "re"), parse_double(fields[n_axes + 1], "im")};
        p.support.push_back(std::move(atom));
    }
    return p;
}

std::string grid_csv(const PhaseSpaceGrid& g) {
    std::string out = "q,p,re,im\n";
    for (int j = 0; j < g.n; ++j)
        for (int k = 0; k < g.n; ++k) {
            const cxd v = g.at(j, k);
            out += fmt(g.q(j));
            out += ',';
            out += fmt(g.p(k));
            out += ',';
            out += fmt(v.real());
            out += ',';
            out += fmt(v.imag());
            out += '\n';
        }
    return out;
}

std::string grid_meta_json(const PhaseSpaceGrid& g) {
    json j;
    j["convention"] = g.convention;
    j["axes"] = json::array({json{{"name", "q"}, {"origin", g.q0}, {"step", g.dq}, {"length", g.n}},
                             json{{"name", "p"}, {"origin", g.p0}, {"step", g.dp}, {"length", g.n}}});
    return j.dump(2) + "\n";
}

PhaseSpaceGrid load_grid_csv(const std::string& csv_path, const std::string& meta_path) {
    const json meta = parse_json_file(meta_path);
    if (!meta.is_object() || !meta.contains("axes") || !meta["axes"].is_array() ||
        meta["axes"].size() != 2)
        throw SchemaError("/axes", meta_path + ": expected two axis descriptors");
    PhaseSpaceGrid g;
    const json& qa = meta["axes"][0];
    const json& pa = meta["axes"][1];
    for (const json* a : {&qa, &pa})
        if (!a->contains("origin") || !a->contains("step") || !a->contains("length"))
            throw SchemaError("/axes", meta_path + ": axis needs origin/step/length");
    g.q0 = qa["origin"].get<double>();
    g.dq = qa["step"].get<double>();
    g.p0 = pa["origin"].get<double>();
    g.dp = pa["step"].get<double>();
    g.n = qa["length"].get<int>();
    if (pa["length"].get<int>() != g.n)
        throw SchemaError("/axes/1/length", "axis lengths differ");
    if (meta.contains("convention")) g.convention = meta["convention"].get<std::string>();

    std::istringstream in(read_file(csv_path));
    std::string line;
    if (!std::getline(in, line) || split_csv_line(line) != std::vector<std::string>{"q", "p", "re", "im"})
        throw SchemaError("/", csv_path + " lacks the q,p,re,im header");
    g.values.reserve(static_cast<std::size_t>(g.n) * g.n);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 4)
            throw SchemaError("/", csv_path + ": wrong field count");
        g.values.emplace_back(parse_double(fields[2], "re"), parse_double(fields[3], "im"));
    }
    if (g.values.size() != static_cast<std::size_t>(g.n) * g.n)
        throw SchemaError("/", csv_path + ": row count does not match axis lengths");
    return g;
}

std::string error_json(const Error& e) {
    json j;
    j["error"] = e.code();
    j["message"] = e.what();
    if (const auto* iv = dynamic_cast<const InvariantViolationError*>(&e))
        j["residual"] = iv->residual;
    if (const auto* ps = dynamic_cast<const DegeneratePostSelectionError*>(&e))
        j["raw_probability"] = ps->raw_probability;
    if (const auto* se = dynamic_cast<const SchemaError*>(&e)) j["where"] = se->where;
    return j.dump() + "\n";
}

}  // namespace qjsd::io
