#include "thermo/serialize.hpp"

#include "thermo/error.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace thermo {

namespace {

const Json& field(const Json& j, const char* key, const char* what) {
    if (!j.is_object() || !j.contains(key)) throw Error("invalid_json", std::string(what) + ": missing field \"" + key + "\"");
    return j.at(key);
}

double number(const Json& j, const char* what) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return to_double(parse_rational(j.get<std::string>()));
    throw Error("invalid_json", std::string(what) + ": expected a number");
}

std::size_t count(const Json& j, const char* what) {
    if (!j.is_number_integer() || j.get<long long>() < 0) throw Error("invalid_json", std::string(what) + ": expected a nonnegative integer");
    return j.get<std::size_t>();
}

}  // namespace

Json to_json(const ComplexMatrix& m) {
    Json entries = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) entries.push_back({m(r, c).real(), m(r, c).imag()});
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

ComplexMatrix complex_matrix_from_json(const Json& j) {
    const std::size_t rows = count(field(j, "rows", "matrix"), "matrix rows");
    const std::size_t cols = count(field(j, "cols", "matrix"), "matrix cols");
    const Json& e = field(j, "entries", "matrix");
    if (!e.is_array() || e.size() != rows * cols) throw Error("invalid_json", "matrix: entry count is not rows*cols");
    ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t k = 0; k < e.size(); ++k) {
        const Json& z = e[k];
        Complex v;
        if (z.is_array() && z.size() == 2) v = {number(z[0], "matrix entry"), number(z[1], "matrix entry")};
        else v = number(z, "matrix entry");
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw Error("invalid_json", "matrix: non-finite entry");
        m(static_cast<Eigen::Index>(k / cols), static_cast<Eigen::Index>(k % cols)) = v;
    }
    return m;
}

Json to_json(const RealVector& v) {
    Json a = Json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

Json to_json(const RealMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) rows.push_back(to_json(RealVector(m.row(r).transpose())));
    return rows;
}

RealVector real_vector_from_json(const Json& j) {
    if (!j.is_array()) throw Error("invalid_json", "vector: expected an array");
    RealVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], "vector entry");
    return v;
}

RealMatrix real_matrix_from_json(const Json& j) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) throw Error("invalid_json", "matrix: expected nested rows");
    const std::size_t cols = j[0].size();
    RealMatrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (!j[r].is_array() || j[r].size() != cols) throw Error("invalid_json", "matrix: ragged rows");
        m.row(static_cast<Eigen::Index>(r)) = real_vector_from_json(j[r]).transpose();
    }
    return m;
}

Json to_json(const Hamiltonian& h) {
    Json levels = Json::array();
    for (const auto& l : h.levels()) levels.push_back({{"a", format_rational(l.quantum_mult)}, {"w", format_rational(l.weight_factor)}});
    return Json{{"beta", h.beta()}, {"quantum", h.quantum()}, {"levels", std::move(levels)}};
}

Hamiltonian hamiltonian_from_json(const Json& j) {
    const double beta = number(field(j, "beta", "hamiltonian"), "beta");
    const double quantum = j.contains("quantum") ? number(j.at("quantum"), "quantum") : 1.0;
    const Json& levels = field(j, "levels", "hamiltonian");
    if (!levels.is_array()) throw Error("invalid_json", "hamiltonian: levels must be an array");
    auto rational = [](const Json& v, const char* def) {
        if (v.is_null()) return parse_rational(def);
        if (v.is_string()) return parse_rational(v.get<std::string>());
        if (v.is_number_integer()) return Rational(v.get<long long>());
        throw Error("invalid_json", "hamiltonian: level components must be rational strings or integers");
    };
    std::vector<EnergyLabel> out;
    for (const auto& l : levels) {
        if (!l.is_object()) throw Error("invalid_json", "hamiltonian: level must be an object");
        out.emplace_back(rational(l.value("a", Json()), "0"), rational(l.value("w", Json()), "1"));
    }
    return Hamiltonian(std::move(out), beta, quantum);
}

Json to_json(const NoisyRealization& r) {
    return Json{{"n", r.system_dim}, {"m", r.bath_dim}, {"U", to_json(r.unitary)}};
}

NoisyRealization realization_from_json(const Json& j) {
    NoisyRealization r{count(field(j, "n", "realization"), "n"), count(field(j, "m", "realization"), "m"),
                       complex_matrix_from_json(field(j, "U", "realization"))};
    if (static_cast<std::size_t>(r.unitary.rows()) != r.system_dim * r.bath_dim) {
        throw Error("dimension_mismatch", "realization: U is not (n*m)-square");
    }
    require_unitary(r.unitary, "realization");
    return r;
}

Json to_json(const StochasticMatrix& d) { return Json{{"D", to_json(d.matrix())}}; }

namespace {

Json terms_json(const std::vector<PermutationTerm>& terms) {
    Json t = Json::array();
    for (const auto& term : terms) t.push_back({{"w", term.weight}, {"perm", term.perm}});
    return Json{{"terms", std::move(t)}};
}

}  // namespace

Json to_json(const ConvexPermutationDecomposition& d) { return terms_json(d.terms); }
Json to_json(const ConvexCombination& c) { return terms_json(c.terms); }

ConvexCombination combination_from_json(const Json& j) {
    const Json& terms = field(j, "terms", "combination");
    if (!terms.is_array()) throw Error("invalid_json", "combination: terms must be an array");
    ConvexCombination c;
    for (const auto& t : terms) {
        PermutationTerm term;
        term.weight = number(field(t, "w", "term"), "term weight");
        const Json& perm = field(t, "perm", "term");
        if (!perm.is_array()) throw Error("invalid_json", "term: perm must be an array");
        for (const auto& x : perm) term.perm.push_back(count(x, "perm entry"));
        c.terms.push_back(std::move(term));
    }
    return c;
}

RealVector parse_vector(const std::string& text) {
    std::string s = text;
    s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == '[' || c == ']' || c == ' '; }), s.end());
    std::vector<double> vals;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) vals.push_back(to_double(parse_rational(item)));
    if (vals.empty()) throw Error("invalid_argument", "empty vector '" + text + "'");
    return Eigen::Map<RealVector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

Json load_json(const std::string& text_or_path) {
    std::string text = text_or_path;
    const auto first = text.find_first_not_of(" \t\n");
    if (first == std::string::npos || (text[first] != '{' && text[first] != '[')) {
        std::ifstream in(text_or_path);
        if (!in) throw Error("io_error", "cannot read '" + text_or_path + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        text = buf.str();
    }
    return Json::parse(text);  // parse_error propagates to the caller
}

std::string format_number(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string reachable_set_csv(const ReachableSet& r) {
    std::ostringstream out;
    const std::size_t n = r.p.dim();
    for (std::size_t i = 0; i < n; ++i) out << "p_" << (i + 1) << ',';
    out << "is_hull_vertex\n";
    std::vector<char> vertex(r.points.size(), 0);
    for (std::size_t v : r.hull.vertices) vertex[v] = 1;
    for (std::size_t k = 0; k < r.points.size(); ++k) {
        for (std::size_t i = 0; i < n; ++i) out << format_number(r.points[k][i]) << ',';
        out << (vertex[k] ? 1 : 0) << '\n';
    }
    return out.str();
}

Json reachable_set_json(const ReachableSet& r) {
    Json pts = Json::array();
    for (const auto& q : r.points) pts.push_back(to_json(q.values()));
    std::vector<std::size_t> hv = r.hull.vertices;
    Json hull = Json::array();
    for (std::size_t v : hv) hull.push_back(to_json(r.points[v].values()));
    return Json{{"p", to_json(r.p.values())},
                {"sampled", r.sampled},
                {"affine_dim", r.hull.frame.dim()},
                {"points", std::move(pts)},
                {"hull_vertex_indices", hv},
                {"hull_vertices", std::move(hull)}};
}

}  // namespace thermo
