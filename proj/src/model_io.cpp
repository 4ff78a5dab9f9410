#include "specweyl/model_io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"
#include "specweyl/errors.hpp"

namespace specweyl {

namespace {

using nlohmann::json;

std::string lower(std::string s) {
    s.erase(std::remove(s.begin(), s.end(), '_'), s.end());
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

double number(const json& v, const std::string& what) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const std::string s = lower(v.get<std::string>());
        if (s == "inf" || s == "+inf" || s == "infinity") return std::numeric_limits<double>::infinity();
        if (s == "-inf" || s == "-infinity") return -std::numeric_limits<double>::infinity();
    }
    throw ModelError(what + " must be a number (or \"inf\"/\"-inf\")");
}

PotentialModel::BC boundary(const json& j, const char* key) {
    if (!j.contains(key)) return std::nullopt;
    const json& v = j.at(key);
    if (v.is_string()) {
        const std::string s = lower(v.get<std::string>());
        if (s == "dirichlet" || s == "friedrichs") return BoundaryCondition::dirichlet();
        if (s == "neumann") return BoundaryCondition::neumann();
        throw ModelError(std::string(key) + ": unknown boundary condition '" + v.get<std::string>() + "'");
    }
    if (v.is_object() && v.contains("angle")) return BoundaryCondition{number(v.at("angle"), key)};
    if (v.is_number()) return BoundaryCondition{v.get<double>()};
    throw ModelError(std::string(key) + " must be \"dirichlet\", \"neumann\" or {\"angle\": a}");
}

std::vector<Term> parse_terms(const json& j) {
    std::vector<Term> out;
    if (!j.contains("terms")) return out;
    if (!j.at("terms").is_array()) throw ModelError("terms must be an array");
    for (const json& t : j.at("terms")) {
        Term term;
        const std::string type = lower(t.value("type", std::string("gaussian")));
        if (type == "gaussian") term.type = Term::Type::Gaussian;
        else if (type == "rational") term.type = Term::Type::Rational;
        else if (type == "bump") term.type = Term::Type::Bump;
        else throw ModelError("unknown term type '" + type + "'");
        for (const auto& [k, v] : t.items())
            if (k != "type" && k != "amplitude" && k != "center" && k != "width") throw ModelError("unknown term key '" + k + "'");
        term.amplitude = number(t.value("amplitude", json(0.0)), "amplitude");
        term.center = number(t.value("center", json(0.0)), "center");
        term.width = number(t.value("width", json(1.0)), "width");
        out.push_back(term);
    }
    return out;
}

void read_table(const json& j, const std::string& base_dir, std::vector<double>& x, std::vector<double>& q) {
    if (!j.contains("table")) throw ModelError("tabulated model needs \"table\"");
    const json& t = j.at("table");
    if (t.is_object()) {
        for (const json& v : t.at("x")) x.push_back(number(v, "table x"));
        for (const json& v : t.at("q")) q.push_back(v.is_null() ? std::numeric_limits<double>::quiet_NaN() : number(v, "table q"));
        return;
    }
    if (!t.is_string()) throw ModelError("table must be a CSV path or {\"x\":[..],\"q\":[..]}");
    const std::filesystem::path p = std::filesystem::path(base_dir) / t.get<std::string>();
    std::ifstream in(p);
    if (!in) throw ModelError("cannot open table " + p.string());
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ls(line);
        std::string a, b;
        if (!(ls >> a >> b)) throw ModelError("malformed table line: " + line);
        try {
            x.push_back(std::stod(a));
            const std::string lb = lower(b);
            q.push_back(lb == "nan" || lb == "inf" || lb == "-inf" ? std::numeric_limits<double>::quiet_NaN() : std::stod(b));
        } catch (const std::logic_error&) {
            if (x.empty() && q.empty()) continue;  // header
            throw ModelError("malformed table line: " + line);
        }
    }
}

PotentialModel build(const json& j, const std::string& base_dir) {
    if (!j.is_object()) throw ModelError("model must be a JSON object");
    static const std::set<std::string> known{"kind", "interval", "l", "k", "nu", "terms", "bc_a", "bc_b", "table", "name", "description"};
    for (const auto& [k, v] : j.items())
        if (!known.count(k)) throw ModelError("unknown model key '" + k + "'");
    if (!j.contains("kind")) throw ModelError("model needs \"kind\"");
    const std::string kind = lower(j.at("kind").get<std::string>());
    double a = 0.0, b = 1.0;
    const bool has_interval = j.contains("interval");
    if (has_interval) {
        const json& iv = j.at("interval");
        if (!iv.is_array() || iv.size() != 2) throw ModelError("interval must be [a, b]");
        a = number(iv[0], "interval a");
        b = number(iv[1], "interval b");
    }
    const auto terms = parse_terms(j);
    const auto bca = boundary(j, "bc_a"), bcb = boundary(j, "bc_b");

    if (kind == "harmonic" || kind == "perturbedharmonic") {
        if (has_interval && (std::isfinite(a) || std::isfinite(b) || a > 0 || b < 0))
            throw ModelError("oscillator models live on (-inf, inf)");
        if (bca || bcb) throw ModelError("oscillator endpoints are limit point; no boundary conditions");
        if (kind == "harmonic") {
            if (!terms.empty()) throw ModelError("harmonic takes no terms; use perturbed_harmonic");
            return PotentialModel::harmonic();
        }
        return PotentialModel::perturbed_harmonic(terms);
    }
    if (kind == "regular") {
        if (!has_interval) throw ModelError("regular model needs an interval");
        return PotentialModel::regular(a, b, terms, bca.value_or(BoundaryCondition::dirichlet()),
                                       bcb.value_or(BoundaryCondition::dirichlet()));
    }
    if (kind == "bessel") {
        if (has_interval && a != 0.0) throw ModelError("Bessel models live on (0, b)");
        return PotentialModel::bessel(number(j.value("l", json(0.0)), "l"), number(j.value("k", json(0.0)), "k"),
                                      has_interval ? b : 1.0, terms, bca, bcb);
    }
    if (kind == "poschlteller") {
        if (has_interval && (a != 0.0 || b != 1.0)) throw ModelError("Poschl-Teller models live on (0, 1)");
        return PotentialModel::poschl_teller(number(j.value("nu", json(1.0)), "nu"), terms, bca, bcb);
    }
    if (kind == "tabulated") {
        std::vector<double> x, q;
        read_table(j, base_dir, x, q);
        if (has_interval && !x.empty() && (a != x.front() || b != x.back()))
            throw ModelError("interval must match the first and last table abscissae");
        return PotentialModel::tabulated(x, q, bca.value_or(BoundaryCondition::dirichlet()),
                                         bcb.value_or(BoundaryCondition::dirichlet()));
    }
    throw ModelError("unknown model kind '" + j.at("kind").get<std::string>() + "'");
}

}  // namespace

PotentialModel parse_model(const std::string& text, const std::string& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ModelError(std::string("invalid JSON: ") + e.what());
    }
    try {
        return build(j, base_dir);
    } catch (const json::exception& e) {
        throw ModelError(std::string("schema violation: ") + e.what());
    }
}

PotentialModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open model file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str(), std::filesystem::path(path).parent_path().string().empty()
                                     ? std::string(".")
                                     : std::filesystem::path(path).parent_path().string());
}

double default_base_point(const PotentialModel& m) {
    const bool fa = std::isfinite(m.a()), fb = std::isfinite(m.b());
    if (fa && fb) return 0.5 * (m.a() + m.b());
    if (!fa && !fb) return 0.0;
    return fa ? m.a() + 1.0 : m.b() - 1.0;
}

}  // namespace specweyl
