#include "qst/io.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace qst {

std::string to_string(const BigInt& x) { return x.str(); }

namespace {

std::map<std::string, std::string> parse_kv(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos) throw ValidationError("expected key=value in '" + text + "'");
        kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return kv;
}

int get_int(const std::map<std::string, std::string>& kv, const std::string& key, std::optional<int> fallback = {}) {
    auto it = kv.find(key);
    if (it == kv.end()) {
        if (fallback) return *fallback;
        throw ValidationError("missing '" + key + "'");
    }
    try {
        size_t pos = 0;
        int v = std::stoi(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument(key);
        return v;
    } catch (const std::logic_error&) {
        throw ValidationError("'" + key + "' must be an integer");
    }
}

double get_double(const std::map<std::string, std::string>& kv, const std::string& key, double fallback) {
    auto it = kv.find(key);
    if (it == kv.end()) return fallback;
    try {
        return std::stod(it->second);
    } catch (const std::logic_error&) {
        throw ValidationError("'" + key + "' must be a number");
    }
}

bool get_bool(const std::map<std::string, std::string>& kv, const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) return false;
    return it->second == "1" || it->second == "true" || it->second == "yes";
}

json lattice_json(const LatticeSpec& s) {
    return {{"d", s.d}, {"m", s.m}, {"self_loops", s.self_loops}, {"a", s.a}, {"tau", s.tau}};
}

LatticeSpec lattice_from(const json& j) {
    LatticeSpec s;
    s.d = j.at("d").get<int>();
    s.m = j.at("m").get<int>();
    s.self_loops = j.value("self_loops", false);
    s.a = j.value("a", 1.0);
    s.tau = j.value("tau", 1.0);
    return s;
}

} // namespace

LatticeSpec parse_lattice_spec(const std::string& text) {
    auto kv = parse_kv(text);
    LatticeSpec s;
    s.d = get_int(kv, "d");
    s.m = get_int(kv, "m");
    s.self_loops = get_bool(kv, "self_loops") || get_bool(kv, "loops");
    s.a = get_double(kv, "a", 1.0);
    s.tau = get_double(kv, "tau", 1.0);
    return s;
}

json to_json(const Quiver& q) {
    json j;
    if (q.lattice() && !q.augmented()) j["lattice"] = lattice_json(*q.lattice());
    j["vertices"] = q.vertex_count();
    json edges = json::array();
    for (const auto& e : q.edges()) edges.push_back({e.source, e.target});
    j["edges"] = edges;
    if (q.has_distance()) {
        json dist = json::object();
        for (EdgeId e = 0; e < q.edge_count(); ++e) dist[std::to_string(e)] = q.distance(e);
        j["distance"] = dist;
    }
    j["meta"] = {{"augmented", q.augmented()}, {"decorated", q.decorated()}};
    return j;
}

Quiver quiver_from_json(const json& j) {
    try {
        if (j.contains("lattice")) {
            Quiver q = make_torus(lattice_from(j.at("lattice")));
            if (j.contains("edges") && j.at("edges").size() != static_cast<size_t>(q.edge_count()))
                throw ValidationError("lattice edges do not match the lattice spec");
            return q;
        }
        const int n = j.at("vertices").get<int>();
        std::vector<Edge> edges;
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 2) throw ValidationError("edges must be [source, target] pairs");
            edges.push_back({e[0].get<int>(), e[1].get<int>()});
        }
        bool decorated = j.contains("meta") && j.at("meta").value("decorated", false);
        bool augmented = j.contains("meta") && j.at("meta").value("augmented", false);
        if (augmented) throw ValidationError("pass the unaugmented quiver; augmentation is applied where needed");
        Quiver q;
        if (decorated) {
            if (static_cast<int>(edges.size()) < n) throw ValidationError("decorated quiver lacks its self-loops");
            std::vector<Edge> base(edges.begin(), edges.end() - n);
            q = add_self_loops(Quiver(n, base));
            for (EdgeId e = 0; e < q.edge_count(); ++e)
                if (q.source(e) != edges[e].source || q.target(e) != edges[e].target)
                    throw ValidationError("decoration self-loops must be the last edges, one per vertex in order");
        } else {
            q = Quiver(n, edges);
        }
        if (j.contains("distance"))
            for (const auto& [key, val] : j.at("distance").items()) q.set_distance(std::stoi(key), val.get<double>());
        return q;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed quiver JSON: ") + e.what());
    }
}

Quiver parse_quiver_spec(const std::string& spec) {
    auto colon = spec.find(':');
    std::string kind = spec.substr(0, colon);
    std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (kind == "torus" || kind == "lattice") return make_torus(parse_lattice_spec(rest));
    auto kv = parse_kv(rest);
    if (kind == "shifted") return make_shifted_torus(get_int(kv, "m"));
    if (kind == "cycle") {
        int n = get_int(kv, "n");
        if (n < 1) throw ValidationError("cycle needs n >= 1");
        std::vector<Edge> e;
        for (int v = 0; v < n; ++v) e.push_back({v, (v + 1) % n});
        return Quiver(n, e);
    }
    if (kind == "complete") {
        int n = get_int(kv, "n");
        if (n < 1) throw ValidationError("complete graph needs n >= 1");
        std::vector<Edge> e;
        for (int v = 0; v < n; ++v)
            for (int w = v + 1; w < n; ++w) e.push_back({v, w});
        return Quiver(n, e);
    }
    if (kind == "jordan") {
        int loops = get_int(kv, "loops", 1);
        return Quiver(1, std::vector<Edge>(loops, Edge{0, 0}));
    }
    if (kind == "path") {
        int n = get_int(kv, "n", 2);
        std::vector<Edge> e;
        for (int v = 0; v + 1 < n; ++v) e.push_back({v, v + 1});
        return Quiver(n, e);
    }
    std::ifstream in(spec);
    if (!in) throw ValidationError("unknown quiver spec or unreadable file: " + spec);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("cannot parse ") + spec + ": " + e.what());
    }
    if (j.contains("quiver")) return quiver_from_json(j.at("quiver"));
    return quiver_from_json(j);
}

json to_json(const Profile& p) { return {{"n", p.n}, {"r", p.r}}; }

Profile profile_from_json(const json& j) {
    try {
        return make_profile(j.at("n").get<std::vector<int>>(), j.at("r").get<std::vector<int>>());
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed profile: ") + e.what());
    }
}

json to_json(const IntMatrix& C) {
    json rows = json::array();
    for (int i = 0; i < C.rows; ++i) {
        json row = json::array();
        for (int j = 0; j < C.cols; ++j) row.push_back(C(i, j));
        rows.push_back(row);
    }
    return rows;
}

IntMatrix int_matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw ValidationError("diagram must be a nonempty matrix");
    IntMatrix C(static_cast<int>(j.size()), static_cast<int>(j[0].size()));
    for (int i = 0; i < C.rows; ++i) {
        if (j[i].size() != static_cast<size_t>(C.cols)) throw ValidationError("ragged diagram matrix");
        for (int k = 0; k < C.cols; ++k) {
            int x = j[i][k].get<int>();
            if (x < 0) throw ValidationError("diagram entries must be nonnegative");
            C(i, k) = x;
        }
    }
    return C;
}

json to_json(const BratteliNetwork& net) {
    json profiles = json::object(), diagrams = json::object();
    for (size_t v = 0; v < net.profiles.size(); ++v) profiles[std::to_string(v)] = to_json(net.profiles[v]);
    for (size_t e = 0; e < net.diagrams.size(); ++e) diagrams[std::to_string(e)] = to_json(net.diagrams[e]);
    return {{"profiles", profiles}, {"diagrams", diagrams}};
}

BratteliNetwork network_from_json(const json& j) {
    try {
        BratteliNetwork net;
        const auto& P = j.at("profiles");
        const auto& D = j.at("diagrams");
        net.profiles.resize(P.size());
        net.diagrams.resize(D.size());
        for (const auto& [key, val] : P.items()) net.profiles.at(std::stoul(key)) = profile_from_json(val);
        for (const auto& [key, val] : D.items()) net.diagrams.at(std::stoul(key)) = int_matrix_from_json(val);
        return net;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed network: ") + e.what());
    } catch (const std::out_of_range&) {
        throw ValidationError("network keys must be dense indices");
    }
}

json to_json(const GroupProfile& g) {
    return {{"factors", g.unitary_factors},
            {"permutation_order", to_string(g.permutation_order)},
            {"component_count", to_string(g.component_count)},
            {"real_dimension", g.real_dimension},
            {"center_dimension", g.center_dimension}};
}

json to_json(const CMat& M) {
    json rows = json::array();
    for (int i = 0; i < M.rows(); ++i) {
        json row = json::array();
        for (int k = 0; k < M.cols(); ++k) row.push_back({M(i, k).real(), M(i, k).imag()});
        rows.push_back(row);
    }
    return rows;
}

CMat matrix_from_json(const json& j) {
    if (!j.is_array()) throw ValidationError("matrix must be an array of rows");
    const int rows = static_cast<int>(j.size());
    const int cols = rows ? static_cast<int>(j[0].size()) : 0;
    CMat M(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (j[i].size() != static_cast<size_t>(cols)) throw ValidationError("ragged matrix");
        for (int k = 0; k < cols; ++k) M(i, k) = cd(j[i][k].at(0).get<double>(), j[i][k].at(1).get<double>());
    }
    return M;
}

json to_json(const Representation& rep) {
    json L = json::object();
    for (size_t e = 0; e < rep.L.size(); ++e) L[std::to_string(e)] = to_json(rep.L[e]);
    json meta = {{"version", kVersion}};
    if (rep.seed) meta["seed"] = *rep.seed;
    return {{"quiver", to_json(rep.quiver)}, {"network", to_json(rep.network)}, {"L", L}, {"meta", meta}};
}

Representation representation_from_json(const json& j) {
    try {
        Representation rep;
        rep.quiver = quiver_from_json(j.at("quiver"));
        rep.network = network_from_json(j.at("network"));
        rep.L.resize(rep.quiver.edge_count());
        for (const auto& [key, val] : j.at("L").items()) rep.L.at(std::stoul(key)) = matrix_from_json(val);
        if (j.contains("meta") && j.at("meta").contains("seed")) rep.seed = j.at("meta").at("seed").get<std::uint64_t>();
        validate_representation(rep);
        return rep;
    } catch (const json::exception& e) {
        throw ValidationError(std::string("malformed representation: ") + e.what());
    } catch (const std::out_of_range&) {
        throw ValidationError("representation edge keys out of range");
    }
}

json to_json(const LatticeTraceReport& r) {
    return {{"k", r.k},
            {"constant_term", r.constant_term},
            {"plaquette_sum", r.plaquette_sum},
            {"higgs_terms", r.higgs_terms},
            {"mixed_terms", r.mixed_terms},
            {"total", r.total}};
}

json to_json(const D6Decomposition& r) {
    json theta = {{"theta0", r.theta.theta0}, {"rect_h", r.theta.rect_h}, {"rect_v", r.theta.rect_v},
                  {"square", r.theta.square}, {"door", r.theta.door},     {"hex", r.theta.hex}};
    return {{"d", r.d},
            {"m", r.m},
            {"N", r.N},
            {"theta", theta},
            {"class_counts", r.class_counts},
            {"class_sums", r.class_sums},
            {"canonical_sums", r.canonical_sums},
            {"census_multiplicity", r.census_multiplicity},
            {"reconstruction_paper", r.reconstruction_paper},
            {"reconstruction_census", r.reconstruction_census},
            {"class_total", r.class_total}};
}

json to_json(const McEstimate& e) {
    json per = json::array();
    for (const auto& s : e.per_network) per.push_back({{"mean", s.mean}, {"std_error", s.std_error}, {"samples", s.samples}});
    return {{"mean", e.mean}, {"std_error", e.std_error}, {"samples", e.samples_used}, {"per_network", per}, {"note", e.note}};
}

json to_json(const CurvatureResult& r) {
    return {{"a", r.a}, {"max_residual", r.max_residual}, {"plaquettes", r.plaquettes}, {"excluded", r.excluded}};
}

} // namespace qst
