#include "qst.h"

#include "qst/verify.hpp"

#include <cstring>
#include <new>

struct qst_quiver {
    qst::Quiver q;
};

struct qst_networks {
    std::vector<qst::BratteliNetwork> list;
};

struct qst_rep {
    qst::Representation rep;
};

namespace {

thread_local std::string g_error;

template <class F>
qst_status guard(F&& fn) {
    try {
        fn();
        g_error.clear();
        return QST_OK;
    } catch (const qst::ValidationError& e) {
        g_error = e.what();
        return QST_VALIDATION_ERROR;
    } catch (const qst::ResourceError& e) {
        g_error = e.what();
        return QST_RESOURCE_ERROR;
    } catch (const std::bad_alloc&) {
        g_error = "out of memory";
        return QST_RESOURCE_ERROR;
    } catch (const std::exception& e) {
        g_error = e.what();
        return QST_INTERNAL_ERROR;
    }
}

void require(const void* p, const char* what) {
    if (!p) throw qst::ValidationError(std::string("null ") + what);
}

char* dup(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

qst::json parse(const char* text) {
    require(text, "JSON text");
    try {
        return qst::json::parse(text);
    } catch (const qst::json::exception& e) {
        throw qst::ValidationError(std::string("invalid JSON: ") + e.what());
    }
}

qst::ActionPolynomial poly(const char* f, double scale) {
    require(f, "polynomial");
    auto p = qst::parse_polynomial(f);
    p.scale = scale;
    return p;
}

int loop_limit(int limit) { return limit < 0 ? qst::kDefaultLoopLimit : limit; }

qst::NetworkOptions net_options(int full_matrix_only) {
    qst::NetworkOptions o;
    o.full_matrix_only = full_matrix_only != 0;
    return o;
}

} // namespace

extern "C" {

const char* qst_last_error(void) { return g_error.c_str(); }

const char* qst_version(void) { return qst::kVersion; }

void qst_string_free(char* s) { std::free(s); }

qst_status qst_quiver_from_spec(const char* spec, qst_quiver** out) {
    return guard([&] {
        require(spec, "spec");
        require(out, "output");
        *out = new qst_quiver{qst::parse_quiver_spec(spec)};
    });
}

qst_status qst_quiver_from_json(const char* text, qst_quiver** out) {
    return guard([&] {
        require(out, "output");
        auto j = parse(text);
        *out = new qst_quiver{qst::quiver_from_json(j.contains("quiver") ? j.at("quiver") : j)};
    });
}

qst_status qst_quiver_to_json(const qst_quiver* q, char** out) {
    return guard([&] {
        require(q, "quiver");
        require(out, "output");
        *out = dup(qst::to_json(q->q).dump());
    });
}

qst_status qst_quiver_augment(const qst_quiver* q, qst_quiver** out) {
    return guard([&] {
        require(q, "quiver");
        require(out, "output");
        *out = new qst_quiver{qst::augment(q->q)};
    });
}

qst_status qst_quiver_add_self_loops(const qst_quiver* q, qst_quiver** out) {
    return guard([&] {
        require(q, "quiver");
        require(out, "output");
        *out = new qst_quiver{qst::add_self_loops(q->q)};
    });
}

int qst_quiver_vertex_count(const qst_quiver* q) { return q ? q->q.vertex_count() : -1; }

int qst_quiver_edge_count(const qst_quiver* q) { return q ? q->q.edge_count() : -1; }

qst_status qst_quiver_count_loops(const qst_quiver* q, int k, int base, int limit, uint64_t* out) {
    return guard([&] {
        require(q, "quiver");
        require(out, "output");
        std::optional<qst::VertexId> b;
        if (base >= 0) b = base;
        *out = qst::count_loops(q->q, k, b, loop_limit(limit));
    });
}

void qst_quiver_free(qst_quiver* q) { delete q; }

qst_status qst_networks_enumerate(const qst_quiver* q, int N, int full_matrix_only, size_t max_networks,
                                  qst_networks** out) {
    return guard([&] {
        require(q, "quiver");
        require(out, "output");
        auto opt = net_options(full_matrix_only);
        if (max_networks > 0) opt.max_networks = max_networks;
        *out = new qst_networks{qst::enumerate_networks(q->q, N, opt)};
    });
}

qst_status qst_networks_count(const qst_quiver* q, int N, int full_matrix_only, char** out) {
    return guard([&] {
        require(q, "quiver");
        require(out, "output");
        *out = dup(qst::to_string(qst::count_networks(q->q, N, net_options(full_matrix_only))));
    });
}

qst_status qst_networks_from_json(const char* text, qst_networks** out) {
    return guard([&] {
        require(out, "output");
        auto j = parse(text);
        qst_networks nets;
        if (j.contains("networks")) {
            for (const auto& item : j.at("networks"))
                nets.list.push_back(qst::network_from_json(item.contains("network") ? item.at("network") : item));
        } else {
            nets.list.push_back(qst::network_from_json(j.contains("network") ? j.at("network") : j));
        }
        *out = new qst_networks{std::move(nets)};
    });
}

size_t qst_networks_size(const qst_networks* nets) { return nets ? nets->list.size() : 0; }

qst_status qst_networks_to_json(const qst_quiver* q, const qst_networks* nets, int N, char** out) {
    return guard([&] {
        require(q, "quiver");
        require(nets, "networks");
        require(out, "output");
        qst::json list = qst::json::array();
        auto bound = qst::rep_dimension_bound(q->q, N);
        bool within = true;
        for (const auto& net : nets->list) {
            auto rs = qst::rep_space_profile(q->q, net);
            const bool ok = qst::BigInt(rs.real_dimension) <= bound;
            within = within && ok;
            list.push_back({{"network", qst::to_json(net)},
                            {"rep_space", qst::to_json(rs)},
                            {"within_bound", ok},
                            {"gauge_group", qst::to_json(qst::gauge_group_profile(net))}});
        }
        qst::json j = {{"quiver", qst::to_json(q->q)},
                       {"N", N},
                       {"count", nets->list.size()},
                       {"bound", qst::to_string(bound)},
                       {"within_bound", within},
                       {"networks", list}};
        *out = dup(j.dump());
    });
}

void qst_networks_free(qst_networks* nets) { delete nets; }

qst_status qst_rep_random(const qst_quiver* q, const qst_networks* nets, size_t index, uint64_t seed, qst_rep** out) {
    return guard([&] {
        require(q, "quiver");
        require(nets, "networks");
        require(out, "output");
        if (index >= nets->list.size()) throw qst::ValidationError("network index out of range");
        *out = new qst_rep{qst::random_representation(q->q, nets->list[index], seed)};
    });
}

qst_status qst_rep_from_json(const char* text, qst_rep** out) {
    return guard([&] {
        require(out, "output");
        *out = new qst_rep{qst::representation_from_json(parse(text))};
    });
}

qst_status qst_rep_to_json(const qst_rep* rep, char** out) {
    return guard([&] {
        require(rep, "representation");
        require(out, "output");
        *out = dup(qst::to_json(rep->rep).dump());
    });
}

qst_status qst_rep_gauge_random(const qst_rep* rep, uint64_t seed, qst_rep** out) {
    return guard([&] {
        require(rep, "representation");
        require(out, "output");
        auto g = qst::random_gauge(rep->rep.network, seed);
        *out = new qst_rep{qst::gauge_transform(rep->rep, g)};
    });
}

int qst_rep_dimension(const qst_rep* rep) {
    if (!rep) return -1;
    int n = 0;
    for (qst::VertexId v = 0; v < rep->rep.quiver.vertex_count(); ++v) n += rep->rep.dim(v);
    return n;
}

void qst_rep_free(qst_rep* rep) { delete rep; }

qst_status qst_trace_power(const qst_rep* rep, int k, qst_route route, int limit, double* out) {
    return guard([&] {
        require(rep, "representation");
        require(out, "output");
        switch (route) {
        case QST_ROUTE_MATRIX: *out = qst::trace_power_matrix(qst::dirac(rep->rep), k); break;
        case QST_ROUTE_PATHS: *out = qst::trace_power_paths(rep->rep, k, loop_limit(limit)); break;
        case QST_ROUTE_CLOSED_FORM: *out = qst::lattice_trace_closed_form(rep->rep, k).total; break;
        case QST_ROUTE_INSERTION: *out = qst::trace_power_insertion(rep->rep, k, loop_limit(limit)); break;
        default: throw qst::ValidationError("unknown route");
        }
    });
}

qst_status qst_spectral_action(const qst_rep* rep, const char* f, double scale, qst_route route, int limit,
                               double* out) {
    return guard([&] {
        require(rep, "representation");
        require(out, "output");
        auto p = poly(f, scale);
        switch (route) {
        case QST_ROUTE_MATRIX: *out = qst::spectral_action(rep->rep, p); break;
        case QST_ROUTE_PATHS: *out = qst::spectral_action_paths(rep->rep, p, loop_limit(limit)); break;
        case QST_ROUTE_CLOSED_FORM: *out = qst::spectral_action_closed_form(rep->rep, p, 1.0 / scale).total; break;
        case QST_ROUTE_INSERTION: {
            double total = 0.0;
            for (size_t k = 0; k < p.f.size(); ++k)
                if (p.f[k] != 0.0)
                    total += p.f[k] * qst::trace_power_insertion(rep->rep, static_cast<int>(k), loop_limit(limit)) /
                             std::pow(scale, static_cast<double>(k));
            *out = total;
            break;
        }
        default: throw qst::ValidationError("unknown route");
        }
    });
}

qst_status qst_closed_form_json(const qst_rep* rep, int k, char** out) {
    return guard([&] {
        require(rep, "representation");
        require(out, "output");
        *out = dup(qst::to_json(qst::lattice_trace_closed_form(rep->rep, k)).dump());
    });
}

qst_status qst_spectral_action_closed_form_json(const qst_rep* rep, const char* f, double a, char** out) {
    return guard([&] {
        require(rep, "representation");
        require(out, "output");
        *out = dup(qst::to_json(qst::spectral_action_closed_form(rep->rep, poly(f, 1.0 / a), a)).dump());
    });
}

qst_status qst_dirac_spectrum(const qst_rep* rep, double* values, size_t cap, size_t* n) {
    return guard([&] {
        require(rep, "representation");
        require(n, "output");
        auto ev = qst::spectrum(qst::dirac(rep->rep));
        *n = static_cast<size_t>(ev.size());
        if (values)
            for (size_t i = 0; i < std::min(cap, *n); ++i) values[i] = ev(static_cast<int>(i));
    });
}

qst_status qst_d6_json(const qst_rep* rep, char** out) {
    return guard([&] {
        require(rep, "representation");
        require(out, "output");
        auto r = qst::d6_decomposition(rep->rep);
        auto j = qst::to_json(r);
        j["trace_matrix"] = qst::trace_power_matrix(qst::dirac(rep->rep), 6);
        *out = dup(j.dump());
    });
}

qst_status qst_verify_json(const qst_rep* rep, uint64_t seed, int max_k, char** out) {
    return guard([&] {
        require(rep, "representation");
        require(out, "output");
        *out = dup(qst::verify_representation(rep->rep, seed, max_k).dump());
    });
}

qst_status qst_coordination(int d, int k, char** out) {
    return guard([&] {
        require(out, "output");
        *out = dup(qst::to_string(qst::coordination(d, k)));
    });
}

qst_status qst_coordination_bfs(int d, int m, int kmax, long long* values) {
    return guard([&] {
        require(values, "output");
        auto s = qst::coordination_bfs(d, m, kmax);
        std::copy(s.begin(), s.end(), values);
    });
}

qst_status qst_loop_count_lattice(int d, int k, char** out) {
    return guard([&] {
        require(out, "output");
        *out = dup(qst::to_string(qst::loop_count_lattice(d, k)));
    });
}

qst_status qst_closed_walks(qst_walk_kind kind, int n, int lambda, int nu, int l, char** out) {
    return guard([&] {
        require(out, "output");
        qst::BigInt v;
        switch (kind) {
        case QST_WALKS_COMPLETE: v = qst::closed_walks_complete(n, l); break;
        case QST_WALKS_COMPLETE_SELF_LOOPED: v = qst::closed_walks_complete_self_looped(n, l); break;
        case QST_WALKS_UNIFORM: v = qst::closed_walks_uniform(n, lambda, nu, l); break;
        default: throw qst::ValidationError("unknown walk kind");
        }
        *out = dup(qst::to_string(v));
    });
}

qst_status qst_closed_walk_bounds_json(const qst_quiver* q, int l, char** out) {
    return guard([&] {
        require(q, "quiver");
        require(out, "output");
        auto b = qst::closed_walk_bounds(q->q, l);
        auto exact = qst::adjacency_trace(qst::underlying_adjacency(q->q), l);
        qst::json j = {{"l", l},
                       {"n", b.n},
                       {"nu", b.nu},
                       {"lambda", b.lambda},
                       {"exact", qst::to_string(exact)},
                       {"bound_with_loops", qst::to_string(b.with_loops)},
                       {"bound_uniform", qst::to_string(b.uniform)}};
        *out = dup(j.dump());
    });
}

qst_status qst_d6_census_json(int d, char** out) {
    return guard([&] {
        require(out, "output");
        qst::json counts = qst::json::object();
        long long total = 0;
        for (const auto& [cls, n] : qst::d6_census(d)) {
            counts[qst::to_string(cls)] = n;
            total += n;
        }
        auto th = qst::d6_theta(d);
        qst::json j = {{"d", d},
                       {"counts", counts},
                       {"total", total},
                       {"loop_count", qst::to_string(qst::loop_count_lattice(d, 6))},
                       {"theta", {{"theta0", th.theta0}, {"rect_h", th.rect_h}, {"rect_v", th.rect_v},
                                  {"square", th.square}, {"door", th.door}, {"hex", th.hex}}}};
        *out = dup(j.dump());
    });
}

qst_status qst_mc_partition_json(const qst_quiver* q, int N, const char* f, double scale, size_t samples,
                                 uint64_t seed, int threads, int full_matrix_only, char** out) {
    return guard([&] {
        require(q, "quiver");
        require(out, "output");
        qst::McConfig cfg;
        cfg.samples = samples;
        cfg.seed = seed;
        cfg.f = poly(f, scale);
        cfg.threads = threads;
        cfg.network_options = net_options(full_matrix_only);
        auto j = qst::to_json(qst::estimate_partition(q->q, N, cfg));
        j["seed"] = seed;
        *out = dup(j.dump());
    });
}

qst_status qst_mc_wilson_json(const qst_quiver* q, int N, const int* loop, size_t length, const char* f, double scale,
                              int weighted, size_t samples, uint64_t seed, int threads, int full_matrix_only,
                              char** out) {
    return guard([&] {
        require(q, "quiver");
        require(loop, "loop");
        require(out, "output");
        qst::McConfig cfg;
        cfg.samples = samples;
        cfg.seed = seed;
        cfg.f = poly(f, scale);
        cfg.threads = threads;
        cfg.weighted = weighted != 0;
        cfg.network_options = net_options(full_matrix_only);
        qst::Path p{std::vector<qst::EdgeId>(loop, loop + length), 0};
        auto j = qst::to_json(qst::wilson_expectation(q->q, N, p, cfg));
        j["seed"] = seed;
        *out = dup(j.dump());
    });
}

qst_status qst_curvature_json(int d, int m, int N, double a, uint64_t seed, char** out) {
    return guard([&] {
        require(out, "output");
        auto field = qst::trigonometric_field(N, d, seed);
        *out = dup(qst::to_json(qst::plaquette_curvature_check(field, d, m, a)).dump());
    });
}

} // extern "C"
