#include "qst/quiver.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

namespace qst {

Quiver::Quiver(int vertex_count, std::vector<Edge> edges) : n_(vertex_count) {
    if (vertex_count < 0) throw ValidationError("vertex count must be nonnegative");
    loop_of_.assign(n_, -1);
    for (const auto& e : edges) add_edge(e, 0.0, -1, -1);
}

void Quiver::add_edge(Edge e, double rho, EdgeId parent, VertexId deco) {
    if (e.source < 0 || e.source >= n_ || e.target < 0 || e.target >= n_)
        throw ValidationError("edge endpoint " + std::to_string(e.source) + "->" + std::to_string(e.target) +
                              " outside [0," + std::to_string(n_) + ")");
    edges_.push_back(e);
    parent_.push_back(parent);
    rev_.push_back(-1);
    deco_.push_back(deco);
    if (deco >= 0) loop_of_[deco] = static_cast<EdgeId>(edges_.size()) - 1;
    if (!rho_.empty() || rho > 0.0) {
        rho_.resize(edges_.size(), 1.0);
        rho_.back() = rho > 0.0 ? rho : 1.0;
    }
}

double Quiver::distance(EdgeId e) const {
    if (e < 0 || e >= edge_count()) throw ValidationError("edge id out of range");
    return rho_.empty() ? 1.0 : rho_[e];
}

void Quiver::set_distance(EdgeId e, double rho) {
    if (e < 0 || e >= edge_count()) throw ValidationError("edge id out of range");
    if (!(rho > 0.0)) throw ValidationError("graph distance must be strictly positive");
    if (rho_.empty()) rho_.assign(edges_.size(), 1.0);
    rho_[e] = rho;
}

EdgeId Quiver::reversed_copy(EdgeId e) const { return rev_.at(e); }

EdgeId Quiver::decoration_loop(VertexId v) const { return loop_of_.at(v); }

std::vector<std::vector<EdgeId>> Quiver::out_edges() const {
    std::vector<std::vector<EdgeId>> out(n_);
    for (EdgeId e = 0; e < edge_count(); ++e) out[edges_[e].source].push_back(e);
    return out;
}

std::vector<int> Quiver::component_of() const {
    std::vector<int> parent(n_);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    for (const auto& e : edges_) parent[find(e.source)] = find(e.target);
    std::vector<int> label(n_, -1), comp(n_);
    int next = 0;
    for (int v = 0; v < n_; ++v) {
        int r = find(v);
        if (label[r] < 0) label[r] = next++;
        comp[v] = label[r];
    }
    return comp;
}

bool Quiver::connected() const {
    auto c = component_of();
    return std::all_of(c.begin(), c.end(), [](int x) { return x == 0; });
}

Quiver augment(const Quiver& q) {
    Quiver r = q;
    const int e0 = q.edge_count();
    for (EdgeId e = 0; e < e0; ++e) {
        if (q.is_self_loop(e)) continue;
        r.add_edge({q.target(e), q.source(e)}, q.has_distance() ? q.distance(e) : 0.0, e, -1);
        r.rev_[e] = r.edge_count() - 1;
    }
    r.augmented_ = true;
    return r;
}

Quiver add_self_loops(const Quiver& q) {
    Quiver r = q;
    for (VertexId v = 0; v < q.vertex_count(); ++v) r.add_edge({v, v}, 0.0, -1, v);
    r.decorated_ = true;
    if (r.lattice_) r.lattice_->self_loops = true;
    return r;
}

Quiver strip_decoration(const Quiver& q) {
    Quiver r(q.vertex_count());
    std::vector<EdgeId> newid(q.edge_count(), -1);
    for (EdgeId e = 0; e < q.edge_count(); ++e) {
        if (q.loop_vertex(e) >= 0) continue;
        EdgeId parent = q.reverse_of(e) >= 0 ? newid[q.reverse_of(e)] : -1;
        r.add_edge(q.edge(e), q.has_distance() ? q.distance(e) : 0.0, parent, -1);
        newid[e] = r.edge_count() - 1;
        if (parent >= 0) r.rev_[parent] = newid[e];
    }
    r.augmented_ = q.augmented();
    r.lattice_ = q.lattice();
    if (r.lattice_) r.lattice_->self_loops = false;
    return r;
}

VertexId path_source(const Quiver& q, const Path& p) { return p.trivial() ? p.base : q.source(p.edges.front()); }
VertexId path_target(const Quiver& q, const Path& p) { return p.trivial() ? p.base : q.target(p.edges.back()); }

bool is_path(const Quiver& q, const Path& p) {
    if (p.trivial()) return p.base >= 0 && p.base < q.vertex_count();
    for (EdgeId e : p.edges)
        if (e < 0 || e >= q.edge_count()) return false;
    for (size_t a = 0; a + 1 < p.edges.size(); ++a)
        if (q.target(p.edges[a]) != q.source(p.edges[a + 1])) return false;
    return true;
}

bool is_loop(const Quiver& q, const Path& p) {
    return is_path(q, p) && !p.trivial() && path_source(q, p) == path_target(q, p);
}

std::optional<Path> compose(const Quiver& q, const Path& p2, const Path& p1) {
    if (path_target(q, p1) != path_source(q, p2)) return std::nullopt;
    if (p1.trivial()) return p2;
    if (p2.trivial()) return p1;
    Path r = p1;
    r.edges.insert(r.edges.end(), p2.edges.begin(), p2.edges.end());
    return r;
}

namespace {

void check_limit(int k, int limit) {
    if (k < 0) throw ValidationError("loop length must be nonnegative");
    if (k > limit)
        throw ResourceError("loop length " + std::to_string(k) + " exceeds the enumeration limit " +
                            std::to_string(limit));
}

} // namespace

void for_each_loop(const Quiver& q, int k, std::optional<VertexId> base,
                   const std::function<void(const std::vector<EdgeId>&)>& fn, int limit) {
    check_limit(k, limit);
    if (k == 0) return;
    if (base && (*base < 0 || *base >= q.vertex_count())) throw ValidationError("base vertex out of range");
    const auto out = q.out_edges();
    std::vector<EdgeId> word(k);
    std::function<void(int, VertexId, VertexId)> dfs = [&](int depth, VertexId at, VertexId start) {
        if (depth == k) {
            if (at == start) fn(word);
            return;
        }
        for (EdgeId e : out[at]) {
            word[depth] = e;
            dfs(depth + 1, q.target(e), start);
        }
    };
    for (EdgeId e = 0; e < q.edge_count(); ++e) {
        VertexId s = q.source(e);
        if (base && s != *base) continue;
        word[0] = e;
        dfs(1, q.target(e), s);
    }
}

std::vector<Path> enumerate_loops(const Quiver& q, int k, std::optional<VertexId> base, int limit) {
    std::vector<Path> out;
    for_each_loop(q, k, base, [&](const std::vector<EdgeId>& w) { out.push_back(Path{w, q.source(w[0])}); }, limit);
    return out;
}

std::uint64_t count_loops(const Quiver& q, int k, std::optional<VertexId> base, int limit) {
    std::uint64_t n = 0;
    for_each_loop(q, k, base, [&](const std::vector<EdgeId>&) { ++n; }, limit);
    return n;
}

Quiver make_torus(const LatticeSpec& spec) {
    if (spec.d < 1) throw ValidationError("lattice dimension d must be >= 1");
    if (spec.m < 2) throw ValidationError("lattice size m must be >= 2");
    if (!(spec.a > 0.0) || !(spec.tau > 0.0)) throw ValidationError("lattice spacing a and tau must be positive");
    long long vol = 1;
    for (int i = 0; i < spec.d; ++i) {
        vol *= spec.m;
        if (vol > 10'000'000) throw ResourceError("lattice volume too large");
    }
    LatticeSpec plain = spec;
    plain.self_loops = false;
    Quiver q(static_cast<int>(vol));
    q.set_lattice(plain);
    LatticeIndex idx(q);
    std::vector<Edge> edges;
    edges.reserve(static_cast<size_t>(vol) * spec.d);
    for (VertexId v = 0; v < vol; ++v)
        for (int j = 1; j <= spec.d; ++j) edges.push_back({v, idx.shift(v, j)});
    Quiver t(static_cast<int>(vol), edges);
    t.set_lattice(plain);
    for (EdgeId e = 0; e < t.edge_count(); ++e) t.set_distance(e, spec.a);
    if (!spec.self_loops) return t;
    Quiver o = add_self_loops(t);
    for (EdgeId e = t.edge_count(); e < o.edge_count(); ++e) o.set_distance(e, spec.a / spec.tau);
    o.set_lattice(spec);
    return o;
}

Quiver make_shifted_torus(int m) {
    if (m < 2) throw ValidationError("shifted torus needs m >= 2");
    const int n = m * m;
    std::vector<Edge> edges;
    for (int v = 1; v <= n - 1; ++v) edges.push_back({v - 1, v});
    for (int v = 1; v <= n - m; ++v) edges.push_back({v - 1, v + m - 1});
    for (int v = 1; v <= m; ++v) edges.push_back({m * (m - 1) + v - 1, v - 1});
    edges.push_back({0, n - 1});
    return Quiver(n, edges);
}

LatticeIndex::LatticeIndex(const Quiver& q) : q_(&q) {
    if (!q.lattice()) throw ValidationError("quiver is not a lattice torus");
    spec_ = *q.lattice();
    volume_ = 1;
    stride_.assign(spec_.d, 1);
    for (int i = spec_.d - 1; i >= 0; --i) {
        stride_[i] = volume_;
        volume_ *= spec_.m;
    }
}

std::vector<int> LatticeIndex::coords(VertexId v) const {
    std::vector<int> x(spec_.d);
    for (int i = 0; i < spec_.d; ++i) x[i] = (v / stride_[i]) % spec_.m;
    return x;
}

VertexId LatticeIndex::vertex(const std::vector<int>& x) const {
    VertexId v = 0;
    for (int i = 0; i < spec_.d; ++i) v += (((x[i] % spec_.m) + spec_.m) % spec_.m) * stride_[i];
    return v;
}

VertexId LatticeIndex::shift(VertexId v, int s) const {
    int i = std::abs(s) - 1;
    if (s == 0 || i >= spec_.d) throw ValidationError("signed axis out of range");
    int x = (v / stride_[i]) % spec_.m;
    int y = (x + (s > 0 ? 1 : spec_.m - 1)) % spec_.m;
    return v + (y - x) * stride_[i];
}

EdgeId LatticeIndex::step(VertexId v, int s) const {
    int j = std::abs(s) - 1;
    if (s > 0) return v * spec_.d + j;
    if (!q_->augmented()) throw ValidationError("negative steps need the augmented lattice quiver");
    return q_->reversed_copy(shift(v, s) * spec_.d + j);
}

int LatticeIndex::axis_of(EdgeId e) const {
    if (q_->loop_vertex(e) >= 0 || q_->is_self_loop(e)) return 0;
    EdgeId orig = q_->is_reversed(e) ? q_->reverse_of(e) : e;
    int ax = orig % spec_.d + 1;
    return q_->is_reversed(e) ? -ax : ax;
}

Path lattice_path(const Quiver& qstar, VertexId v, const std::vector<int>& axes) {
    LatticeIndex idx(qstar);
    Path p;
    p.base = v;
    VertexId at = v;
    for (int s : axes) {
        p.edges.push_back(idx.step(at, s));
        at = idx.shift(at, s);
    }
    return p;
}

std::vector<Path> plaquettes(const Quiver& qstar, VertexId v) {
    LatticeIndex idx(qstar);
    if (!qstar.augmented()) throw ValidationError("plaquettes need the augmented lattice quiver");
    const int d = idx.d();
    std::vector<Path> out;
    if (d < 2) return out;
    if (idx.m() < 3) throw ValidationError("plaquettes need m >= 3");
    for (int i = -d; i <= d; ++i)
        for (int j = -d; j <= d; ++j) {
            if (i == 0 || j == 0 || std::abs(i) == std::abs(j)) continue;
            out.push_back(lattice_path(qstar, v, {i, j, -i, -j}));
        }
    return out;
}

namespace {

// Vertex a self-loop inserted at 1-based slot j must sit on, or -1 if out of range.
VertexId slot_vertex(const Quiver& q, const Path& p, int j) {
    const int k = p.length();
    if (j < 1 || j > k + 1) return -1;
    if (j <= k) return q.source(p.edges[j - 1]);
    return path_target(q, p);
}

} // namespace

Path insert_self_loops(const Quiver& qo, const Path& p, const std::vector<int>& I, const std::vector<VertexId>& vs) {
    if (I.size() != vs.size()) throw ValidationError("index tuple and vertex tuple differ in length");
    const VertexId s = path_source(qo, p);
    const Path fail{{}, s};
    for (size_t a = 1; a < I.size(); ++a)
        if (I[a] <= I[a - 1]) return fail;
    Path r = p;
    for (size_t a = 0; a < I.size(); ++a) {
        VertexId v = vs[a];
        if (v < 0 || v >= qo.vertex_count()) return fail;
        EdgeId o = qo.decoration_loop(v);
        if (o < 0 || slot_vertex(qo, r, I[a]) != v) return fail;
        r.edges.insert(r.edges.begin() + (I[a] - 1), o);
    }
    return r;
}

Path delete_self_loops(const Quiver& qo, const Path& p, const std::vector<int>& I, const std::vector<VertexId>& vs) {
    if (I.size() != vs.size()) throw ValidationError("index tuple and vertex tuple differ in length");
    const Path fail{{}, path_source(qo, p)};
    Path r = p;
    for (size_t a = I.size(); a-- > 0;) {
        int j = I[a];
        if (j < 1 || j > r.length()) return fail;
        if (qo.loop_vertex(r.edges[j - 1]) != vs[a]) return fail;
        r.edges.erase(r.edges.begin() + (j - 1));
    }
    if (r.trivial()) r.base = path_source(qo, p);
    return r;
}

} // namespace qst
