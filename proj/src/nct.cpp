#include "qst/nct.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

namespace qst {

int Profile::hilbert_dim() const {
    int s = 0;
    for (int j = 0; j < length(); ++j) s += n[j] * r[j];
    return s;
}

int Profile::algebra_dim() const {
    int s = 0;
    for (int x : n) s += x * x;
    return s;
}

Profile make_profile(std::vector<int> n, std::vector<int> r) {
    if (n.empty()) throw ValidationError("profile needs at least one summand");
    if (n.size() != r.size()) throw ValidationError("profile tuples n and r differ in length");
    std::vector<std::pair<int, int>> pairs;
    for (size_t j = 0; j < n.size(); ++j) {
        if (n[j] < 1 || r[j] < 1) throw ValidationError("profile entries must be positive");
        pairs.emplace_back(n[j], r[j]);
    }
    std::sort(pairs.begin(), pairs.end());
    Profile p;
    for (auto [a, b] : pairs) {
        p.n.push_back(a);
        p.r.push_back(b);
    }
    return p;
}

std::string to_string(const Profile& p) {
    std::ostringstream os;
    os << "(n=(";
    for (int j = 0; j < p.length(); ++j) os << (j ? "," : "") << p.n[j];
    os << "),r=(";
    for (int j = 0; j < p.length(); ++j) os << (j ? "," : "") << p.r[j];
    os << "))";
    return os.str();
}

std::vector<Profile> profiles_of_dimension(int N) {
    if (N < 1) throw ValidationError("Hilbert dimension must be positive");
    std::vector<std::pair<int, int>> pairs;
    for (int n = 1; n <= N; ++n)
        for (int r = 1; n * r <= N; ++r) pairs.emplace_back(n, r);
    std::vector<Profile> out;
    Profile cur;
    std::function<void(size_t, int)> rec = [&](size_t from, int rem) {
        if (rem == 0) {
            out.push_back(cur);
            return;
        }
        for (size_t k = from; k < pairs.size(); ++k) {
            auto [n, r] = pairs[k];
            if (n * r > rem) continue;
            cur.n.push_back(n);
            cur.r.push_back(r);
            rec(k, rem - n * r);
            cur.n.pop_back();
            cur.r.pop_back();
        }
    };
    rec(0, N);
    std::sort(out.begin(), out.end());
    return out;
}

bool is_compatible(const IntMatrix& C, const Profile& src, const Profile& dst) {
    if (C.rows != src.length() || C.cols != dst.length()) return false;
    for (int x : C.data)
        if (x < 0) return false;
    for (int j = 0; j < C.cols; ++j) {
        long long s = 0;
        for (int i = 0; i < C.rows; ++i) s += static_cast<long long>(C(i, j)) * src.n[i];
        if (s != dst.n[j]) return false;
    }
    for (int i = 0; i < C.rows; ++i) {
        long long s = 0;
        for (int j = 0; j < C.cols; ++j) s += static_cast<long long>(C(i, j)) * dst.r[j];
        if (s != src.r[i]) return false;
    }
    return true;
}

namespace {

// Column-wise bounded search; visit returns false to stop.
void search_bratteli(const Profile& src, const Profile& dst, const std::function<bool(const IntMatrix&)>& visit) {
    const int ls = src.length(), lt = dst.length();
    if (src.hilbert_dim() != dst.hilbert_dim()) return;
    IntMatrix C(ls, lt);
    std::vector<int> res = src.r;
    bool stop = false;
    std::function<void(int, int, int)> rec = [&](int j, int i, int rem) {
        if (stop) return;
        if (j == lt) {
            if (std::all_of(res.begin(), res.end(), [](int x) { return x == 0; }) && !visit(C)) stop = true;
            return;
        }
        if (i == ls) {
            if (rem == 0) rec(j + 1, 0, j + 1 < lt ? dst.n[j + 1] : 0);
            return;
        }
        int cmax = std::min(rem / src.n[i], res[i] / dst.r[j]);
        int cmin = 0;
        if (i == ls - 1) {
            if (rem % src.n[i] != 0) return;
            cmin = rem / src.n[i];
            if (cmin > cmax) return;
            cmax = cmin;
        }
        for (int c = cmin; c <= cmax && !stop; ++c) {
            C(i, j) = c;
            res[i] -= c * dst.r[j];
            rec(j, i + 1, rem - c * src.n[i]);
            res[i] += c * dst.r[j];
        }
        C(i, j) = 0;
    };
    rec(0, 0, dst.n[0]);
}

} // namespace

std::vector<IntMatrix> enumerate_bratteli(const Profile& src, const Profile& dst, std::size_t max_results) {
    std::vector<IntMatrix> out;
    search_bratteli(src, dst, [&](const IntMatrix& C) {
        if (out.size() >= max_results)
            throw ResourceError("Bratteli enumeration exceeded " + std::to_string(max_results) + " diagrams for " +
                                to_string(src) + " -> " + to_string(dst));
        out.push_back(C);
        return true;
    });
    std::sort(out.begin(), out.end(), [](const IntMatrix& a, const IntMatrix& b) { return a.data < b.data; });
    return out;
}

bool bratteli_exists(const Profile& src, const Profile& dst) {
    bool found = false;
    search_bratteli(src, dst, [&](const IntMatrix&) {
        found = true;
        return false;
    });
    return found;
}

std::uint64_t count_bratteli(const Profile& src, const Profile& dst, std::uint64_t budget) {
    std::uint64_t n = 0;
    search_bratteli(src, dst, [&](const IntMatrix&) {
        if (++n > budget) throw ResourceError("Bratteli count exceeded budget");
        return true;
    });
    return n;
}

namespace {

std::vector<std::pair<int, int>> symmetry_groups(const Profile& x) {
    std::vector<std::pair<int, int>> groups; // [start, end)
    for (int j = 0; j < x.length();) {
        int k = j;
        while (k < x.length() && x.n[k] == x.n[j] && x.r[k] == x.r[j]) ++k;
        groups.emplace_back(j, k);
        j = k;
    }
    return groups;
}

BigInt factorial(int k) {
    BigInt f = 1;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

} // namespace

BigInt symmetry_order(const Profile& x) {
    BigInt o = 1;
    for (auto [a, b] : symmetry_groups(x)) o *= factorial(b - a);
    return o;
}

std::vector<std::vector<int>> symmetry_permutations(const Profile& x, std::size_t max_results) {
    if (symmetry_order(x) > max_results) throw ResourceError("symmetry group too large to list");
    auto groups = symmetry_groups(x);
    std::vector<std::vector<int>> out;
    std::vector<int> sigma(x.length());
    std::iota(sigma.begin(), sigma.end(), 0);
    std::function<void(size_t)> rec = [&](size_t g) {
        if (g == groups.size()) {
            out.push_back(sigma);
            return;
        }
        auto [a, b] = groups[g];
        std::vector<int> part(sigma.begin() + a, sigma.begin() + b);
        std::sort(part.begin(), part.end());
        do {
            std::copy(part.begin(), part.end(), sigma.begin() + a);
            rec(g + 1);
        } while (std::next_permutation(part.begin(), part.end()));
    };
    rec(0);
    return out;
}

GroupProfile automorphism_profile(const Profile& x) {
    GroupProfile g;
    g.unitary_factors = x.n;
    g.permutation_order = symmetry_order(x);
    g.component_count = g.permutation_order;
    for (int n : x.n) g.real_dimension += static_cast<long long>(n) * n;
    g.center_dimension = x.length();
    return g;
}

void validate_network(const Quiver& q, const BratteliNetwork& net) {
    if (static_cast<int>(net.profiles.size()) != q.vertex_count())
        throw ValidationError("network has " + std::to_string(net.profiles.size()) + " profiles for " +
                              std::to_string(q.vertex_count()) + " vertices");
    if (static_cast<int>(net.diagrams.size()) != q.edge_count())
        throw ValidationError("network has " + std::to_string(net.diagrams.size()) + " diagrams for " +
                              std::to_string(q.edge_count()) + " edges");
    for (const auto& p : net.profiles) (void)make_profile(p.n, p.r);
    for (EdgeId e = 0; e < q.edge_count(); ++e)
        if (!is_compatible(net.diagrams[e], net.profiles[q.source(e)], net.profiles[q.target(e)]))
            throw ValidationError("diagram on edge " + std::to_string(e) + " is not compatible with its profiles");
}

BratteliNetwork full_matrix_network(const Quiver& q, int N) {
    BratteliNetwork net;
    net.profiles.assign(q.vertex_count(), make_profile({N}, {1}));
    IntMatrix one(1, 1);
    one(0, 0) = 1;
    net.diagrams.assign(q.edge_count(), one);
    return net;
}

namespace {

class PairCache {
public:
    explicit PairCache(const std::vector<Profile>& P) : P_(P), exists_(P.size() * P.size(), -1) {}
    bool exists(int a, int b) {
        auto& x = exists_[a * P_.size() + b];
        if (x < 0) x = bratteli_exists(P_[a], P_[b]) ? 1 : 0;
        return x == 1;
    }
    const std::vector<IntMatrix>& diagrams(int a, int b, std::size_t cap) {
        auto key = std::make_pair(a, b);
        auto it = lists_.find(key);
        if (it == lists_.end()) it = lists_.emplace(key, enumerate_bratteli(P_[a], P_[b], cap)).first;
        return it->second;
    }

private:
    const std::vector<Profile>& P_;
    std::vector<signed char> exists_;
    std::map<std::pair<int, int>, std::vector<IntMatrix>> lists_;
};

// Vertex order: BFS over the underlying graph, component by component.
std::vector<VertexId> bfs_order(const Quiver& q) {
    std::vector<std::vector<VertexId>> nb(q.vertex_count());
    for (const auto& e : q.edges()) {
        nb[e.source].push_back(e.target);
        nb[e.target].push_back(e.source);
    }
    std::vector<VertexId> order;
    std::vector<char> seen(q.vertex_count(), 0);
    for (VertexId s = 0; s < q.vertex_count(); ++s) {
        if (seen[s]) continue;
        seen[s] = 1;
        size_t head = order.size();
        order.push_back(s);
        while (head < order.size()) {
            VertexId v = order[head++];
            for (VertexId w : nb[v])
                if (!seen[w]) {
                    seen[w] = 1;
                    order.push_back(w);
                }
        }
    }
    return order;
}

std::vector<std::vector<int>> labeling_indices(const Quiver& q, const std::vector<Profile>& P, PairCache& cache,
                                               const NetworkOptions& opt) {
    const int V = q.vertex_count();
    if (!opt.pinned.empty() && static_cast<int>(opt.pinned.size()) != V)
        throw ValidationError("pinned profiles need one entry per vertex");
    auto order = bfs_order(q);
    std::vector<int> pos(V);
    for (int k = 0; k < V; ++k) pos[order[k]] = k;
    // Edges checked when their later endpoint is assigned.
    std::vector<std::vector<EdgeId>> check(V);
    for (EdgeId e = 0; e < q.edge_count(); ++e) {
        int k = std::max(pos[q.source(e)], pos[q.target(e)]);
        check[order[k]].push_back(e);
    }
    std::vector<int> cand;
    for (int a = 0; a < static_cast<int>(P.size()); ++a) cand.push_back(a);

    std::vector<std::vector<int>> out;
    std::vector<int> lab(V, -1);
    std::function<void(int)> rec = [&](int k) {
        if (k == V) {
            if (out.size() >= opt.max_labelings)
                throw ResourceError("network enumeration exceeded " + std::to_string(opt.max_labelings) +
                                    " vertex labelings");
            out.push_back(lab);
            return;
        }
        VertexId v = order[k];
        for (int a : cand) {
            if (!opt.pinned.empty() && opt.pinned[v] && P[a] != *opt.pinned[v]) continue;
            lab[v] = a;
            bool ok = true;
            for (EdgeId e : check[v])
                if (!cache.exists(lab[q.source(e)], lab[q.target(e)])) {
                    ok = false;
                    break;
                }
            if (ok) rec(k + 1);
        }
        lab[v] = -1;
    };
    rec(0);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Profile> candidate_profiles(int N, const NetworkOptions& opt) {
    if (opt.full_matrix_only) return {make_profile({N}, {1})};
    return profiles_of_dimension(N);
}

} // namespace

std::vector<Labeling> enumerate_labelings(const Quiver& q, int N, const NetworkOptions& opt) {
    auto P = candidate_profiles(N, opt);
    PairCache cache(P);
    std::vector<Labeling> out;
    for (const auto& lab : labeling_indices(q, P, cache, opt)) {
        Labeling l;
        for (int a : lab) l.push_back(P[a]);
        out.push_back(std::move(l));
    }
    return out;
}

std::vector<BratteliNetwork> enumerate_networks(const Quiver& q, int N, const NetworkOptions& opt) {
    auto P = candidate_profiles(N, opt);
    PairCache cache(P);
    std::vector<BratteliNetwork> out;
    const int E = q.edge_count();
    for (const auto& lab : labeling_indices(q, P, cache, opt)) {
        std::vector<const std::vector<IntMatrix>*> lists(E);
        BigInt total = 1;
        for (EdgeId e = 0; e < E; ++e) {
            lists[e] = &cache.diagrams(lab[q.source(e)], lab[q.target(e)], opt.max_networks + 1);
            total *= lists[e]->size();
        }
        if (total + out.size() > opt.max_networks)
            throw ResourceError("network enumeration exceeded " + std::to_string(opt.max_networks) + " networks");
        BratteliNetwork net;
        for (int a : lab) net.profiles.push_back(P[a]);
        net.diagrams.resize(E);
        std::vector<size_t> idx(E, 0);
        while (true) {
            for (EdgeId e = 0; e < E; ++e) net.diagrams[e] = (*lists[e])[idx[e]];
            out.push_back(net);
            int e = E - 1;
            while (e >= 0 && ++idx[e] == lists[e]->size()) idx[e--] = 0;
            if (e < 0) break;
        }
    }
    return out;
}

BigInt count_networks(const Quiver& q, int N, const NetworkOptions& opt) {
    auto P = candidate_profiles(N, opt);
    PairCache cache(P);
    std::map<std::pair<int, int>, std::uint64_t> counts;
    BigInt total = 0;
    for (const auto& lab : labeling_indices(q, P, cache, opt)) {
        BigInt prod = 1;
        for (EdgeId e = 0; e < q.edge_count(); ++e) {
            auto key = std::make_pair(lab[q.source(e)], lab[q.target(e)]);
            auto it = counts.find(key);
            if (it == counts.end()) it = counts.emplace(key, count_bratteli(P[key.first], P[key.second])).first;
            prod *= it->second;
        }
        total += prod;
    }
    return total;
}

GroupProfile rep_space_profile(const Quiver& q, const BratteliNetwork& net) {
    GroupProfile g;
    for (EdgeId e = 0; e < q.edge_count(); ++e)
        for (int n : net.profiles.at(q.target(e)).n) {
            g.unitary_factors.push_back(n);
            g.real_dimension += static_cast<long long>(n) * n;
        }
    g.center_dimension = static_cast<int>(g.unitary_factors.size());
    return g;
}

GroupProfile gauge_group_profile(const BratteliNetwork& net) {
    GroupProfile g;
    for (const auto& p : net.profiles) {
        auto a = automorphism_profile(p);
        g.unitary_factors.insert(g.unitary_factors.end(), a.unitary_factors.begin(), a.unitary_factors.end());
        g.permutation_order *= a.permutation_order;
        g.real_dimension += a.real_dimension;
    }
    g.component_count = g.permutation_order;
    g.center_dimension = static_cast<int>(g.unitary_factors.size());
    return g;
}

BigInt falling_factorial(long long x, long long k) {
    if (k < 0 || x < 0 || k > x) throw ValidationError("falling factorial needs 0 <= k <= x");
    BigInt r = 1;
    for (long long i = 0; i < k; ++i) r *= (x - i);
    return r;
}

BigInt rep_dimension_bound(const Quiver& q, int N) {
    if (N < 1) throw ValidationError("N must be positive");
    const int E = q.edge_count();
    BigInt nn = BigInt(N) * N;
    BigInt ff = falling_factorial(static_cast<long long>(N) * N, N);
    BigInt b = 1;
    for (int e = 0; e < E; ++e) b *= nn * ff;
    return b;
}

CMat lift(const Profile& p, const std::vector<CMat>& blocks) {
    if (static_cast<int>(blocks.size()) != p.length()) throw ValidationError("lift: wrong number of blocks");
    const int H = p.hilbert_dim();
    CMat out = CMat::Zero(H, H);
    int off = 0;
    for (int j = 0; j < p.length(); ++j) {
        if (blocks[j].rows() != p.n[j] || blocks[j].cols() != p.n[j])
            throw ValidationError("lift: block " + std::to_string(j) + " has the wrong size");
        for (int c = 0; c < p.r[j]; ++c) {
            out.block(off, off, p.n[j], p.n[j]) = blocks[j];
            off += p.n[j];
        }
    }
    return out;
}

std::vector<CMat> block_embedding(const IntMatrix& C, const Profile& src, const Profile& dst,
                                  const std::vector<CMat>& a) {
    if (!is_compatible(C, src, dst)) throw ValidationError("diagram is not compatible with the profiles");
    std::vector<CMat> out;
    for (int j = 0; j < dst.length(); ++j) {
        CMat b = CMat::Zero(dst.n[j], dst.n[j]);
        int off = 0;
        for (int i = 0; i < src.length(); ++i)
            for (int c = 0; c < C(i, j); ++c) {
                b.block(off, off, src.n[i], src.n[i]) = a.at(i);
                off += src.n[i];
            }
        out.push_back(std::move(b));
    }
    return out;
}

std::vector<int> canonical_permutation(const IntMatrix& C, const Profile& src, const Profile& dst) {
    if (!is_compatible(C, src, dst)) throw ValidationError("diagram is not compatible with the profiles");
    const int ls = src.length();
    std::vector<int> start(ls, 0);
    for (int i = 1; i < ls; ++i) start[i] = start[i - 1] + src.n[i - 1] * src.r[i - 1];
    std::vector<int> used(ls, 0);
    std::vector<int> pi(src.hilbert_dim(), -1);
    int t = 0;
    for (int j = 0; j < dst.length(); ++j)
        for (int c = 0; c < dst.r[j]; ++c)
            for (int i = 0; i < ls; ++i)
                for (int s = 0; s < C(i, j); ++s) {
                    int from = start[i] + used[i]++ * src.n[i];
                    for (int x = 0; x < src.n[i]; ++x) pi[from + x] = t++;
                }
    return pi;
}

CMat permutation_matrix(const std::vector<int>& pi) {
    const int n = static_cast<int>(pi.size());
    CMat P = CMat::Zero(n, n);
    for (int j = 0; j < n; ++j) P(pi[j], j) = 1.0;
    return P;
}

MorphismRealization realize_morphism(const IntMatrix& C, const Profile& src, const Profile& dst,
                                     const std::vector<CMat>& u) {
    MorphismRealization m;
    m.C = C;
    m.src = src;
    m.dst = dst;
    m.u = u;
    m.pi = canonical_permutation(C, src, dst);
    m.P = permutation_matrix(m.pi);
    m.L = lift(dst, u) * m.P;
    return m;
}

std::vector<CMat> apply_morphism(const MorphismRealization& m, const std::vector<CMat>& a) {
    auto b = block_embedding(m.C, m.src, m.dst, a);
    for (size_t j = 0; j < b.size(); ++j) b[j] = m.u[j] * b[j] * m.u[j].adjoint();
    return b;
}

double compatibility_residual(const MorphismRealization& m, const std::vector<std::vector<CMat>>& samples) {
    double worst = 0.0;
    for (const auto& a : samples) {
        CMat lhs = lift(m.dst, apply_morphism(m, a));
        CMat rhs = m.L * lift(m.src, a) * m.L.adjoint();
        worst = std::max(worst, (lhs - rhs).norm());
    }
    return worst;
}

} // namespace qst
