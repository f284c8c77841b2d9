#include "qst/dirac.hpp"

#include <Eigen/Eigenvalues>

#include <cctype>
#include <cstdlib>
#include <deque>
#include <sstream>

namespace qst {

std::vector<int> vertex_offsets(const std::vector<int>& dims) {
    std::vector<int> off(dims.size() + 1, 0);
    for (size_t v = 0; v < dims.size(); ++v) off[v + 1] = off[v] + dims[v];
    return off;
}

std::vector<int> vertex_dims(const Representation& rep) {
    std::vector<int> dims;
    for (VertexId v = 0; v < rep.quiver.vertex_count(); ++v) dims.push_back(rep.dim(v));
    return dims;
}

namespace {

void check_shapes(const Quiver& q, const std::vector<int>& dims, const WeightAssignment& b) {
    if (static_cast<int>(dims.size()) != q.vertex_count()) throw ValidationError("one dimension per vertex is required");
    if (static_cast<int>(b.size()) != q.edge_count()) throw ValidationError("one weight per edge is required");
    for (EdgeId e = 0; e < q.edge_count(); ++e)
        if (b[e].rows() != dims[q.target(e)] || b[e].cols() != dims[q.source(e)])
            throw ValidationError("weight on edge " + std::to_string(e) + " has the wrong shape");
}

} // namespace

CMat weight_matrix(const Quiver& q, const std::vector<int>& dims, const WeightAssignment& b, bool symmetrize) {
    check_shapes(q, dims, b);
    auto off = vertex_offsets(dims);
    CMat A = CMat::Zero(off.back(), off.back());
    for (EdgeId e = 0; e < q.edge_count(); ++e) {
        VertexId s = q.source(e), t = q.target(e);
        A.block(off[t], off[s], dims[t], dims[s]) += b[e];
        if (symmetrize) A.block(off[s], off[t], dims[s], dims[t]) += b[e].adjoint();
    }
    return A;
}

CMat DiracOperator::block(VertexId row, VertexId col) const {
    return D.block(offsets[row], offsets[col], offsets[row + 1] - offsets[row], offsets[col + 1] - offsets[col]);
}

WeightAssignment edge_weights(const Representation& rep) {
    WeightAssignment b;
    for (EdgeId e = 0; e < rep.quiver.edge_count(); ++e) b.push_back(rep.L[e] / rep.quiver.distance(e));
    return b;
}

DiracOperator dirac(const Representation& rep) {
    auto dims = vertex_dims(rep);
    return DiracOperator{weight_matrix(rep.quiver, dims, edge_weights(rep), true), vertex_offsets(dims)};
}

PathWeights path_weights(const Quiver& q, const std::vector<int>& dims, const WeightAssignment& b) {
    check_shapes(q, dims, b);
    PathWeights pw{augment(q), dims, {}};
    for (EdgeId e = 0; e < pw.qstar.edge_count(); ++e) {
        if (e >= q.edge_count())
            pw.w.push_back(b[pw.qstar.reverse_of(e)].adjoint());
        else if (q.is_self_loop(e))
            pw.w.push_back(b[e] + b[e].adjoint());
        else
            pw.w.push_back(b[e]);
    }
    return pw;
}

PathWeights path_weights(const Representation& rep) {
    return path_weights(rep.quiver, vertex_dims(rep), edge_weights(rep));
}

CMat holonomy(const Quiver& q, const std::vector<int>& dims, const WeightAssignment& b, const Path& p) {
    if (!is_path(q, p)) throw ValidationError("not a path of the quiver");
    if (p.trivial()) return CMat::Zero(dims.at(p.base), dims.at(p.base));
    CMat h = b.at(p.edges[0]);
    for (size_t a = 1; a < p.edges.size(); ++a) h = b.at(p.edges[a]) * h;
    return h;
}

CMat holonomy(const PathWeights& pw, const Path& p) { return holonomy(pw.qstar, pw.dims, pw.w, p); }

cd wilson_loop(const Quiver& q, const std::vector<int>& dims, const WeightAssignment& b, const Path& p) {
    if (p.trivial() && is_path(q, p)) return 0.0;
    if (!is_loop(q, p)) throw ValidationError("Wilson loops are defined for loops only");
    return holonomy(q, dims, b, p).trace();
}

cd wilson_loop(const PathWeights& pw, const Path& p) { return wilson_loop(pw.qstar, pw.dims, pw.w, p); }

double trace_power_matrix(const DiracOperator& D, int k) { return trace_power(D.D, k).real(); }

namespace {

std::vector<int> bfs_distance(const Quiver& q, const std::vector<std::vector<EdgeId>>& out, VertexId from) {
    std::vector<int> dist(q.vertex_count(), -1);
    std::deque<VertexId> queue{from};
    dist[from] = 0;
    while (!queue.empty()) {
        VertexId u = queue.front();
        queue.pop_front();
        for (EdgeId e : out[u]) {
            VertexId w = q.target(e);
            if (dist[w] < 0) {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    return dist;
}

// Sum of Wilson loops of length k over all bases, skipping edges in `skip`.
// Q* is symmetric, so the distance from the base bounds the remaining steps.
template <class Visit>
void walk_loops(const PathWeights& pw, int k, const std::vector<char>& skip, Visit&& visit) {
    const Quiver& q = pw.qstar;
    auto out = q.out_edges();
    for (auto& list : out)
        std::erase_if(list, [&](EdgeId e) { return skip[e]; });
    std::vector<EdgeId> word(k);
    std::vector<CMat> prefix(k);
    for (VertexId base = 0; base < q.vertex_count(); ++base) {
        auto dist = bfs_distance(q, out, base);
        auto rec = [&](auto&& self, int depth, VertexId at) -> void {
            if (depth == k) {
                if (at == base) visit(base, word, prefix[k - 1]);
                return;
            }
            for (EdgeId e : out[at]) {
                VertexId w = q.target(e);
                if (dist[w] < 0 || dist[w] > k - depth - 1) continue;
                word[depth] = e;
                prefix[depth] = depth == 0 ? pw.w[e] : CMat(pw.w[e] * prefix[depth - 1]);
                self(self, depth + 1, w);
            }
        };
        rec(rec, 0, base);
    }
}

} // namespace

cd trace_power_paths_complex(const Representation& rep, int k, int limit) {
    if (k < 0) throw ValidationError("negative power");
    if (k > limit) throw ResourceError("loop length " + std::to_string(k) + " exceeds the limit " + std::to_string(limit));
    PathWeights pw = path_weights(rep);
    if (k == 0) {
        double s = 0;
        for (int dv : pw.dims) s += dv;
        return s;
    }
    cd sum = 0.0;
    std::vector<char> skip(pw.qstar.edge_count(), 0);
    walk_loops(pw, k, skip, [&](VertexId, const std::vector<EdgeId>&, const CMat& h) { sum += h.trace(); });
    return sum;
}

double trace_power_paths(const Representation& rep, int k, int limit) {
    return trace_power_paths_complex(rep, k, limit).real();
}

double trace_power_insertion(const Representation& rep, int k, int limit) {
    const Quiver& qo = rep.quiver;
    if (!qo.decorated()) throw ValidationError("insertion route needs a quiver with decoration self-loops");
    if (k < 0) throw ValidationError("negative power");
    if (k > limit) throw ResourceError("loop length " + std::to_string(k) + " exceeds the limit " + std::to_string(limit));
    PathWeights pw = path_weights(rep);
    const Quiver& qs = pw.qstar;
    if (k == 0) {
        double s = 0;
        for (int dv : pw.dims) s += dv;
        return s;
    }
    std::vector<char> deco(qs.edge_count(), 0);
    for (EdgeId e = 0; e < qs.edge_count(); ++e) deco[e] = qs.loop_vertex(e) >= 0;

    cd sum = 0.0;
    // Only decoration loops: o_v^k.
    for (VertexId v = 0; v < qs.vertex_count(); ++v) {
        EdgeId o = qs.decoration_loop(v);
        if (o >= 0) sum += trace_power(pw.w[o], k);
    }
    for (int len = 1; len <= k; ++len) {
        const int q = k - len;
        // Increasing q-subsets of {1..k}.
        std::vector<std::vector<int>> subsets;
        std::vector<int> cur;
        auto choose = [&](auto&& self, int next) -> void {
            if (static_cast<int>(cur.size()) == q) {
                subsets.push_back(cur);
                return;
            }
            for (int j = next; j <= k; ++j) {
                cur.push_back(j);
                self(self, j + 1);
                cur.pop_back();
            }
        };
        choose(choose, 1);
        walk_loops(pw, len, deco, [&](VertexId base, const std::vector<EdgeId>& word, const CMat& h) {
            if (q == 0) {
                sum += h.trace();
                return;
            }
            Path p{word, base};
            for (const auto& I : subsets) {
                std::vector<VertexId> vs;
                VertexId at = base;
                size_t idx = 0, a = 0;
                for (int pos = 1; pos <= k; ++pos) {
                    if (a < I.size() && I[a] == pos) {
                        vs.push_back(at);
                        ++a;
                    } else {
                        at = qs.target(word[idx++]);
                    }
                }
                Path po = insert_self_loops(qs, p, I, vs);
                if (po.trivial()) continue;
                sum += holonomy(pw, po).trace();
            }
        });
    }
    return sum.real();
}

int ActionPolynomial::degree() const {
    for (int k = static_cast<int>(f.size()) - 1; k >= 0; --k)
        if (f[k] != 0.0) return k;
    return 0;
}

ActionPolynomial parse_polynomial(const std::string& text, int max_degree) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw ValidationError("empty polynomial");
    ActionPolynomial f;
    size_t i = 0;
    auto fail = [&](const std::string& why) {
        throw ValidationError("cannot parse polynomial '" + text + "': " + why);
    };
    while (i < s.size()) {
        double sign = 1.0;
        if (s[i] == '+' || s[i] == '-') {
            sign = s[i] == '-' ? -1.0 : 1.0;
            ++i;
        } else if (i != 0) {
            fail("expected + or -");
        }
        double coef = 1.0;
        bool has_coef = false;
        if (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.')) {
            char* end = nullptr;
            coef = std::strtod(s.c_str() + i, &end);
            i = static_cast<size_t>(end - s.c_str());
            has_coef = true;
            if (i < s.size() && s[i] == '*') ++i;
        }
        int power = 0;
        if (i < s.size() && s[i] == 'x') {
            ++i;
            power = 1;
            if (i < s.size() && s[i] == '^') {
                ++i;
                size_t start = i;
                while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
                if (start == i) fail("missing exponent");
                power = std::stoi(s.substr(start, i - start));
            }
        } else if (!has_coef) {
            fail("expected a number or x");
        }
        if (power > max_degree) fail("degree exceeds " + std::to_string(max_degree));
        if (static_cast<int>(f.f.size()) <= power) f.f.resize(power + 1, 0.0);
        f.f[power] += sign * coef;
    }
    return f;
}

std::string to_string(const ActionPolynomial& f) {
    std::ostringstream os;
    os.precision(17);
    bool first = true;
    for (size_t k = 0; k < f.f.size(); ++k) {
        if (f.f[k] == 0.0) continue;
        if (!first) os << " + ";
        os << f.f[k];
        if (k >= 1) os << "*x";
        if (k >= 2) os << "^" << k;
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

double spectral_action(const DiracOperator& D, const ActionPolynomial& f) {
    if (!(f.scale > 0.0)) throw ValidationError("scale must be positive");
    const CMat M = D.D / f.scale;
    double total = f.f.empty() ? 0.0 : f.f[0] * static_cast<double>(M.rows());
    CMat P = CMat::Identity(M.rows(), M.cols());
    for (size_t k = 1; k < f.f.size(); ++k) {
        P = P * M;
        if (f.f[k] != 0.0) total += f.f[k] * P.trace().real();
    }
    return total;
}

double spectral_action(const Representation& rep, const ActionPolynomial& f) { return spectral_action(dirac(rep), f); }

double spectral_action_paths(const Representation& rep, const ActionPolynomial& f, int limit) {
    double total = 0.0;
    for (size_t k = 0; k < f.f.size(); ++k)
        if (f.f[k] != 0.0) total += f.f[k] * trace_power_paths(rep, static_cast<int>(k), limit) / std::pow(f.scale, k);
    return total;
}

std::map<VertexId, CMat> higgs_fields(const Representation& rep) {
    const Quiver& q = rep.quiver;
    std::map<VertexId, CMat> phi;
    for (EdgeId e = 0; e < q.edge_count(); ++e) {
        if (!q.is_self_loop(e)) continue;
        VertexId v = q.source(e);
        CMat term = (rep.L[e] + rep.L[e].adjoint()) / q.distance(e);
        auto it = phi.find(v);
        if (it == phi.end())
            phi.emplace(v, term);
        else
            it->second += term;
    }
    return phi;
}

Eigen::VectorXd spectrum(const DiracOperator& D) {
    Eigen::SelfAdjointEigenSolver<CMat> es(D.D, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

} // namespace qst
