#include "qst/repcat.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>

namespace qst {

namespace {

std::vector<CMat> random_algebra_element(const Profile& p, Rng& rng) {
    std::vector<CMat> a;
    for (int n : p.n) a.push_back(random_hermitian(n, rng));
    return a;
}

} // namespace

double edge_compatibility_residual(const Representation& rep, EdgeId e, Rng& rng, int samples) {
    const auto& q = rep.quiver;
    const Profile& src = rep.network.profiles[q.source(e)];
    const Profile& dst = rep.network.profiles[q.target(e)];
    const IntMatrix& C = rep.network.diagrams[e];
    const CMat& L = rep.L[e];
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        auto a = random_algebra_element(src, rng);
        CMat M = L * lift(src, a) * L.adjoint();
        std::vector<CMat> b;
        int off = 0;
        for (int j = 0; j < dst.length(); ++j) {
            b.push_back(M.block(off, off, dst.n[j], dst.n[j]));
            off += dst.n[j] * dst.r[j];
        }
        double res = (M - lift(dst, b)).norm();
        // Spectral content of each target block must follow the diagram.
        for (int j = 0; j < dst.length(); ++j)
            for (int k = 1; k <= 2; ++k) {
                cd want = 0.0;
                for (int i = 0; i < src.length(); ++i) want += double(C(i, j)) * trace_power(a[i], k);
                res = std::max(res, std::abs(trace_power(b[j], k) - want));
            }
        worst = std::max(worst, res);
    }
    return worst;
}

void validate_representation(const Representation& rep, double tol, bool check_diagrams) {
    validate_network(rep.quiver, rep.network);
    const auto& q = rep.quiver;
    if (static_cast<int>(rep.L.size()) != q.edge_count()) throw ValidationError("one unitary per edge is required");
    for (EdgeId e = 0; e < q.edge_count(); ++e) {
        const CMat& L = rep.L[e];
        if (L.rows() != rep.dim(q.target(e)) || L.cols() != rep.dim(q.source(e)))
            throw ValidationError("L on edge " + std::to_string(e) + " has the wrong shape");
        if (unitarity_residual(L) > tol) throw ValidationError("L on edge " + std::to_string(e) + " is not unitary");
    }
    if (!check_diagrams) return;
    Rng rng = keyed_stream(0x5eed, {});
    for (EdgeId e = 0; e < q.edge_count(); ++e)
        if (edge_compatibility_residual(rep, e, rng, 3) > 1e-8)
            throw ValidationError("L on edge " + std::to_string(e) + " does not realize its Bratteli diagram");
}

Representation random_representation(const Quiver& q, const BratteliNetwork& net, std::uint64_t seed) {
    validate_network(q, net);
    Representation rep{q, net, {}, seed};
    for (EdgeId e = 0; e < q.edge_count(); ++e) {
        Rng rng = keyed_stream(seed, {static_cast<std::uint64_t>(e)});
        const Profile& dst = net.profiles[q.target(e)];
        std::vector<CMat> u;
        for (int n : dst.n) u.push_back(haar_unitary(n, rng));
        rep.L.push_back(realize_morphism(net.diagrams[e], net.profiles[q.source(e)], dst, u).L);
    }
    return rep;
}

Representation unit_representation(const Quiver& q, const BratteliNetwork& net) {
    validate_network(q, net);
    Representation rep{q, net, {}, std::nullopt};
    for (EdgeId e = 0; e < q.edge_count(); ++e) {
        const Profile& dst = net.profiles[q.target(e)];
        std::vector<CMat> u;
        for (int n : dst.n) u.push_back(CMat::Identity(n, n));
        rep.L.push_back(realize_morphism(net.diagrams[e], net.profiles[q.source(e)], dst, u).L);
    }
    return rep;
}

GaugeElement identity_gauge(const BratteliNetwork& net) {
    GaugeElement el;
    for (const auto& p : net.profiles) {
        std::vector<int> s(p.length());
        std::iota(s.begin(), s.end(), 0);
        el.sigma.push_back(s);
        std::vector<CMat> g;
        for (int n : p.n) g.push_back(CMat::Identity(n, n));
        el.g.push_back(std::move(g));
    }
    return el;
}

GaugeElement random_gauge(const BratteliNetwork& net, std::uint64_t seed, bool permute) {
    GaugeElement el;
    for (size_t v = 0; v < net.profiles.size(); ++v) {
        const Profile& p = net.profiles[v];
        Rng rng = keyed_stream(seed, {0x6761756765ull, v});
        std::vector<int> s(p.length());
        std::iota(s.begin(), s.end(), 0);
        if (permute) {
            auto perms = symmetry_permutations(p);
            std::uniform_int_distribution<size_t> pick(0, perms.size() - 1);
            s = perms[pick(rng)];
        }
        el.sigma.push_back(s);
        std::vector<CMat> g;
        for (int n : p.n) g.push_back(haar_unitary(n, rng));
        el.g.push_back(std::move(g));
    }
    return el;
}

void validate_gauge(const BratteliNetwork& net, const GaugeElement& el, double tol) {
    if (el.sigma.size() != net.profiles.size() || el.g.size() != net.profiles.size())
        throw ValidationError("gauge element does not match the network's vertex count");
    for (size_t v = 0; v < net.profiles.size(); ++v) {
        const Profile& p = net.profiles[v];
        const auto& s = el.sigma[v];
        if (static_cast<int>(s.size()) != p.length() || static_cast<int>(el.g[v].size()) != p.length())
            throw ValidationError("gauge element has the wrong number of summands at vertex " + std::to_string(v));
        std::vector<int> sorted = s;
        std::sort(sorted.begin(), sorted.end());
        for (int j = 0; j < p.length(); ++j) {
            if (sorted[j] != j) throw ValidationError("sigma is not a permutation at vertex " + std::to_string(v));
            if (p.n[s[j]] != p.n[j] || p.r[s[j]] != p.r[j])
                throw ValidationError("sigma does not preserve (n, r) at vertex " + std::to_string(v));
            if (el.g[v][j].rows() != p.n[j] || unitarity_residual(el.g[v][j]) > tol)
                throw ValidationError("gauge block is not a unitary of the right size at vertex " +
                                      std::to_string(v));
        }
    }
}

std::vector<CMat> permute_blocks(const std::vector<int>& sigma, const std::vector<CMat>& x) {
    std::vector<CMat> y(x.size());
    for (size_t j = 0; j < x.size(); ++j) y[sigma[j]] = x[j];
    return y;
}

IntMatrix permute_diagram(const IntMatrix& C, const std::vector<int>& sigma_s, const std::vector<int>& sigma_t) {
    IntMatrix D(C.rows, C.cols);
    for (int i = 0; i < C.rows; ++i)
        for (int j = 0; j < C.cols; ++j) D(sigma_s[i], sigma_t[j]) = C(i, j);
    return D;
}

CMat hilbert_gauge(const Profile& p, const std::vector<int>& sigma, const std::vector<CMat>& g) {
    const int H = p.hilbert_dim();
    std::vector<int> start(p.length(), 0);
    for (int j = 1; j < p.length(); ++j) start[j] = start[j - 1] + p.n[j - 1] * p.r[j - 1];
    CMat Pi = CMat::Zero(H, H);
    for (int j = 0; j < p.length(); ++j) {
        int w = p.n[j] * p.r[j];
        Pi.block(start[sigma[j]], start[j], w, w) = CMat::Identity(w, w);
    }
    return lift(p, g) * Pi;
}

GaugeElement compose(const GaugeElement& second, const GaugeElement& first) {
    GaugeElement out;
    for (size_t v = 0; v < first.sigma.size(); ++v) {
        const auto& s = first.sigma[v];
        const auto& t = second.sigma[v];
        std::vector<int> ts(s.size());
        for (size_t j = 0; j < s.size(); ++j) ts[j] = t[s[j]];
        out.sigma.push_back(ts);
        auto tg = permute_blocks(t, first.g[v]);
        std::vector<CMat> hg;
        for (size_t j = 0; j < tg.size(); ++j) hg.push_back(second.g[v][j] * tg[j]);
        out.g.push_back(std::move(hg));
    }
    return out;
}

Representation gauge_transform(const Representation& rep, const GaugeElement& el) {
    validate_gauge(rep.network, el);
    const auto& q = rep.quiver;
    std::vector<CMat> U;
    for (VertexId v = 0; v < q.vertex_count(); ++v)
        U.push_back(hilbert_gauge(rep.network.profiles[v], el.sigma[v], el.g[v]));
    Representation out = rep;
    for (EdgeId e = 0; e < q.edge_count(); ++e) {
        VertexId s = q.source(e), t = q.target(e);
        out.L[e] = U[t] * rep.L[e] * U[s].adjoint();
        out.network.diagrams[e] = permute_diagram(rep.network.diagrams[e], el.sigma[s], el.sigma[t]);
    }
    return out;
}

std::vector<int> block_offsets(const Representation& rep) {
    std::vector<int> off(rep.quiver.vertex_count() + 1, 0);
    for (VertexId v = 0; v < rep.quiver.vertex_count(); ++v) off[v + 1] = off[v] + rep.dim(v);
    return off;
}

CMat module_map(const Representation& rep, const GaugeElement& el) {
    auto off = block_offsets(rep);
    CMat M = CMat::Zero(off.back(), off.back());
    for (VertexId v = 0; v < rep.quiver.vertex_count(); ++v)
        M.block(off[v], off[v], rep.dim(v), rep.dim(v)) =
            hilbert_gauge(rep.network.profiles[v], el.sigma[v], el.g[v]);
    return M;
}

PathModule to_module(const Representation& rep) {
    const auto& q = rep.quiver;
    auto off = block_offsets(rep);
    PathModule mod;
    mod.quiver = q;
    mod.dim = off.back();
    mod.algebra = rep.network.profiles;
    mod.diagrams = rep.network.diagrams;
    for (VertexId v = 0; v < q.vertex_count(); ++v) {
        CMat E = CMat::Zero(mod.dim, mod.dim);
        E.block(off[v], off[v], rep.dim(v), rep.dim(v)).setIdentity();
        mod.projections.push_back(std::move(E));
    }
    for (EdgeId e = 0; e < q.edge_count(); ++e) {
        CMat Phi = CMat::Zero(mod.dim, mod.dim);
        VertexId s = q.source(e), t = q.target(e);
        Phi.block(off[t], off[s], rep.dim(t), rep.dim(s)) = rep.L[e];
        mod.edge_action.push_back(std::move(Phi));
    }
    return mod;
}

CVec PathModule::act(const Path& p, const CVec& x) const {
    if (x.size() != dim) throw ValidationError("vector does not live in the module");
    CVec y = projections.at(path_source(quiver, p)) * x;
    for (EdgeId e : p.edges) y = edge_action.at(e) * y;
    return y;
}

CVec PathModule::act_product(const Path& p2, const Path& p1, const CVec& x) const {
    auto p = compose(quiver, p2, p1);
    if (!p) return CVec::Zero(dim);
    return act(*p, x);
}

namespace {

// Orthonormal basis of the range of a projection; coordinate vectors when possible.
CMat range_basis(const CMat& E, double tol) {
    const int n = static_cast<int>(E.rows());
    std::vector<int> coords;
    bool diagonal = true;
    for (int i = 0; i < n && diagonal; ++i)
        for (int j = 0; j < n; ++j) {
            double want = (i == j) ? std::round(E(i, i).real()) : 0.0;
            if (std::abs(E(i, j) - cd(want)) > tol || (i == j && want != 0.0 && want != 1.0)) {
                diagonal = false;
                break;
            }
        }
    if (diagonal) {
        for (int i = 0; i < n; ++i)
            if (std::abs(E(i, i) - cd(1.0)) < tol) coords.push_back(i);
        CMat V = CMat::Zero(n, static_cast<int>(coords.size()));
        for (size_t k = 0; k < coords.size(); ++k) V(coords[k], static_cast<int>(k)) = 1.0;
        return V;
    }
    Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (E + E.adjoint()));
    std::vector<int> keep;
    for (int i = 0; i < n; ++i)
        if (es.eigenvalues()(i) > 0.5) keep.push_back(i);
    CMat V(n, static_cast<int>(keep.size()));
    for (size_t k = 0; k < keep.size(); ++k) V.col(static_cast<int>(k)) = es.eigenvectors().col(keep[k]);
    return V;
}

} // namespace

Representation to_representation(const PathModule& mod, const Quiver& q) {
    const double tol = 1e-10;
    if (static_cast<int>(mod.projections.size()) != q.vertex_count() ||
        static_cast<int>(mod.edge_action.size()) != q.edge_count() ||
        static_cast<int>(mod.algebra.size()) != q.vertex_count())
        throw ValidationError("module does not match the quiver");
    CMat sum = CMat::Zero(mod.dim, mod.dim);
    for (VertexId v = 0; v < q.vertex_count(); ++v) {
        const CMat& E = mod.projections[v];
        if ((E * E - E).norm() > tol || (E - E.adjoint()).norm() > tol)
            throw ValidationError("E_" + std::to_string(v) + " is not an orthogonal projection");
        sum += E;
    }
    if ((sum - CMat::Identity(mod.dim, mod.dim)).norm() > tol)
        throw ValidationError("the constant-path projections do not resolve the identity");
    std::vector<CMat> V;
    for (VertexId v = 0; v < q.vertex_count(); ++v) {
        V.push_back(range_basis(mod.projections[v], tol));
        if (V.back().cols() != mod.algebra[v].hilbert_dim())
            throw ValidationError("range of E_" + std::to_string(v) + " does not match its profile");
    }
    Representation rep;
    rep.quiver = q;
    rep.network.profiles = mod.algebra;
    rep.network.diagrams = mod.diagrams;
    for (EdgeId e = 0; e < q.edge_count(); ++e) {
        VertexId s = q.source(e), t = q.target(e);
        const CMat& Phi = mod.edge_action[e];
        if ((Phi - mod.projections[t] * Phi * mod.projections[s]).norm() > tol)
            throw ValidationError("edge " + std::to_string(e) + " does not map H_s into H_t");
        rep.L.push_back(V[t].adjoint() * Phi * V[s]);
    }
    return rep;
}

} // namespace qst
