#include "qst/lattice.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <deque>
#include <numbers>
#include <set>

namespace qst {

namespace {

BigInt binom(long long n, long long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    BigInt r = 1;
    for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

BigInt factorial(int n) {
    BigInt r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

BigInt ipow(BigInt base, int e) {
    BigInt r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

} // namespace

BigInt coordination(int d, int k) {
    if (d < 1 || k < 0) throw ValidationError("coordination needs d >= 1 and k >= 0");
    // (1+z)^d (1-z)^{-d}
    BigInt sum = 0;
    for (int i = 0; i <= std::min(d, k); ++i) sum += binom(d, i) * binom(d - 1 + k - i, k - i);
    return sum;
}

std::vector<long long> coordination_bfs(int d, int m, int kmax) {
    if (m <= 2 * kmax) throw ValidationError("sphere counting needs m > 2k");
    Quiver q = augment(make_torus({d, m, false, 1.0, 1.0}));
    auto out = q.out_edges();
    std::vector<int> dist(q.vertex_count(), -1);
    std::deque<VertexId> queue{0};
    dist[0] = 0;
    std::vector<long long> sphere(kmax + 1, 0);
    while (!queue.empty()) {
        VertexId u = queue.front();
        queue.pop_front();
        if (dist[u] > kmax) continue;
        ++sphere[dist[u]];
        for (EdgeId e : out[u]) {
            VertexId w = q.target(e);
            if (dist[w] < 0) {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    return sphere;
}

BigInt loop_count_lattice(int d, int k) {
    if (d < 1 || k < 0) throw ValidationError("loop count needs d >= 1 and k >= 0");
    if (k % 2 != 0) return 0;
    const int h = k / 2;
    const BigInt kf = factorial(k);
    BigInt sum = 0;
    std::vector<int> mu(d, 0);
    auto rec = [&](auto&& self, int j, int left) -> void {
        if (j == d - 1) {
            mu[j] = left;
            BigInt den = 1;
            for (int x : mu) den *= factorial(x) * factorial(x);
            sum += kf / den;
            return;
        }
        for (int x = 0; x <= left; ++x) {
            mu[j] = x;
            self(self, j + 1, left - x);
        }
    };
    rec(rec, 0, h);
    return sum;
}

BigInt closed_walks_complete(int n, int l) { return closed_walks_uniform(n, 0, 1, l); }

BigInt closed_walks_complete_self_looped(int n, int l) { return closed_walks_uniform(n, 1, 1, l); }

BigInt closed_walks_uniform(int n, int lambda, int nu, int l) {
    if (n < 1 || l < 1 || lambda < 0 || nu < 0) throw ValidationError("closed walk counts need n, l >= 1");
    return ipow(BigInt(n - 1) * nu + lambda, l) + BigInt(n - 1) * ipow(BigInt(lambda) - nu, l);
}

std::vector<std::vector<long long>> underlying_adjacency(const Quiver& q) {
    const int n = q.vertex_count();
    std::vector<std::vector<long long>> A(n, std::vector<long long>(n, 0));
    for (const auto& e : q.edges()) {
        if (e.source == e.target) {
            ++A[e.source][e.source];
        } else {
            ++A[e.source][e.target];
            ++A[e.target][e.source];
        }
    }
    return A;
}

BigInt adjacency_trace(const std::vector<std::vector<long long>>& A, int l) {
    const size_t n = A.size();
    std::vector<std::vector<BigInt>> P(n, std::vector<BigInt>(n));
    for (size_t i = 0; i < n; ++i) P[i][i] = 1;
    for (int s = 0; s < l; ++s) {
        std::vector<std::vector<BigInt>> R(n, std::vector<BigInt>(n));
        for (size_t i = 0; i < n; ++i)
            for (size_t k = 0; k < n; ++k) {
                if (P[i][k] == 0) continue;
                for (size_t j = 0; j < n; ++j)
                    if (A[k][j] != 0) R[i][j] += P[i][k] * A[k][j];
            }
        P = std::move(R);
    }
    BigInt t = 0;
    for (size_t i = 0; i < n; ++i) t += P[i][i];
    return t;
}

WalkBounds closed_walk_bounds(const Quiver& q, int l) {
    auto A = underlying_adjacency(q);
    WalkBounds b;
    b.n = q.vertex_count();
    for (int i = 0; i < b.n; ++i)
        for (int j = 0; j < b.n; ++j) {
            b.nu = std::max(b.nu, A[i][j]);
            if (i == j) b.lambda = std::max(b.lambda, A[i][i]);
        }
    b.with_loops = ipow(BigInt(b.n), l) * ipow(BigInt(b.nu), l);
    b.uniform = ipow(BigInt(b.n - 1) * b.nu + b.lambda, l) + BigInt(b.n - 1) * ipow(BigInt(b.lambda) - b.nu, l);
    return b;
}

namespace {

struct LatticeData {
    int d = 0, m = 0;
    double rho = 1.0; // lattice edge distance
    bool decorated = false;
};

LatticeData check_lattice(const Representation& rep, int min_m) {
    const Quiver& q = rep.quiver;
    if (!q.lattice() || q.augmented()) throw ValidationError("closed forms need a representation of T^d_m or O^d_m");
    LatticeData L;
    L.d = q.lattice()->d;
    L.m = q.lattice()->m;
    if (L.d < 2) throw ValidationError("closed forms need d >= 2");
    if (L.m < min_m)
        throw ValidationError("closed forms need m >= " + std::to_string(min_m) +
                              " so that no loop of the relevant length wraps around the torus");
    int vol = 1;
    for (int i = 0; i < L.d; ++i) vol *= L.m;
    const int lattice_edges = vol * L.d;
    L.rho = q.distance(0);
    for (EdgeId e = 0; e < lattice_edges; ++e)
        if (std::abs(q.distance(e) - L.rho) > 1e-14 * L.rho)
            throw ValidationError("closed forms need a uniform lattice distance");
    L.decorated = q.decorated();
    if (q.edge_count() != lattice_edges + (L.decorated ? vol : 0))
        throw ValidationError("quiver edges do not match the torus");
    return L;
}

} // namespace

double plaquette_wilson_sum(const Representation& rep) {
    PathWeights pw = path_weights(rep);
    double sum = 0.0;
    for (VertexId v = 0; v < pw.qstar.vertex_count(); ++v)
        for (const auto& P : plaquettes(pw.qstar, v)) sum += wilson_loop(pw, P).real();
    return sum;
}

double mixed_higgs_sum(const Representation& rep, const std::map<VertexId, CMat>& phi) {
    const Quiver& q = rep.quiver;
    double sum = 0.0;
    for (EdgeId e = 0; e < q.edge_count(); ++e) {
        if (q.is_self_loop(e)) continue;
        auto ps = phi.find(q.source(e));
        auto pt = phi.find(q.target(e));
        if (ps == phi.end() || pt == phi.end()) continue;
        CMat b = rep.L[e] / q.distance(e);
        sum += (ps->second * b.adjoint() * pt->second * b).trace().real();
    }
    return sum;
}

LatticeTraceReport lattice_trace_closed_form(const Representation& rep, int k) {
    if (k < 0 || k > 4) throw ValidationError("lattice closed forms cover k = 0..4");
    LatticeData L = check_lattice(rep, 5);
    const double d = L.d;
    const double s2 = 1.0 / (L.rho * L.rho);
    double dimsum = 0.0;
    for (VertexId v = 0; v < rep.quiver.vertex_count(); ++v) dimsum += rep.dim(v);

    LatticeTraceReport r;
    r.k = k;
    std::map<VertexId, CMat> phi;
    if (L.decorated) phi = higgs_fields(rep);
    auto phi_trace = [&](int p) {
        double t = 0.0;
        for (const auto& [v, f] : phi) t += trace_power(f, p).real();
        return t;
    };
    switch (k) {
    case 0:
        r.constant_term = dimsum;
        break;
    case 1:
        if (L.decorated) r.higgs_terms["phi"] = phi_trace(1);
        break;
    case 2:
        r.constant_term = 2.0 * d * s2 * dimsum;
        if (L.decorated) r.higgs_terms["phi2"] = phi_trace(2);
        break;
    case 3:
        if (L.decorated) {
            r.higgs_terms["phi3"] = phi_trace(3);
            r.higgs_terms["phi_from_loops"] = 6.0 * d * s2 * phi_trace(1);
        }
        break;
    case 4:
        r.constant_term = (8.0 * d * d - 2.0 * d) * s2 * s2 * dimsum;
        r.plaquette_sum = plaquette_wilson_sum(rep);
        if (L.decorated) {
            r.higgs_terms["phi4"] = phi_trace(4);
            r.higgs_terms["phi2_from_loops"] = 8.0 * d * s2 * phi_trace(2);
            r.mixed_terms = 4.0 * mixed_higgs_sum(rep, phi);
        }
        break;
    }
    r.total = r.constant_term + r.plaquette_sum + r.mixed_terms;
    for (const auto& [name, x] : r.higgs_terms) r.total += x;
    return r;
}

LatticeTraceReport spectral_action_closed_form(const Representation& rep, const ActionPolynomial& f, double a) {
    if (!(a > 0.0)) throw ValidationError("lattice spacing must be positive");
    if (f.degree() > 4) throw ValidationError("the closed form covers polynomials of degree <= 4");
    LatticeTraceReport out;
    out.k = f.degree();
    for (int k = 0; k < static_cast<int>(f.f.size()) && k <= 4; ++k) {
        if (f.f[k] == 0.0) continue;
        const double w = f.f[k] * std::pow(a, k);
        auto r = lattice_trace_closed_form(rep, k);
        out.constant_term += w * r.constant_term;
        out.plaquette_sum += w * r.plaquette_sum;
        out.mixed_terms += w * r.mixed_terms;
        for (const auto& [name, x] : r.higgs_terms) out.higgs_terms[name] += w * x;
    }
    out.total = out.constant_term + out.plaquette_sum + out.mixed_terms;
    for (const auto& [name, x] : out.higgs_terms) out.total += x;
    return out;
}

D6Theta d6_theta(int d) {
    if (d < 3) throw ValidationError("the length-6 expansion needs d >= 3");
    const long long D = d;
    return {4 * (10 * D * D * D - 11 * D * D + 6 * D), 1, 1, 12 * D, 3, 1};
}

std::string to_string(D6Class c) {
    switch (c) {
    case D6Class::trivial: return "trivial";
    case D6Class::plaquette: return "plaquette";
    case D6Class::rect_h: return "rect_h";
    case D6Class::rect_v: return "rect_v";
    case D6Class::rect_mid: return "rect_mid";
    case D6Class::door: return "door";
    case D6Class::door_rotated: return "door_rotated";
    case D6Class::hex: return "hex";
    }
    return "?";
}

D6Class classify_d6(const std::vector<int>& a) {
    if (a.size() != 6) throw ValidationError("length-6 classification needs six steps");
    std::map<int, int> net;
    for (int s : a) net[std::abs(s)] += s > 0 ? 1 : -1;
    for (const auto& [ax, x] : net)
        if (x != 0) throw ValidationError("step sequence is not closed");
    // Cyclic free reduction; Wilson loops are invariant under it.
    std::vector<int> st = a;
    bool changed = true;
    while (changed && st.size() >= 2) {
        changed = false;
        const size_t L = st.size();
        for (size_t k = 0; k < L; ++k) {
            size_t n = (k + 1) % L;
            if (st[k] == -st[n]) {
                std::vector<int> r;
                for (size_t i = 0; i < L; ++i)
                    if (i != k && i != n) r.push_back(st[i]);
                st = std::move(r);
                changed = true;
                break;
            }
        }
    }
    if (st.empty()) return D6Class::trivial;
    if (st.size() == 4) return D6Class::plaquette;
    if (st.size() != 6) throw ValidationError("unexpected reduced length");
    std::set<int> axes;
    for (int s : st) axes.insert(std::abs(s));
    if (axes.size() == 2) {
        if (a[0] == a[1] && a[3] == -a[0] && a[4] == -a[0] && a[5] == -a[2]) return D6Class::rect_h;
        if (a[1] == a[2] && a[4] == -a[1] && a[5] == -a[1] && a[3] == -a[0]) return D6Class::rect_v;
        return D6Class::rect_mid;
    }
    if (a[3] == -a[0] && a[4] == -a[1] && a[5] == -a[2]) return D6Class::hex;
    if (a[2] == -a[0] && a[4] == -a[1] && a[5] == -a[3]) return D6Class::door;
    return D6Class::door_rotated;
}

namespace {

std::vector<std::pair<std::vector<int>, D6Class>> closed_sequences(int d) {
    std::vector<int> steps;
    for (int j = 1; j <= d; ++j) {
        steps.push_back(j);
        steps.push_back(-j);
    }
    std::vector<std::pair<std::vector<int>, D6Class>> out;
    std::vector<int> w(6);
    std::vector<int> pos(d + 1, 0);
    auto rec = [&](auto&& self, int depth) -> void {
        if (depth == 6) {
            for (int j = 1; j <= d; ++j)
                if (pos[j] != 0) return;
            out.emplace_back(w, classify_d6(w));
            return;
        }
        for (int s : steps) {
            // remaining steps must be able to return
            pos[std::abs(s)] += s > 0 ? 1 : -1;
            int need = 0;
            for (int j = 1; j <= d; ++j) need += std::abs(pos[j]);
            if (need <= 5 - depth) {
                w[depth] = s;
                self(self, depth + 1);
            }
            pos[std::abs(s)] -= s > 0 ? 1 : -1;
        }
    };
    rec(rec, 0);
    return out;
}

} // namespace

std::map<D6Class, long long> d6_census(int d) {
    if (d < 1) throw ValidationError("census needs d >= 1");
    std::map<D6Class, long long> c;
    for (const auto& [w, cls] : closed_sequences(d)) ++c[cls];
    return c;
}

D6Decomposition d6_decomposition(const Representation& rep) {
    const Quiver& q = rep.quiver;
    if (!q.lattice() || q.augmented() || q.decorated())
        throw ValidationError("the length-6 decomposition needs a representation of T^d_m");
    D6Decomposition out;
    out.d = q.lattice()->d;
    out.m = q.lattice()->m;
    if (out.d < 3) throw ValidationError("the length-6 decomposition needs d >= 3");
    if (out.m <= 6) throw ValidationError("the length-6 decomposition needs m > 6");
    out.N = rep.dim(0);
    for (VertexId v = 0; v < q.vertex_count(); ++v)
        if (rep.dim(v) != out.N) throw ValidationError("vertex dimensions differ");
    out.theta = d6_theta(out.d);

    PathWeights pw = path_weights(rep);
    LatticeIndex idx(pw.qstar);
    const int d = out.d;
    auto seqs = closed_sequences(d);
    std::map<D6Class, long long> counts;
    for (const auto& [w, cls] : seqs) ++counts[cls];
    for (const auto& [cls, n] : counts) out.class_counts[to_string(cls)] = n;

    auto wilson = [&](VertexId v, const std::vector<int>& w) { return wilson_loop(pw, lattice_path(pw.qstar, v, w)).real(); };

    std::map<D6Class, double> sums;
    for (VertexId v = 0; v < q.vertex_count(); ++v)
        for (const auto& [w, cls] : seqs) sums[cls] += wilson(v, w);
    for (const auto& [cls, s] : sums) {
        out.class_sums[to_string(cls)] = s;
        out.class_total += s;
    }

    double rect_h = 0, rect_v = 0, square = 0, door = 0, hex = 0;
    for (VertexId v = 0; v < q.vertex_count(); ++v)
        for (int i = -d; i <= d; ++i)
            for (int j = -d; j <= d; ++j) {
                if (i == 0 || j == 0 || std::abs(i) == std::abs(j)) continue;
                rect_h += wilson(v, {i, i, j, -i, -i, -j});
                rect_v += wilson(v, {i, j, j, -i, -j, -j});
                square += wilson(v, {i, j, -i, -j});
                for (int l = -d; l <= d; ++l) {
                    if (l == 0 || std::abs(l) == std::abs(i) || std::abs(l) == std::abs(j)) continue;
                    door += wilson(v, {j, i, -j, l, -i, -l});
                    hex += wilson(v, {i, j, l, -i, -j, -l});
                }
            }
    out.canonical_sums = {{"rect_h", rect_h}, {"rect_v", rect_v}, {"square", square}, {"door", door}, {"hex", hex}};

    const double volN = static_cast<double>(q.vertex_count()) * out.N;
    const auto& th = out.theta;
    out.reconstruction_paper = th.theta0 * volN + th.rect_h * rect_h + th.rect_v * rect_v + th.square * square +
                               th.door * door + th.hex * hex;

    auto cnt = [&](D6Class c) { return static_cast<double>(counts.count(c) ? counts.at(c) : 0); };
    const double based_plaquettes = 4.0 * d * (d - 1);
    const double based_rect = 2.0 * d * (2.0 * d - 2.0);
    const double based_3 = 2.0 * d * (2.0 * d - 2.0) * (2.0 * d - 4.0);
    out.census_multiplicity = {
        {"trivial", cnt(D6Class::trivial)},
        {"square", cnt(D6Class::plaquette) / based_plaquettes},
        {"rect", (cnt(D6Class::rect_h) + cnt(D6Class::rect_v) + cnt(D6Class::rect_mid)) / (2.0 * based_rect)},
        {"door", (cnt(D6Class::door) + cnt(D6Class::door_rotated)) / based_3},
        {"hex", cnt(D6Class::hex) / based_3},
    };
    const auto& mu = out.census_multiplicity;
    out.reconstruction_census = mu.at("trivial") * volN + mu.at("square") * square + mu.at("rect") * (rect_h + rect_v) +
                                mu.at("door") * door + mu.at("hex") * hex;
    return out;
}

GaugeField trigonometric_field(int N, int d, std::uint64_t seed, int modes) {
    struct Mode {
        CMat H;
        std::vector<double> k;
        double phase;
    };
    std::vector<std::vector<Mode>> table(d);
    for (int axis = 0; axis < d; ++axis) {
        Rng rng = keyed_stream(seed, {0x6669656c64ull, static_cast<std::uint64_t>(axis)});
        std::uniform_real_distribution<double> wave(-1.5, 1.5), ph(0.0, 2.0 * std::numbers::pi);
        for (int t = 0; t < modes; ++t) {
            Mode md{random_hermitian(N, rng), {}, 0.0};
            for (int i = 0; i < d; ++i) md.k.push_back(wave(rng));
            md.phase = ph(rng);
            table[axis].push_back(std::move(md));
        }
    }
    return [table, N](const std::vector<double>& x, int axis) {
        CMat A = CMat::Zero(N, N);
        for (const auto& md : table.at(axis)) {
            double arg = md.phase;
            for (size_t i = 0; i < x.size(); ++i) arg += md.k[i] * x[i];
            A += std::cos(arg) * md.H;
        }
        return A;
    };
}

namespace {

CMat expi(const CMat& H, double t) {
    Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (H + H.adjoint()));
    Eigen::VectorXcd ph = (cd(0.0, t) * es.eigenvalues().cast<cd>()).array().exp();
    return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

} // namespace

CurvatureResult plaquette_curvature_check(const std::vector<std::vector<CMat>>& A, int d, int m, double a) {
    if (d < 2 || m < 3) throw ValidationError("curvature check needs d >= 2 and m >= 3");
    Quiver q = make_torus({d, m, false, a, 1.0});
    LatticeIndex idx(q);
    if (static_cast<int>(A.size()) != q.vertex_count()) throw ValidationError("one field value per vertex is required");
    std::vector<std::vector<CMat>> L(A.size());
    for (size_t v = 0; v < A.size(); ++v)
        for (int j = 0; j < d; ++j) L[v].push_back(expi(A[v].at(j), a));
    CurvatureResult res;
    res.a = a;
    for (VertexId v = 0; v < q.vertex_count(); ++v) {
        auto x = idx.coords(v);
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) {
                if (x[i] == m - 1 || x[j] == m - 1) continue; // skip the seam
                VertexId vi = idx.shift(v, i + 1), vj = idx.shift(v, j + 1);
                CMat X = L[v][i] * L[vi][j] * L[vj][i].adjoint() * L[v][j].adjoint();
                CMat F = (A[vi][j] - A[v][j]) / a - (A[vj][i] - A[v][i]) / a +
                         cd(0.0, 1.0) * (A[v][i] * A[v][j] - A[v][j] * A[v][i]);
                CMat logX;
                if (!unitary_log(X, logX, 1e-6)) {
                    ++res.excluded;
                    continue;
                }
                res.max_residual = std::max(res.max_residual, (logX - cd(0.0, a * a) * F).norm());
                ++res.plaquettes;
            }
    }
    return res;
}

CurvatureResult plaquette_curvature_check(const GaugeField& A, int d, int m, double a) {
    Quiver q = make_torus({d, m, false, a, 1.0});
    LatticeIndex idx(q);
    std::vector<std::vector<CMat>> vals(q.vertex_count());
    for (VertexId v = 0; v < q.vertex_count(); ++v) {
        auto c = idx.coords(v);
        std::vector<double> x(c.begin(), c.end());
        for (auto& t : x) t *= a;
        for (int j = 0; j < d; ++j) vals[v].push_back(A(x, j));
    }
    return plaquette_curvature_check(vals, d, m, a);
}

} // namespace qst
