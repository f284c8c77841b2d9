#pragma once

#include "qst/core.hpp"

#include <functional>
#include <optional>

namespace qst {

struct Edge {
    VertexId source = 0;
    VertexId target = 0;
};

struct LatticeSpec {
    int d = 2;
    int m = 3;
    bool self_loops = false;
    double a = 1.0;
    double tau = 1.0;
};

// Finite quiver. Edge order is the EdgeId order.
//
// Edges appended by augment() remember the edge they reverse (reverse_of),
// self-loops appended by add_self_loops() remember their vertex (loop_vertex).
class Quiver {
public:
    Quiver() = default;
    explicit Quiver(int vertex_count, std::vector<Edge> edges = {});

    int vertex_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(EdgeId e) const { return edges_.at(e); }
    VertexId source(EdgeId e) const { return edges_.at(e).source; }
    VertexId target(EdgeId e) const { return edges_.at(e).target; }
    bool is_self_loop(EdgeId e) const { return source(e) == target(e); }

    // Graph distance rho; 1 where unset.
    double distance(EdgeId e) const;
    bool has_distance() const { return !rho_.empty(); }
    void set_distance(EdgeId e, double rho);

    // For an edge added by augment(): the original edge it reverses, else -1.
    EdgeId reverse_of(EdgeId e) const { return parent_.at(e); }
    bool is_reversed(EdgeId e) const { return parent_.at(e) >= 0; }
    // Reversed copy of an original edge inside an augmented quiver, else -1.
    EdgeId reversed_copy(EdgeId e) const;
    bool augmented() const { return augmented_; }

    // Vertex decorated by a self-loop from add_self_loops(), else -1.
    VertexId loop_vertex(EdgeId e) const { return deco_.at(e); }
    // Decoration self-loop o_v, or -1.
    EdgeId decoration_loop(VertexId v) const;
    bool decorated() const { return decorated_; }

    const std::optional<LatticeSpec>& lattice() const { return lattice_; }
    void set_lattice(const LatticeSpec& s) { lattice_ = s; }

    std::vector<std::vector<EdgeId>> out_edges() const;
    bool connected() const;
    std::vector<int> component_of() const;

    friend Quiver augment(const Quiver& q);
    friend Quiver add_self_loops(const Quiver& q);
    friend Quiver strip_decoration(const Quiver& q);

private:
    void add_edge(Edge e, double rho, EdgeId parent, VertexId deco);

    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<double> rho_;
    std::vector<EdgeId> parent_;
    std::vector<EdgeId> rev_;
    std::vector<VertexId> deco_;
    std::vector<EdgeId> loop_of_;
    bool augmented_ = false;
    bool decorated_ = false;
    std::optional<LatticeSpec> lattice_;
};

// Q*: appends the reverse of every non-self-loop edge.
Quiver augment(const Quiver& q);
// Q°: appends one self-loop per vertex.
Quiver add_self_loops(const Quiver& q);
// Inverse of add_self_loops (removes decoration loops, keeps the rest).
Quiver strip_decoration(const Quiver& q);

// Path stored left to right: edges[0] is traversed first. The paper's
// right-to-left word e_k ... e_1 corresponds to edges {e_1, ..., e_k}.
struct Path {
    std::vector<EdgeId> edges;
    VertexId base = 0; // only used when edges is empty (constant path E_v)

    bool trivial() const { return edges.empty(); }
    int length() const { return static_cast<int>(edges.size()); }
    bool operator==(const Path&) const = default;
};

VertexId path_source(const Quiver& q, const Path& p);
VertexId path_target(const Quiver& q, const Path& p);
bool is_path(const Quiver& q, const Path& p);
bool is_loop(const Quiver& q, const Path& p);
// p2 . p1 (p1 first). Returns nullopt when t(p1) != s(p2).
std::optional<Path> compose(const Quiver& q, const Path& p2, const Path& p1);

inline constexpr int kDefaultLoopLimit = 12;

// Calls fn for every loop of length k, in lexicographic edge order.
void for_each_loop(const Quiver& q, int k, std::optional<VertexId> base,
                   const std::function<void(const std::vector<EdgeId>&)>& fn,
                   int limit = kDefaultLoopLimit);
std::vector<Path> enumerate_loops(const Quiver& q, int k, std::optional<VertexId> base = std::nullopt,
                                  int limit = kDefaultLoopLimit);
// Number of loops without materializing them.
std::uint64_t count_loops(const Quiver& q, int k, std::optional<VertexId> base = std::nullopt,
                          int limit = kDefaultLoopLimit);

// T^d_m (or O^d_m when spec.self_loops). Vertices are row-major flattenings of
// (Z/m)^d with the last coordinate fastest. Lattice edge v -> v + e_j has id v*d + j;
// self-loops follow with id d*m^d + v.
Quiver make_torus(const LatticeSpec& spec);
// Torus whose rows are glued with a shift by one, on n = m*m vertices.
Quiver make_shifted_torus(int m);

// Index helpers for (augmented) tori.
class LatticeIndex {
public:
    explicit LatticeIndex(const Quiver& q);
    int d() const { return spec_.d; }
    int m() const { return spec_.m; }
    int volume() const { return volume_; }
    const LatticeSpec& spec() const { return spec_; }
    std::vector<int> coords(VertexId v) const;
    VertexId vertex(const std::vector<int>& x) const;
    // Neighbour along signed axis s in {+-1..+-d}.
    VertexId shift(VertexId v, int s) const;
    // Edge of the (augmented) quiver that steps from v along signed axis s.
    EdgeId step(VertexId v, int s) const;
    // Signed axis of an edge of the augmented lattice quiver (0 for self-loops).
    int axis_of(EdgeId e) const;

private:
    const Quiver* q_;
    LatticeSpec spec_;
    int volume_ = 0;
    std::vector<int> stride_;
};

// All P_{+-i,+-j}(v) on an augmented torus; 4d(d-1) loops.
std::vector<Path> plaquettes(const Quiver& qstar, VertexId v);
// Loop following the signed axes in order from v.
Path lattice_path(const Quiver& qstar, VertexId v, const std::vector<int>& axes);

// Multi-index insertion of decoration self-loops. I is 1-based and increasing;
// insertions are applied in order, each into the already extended path.
// Slot j = length+1 appends at the end. Any failed condition yields E_{s(p)}.
Path insert_self_loops(const Quiver& qo, const Path& p, const std::vector<int>& I,
                       const std::vector<VertexId>& vs);
// Deletion, applied from the largest index down.
Path delete_self_loops(const Quiver& qo, const Path& p, const std::vector<int>& I,
                       const std::vector<VertexId>& vs);

} // namespace qst
