// Graph representations: finite explicit adjacency and infinite lazy graphs
// given by a pure neighbor function. Vertex ids are stable 64-bit encodings
// (packed lattice coordinates, heap-order tree addresses) so sparse profile
// maps hash in O(1) and lazy/eager runs agree on identity.
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace avgproc {

using VertexId = std::int64_t;

struct Edge {
    VertexId u, v;  // canonical: u < v

    Edge(VertexId a, VertexId b) : u(a < b ? a : b), v(a < b ? b : a) {
        if (a == b) throw std::invalid_argument("self-loop edge");
    }
    bool operator==(const Edge& o) const { return u == o.u && v == o.v; }
    bool operator<(const Edge& o) const { return u < o.u || (u == o.u && v < o.v); }
};

// 64-bit key for per-edge seed derivation; identical for lazy and finite
// views of the same edge.
std::uint64_t edge_key(const Edge& e);
std::uint64_t vertex_key(VertexId v);

struct GraphError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Packed lattice coordinates. d = 1: id = x. d = 2: two 32-bit halves.
// d = 3: three 21-bit fields. Coordinates outside the packable range throw.
VertexId lattice_pack(int dim, const std::vector<long>& coords);
std::vector<long> lattice_unpack(int dim, VertexId id);

class Graph {
public:
    using NeighborFn = std::function<std::vector<VertexId>(VertexId)>;

    static Graph finite(std::unordered_map<VertexId, std::vector<VertexId>> adjacency);
    static Graph lazy(NeighborFn neighbors, int degree_bound, std::string name);

    bool is_finite() const { return finite_; }
    int degree_bound() const { return degree_bound_; }
    const std::string& name() const { return name_; }

    // Nonzero for lattice/torus graphs whose vertex labels are coordinate
    // tuples; 0 means labels are plain integers.
    int coord_dim() const { return coord_dim_; }
    Graph& set_coord_dim(int d) { coord_dim_ = d; return *this; }
    Graph& set_name(std::string n) { name_ = std::move(n); return *this; }

    std::vector<VertexId> neighbors(VertexId v) const;
    bool has_vertex(VertexId v) const;  // always true for lazy graphs

    // Finite-only accessors.
    std::size_t vertex_count() const;
    const std::vector<VertexId>& vertices() const;
    std::vector<Edge> edges() const;

    // BFS distance. Lazy graphs require a radius cap; nullopt means the
    // distance exceeds the cap (a signal, not an error).
    std::optional<long> distance(VertexId u, VertexId v,
                                 std::optional<long> radius_cap = std::nullopt) const;

    // Explicit finite subgraph induced by the radius-R ball around center,
    // preserving vertex ids. Throws if the ball is disconnected from the rest
    // in a way that breaks the Graph invariants (cannot happen for connected g).
    Graph ball(VertexId center, long radius) const;

private:
    Graph() = default;

    bool finite_ = true;
    int degree_bound_ = 0;
    int coord_dim_ = 0;
    std::string name_;
    // finite
    std::unordered_map<VertexId, std::vector<VertexId>> adj_;
    std::vector<VertexId> vertex_list_;
    // lazy
    NeighborFn neighbor_fn_;
};

// Generators. All returned graphs satisfy the Graph invariants; lazy variants
// never materialize more vertices than queried.
Graph make_path(long n);
Graph make_cycle(long n);
Graph make_complete(long n);
Graph make_star(long n);                     // n vertices: center 0, leaves 1..n-1
Graph make_torus(int dim, long side);
Graph make_lattice(int dim);                 // lazy Z^d, d in {1,2,3}
Graph make_regular_tree(int branching);      // lazy; root 0 has b children, D = b+1
Graph make_random_regular(long n, int degree, std::uint64_t seed);

// Edge-list file I/O: one "u v" pair per line, '#' comments.
Graph load_edge_list(const std::string& path);
void save_edge_list(const Graph& g, const std::string& path);

// Spec-string parser, e.g. "lattice:d=2", "cycle:n=100", "tree:b=3".
Graph parse_graph_spec(const std::string& spec);

// Parse a vertex label in the context of a graph spec: "0,0" for lattices and
// tori, a plain integer otherwise.
VertexId parse_vertex_label(const Graph& g, const std::string& label);
std::string format_vertex_label(const Graph& g, VertexId v);

}  // namespace avgproc

template <>
struct std::hash<avgproc::Edge> {
    std::size_t operator()(const avgproc::Edge& e) const {
        return static_cast<std::size_t>(avgproc::edge_key(e));
    }
};
