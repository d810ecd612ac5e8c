#include "avgproc/graph.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>
#include <limits>

#include "avgproc/rng.hpp"

namespace avgproc {

std::uint64_t edge_key(const Edge& e) {
    return mix(static_cast<std::uint64_t>(e.u) * 0x2545f4914f6cdd1dULL,
               static_cast<std::uint64_t>(e.v));
}

std::uint64_t vertex_key(VertexId v) {
    std::uint64_t s = static_cast<std::uint64_t>(v);
    return splitmix64(s);
}

VertexId lattice_pack(int dim, const std::vector<long>& coords) {
    if (static_cast<int>(coords.size()) != dim)
        throw GraphError("coordinate arity mismatch");
    switch (dim) {
        case 1:
            return coords[0];
        case 2: {
            for (long c : coords)
                if (c < INT32_MIN || c > INT32_MAX) throw GraphError("coordinate overflow");
            std::uint64_t x = static_cast<std::uint32_t>(static_cast<std::int32_t>(coords[0]));
            std::uint64_t y = static_cast<std::uint32_t>(static_cast<std::int32_t>(coords[1]));
            return static_cast<VertexId>((x << 32) | y);
        }
        case 3: {
            constexpr long kLim = (1L << 20) - 1;
            std::uint64_t id = 0;
            for (long c : coords) {
                if (c < -kLim || c > kLim) throw GraphError("coordinate overflow");
                id = (id << 21) | (static_cast<std::uint64_t>(c + kLim + 1) & 0x1fffffULL);
            }
            return static_cast<VertexId>(id);
        }
        default:
            throw GraphError("lattice dimension must be 1, 2 or 3");
    }
}

std::vector<long> lattice_unpack(int dim, VertexId id) {
    switch (dim) {
        case 1:
            return {static_cast<long>(id)};
        case 2: {
            std::uint64_t u = static_cast<std::uint64_t>(id);
            auto x = static_cast<std::int32_t>(static_cast<std::uint32_t>(u >> 32));
            auto y = static_cast<std::int32_t>(static_cast<std::uint32_t>(u & 0xffffffffULL));
            return {x, y};
        }
        case 3: {
            constexpr long kLim = (1L << 20) - 1;
            std::uint64_t u = static_cast<std::uint64_t>(id);
            std::vector<long> c(3);
            for (int i = 2; i >= 0; --i) {
                c[i] = static_cast<long>(u & 0x1fffffULL) - kLim - 1;
                u >>= 21;
            }
            return c;
        }
        default:
            throw GraphError("lattice dimension must be 1, 2 or 3");
    }
}

Graph Graph::finite(std::unordered_map<VertexId, std::vector<VertexId>> adjacency) {
    if (adjacency.empty()) throw GraphError("empty graph");
    Graph g;
    g.finite_ = true;
    // Validate: symmetric, no self-loops, no duplicate edges.
    for (auto& [v, nbrs] : adjacency) {
        std::set<VertexId> seen;
        for (VertexId w : nbrs) {
            if (w == v) throw GraphError("self-loop at vertex " + std::to_string(v));
            if (!seen.insert(w).second)
                throw GraphError("duplicate edge at vertex " + std::to_string(v));
            auto it = adjacency.find(w);
            if (it == adjacency.end() ||
                std::find(it->second.begin(), it->second.end(), v) == it->second.end())
                throw GraphError("asymmetric adjacency between " + std::to_string(v) +
                                 " and " + std::to_string(w));
        }
    }
    // Connectivity (single vertex counts as connected).
    {
        std::deque<VertexId> frontier{adjacency.begin()->first};
        std::set<VertexId> visited{adjacency.begin()->first};
        while (!frontier.empty()) {
            VertexId v = frontier.front();
            frontier.pop_front();
            for (VertexId w : adjacency.at(v))
                if (visited.insert(w).second) frontier.push_back(w);
        }
        if (visited.size() != adjacency.size()) throw GraphError("disconnected graph");
    }
    int dmax = 0;
    for (auto& [v, nbrs] : adjacency) {
        std::sort(nbrs.begin(), nbrs.end());
        dmax = std::max(dmax, static_cast<int>(nbrs.size()));
        g.vertex_list_.push_back(v);
    }
    std::sort(g.vertex_list_.begin(), g.vertex_list_.end());
    g.degree_bound_ = dmax;
    g.adj_ = std::move(adjacency);
    return g;
}

Graph Graph::lazy(NeighborFn neighbors, int degree_bound, std::string name) {
    if (degree_bound <= 0) throw GraphError("degree bound must be positive");
    Graph g;
    g.finite_ = false;
    g.degree_bound_ = degree_bound;
    g.neighbor_fn_ = std::move(neighbors);
    g.name_ = std::move(name);
    return g;
}

std::vector<VertexId> Graph::neighbors(VertexId v) const {
    if (finite_) {
        auto it = adj_.find(v);
        if (it == adj_.end()) throw GraphError("unknown vertex " + std::to_string(v));
        return it->second;
    }
    return neighbor_fn_(v);
}

bool Graph::has_vertex(VertexId v) const {
    return !finite_ || adj_.count(v) > 0;
}

std::size_t Graph::vertex_count() const {
    if (!finite_) throw GraphError("vertex_count on lazy graph");
    return adj_.size();
}

const std::vector<VertexId>& Graph::vertices() const {
    if (!finite_) throw GraphError("vertices() on lazy graph");
    return vertex_list_;
}

std::vector<Edge> Graph::edges() const {
    if (!finite_) throw GraphError("edges() on lazy graph");
    std::vector<Edge> out;
    for (const auto& [v, nbrs] : adj_)
        for (VertexId w : nbrs)
            if (v < w) out.emplace_back(v, w);
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<long> Graph::distance(VertexId u, VertexId v,
                                    std::optional<long> radius_cap) const {
    if (finite_ && (!has_vertex(u) || !has_vertex(v)))
        throw GraphError("distance: unknown vertex");
    if (u == v) return 0;
    // Analytic shortcuts for the lazy generators: BFS balls grow exponentially
    // on trees, and needlessly on lattices.
    if (!finite_ && coord_dim_ > 0 && name_.rfind("lattice", 0) == 0) {
        auto a = lattice_unpack(coord_dim_, u), b = lattice_unpack(coord_dim_, v);
        long d = 0;
        for (int i = 0; i < coord_dim_; ++i) d += std::labs(a[i] - b[i]);
        if (radius_cap && d > *radius_cap) return std::nullopt;
        return d;
    }
    if (!finite_ && name_.rfind("tree:b=", 0) == 0) {
        const long b = std::stol(name_.substr(7));
        // Heap addresses: parent(x) = (x-1)/b. Walk the deeper vertex up to a
        // common depth, then both up to the least common ancestor.
        auto depth = [&](VertexId x) {
            long d = 0;
            for (; x != 0; x = (x - 1) / b) ++d;
            return d;
        };
        VertexId x = u, y = v;
        long dx = depth(x), dy = depth(y), d = 0;
        for (; dx > dy; --dx, ++d) x = (x - 1) / b;
        for (; dy > dx; --dy, ++d) y = (y - 1) / b;
        for (; x != y; x = (x - 1) / b, y = (y - 1) / b) d += 2;
        if (radius_cap && d > *radius_cap) return std::nullopt;
        return d;
    }
    if (!finite_ && !radius_cap)
        throw GraphError("distance on lazy graph requires a radius cap");
    std::deque<std::pair<VertexId, long>> frontier{{u, 0}};
    std::unordered_map<VertexId, long> dist{{u, 0}};
    while (!frontier.empty()) {
        auto [x, d] = frontier.front();
        frontier.pop_front();
        if (radius_cap && d >= *radius_cap) continue;
        for (VertexId w : neighbors(x)) {
            if (dist.count(w)) continue;
            if (w == v) return d + 1;
            dist[w] = d + 1;
            frontier.emplace_back(w, d + 1);
        }
    }
    if (radius_cap) return std::nullopt;  // unreachable within cap
    throw GraphError("distance: vertices not connected");
}

Graph Graph::ball(VertexId center, long radius) const {
    std::deque<std::pair<VertexId, long>> frontier{{center, 0}};
    std::unordered_map<VertexId, long> dist{{center, 0}};
    while (!frontier.empty()) {
        auto [x, d] = frontier.front();
        frontier.pop_front();
        if (d >= radius) continue;
        for (VertexId w : neighbors(x)) {
            if (dist.emplace(w, d + 1).second) frontier.emplace_back(w, d + 1);
        }
    }
    std::unordered_map<VertexId, std::vector<VertexId>> adj;
    for (const auto& [v, d] : dist) {
        auto& nbrs = adj[v];
        for (VertexId w : neighbors(v))
            if (dist.count(w)) nbrs.push_back(w);
    }
    Graph g = finite(std::move(adj));
    g.coord_dim_ = coord_dim_;
    g.name_ = name_ + ":ball";
    return g;
}

namespace {

Graph finite_named(std::unordered_map<VertexId, std::vector<VertexId>> adj,
                   std::string name, int coord_dim = 0) {
    Graph g = Graph::finite(std::move(adj));
    g.set_coord_dim(coord_dim);
    g.set_name(std::move(name));
    return g;
}

}  // namespace

Graph make_path(long n) {
    if (n < 1) throw GraphError("path requires n >= 1");
    std::unordered_map<VertexId, std::vector<VertexId>> adj;
    for (long i = 0; i < n; ++i) {
        auto& nb = adj[i];
        if (i > 0) nb.push_back(i - 1);
        if (i + 1 < n) nb.push_back(i + 1);
    }
    return finite_named(std::move(adj), "path:n=" + std::to_string(n));
}

Graph make_cycle(long n) {
    if (n < 3) throw GraphError("cycle requires n >= 3");
    std::unordered_map<VertexId, std::vector<VertexId>> adj;
    for (long i = 0; i < n; ++i)
        adj[i] = {(i + n - 1) % n, (i + 1) % n};
    return finite_named(std::move(adj), "cycle:n=" + std::to_string(n));
}

Graph make_complete(long n) {
    if (n < 1) throw GraphError("complete graph requires n >= 1");
    std::unordered_map<VertexId, std::vector<VertexId>> adj;
    for (long i = 0; i < n; ++i) {
        auto& nb = adj[i];
        for (long j = 0; j < n; ++j)
            if (j != i) nb.push_back(j);
    }
    return finite_named(std::move(adj), "complete:n=" + std::to_string(n));
}

Graph make_star(long n) {
    if (n < 2) throw GraphError("star requires n >= 2");
    std::unordered_map<VertexId, std::vector<VertexId>> adj;
    adj[0] = {};
    for (long i = 1; i < n; ++i) {
        adj[0].push_back(i);
        adj[i] = {0};
    }
    return finite_named(std::move(adj), "star:n=" + std::to_string(n));
}

Graph make_torus(int dim, long side) {
    if (side < 3) throw GraphError("torus requires side >= 3");
    if (dim < 1 || dim > 3) throw GraphError("torus dimension must be 1..3");
    std::vector<std::vector<long>> points{{}};
    for (int d = 0; d < dim; ++d) {
        std::vector<std::vector<long>> next;
        for (auto& p : points)
            for (long c = 0; c < side; ++c) {
                auto q = p;
                q.push_back(c);
                next.push_back(std::move(q));
            }
        points = std::move(next);
    }
    std::unordered_map<VertexId, std::vector<VertexId>> adj;
    for (auto& p : points) {
        auto& nb = adj[lattice_pack(dim, p)];
        for (int d = 0; d < dim; ++d)
            for (long delta : {-1L, 1L}) {
                auto q = p;
                q[d] = ((q[d] + delta) % side + side) % side;
                VertexId w = lattice_pack(dim, q);
                if (std::find(nb.begin(), nb.end(), w) == nb.end()) nb.push_back(w);
            }
    }
    return finite_named(std::move(adj),
                        "torus:d=" + std::to_string(dim) + ",side=" + std::to_string(side),
                        dim);
}

Graph make_lattice(int dim) {
    if (dim < 1 || dim > 3) throw GraphError("lattice dimension must be 1..3");
    auto fn = [dim](VertexId v) {
        auto c = lattice_unpack(dim, v);
        std::vector<VertexId> nb;
        nb.reserve(2 * dim);
        for (int d = 0; d < dim; ++d)
            for (long delta : {1L, -1L}) {
                auto q = c;
                q[d] += delta;
                nb.push_back(lattice_pack(dim, q));
            }
        return nb;
    };
    Graph g = Graph::lazy(fn, 2 * dim, "lattice:d=" + std::to_string(dim));
    g.set_coord_dim(dim);
    return g;
}

Graph make_regular_tree(int branching) {
    if (branching < 1) throw GraphError("tree branching must be >= 1");
    // Heap-order addresses: root 0; children of v are v*b+1 .. v*b+b.
    const long b = branching;
    auto fn = [b](VertexId v) {
        std::vector<VertexId> nb;
        if (v != 0) nb.push_back((v - 1) / b);
        for (long i = 1; i <= b; ++i) {
            if (v > (std::numeric_limits<VertexId>::max() - i) / b)
                throw GraphError("tree address overflow");
            nb.push_back(v * b + i);
        }
        return nb;
    };
    return Graph::lazy(fn, branching + 1, "tree:b=" + std::to_string(branching));
}

Graph make_random_regular(long n, int degree, std::uint64_t seed) {
    if (n < 2 || degree < 1) throw GraphError("random regular requires n >= 2, d >= 1");
    if ((n * degree) % 2 != 0)
        throw GraphError("random regular: n*d must be even");
    if (degree >= n) throw GraphError("random regular: d must be < n");
    Rng rng(mix(seed, 0x5eedc0defeedULL));
    // Configuration model, retried until simple and connected.
    for (int attempt = 0; attempt < 10000; ++attempt) {
        std::vector<long> stubs;
        stubs.reserve(n * degree);
        for (long v = 0; v < n; ++v)
            for (int k = 0; k < degree; ++k) stubs.push_back(v);
        for (std::size_t i = stubs.size(); i > 1; --i)
            std::swap(stubs[i - 1], stubs[rng.next_below(i)]);
        std::set<std::pair<long, long>> edges;
        bool ok = true;
        for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
            long a = stubs[i], b = stubs[i + 1];
            if (a == b) { ok = false; break; }
            if (!edges.insert({std::min(a, b), std::max(a, b)}).second) { ok = false; break; }
        }
        if (!ok) continue;
        std::unordered_map<VertexId, std::vector<VertexId>> adj;
        for (long v = 0; v < n; ++v) adj[v] = {};
        for (auto& [a, b] : edges) {
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
        try {
            return finite_named(std::move(adj),
                                "random-regular:n=" + std::to_string(n) +
                                    ",d=" + std::to_string(degree));
        } catch (const GraphError&) {
            continue;  // disconnected; resample
        }
    }
    throw GraphError("random regular: sampling failed (parameters too tight?)");
}

Graph load_edge_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GraphError("cannot open edge list: " + path);
    std::unordered_map<VertexId, std::vector<VertexId>> adj;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        VertexId u, v;
        if (!(ls >> u)) continue;
        if (!(ls >> v)) throw GraphError("edge list: dangling vertex on line: " + line);
        if (u == v) throw GraphError("edge list: self-loop " + std::to_string(u));
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    for (auto& [v, nbrs] : adj) {
        std::sort(nbrs.begin(), nbrs.end());
        nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    }
    return finite_named(std::move(adj), "file:" + path);
}

void save_edge_list(const Graph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw GraphError("cannot write edge list: " + path);
    out << "# " << g.name() << "\n";
    for (const Edge& e : g.edges()) out << e.u << " " << e.v << "\n";
}

namespace {

std::unordered_map<std::string, std::string> parse_kv(const std::string& body) {
    std::unordered_map<std::string, std::string> kv;
    std::istringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw GraphError("bad spec token '" + item + "' (expected key=val)");
        kv[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return kv;
}

long kv_long(const std::unordered_map<std::string, std::string>& kv,
             const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw GraphError("missing spec parameter '" + key + "'");
    return std::stol(it->second);
}

}  // namespace

Graph parse_graph_spec(const std::string& spec) {
    auto colon = spec.find(':');
    std::string kind = spec.substr(0, colon);
    auto kv = colon == std::string::npos
                  ? std::unordered_map<std::string, std::string>{}
                  : parse_kv(spec.substr(colon + 1));
    if (kind == "path") return make_path(kv_long(kv, "n"));
    if (kind == "cycle") return make_cycle(kv_long(kv, "n"));
    if (kind == "complete") return make_complete(kv_long(kv, "n"));
    if (kind == "star") return make_star(kv_long(kv, "n"));
    if (kind == "torus") return make_torus(static_cast<int>(kv_long(kv, "d")), kv_long(kv, "side"));
    if (kind == "lattice") return make_lattice(static_cast<int>(kv_long(kv, "d")));
    if (kind == "tree") return make_regular_tree(static_cast<int>(kv_long(kv, "b")));
    if (kind == "random-regular") {
        std::uint64_t seed = kv.count("seed") ? std::stoull(kv.at("seed")) : 1;
        return make_random_regular(kv_long(kv, "n"), static_cast<int>(kv_long(kv, "d")), seed);
    }
    if (kind == "file") {
        auto it = kv.find("path");
        if (it == kv.end()) throw GraphError("file graph spec needs path=...");
        return load_edge_list(it->second);
    }
    throw GraphError("unknown graph kind '" + kind + "'");
}

VertexId parse_vertex_label(const Graph& g, const std::string& label) {
    if (g.coord_dim() > 0) {
        std::vector<long> coords;
        std::istringstream ss(label);
        std::string tok;
        while (std::getline(ss, tok, ',')) coords.push_back(std::stol(tok));
        return lattice_pack(g.coord_dim(), coords);
    }
    return std::stoll(label);
}

std::string format_vertex_label(const Graph& g, VertexId v) {
    if (g.coord_dim() > 0) {
        auto c = lattice_unpack(g.coord_dim(), v);
        std::string out;
        for (std::size_t i = 0; i < c.size(); ++i)
            out += (i ? "," : "") + std::to_string(c[i]);
        return out;
    }
    return std::to_string(v);
}

}  // namespace avgproc
