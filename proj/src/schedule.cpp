#include "avgproc/schedule.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <queue>
#include <sstream>

#include "avgproc/rng.hpp"

namespace avgproc {

MuLaw MuLaw::fixed(double mu) {
    if (!(mu > 0.0 && mu <= 0.5))
        throw ScheduleError("mu must lie in (0, 1/2]");
    MuLaw law;
    law.kind = Kind::Fixed;
    law.a = law.b = mu;
    return law;
}

MuLaw MuLaw::uniform(double a, double b) {
    if (!(a >= 0.0 && a < b && b <= 0.5))
        throw ScheduleError("uniform mu law requires 0 <= a < b <= 1/2");
    MuLaw law;
    law.kind = Kind::Uniform;
    law.a = a;
    law.b = b;
    return law;
}

MuLaw MuLaw::parse(const std::string& spec) {
    if (spec == "half") return half();
    auto colon = spec.find(':');
    std::string kind = spec.substr(0, colon);
    std::string body = colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (kind == "fixed") return fixed(std::stod(body));
    if (kind == "uniform") {
        auto comma = body.find(',');
        if (comma == std::string::npos)
            throw ScheduleError("uniform mu law needs two bounds: uniform:a,b");
        return uniform(std::stod(body.substr(0, comma)), std::stod(body.substr(comma + 1)));
    }
    throw ScheduleError("unknown mu law '" + spec + "'");
}

std::string MuLaw::to_string() const {
    std::ostringstream out;
    if (kind == Kind::Fixed)
        out << "fixed:" << a;
    else
        out << "uniform:" << a << "," << b;
    return out.str();
}

namespace {

double draw_mu(const MuLaw& law, Rng& rng) {
    if (law.kind == MuLaw::Kind::Fixed) return law.a;
    return law.a + (law.b - law.a) * rng.next_unit();  // support (a, b]
}

constexpr std::uint64_t kEdgeStreamTag = 0xed6e57d3a7ULL;

}  // namespace

std::vector<std::pair<double, double>> edge_events(const Edge& e, const ClockConfig& cfg,
                                                   double horizon) {
    if (cfg.intensity <= 0.0) throw ScheduleError("intensity must be positive");
    if (horizon < 0.0) throw ScheduleError("horizon must be nonnegative");
    Rng rng(mix3(cfg.seed, edge_key(e), kEdgeStreamTag));
    std::vector<std::pair<double, double>> events;
    double t = 0.0;
    for (;;) {
        t += rng.next_exponential(cfg.intensity);
        if (t > horizon) break;
        events.emplace_back(t, draw_mu(cfg.mu_law, rng));
    }
    return events;
}

UpdateSequence sample_finite(const Graph& g, const ClockConfig& cfg, double horizon) {
    if (!g.is_finite()) throw ScheduleError("sample_finite requires a finite graph");
    UpdateSequence seq;
    seq.horizon = horizon;
    seq.rng_seed = cfg.seed;
    seq.intensity = cfg.intensity;
    for (const Edge& e : g.edges())
        for (auto [t, mu] : edge_events(e, cfg, horizon))
            seq.steps.push_back({e, mu, t});
    std::sort(seq.steps.begin(), seq.steps.end(), [](const UpdateStep& a, const UpdateStep& b) {
        if (a.time != b.time) return a.time < b.time;
        return a.edge < b.edge;
    });
    for (std::size_t i = 1; i < seq.steps.size(); ++i)
        if (seq.steps[i].time == seq.steps[i - 1].time) ++seq.tie_count;
    return seq;
}

std::size_t default_region_cap() {
    if (const char* env = std::getenv("AVGPROC_REGION_CAP")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return 10'000'000;
}

namespace {

// Shared machinery for the two exploration directions. `reverse_time` = true
// explores who can influence root (thresholds start at horizon and decrease
// along a chain); false explores whom root can influence (start at 0,
// increase).
std::pair<ExploredRegion, UpdateSequence> explore_impl(const Graph& g, VertexId root,
                                                       const ClockConfig& cfg, double horizon,
                                                       std::size_t cap, bool reverse_time) {
    if (horizon < 0.0) throw ScheduleError("horizon must be nonnegative");
    if (!g.has_vertex(root)) throw ScheduleError("explore: unknown root vertex");
    if (cap == 0) cap = default_region_cap();

    std::unordered_map<Edge, std::vector<std::pair<double, double>>> event_cache;
    auto events_of = [&](const Edge& e) -> const std::vector<std::pair<double, double>>& {
        auto it = event_cache.find(e);
        if (it == event_cache.end())
            it = event_cache.emplace(e, edge_events(e, cfg, horizon)).first;
        return it->second;
    };

    // threshold[v]: latest (reverse) / earliest (forward) time at which v's
    // value matters for / is reached by root.
    std::unordered_map<VertexId, double> threshold;
    using QEntry = std::pair<double, VertexId>;
    auto better = [reverse_time](double a, double b) { return reverse_time ? a > b : a < b; };
    std::priority_queue<QEntry> queue;  // max-heap on first component
    auto push = [&](VertexId v, double thr) {
        queue.emplace(reverse_time ? thr : -thr, v);
    };
    threshold[root] = reverse_time ? horizon : 0.0;
    push(root, threshold[root]);

    while (!queue.empty()) {
        auto [prio, u] = queue.top();
        queue.pop();
        double thr_u = reverse_time ? prio : -prio;
        auto known = threshold.find(u);
        if (known == threshold.end() || better(known->second, thr_u)) continue;  // stale
        for (VertexId w : g.neighbors(u)) {
            const auto& ev = events_of(Edge(u, w));
            // Reverse: latest event time <= thr_u. Forward: earliest >= thr_u.
            double candidate;
            bool found = false;
            if (reverse_time) {
                for (auto it = ev.rbegin(); it != ev.rend(); ++it)
                    if (it->first <= thr_u) { candidate = it->first; found = true; break; }
            } else {
                for (const auto& [t, mu] : ev)
                    if (t >= thr_u) { candidate = t; found = true; break; }
            }
            if (!found) continue;
            auto it = threshold.find(w);
            if (it == threshold.end() || better(candidate, it->second)) {
                threshold[w] = candidate;
                if (threshold.size() > cap)
                    throw RegionCapExceeded("explored region exceeds safety cap of " +
                                            std::to_string(cap) + " vertices");
                push(w, candidate);
            }
        }
    }

    ExploredRegion region;
    region.root = root;
    region.horizon = horizon;
    for (const auto& [v, thr] : threshold) {
        region.vertices.insert(v);
        region.passage_times[v] = reverse_time ? horizon - thr : thr;
    }

    // All events on edges internal to the region, chronologically.
    UpdateSequence seq;
    seq.horizon = horizon;
    seq.rng_seed = cfg.seed;
    seq.intensity = cfg.intensity;
    for (VertexId v : region.vertices)
        for (VertexId w : g.neighbors(v)) {
            if (!(v < w) || !region.vertices.count(w)) continue;
            Edge e(v, w);
            for (auto [t, mu] : events_of(e)) seq.steps.push_back({e, mu, t});
        }
    std::sort(seq.steps.begin(), seq.steps.end(), [](const UpdateStep& a, const UpdateStep& b) {
        if (a.time != b.time) return a.time < b.time;
        return a.edge < b.edge;
    });
    for (std::size_t i = 1; i < seq.steps.size(); ++i)
        if (seq.steps[i].time == seq.steps[i - 1].time) ++seq.tie_count;
    return {std::move(region), std::move(seq)};
}

}  // namespace

std::pair<ExploredRegion, UpdateSequence> explore_region(const Graph& g, VertexId root,
                                                         const ClockConfig& cfg, double horizon,
                                                         std::size_t cap) {
    return explore_impl(g, root, cfg, horizon, cap, /*reverse_time=*/true);
}

std::pair<ExploredRegion, UpdateSequence> explore_spread(const Graph& g, VertexId root,
                                                         const ClockConfig& cfg, double horizon,
                                                         std::size_t cap) {
    return explore_impl(g, root, cfg, horizon, cap, /*reverse_time=*/false);
}

UpdateSequence reverse(const UpdateSequence& seq) {
    UpdateSequence rev;
    rev.horizon = seq.horizon;
    rev.rng_seed = seq.rng_seed;
    rev.intensity = seq.intensity;
    rev.tie_count = seq.tie_count;
    rev.steps.reserve(seq.steps.size());
    for (auto it = seq.steps.rbegin(); it != seq.steps.rend(); ++it)
        rev.steps.push_back({it->edge, it->mu, seq.horizon - it->time});
    return rev;
}

void save_trace(const UpdateSequence& seq, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ScheduleError("cannot write trace: " + path);
    out.precision(17);
    out << "time,edge_u,edge_v,mu\n";
    for (const auto& s : seq.steps)
        out << s.time << "," << s.edge.u << "," << s.edge.v << "," << s.mu << "\n";
}

UpdateSequence load_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScheduleError("cannot open trace: " + path);
    UpdateSequence seq;
    std::string line;
    if (!std::getline(in, line) || line.rfind("time,", 0) != 0)
        throw ScheduleError("trace missing header: " + path);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string tok;
        double fields[4];
        for (int i = 0; i < 4; ++i) {
            if (!std::getline(ls, tok, ','))
                throw ScheduleError("malformed trace line: " + line);
            fields[i] = std::stod(tok);
        }
        seq.steps.push_back({Edge(static_cast<VertexId>(fields[1]), static_cast<VertexId>(fields[2])),
                             fields[3], fields[0]});
        seq.horizon = std::max(seq.horizon, fields[0]);
    }
    return seq;
}

}  // namespace avgproc
