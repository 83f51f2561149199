#include "acng/search.hpp"

#include <algorithm>

namespace acng {

void SearchParams::validate(const ProximityGraph& g) const {
    if (k < 1) throw UsageError("beam search requires k >= 1");
    if (L < k) throw UsageError("beam search requires L >= k");
    uint32_t e = entry.value_or(g.entry_point);
    if (e >= g.size())
        throw UsageError("beam search entry point out of range");
}

namespace {

struct QueueEntry {
    Candidate c;
    bool explored = false;
};

// Beam search core. Queue is a sorted array of at most L entries keyed by
// (distance, id); entries before `cursor` are all explored, so the entry
// at `cursor` (after skipping explored ones) is the closest unexplored.
std::vector<Candidate> beam_core(const ProximityGraph& graph,
                                 const Dataset& data,
                                 std::span<const float> query,
                                 uint32_t entry, uint32_t L, uint32_t k,
                                 SearchStats* stats,
                                 std::vector<Candidate>* touched,
                                 std::vector<uint32_t>* hop_path) {
    std::vector<uint8_t> visited(data.size(), 0);
    std::vector<QueueEntry> queue;
    queue.reserve(L + 1);
    size_t cursor = 0;

    SearchStats st;
    auto visit = [&](uint32_t v) {
        visited[v] = 1;
        double d = l2_distance(query, data.row(v));
        ++st.ndc;
        ++st.visited;
        if (touched) touched->push_back({v, d});
        return Candidate{v, d};
    };
    auto insert = [&](const Candidate& c) {
        if (queue.size() == L && !(c < queue.back().c)) return;
        auto pos = std::upper_bound(
            queue.begin(), queue.end(), c,
            [](const Candidate& a, const QueueEntry& b) { return a < b.c; });
        size_t at = static_cast<size_t>(pos - queue.begin());
        queue.insert(pos, {c, false});
        if (queue.size() > L) queue.pop_back();
        if (at < cursor) cursor = at;
    };

    insert(visit(entry));

    while (true) {
        while (cursor < queue.size() && queue[cursor].explored) ++cursor;
        if (cursor == queue.size()) break;

        queue[cursor].explored = true;
        ++st.hops;
        uint32_t u = queue[cursor].c.id;
        if (hop_path) hop_path->push_back(u);

        for (uint32_t v : graph.neighbors(u)) {
            if (visited[v]) continue;
            insert(visit(v));
        }
    }

    if (stats) *stats = st;
    std::vector<Candidate> out;
    out.reserve(std::min<size_t>(k, queue.size()));
    for (size_t i = 0; i < queue.size() && i < k; ++i)
        out.push_back(queue[i].c);
    return out;
}

}  // namespace

std::vector<Candidate> beam_search(const ProximityGraph& graph,
                                   const Dataset& data,
                                   std::span<const float> query,
                                   const SearchParams& params,
                                   SearchStats* stats,
                                   std::vector<Candidate>* touched) {
    if (query.size() != data.dim())
        throw UsageError("beam search: query dimension mismatch");
    params.validate(graph);
    return beam_core(graph, data, query,
                     params.entry.value_or(graph.entry_point), params.L,
                     params.k, stats, touched, nullptr);
}

GreedyRoute greedy_route(const ProximityGraph& graph, const Dataset& data,
                         std::span<const float> query,
                         std::optional<uint32_t> entry) {
    if (query.size() != data.dim())
        throw UsageError("greedy route: query dimension mismatch");
    SearchParams p{1, 1, entry};
    p.validate(graph);
    GreedyRoute route;
    auto res = beam_core(graph, data, query,
                         entry.value_or(graph.entry_point), 1, 1,
                         &route.stats, nullptr, &route.path);
    route.terminal = res.front().id;
    return route;
}

}  // namespace acng
