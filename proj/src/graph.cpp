#include "acng/graph.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

namespace acng {

uint32_t ProximityGraph::observed_max_degree() const {
    size_t m = 0;
    for (const auto& nb : adjacency) m = std::max(m, nb.size());
    return static_cast<uint32_t>(m);
}

uint64_t ProximityGraph::edge_count() const {
    uint64_t e = 0;
    for (const auto& nb : adjacency) e += nb.size();
    return e;
}

std::vector<uint8_t> ProximityGraph::reachable_from(uint32_t start) const {
    std::vector<uint8_t> seen(size(), 0);
    if (start >= size()) return seen;
    std::vector<uint32_t> stack{start};
    seen[start] = 1;
    while (!stack.empty()) {
        uint32_t u = stack.back();
        stack.pop_back();
        for (uint32_t v : adjacency[u]) {
            if (!seen[v]) {
                seen[v] = 1;
                stack.push_back(v);
            }
        }
    }
    return seen;
}

namespace {

constexpr char kMagic[4] = {'A', 'C', 'N', 'G'};
constexpr uint32_t kVersion = 1;

template <typename T>
void write_le(std::ofstream& out, T v) {
    // x86 is little-endian; raw write matches the format
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <typename T>
T read_le(std::ifstream& in, const std::string& path) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!in) throw DataError(path + ": truncated graph file");
    return v;
}

}  // namespace

void save_graph(const ProximityGraph& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path);
    out.write(kMagic, 4);
    write_le(out, kVersion);
    write_le(out, static_cast<uint64_t>(g.size()));
    write_le(out, g.max_degree);
    write_le(out, static_cast<uint64_t>(g.entry_point));
    for (const auto& nb : g.adjacency) {
        write_le(out, static_cast<uint32_t>(nb.size()));
        out.write(reinterpret_cast<const char*>(nb.data()),
                  static_cast<std::streamsize>(nb.size()) * 4);
    }
    if (!out) throw DataError("write failed: " + path);
}

ProximityGraph load_graph(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw DataError(path + ": bad magic, not an ACNG graph file");
    uint32_t version = read_le<uint32_t>(in, path);
    if (version != kVersion)
        throw DataError(path + ": unsupported format version " +
                        std::to_string(version));
    uint64_t n = read_le<uint64_t>(in, path);
    ProximityGraph g;
    g.max_degree = read_le<uint32_t>(in, path);
    uint64_t entry = read_le<uint64_t>(in, path);
    if (entry >= n) throw DataError(path + ": entry point out of range");
    g.entry_point = static_cast<uint32_t>(entry);
    g.adjacency.resize(n);
    for (uint64_t v = 0; v < n; ++v) {
        uint32_t deg = read_le<uint32_t>(in, path);
        if (deg > n) throw DataError(path + ": degree out of range");
        g.adjacency[v].resize(deg);
        in.read(reinterpret_cast<char*>(g.adjacency[v].data()),
                static_cast<std::streamsize>(deg) * 4);
        if (!in) throw DataError(path + ": truncated adjacency");
        for (uint32_t id : g.adjacency[v]) {
            if (id >= n) throw DataError(path + ": neighbor id out of range");
            if (id == v) throw DataError(path + ": self-loop at vertex " +
                                         std::to_string(v));
        }
    }
    return g;
}

}  // namespace acng
