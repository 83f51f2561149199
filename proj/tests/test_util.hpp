#pragma once

#include <random>
#include <vector>

#include "acng/common.hpp"
#include "acng/dataset.hpp"

namespace testutil {

inline acng::Dataset random_dataset(uint32_t n, uint32_t dim, uint64_t seed,
                                    float lo = 0.0f, float hi = 1.0f) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<float> u(lo, hi);
    std::vector<float> data(static_cast<size_t>(n) * dim);
    for (auto& x : data) x = u(rng);
    return acng::Dataset(dim, std::move(data));
}

// All points except p, paired with their distance to p.
inline std::vector<acng::Candidate> all_candidates(const acng::Dataset& data,
                                                   uint32_t p) {
    std::vector<acng::Candidate> out;
    out.reserve(data.size() - 1);
    for (uint32_t u = 0; u < data.size(); ++u)
        if (u != p) out.push_back({u, acng::distance(data, p, u)});
    return out;
}

inline std::vector<acng::Candidate> id_candidates(
    const acng::Dataset& data, uint32_t p, const std::vector<uint32_t>& ids) {
    std::vector<acng::Candidate> out;
    out.reserve(ids.size());
    for (uint32_t u : ids) out.push_back({u, acng::distance(data, p, u)});
    return out;
}

inline std::vector<uint32_t> ids_of(const std::vector<acng::Candidate>& cs) {
    std::vector<uint32_t> out;
    out.reserve(cs.size());
    for (const auto& c : cs) out.push_back(c.id);
    return out;
}

}  // namespace testutil
