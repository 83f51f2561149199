#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "acng/common.hpp"

namespace acng {

struct Metric {
    enum class Kind { EuclideanL2 };
    Kind kind = Kind::EuclideanL2;
};

// Dense row-major float32 vector store. Ids are 0..n-1 and stable.
// Components must be finite; this is checked on construction.
class Dataset {
public:
    Dataset() = default;
    Dataset(uint32_t dim, std::vector<float> data);

    uint32_t dim() const { return dim_; }
    uint32_t size() const { return n_; }

    std::span<const float> row(uint32_t id) const {
        return {data_.data() + static_cast<size_t>(id) * dim_, dim_};
    }
    const float* raw() const { return data_.data(); }

    // Component-wise mean, accumulated in double then narrowed.
    std::vector<float> centroid() const;

private:
    uint32_t dim_ = 0;
    uint32_t n_ = 0;
    std::vector<float> data_;
};

// L2 distance with 64-bit accumulation. Unchecked hot path.
double l2_distance(const float* a, const float* b, size_t dim);

inline double l2_distance(std::span<const float> a, std::span<const float> b) {
    return l2_distance(a.data(), b.data(), a.size());
}

// Checked variant: throws UsageError on dimension mismatch.
double distance(std::span<const float> a, std::span<const float> b,
                Metric metric = {});

inline double distance(const Dataset& data, uint32_t a, uint32_t b) {
    return l2_distance(data.row(a), data.row(b));
}

struct DatasetStats {
    double diameter = 0.0;
    double min_dist = 0.0;
    double aspect_ratio = 0.0;
};

// Exact brute-force diameter / minimum pairwise distance over all pairs.
// Throws DataError naming the offending pair if two distinct ids coincide.
DatasetStats compute_stats(const Dataset& data, Metric metric = {},
                           int threads = 0);

// Returns the lexicographically smallest pair of ids with zero distance,
// or nullopt if the dataset is duplicate-free.
std::optional<std::pair<uint32_t, uint32_t>> find_duplicate_pair(
    const Dataset& data);

enum class DuplicatePolicy { Reject, Allow };

// fvecs: repeated [int32 dim][dim x float32], little-endian, one dim for
// all records. Errors carry the byte offset of the malformed record.
Dataset load_fvecs(const std::string& path,
                   DuplicatePolicy policy = DuplicatePolicy::Reject);
void save_fvecs(const Dataset& data, const std::string& path);

// ivecs: same layout with int32 payload.
std::vector<std::vector<int32_t>> load_ivecs(const std::string& path);
void save_ivecs(const std::vector<std::vector<int32_t>>& rows,
                const std::string& path);

}  // namespace acng
