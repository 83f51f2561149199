#include "acng/dataset.hpp"

#include <omp.h>

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <unordered_map>

namespace acng {

int resolve_threads(int threads) {
    if (threads > 0) return threads;
    return omp_get_max_threads();
}

Dataset::Dataset(uint32_t dim, std::vector<float> data)
    : dim_(dim), data_(std::move(data)) {
    if (dim_ == 0) throw UsageError("dataset dim must be positive");
    if (data_.empty() || data_.size() % dim_ != 0)
        throw UsageError("dataset size is not a multiple of dim");
    n_ = static_cast<uint32_t>(data_.size() / dim_);
    for (size_t i = 0; i < data_.size(); ++i) {
        if (!std::isfinite(data_[i]))
            throw DataError("non-finite component in vector " +
                            std::to_string(i / dim_));
    }
}

std::vector<float> Dataset::centroid() const {
    std::vector<double> acc(dim_, 0.0);
    for (uint32_t i = 0; i < n_; ++i) {
        const float* r = data_.data() + static_cast<size_t>(i) * dim_;
        for (uint32_t d = 0; d < dim_; ++d) acc[d] += r[d];
    }
    std::vector<float> out(dim_);
    for (uint32_t d = 0; d < dim_; ++d)
        out[d] = static_cast<float>(acc[d] / n_);
    return out;
}

// Eight independent double lanes, combined in a fixed order. Keeps the
// accumulation order pinned so results do not depend on thread count or
// call site while still vectorizing.
double l2_distance(const float* a, const float* b, size_t dim) {
    double acc[8] = {};
    size_t i = 0;
    for (; i + 8 <= dim; i += 8) {
        for (size_t l = 0; l < 8; ++l) {
            double d = static_cast<double>(a[i + l]) - static_cast<double>(b[i + l]);
            acc[l] += d * d;
        }
    }
    for (; i < dim; ++i) {
        double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        acc[i % 8] += d * d;
    }
    double s = ((acc[0] + acc[1]) + (acc[2] + acc[3])) +
               ((acc[4] + acc[5]) + (acc[6] + acc[7]));
    return std::sqrt(s);
}

double distance(std::span<const float> a, std::span<const float> b,
                Metric metric) {
    (void)metric;  // only EuclideanL2 for now
    if (a.size() != b.size())
        throw UsageError("distance: dimension mismatch (" +
                         std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()) + ")");
    return l2_distance(a.data(), b.data(), a.size());
}

DatasetStats compute_stats(const Dataset& data, Metric metric, int threads) {
    (void)metric;
    const uint32_t n = data.size();
    if (n < 2) throw UsageError("compute_stats requires n >= 2");

    double diameter = 0.0;
    double min_dist = std::numeric_limits<double>::infinity();
    uint32_t dup_i = n, dup_j = n;

#pragma omp parallel num_threads(resolve_threads(threads))
    {
        double dia = 0.0, mind = std::numeric_limits<double>::infinity();
        uint32_t di = n, dj = n;
#pragma omp for schedule(dynamic, 16)
        for (uint32_t i = 0; i < n; ++i) {
            for (uint32_t j = i + 1; j < n; ++j) {
                double d = distance(data, i, j);
                if (d > dia) dia = d;
                if (d < mind) mind = d;
                if (d == 0.0 && (i < di || (i == di && j < dj))) {
                    di = i;
                    dj = j;
                }
            }
        }
#pragma omp critical
        {
            if (dia > diameter) diameter = dia;
            if (mind < min_dist) min_dist = mind;
            if (di < dup_i || (di == dup_i && dj < dup_j)) {
                dup_i = di;
                dup_j = dj;
            }
        }
    }

    if (dup_i < n)
        throw DataError("duplicate points: ids " + std::to_string(dup_i) +
                        " and " + std::to_string(dup_j) +
                        " are at distance 0");
    return {diameter, min_dist, diameter / min_dist};
}

namespace {

// -0.0f and +0.0f compare equal but differ bitwise; canonicalize so the
// hash agrees with float equality.
uint32_t canonical_bits(float x) {
    if (x == 0.0f) x = 0.0f;
    uint32_t u;
    std::memcpy(&u, &x, sizeof(u));
    return u;
}

uint64_t row_hash(const float* r, uint32_t dim) {
    uint64_t h = 1469598103934665603ull;  // FNV-1a
    for (uint32_t d = 0; d < dim; ++d) {
        uint32_t u = canonical_bits(r[d]);
        for (int b = 0; b < 4; ++b) {
            h ^= (u >> (8 * b)) & 0xff;
            h *= 1099511628211ull;
        }
    }
    return h;
}

bool rows_equal(const float* a, const float* b, uint32_t dim) {
    for (uint32_t d = 0; d < dim; ++d)
        if (a[d] != b[d]) return false;
    return true;
}

}  // namespace

std::optional<std::pair<uint32_t, uint32_t>> find_duplicate_pair(
    const Dataset& data) {
    std::unordered_map<uint64_t, std::vector<uint32_t>> buckets;
    buckets.reserve(data.size());
    std::optional<std::pair<uint32_t, uint32_t>> best;
    for (uint32_t i = 0; i < data.size(); ++i) {
        const float* r = data.row(i).data();
        auto& bucket = buckets[row_hash(r, data.dim())];
        for (uint32_t j : bucket) {
            if (rows_equal(data.row(j).data(), r, data.dim())) {
                if (!best || std::make_pair(j, i) < *best)
                    best = std::make_pair(j, i);
                break;
            }
        }
        bucket.push_back(i);
    }
    return best;
}

namespace {

void require(bool cond, const std::string& msg, std::streamoff offset) {
    if (!cond)
        throw DataError(msg + " at byte offset " + std::to_string(offset));
}

}  // namespace

Dataset load_fvecs(const std::string& path, DuplicatePolicy policy) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    in.seekg(0, std::ios::end);
    std::streamoff fsize = in.tellg();
    in.seekg(0, std::ios::beg);
    require(fsize > 0, path + ": empty file", 0);

    uint32_t dim = 0;
    std::vector<float> data;
    std::streamoff pos = 0;
    while (pos < fsize) {
        int32_t d = 0;
        require(pos + 4 <= fsize, path + ": truncated record header", pos);
        in.read(reinterpret_cast<char*>(&d), 4);
        require(d > 0, path + ": non-positive dim " + std::to_string(d), pos);
        if (dim == 0)
            dim = static_cast<uint32_t>(d);
        else
            require(static_cast<uint32_t>(d) == dim,
                    path + ": inconsistent dim " + std::to_string(d), pos);
        pos += 4;
        require(pos + static_cast<std::streamoff>(dim) * 4 <= fsize,
                path + ": truncated vector payload", pos);
        size_t old = data.size();
        data.resize(old + dim);
        in.read(reinterpret_cast<char*>(data.data() + old),
                static_cast<std::streamsize>(dim) * 4);
        pos += static_cast<std::streamoff>(dim) * 4;
    }

    Dataset ds(dim, std::move(data));
    if (policy == DuplicatePolicy::Reject) {
        if (auto dup = find_duplicate_pair(ds))
            throw DataError(path + ": duplicate points, ids " +
                            std::to_string(dup->first) + " and " +
                            std::to_string(dup->second));
    }
    return ds;
}

void save_fvecs(const Dataset& data, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path);
    int32_t d = static_cast<int32_t>(data.dim());
    for (uint32_t i = 0; i < data.size(); ++i) {
        out.write(reinterpret_cast<const char*>(&d), 4);
        out.write(reinterpret_cast<const char*>(data.row(i).data()),
                  static_cast<std::streamsize>(data.dim()) * 4);
    }
}

std::vector<std::vector<int32_t>> load_ivecs(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    in.seekg(0, std::ios::end);
    std::streamoff fsize = in.tellg();
    in.seekg(0, std::ios::beg);

    std::vector<std::vector<int32_t>> rows;
    std::streamoff pos = 0;
    uint32_t dim = 0;
    while (pos < fsize) {
        int32_t d = 0;
        require(pos + 4 <= fsize, path + ": truncated record header", pos);
        in.read(reinterpret_cast<char*>(&d), 4);
        require(d > 0, path + ": non-positive dim " + std::to_string(d), pos);
        if (dim == 0)
            dim = static_cast<uint32_t>(d);
        else
            require(static_cast<uint32_t>(d) == dim,
                    path + ": inconsistent dim " + std::to_string(d), pos);
        pos += 4;
        require(pos + static_cast<std::streamoff>(dim) * 4 <= fsize,
                path + ": truncated vector payload", pos);
        rows.emplace_back(dim);
        in.read(reinterpret_cast<char*>(rows.back().data()),
                static_cast<std::streamsize>(dim) * 4);
        pos += static_cast<std::streamoff>(dim) * 4;
    }
    return rows;
}

void save_ivecs(const std::vector<std::vector<int32_t>>& rows,
                const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + path);
    for (const auto& row : rows) {
        int32_t d = static_cast<int32_t>(row.size());
        out.write(reinterpret_cast<const char*>(&d), 4);
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size()) * 4);
    }
}

}  // namespace acng
