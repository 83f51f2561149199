#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace acng {

// Invalid parameters or misuse of an API contract.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Malformed or inconsistent input data (files, duplicate points, ...).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A build step could not complete (e.g. an unrepairable vertex).
struct ConstructionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Candidate neighbor: vertex id plus its distance to the owning point.
// Ordered by (distance, id) so ties always resolve to the lower id.
struct Candidate {
    uint32_t id;
    double dist;

    friend bool operator<(const Candidate& a, const Candidate& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        return a.id < b.id;
    }
    friend bool operator==(const Candidate& a, const Candidate& b) {
        return a.id == b.id && a.dist == b.dist;
    }
};

// threads == 0 means "use all available cores".
int resolve_threads(int threads);

}  // namespace acng
