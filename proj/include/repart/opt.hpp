#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "repart/model.hpp"

namespace repart {

inline constexpr int kMaxOptNodes = 9;

/// Every valid labeled mapping of the instance, in lexicographic order of
/// the assignment vector. Throws ResourceLimitError for n > kMaxOptNodes.
std::vector<Mapping> enumerate_valid_mappings(const Instance& inst);

/// Optimal offline cost (communication plus migration). Migration happens
/// right before each request. Throws ResourceLimitError for n > kMaxOptNodes.
Int opt_cost(const Instance& inst, const Mapping& initial, std::span<const Request> requests);

/// Half-open range of request indices.
struct RequestRange {
    std::int64_t first = 0;
    std::int64_t end = 0;
};

/// Per range: true iff every valid mapping separates the endpoints of at
/// least one request in the range, so any offline solution pays there.
std::vector<bool> opt_per_phase_lower_bound(const Instance& inst, std::span<const Request> requests,
                                            std::span<const RequestRange> phases);

} // namespace repart
