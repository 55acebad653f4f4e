#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace repart {

using Int = std::int64_t;
using IntVec = std::vector<Int>;

// Overflow-checked arithmetic; throws InvariantError on wraparound.
Int checked_add(Int a, Int b);
Int checked_mul(Int a, Int b);

Int norm1(std::span<const Int> v);
Int norm_inf(std::span<const Int> v);
bool is_zero(std::span<const Int> v);
bool is_nonnegative(std::span<const Int> v);

IntVec negated(std::span<const Int> v);
IntVec added(std::span<const Int> a, std::span<const Int> b);
IntVec subtracted(std::span<const Int> a, std::span<const Int> b);

// Compares from the last coordinate towards the first (colexicographic).
// This is the tie-break order used for target vectors.
bool colex_less(std::span<const Int> a, std::span<const Int> b);

// "(1,2,0)"
std::string to_string(std::span<const Int> v);

} // namespace repart
