#include "repart/intvec.hpp"

#include <algorithm>
#include <cstdlib>

#include "repart/errors.hpp"

namespace repart {

Int checked_add(Int a, Int b) {
    Int r;
    if (__builtin_add_overflow(a, b, &r))
        throw InvariantError("integer overflow in addition");
    return r;
}

Int checked_mul(Int a, Int b) {
    Int r;
    if (__builtin_mul_overflow(a, b, &r))
        throw InvariantError("integer overflow in multiplication");
    return r;
}

Int norm1(std::span<const Int> v) {
    Int s = 0;
    for (Int x : v)
        s = checked_add(s, x < 0 ? -x : x);
    return s;
}

Int norm_inf(std::span<const Int> v) {
    Int m = 0;
    for (Int x : v)
        m = std::max(m, x < 0 ? -x : x);
    return m;
}

bool is_zero(std::span<const Int> v) {
    return std::all_of(v.begin(), v.end(), [](Int x) { return x == 0; });
}

bool is_nonnegative(std::span<const Int> v) {
    return std::all_of(v.begin(), v.end(), [](Int x) { return x >= 0; });
}

IntVec negated(std::span<const Int> v) {
    IntVec r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        r[i] = -v[i];
    return r;
}

IntVec added(std::span<const Int> a, std::span<const Int> b) {
    IntVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = checked_add(a[i], b[i]);
    return r;
}

IntVec subtracted(std::span<const Int> a, std::span<const Int> b) {
    IntVec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        r[i] = checked_add(a[i], -b[i]);
    return r;
}

bool colex_less(std::span<const Int> a, std::span<const Int> b) {
    return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
}

std::string to_string(std::span<const Int> v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i)
            s += ',';
        s += std::to_string(v[i]);
    }
    return s + ")";
}

} // namespace repart
