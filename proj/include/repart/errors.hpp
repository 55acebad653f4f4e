#pragma once

#include <stdexcept>
#include <string>

namespace repart {

// Malformed input: bad ids, unknown generator kinds, invalid workload files.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

// A configured guard (k, n, search budget, state count) was exceeded.
class ResourceLimitError : public std::runtime_error {
public:
    explicit ResourceLimitError(const std::string& what) : std::runtime_error(what) {}
};

// An internal invariant broke, or a verification check failed.
class InvariantError : public std::runtime_error {
public:
    explicit InvariantError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace repart
