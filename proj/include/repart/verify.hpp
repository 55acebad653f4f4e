#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "repart/config.hpp"

namespace repart {

inline constexpr int kMaxVerifyK = 5;

struct CheckResult {
    std::string tag;      // property family, e.g. "determinant-bound"
    std::string subject;  // what was checked, e.g. "k=3 pseudo=(0,1,1)"
    bool passed = true;
    std::string witness;  // first counterexample when failed
};

struct VerifyLevel {
    int k = 0;
    std::size_t configurations = 0;
    std::size_t pseudo_configurations = 0;
    Int max_g_norm1 = 0;
    Int max_delta = 0;
    std::int64_t decompositions = 0;
    std::int64_t remap_states = 0;  // feasible states compared across solvers
};

struct VerifyReport {
    int k_max = 0;
    std::vector<VerifyLevel> levels;
    std::vector<CheckResult> checks;

    bool passed() const;
    std::vector<CheckResult> failures() const;
};

struct VerifyOptions {
    int decompositions_per_pseudo = 500;
    int exhaustive_max_k = 3;
    int exhaustive_max_l = 5;
    int sampled_states_per_k = 200;
    int sampled_max_l = 6;
    std::uint64_t seed = 1;
};

/// Certifies the structural properties for every k <= k_max and every pseudo
/// configuration. Throws ResourceLimitError for k_max > kMaxVerifyK and
/// InputError for k_max < 1.
VerifyReport verify_suite(int k_max, const VerifyOptions& opts = {});

nlohmann::ordered_json verify_to_json(const VerifyReport& r);

/// Independent count of partitions of n into parts of size at most m.
std::int64_t count_partitions(int n, int m);

nlohmann::ordered_json configs_report(int k);

/// Parses "c1,...,ck". Throws InputError unless there are exactly k
/// nonnegative entries with nd = 2k.
Configuration parse_pseudo(int k, const std::string& text);

/// Graver basis, bound certificate and decomposition data for one matrix.
nlohmann::ordered_json graver_report(int k, const Configuration& pseudo);

} // namespace repart
