#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "repart/intvec.hpp"

namespace repart {

/// A configuration counts components by size: entry i-1 is the number of
/// components of size i.
using Configuration = IntVec;

/// Weighted size sum: sum over i of i * c[i-1].
Int nd(std::span<const Int> c);

/// Counts a multiset of component sizes into a length-k configuration.
/// Throws InputError if a size is outside [1, k].
Configuration configuration_from_sizes(int k, std::span<const int> sizes);

inline constexpr int kMaxConfigK = 12;

/// All configurations with nd = k, in descending lexicographic order.
class ConfigSpace {
public:
    /// Throws ResourceLimitError for k > kMaxConfigK, InputError for k < 1.
    explicit ConfigSpace(int k);

    int k() const { return k_; }
    std::size_t size() const { return configs_.size(); }
    const Configuration& operator[](std::size_t i) const { return configs_[i]; }
    const std::vector<Configuration>& configurations() const { return configs_; }
    std::optional<std::size_t> index_of(const Configuration& c) const;

private:
    int k_;
    std::vector<Configuration> configs_;
    std::map<Configuration, std::size_t> index_;
};

ConfigSpace enumerate_configurations(int k);

/// Every length-k vector with nd = 2k, descending lexicographic order. These
/// are all the pseudo configurations a merge can produce.
std::vector<Configuration> enumerate_pseudo_configurations(int k);

/// Process-wide shared space for k, built on first use.
const ConfigSpace& config_space(int k);

/// Pseudo-cluster configuration: the other components of the two merging
/// clusters plus the merged component. Throws InputError when merged_size > k
/// and InvariantError when the result does not have nd = 2k.
Configuration pseudo_configuration(int k, std::span<const int> others_a, std::span<const int> others_b,
                                   int merged_size);

/// The k x q matrix whose columns are the configurations of a space followed
/// by one pseudo configuration (always the last column).
class ConfigMatrix {
public:
    ConfigMatrix(const ConfigSpace& space, Configuration pseudo);
    /// Arbitrary columns; used for the degenerate and test matrices.
    ConfigMatrix(int k, std::vector<IntVec> columns);

    int k() const { return k_; }
    std::size_t q() const { return columns_.size(); }
    std::size_t pseudo_index() const { return columns_.size() - 1; }
    const Configuration& pseudo() const { return columns_.back(); }
    const IntVec& column(std::size_t j) const { return columns_[j]; }
    Int at(std::size_t row, std::size_t col) const { return columns_[col][row]; }

    IntVec multiply(std::span<const Int> y) const;
    std::vector<IntVec> rows() const;

private:
    int k_;
    std::vector<IntVec> columns_;
};

struct SystemState {
    IntVec x;  // clusters per configuration, pseudo entry is 1
    IntVec u;  // components per size
};

/// x from the censuses of the clusters not involved in the merge; u = A x.
/// Throws InvariantError if a census does not sum to k.
SystemState build_state(std::span<const std::vector<int>> untouched, const Configuration& pseudo,
                        const ConfigSpace& space);

/// y >= 0, A y = u and the pseudo entry is zero.
bool is_valid_target(std::span<const Int> y, const ConfigMatrix& a, std::span<const Int> u);

/// Some valid target vector, or nothing when the component sizes in u cannot
/// be packed into clusters of exactly k.
std::optional<IntVec> solve_any_target(const ConfigMatrix& a, std::span<const Int> u);

struct MinTarget {
    IntVec y;
    Int distance;  // ||x - y||_1
};

inline constexpr std::int64_t kDefaultSearchBudget = 50'000'000;

/// Minimum ||x - y||_1 over valid targets by iterative deepening on the
/// distance (3, 5, 7, ...). Ties go to the colex-smallest y. Throws
/// ResourceLimitError once more than `budget` search nodes are expanded.
std::optional<MinTarget> brute_force_min_target(std::span<const Int> x, const ConfigMatrix& a,
                                                std::span<const Int> u,
                                                std::int64_t budget = kDefaultSearchBudget);

} // namespace repart
