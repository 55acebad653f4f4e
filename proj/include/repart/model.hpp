#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "repart/intvec.hpp"

namespace repart {

using NodeId = int;
using ClusterId = int;

/// Problem dimensions: l clusters holding exactly k nodes each.
struct Instance {
    int k = 1;
    int l = 2;

    Instance() = default;
    /// Throws InputError unless k >= 1 and l >= 2.
    Instance(int k, int l);

    int n() const { return k * l; }
    bool operator==(const Instance&) const = default;
};

struct Request {
    NodeId u = 0;
    NodeId v = 0;
    bool operator==(const Request&) const = default;
};

/// Throws InputError if an endpoint is out of range or u == v.
void validate_request(const Instance& inst, const Request& r);

/// Node-to-cluster assignment. Always valid: every cluster holds exactly k nodes.
class Mapping {
public:
    /// Contiguous blocks: node i goes to cluster i / k.
    explicit Mapping(const Instance& inst);
    /// Throws InputError if the assignment is not a valid mapping for inst.
    Mapping(const Instance& inst, std::vector<ClusterId> assignment);

    const Instance& instance() const { return inst_; }
    ClusterId cluster_of(NodeId v) const { return assignment_.at(static_cast<std::size_t>(v)); }
    std::span<const ClusterId> assignment() const { return assignment_; }
    std::vector<NodeId> members(ClusterId c) const;

    struct Move {
        NodeId node;
        ClusterId from;
        ClusterId to;
        bool operator==(const Move&) const = default;
    };
    /// Applies all moves at once; the result must again be a valid mapping.
    void apply(std::span<const Move> moves);

    /// Number of nodes assigned to different clusters.
    int distance(const Mapping& other) const;

    bool operator==(const Mapping& o) const { return inst_ == o.inst_ && assignment_ == o.assignment_; }

private:
    Instance inst_;
    std::vector<ClusterId> assignment_;
};

/// Outcome of merging the components of two nodes.
struct AlreadyJoined {
    bool operator==(const AlreadyJoined&) const = default;
};
struct Merged {
    int new_size;
    bool operator==(const Merged&) const = default;
};
using MergeOutcome = std::variant<AlreadyJoined, Merged>;

/// Union-find over node ids with union by size and path compression. The root
/// of a union is the larger component, ties going to the smaller root id.
class ComponentPartition {
public:
    explicit ComponentPartition(int n);

    int node_count() const { return static_cast<int>(parent_.size()); }
    NodeId find(NodeId v) const;
    int size_of(NodeId v) const { return size_[static_cast<std::size_t>(find(v))]; }
    bool same(NodeId u, NodeId v) const { return find(u) == find(v); }
    int component_count() const { return components_; }

    MergeOutcome merge(NodeId u, NodeId v);
    /// Back to singletons.
    void reset();

    /// Canonical form: for each node, the smallest node id in its component.
    std::vector<NodeId> canonical_labels() const;

private:
    void check(NodeId v) const;

    mutable std::vector<NodeId> parent_;
    std::vector<int> size_;
    int components_;
};

MergeOutcome merge_components(ComponentPartition& p, NodeId u, NodeId v);

/// A component as seen from one cluster.
struct ComponentSlice {
    NodeId root;
    NodeId min_node;
    int size;        // full component size
    int local_size;  // nodes of the component inside this cluster
};

/// Components grouped by cluster. A component that spans two clusters appears
/// in both, with local_size < size.
struct ClusterComponents {
    std::vector<std::vector<ComponentSlice>> per_cluster;
};

/// Throws InvariantError if some component spans three or more clusters.
ClusterComponents cluster_components(const ComponentPartition& p, const Mapping& m);

struct SpanningComponent {
    NodeId root;
    int size;
    ClusterId cluster_a;
    ClusterId cluster_b;
    bool operator==(const SpanningComponent&) const = default;
};

struct Census {
    /// Sizes of components residing entirely in each cluster, in descending order.
    std::vector<std::vector<int>> sizes;
    /// Set when exactly one component spans two clusters (mid-merge).
    std::optional<SpanningComponent> spanning;
};

/// Throws InvariantError for a component across >= 3 clusters or for two
/// spanning components at once.
Census component_size_census(const ComponentPartition& p, const Mapping& m);

/// One row of the per-phase cost breakdown.
struct PhaseCost {
    int phase = 0;
    std::int64_t first_request = 0;
    /// One past the last request of the phase. A phase closed by a reset
    /// includes its triggering request, which also opens the next phase.
    std::int64_t end_request = 0;
    bool completed = false;
    Int communication = 0;
    Int migration = 0;
    int merges = 0;
    int remap_events = 0;
    int max_affected = 0;

    Int total() const { return communication + migration; }
};

class CostLedger {
public:
    CostLedger();

    void charge_communication(Int amount = 1);
    void charge_migration(Int moved_nodes);
    void record_merge();
    void record_remap(int affected_clusters);
    void note_request(std::int64_t index);
    /// Closes the current phase at `trigger` (inclusive) and opens the next at the same request.
    void close_phase(std::int64_t trigger);

    Int communication() const { return communication_; }
    Int migration() const { return migration_; }
    Int total() const { return communication_ + migration_; }
    const std::vector<PhaseCost>& phases() const { return phases_; }
    const PhaseCost& current() const { return phases_.back(); }

    /// Totals equal the sums over phases.
    bool consistent() const;

private:
    Int communication_ = 0;
    Int migration_ = 0;
    std::vector<PhaseCost> phases_;
};

} // namespace repart
