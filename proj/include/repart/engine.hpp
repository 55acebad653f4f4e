#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "repart/config.hpp"
#include "repart/graver.hpp"
#include "repart/model.hpp"

namespace repart {

enum class Algorithm {
    comp_min,  // remap touching as few clusters as possible
    comp_any,  // remap to whatever target the packing solver finds first
};

std::string_view to_string(Algorithm a);
/// Throws InputError for unknown names.
Algorithm parse_algorithm(std::string_view name);

enum class StepTag {
    free,
    paid_merge_same_cluster,
    paid_remap,
    phase_reset,
};

std::string_view to_string(StepTag t);

/// The merge about to happen, in census form. `others_a`/`others_b` are the
/// components of the two endpoint clusters other than the merging ones.
struct MergeSituation {
    ClusterId cluster_a = 0;
    ClusterId cluster_b = 0;
    std::vector<std::vector<int>> untouched;  // censuses of every other cluster
    std::vector<int> others_a;
    std::vector<int> others_b;
    int merged_size = 0;
};

/// Requires the component invariant and u, v in different clusters.
MergeSituation describe_merge(const ComponentPartition& p, const Mapping& m, NodeId u, NodeId v);

/// Whether some valid mapping keeps every component (including the merged one)
/// inside a single cluster.
bool feasibility_exists(const Instance& inst, const MergeSituation& s);

struct TargetChoice {
    IntVec target;
    Int distance = 0;
    std::optional<IntVec> graver_element;  // x - target, when chosen from a Graver basis
};

/// Scans Graver elements g with g[pseudo] = 1 and x - g >= 0 for the smallest
/// ||g||_1, ties to the colex-smallest x - g. Empty when no element qualifies.
std::optional<TargetChoice> graver_min_target(const ConfigMatrix& a, const SystemState& s, const GraverBasis& g);

struct RemapPlan {
    Configuration pseudo;
    IntVec x;
    IntVec target;
    std::optional<IntVec> graver_element;
    Int distance = 0;
    std::vector<ClusterId> affected;  // ascending
    std::vector<Mapping::Move> moves; // ascending by node

    int affected_count() const { return static_cast<int>(affected.size()); }
};

struct EngineOptions {
    Algorithm algorithm = Algorithm::comp_min;
    /// Largest k served by Graver scans; larger k falls back to brute force.
    int graver_max_k = kDefaultGraverMaxK;
    std::int64_t search_budget = kDefaultSearchBudget;
};

/// Picks the target for a feasible merge of u and v and realizes it as moves.
/// `merged` is the partition after the merge. Throws InvariantError if the
/// merge is infeasible.
RemapPlan min_remap_plan(const Mapping& m, const ComponentPartition& merged, NodeId u, NodeId v,
                         const EngineOptions& opts = {});

/// Concrete moves for target y: for every configuration, min(x_c, y_c)
/// clusters stay untouched (lowest ids first); the rest are reassigned,
/// keeping as many nodes in place as a greedy assignment finds.
RemapPlan realize_plan(const Mapping& m, const ComponentPartition& merged, NodeId u, NodeId v,
                       const ConfigMatrix& a, const SystemState& s, const TargetChoice& choice);

struct StepOutcome {
    StepTag tag = StepTag::free;
    Int communication = 0;
    Int migration = 0;
    /// For phase resets, the plan of the re-served request in the new phase.
    std::optional<RemapPlan> plan;
};

struct EventLogEntry {
    int phase = 0;
    std::int64_t request = 0;
    Request pair;
    StepTag tag = StepTag::free;
    Int communication = 0;
    Int moves = 0;
    int affected = 0;
    std::optional<Int> graver_norm;
};

/// Seen by observers right before a remap plan is applied.
struct RemapContext {
    const Mapping& mapping;
    const ComponentPartition& merged;
    NodeId u;
    NodeId v;
    const ConfigMatrix& matrix;
    const SystemState& state;
    const RemapPlan& plan;
    int phase;
    std::int64_t request;
};

using RemapObserver = std::function<void(const RemapContext&)>;

/// Online component-based repartitioning. Between requests the mapping is
/// valid and every component lies inside one cluster.
class Engine {
public:
    explicit Engine(const Instance& inst, EngineOptions opts = {});
    explicit Engine(Mapping initial, EngineOptions opts = {});

    StepOutcome serve(const Request& r);

    void set_observer(RemapObserver obs) { observer_ = std::move(obs); }

    const Instance& instance() const { return mapping_.instance(); }
    const Mapping& mapping() const { return mapping_; }
    const ComponentPartition& components() const { return components_; }
    int phase() const { return phase_; }
    std::int64_t requests_served() const { return served_; }
    const CostLedger& ledger() const { return ledger_; }
    const std::vector<EventLogEntry>& log() const { return log_; }
    const EngineOptions& options() const { return opts_; }

    /// Throws InvariantError if the mapping or the component invariant is broken.
    void check_invariants() const;

private:
    std::optional<RemapPlan> try_remap(NodeId u, NodeId v, std::int64_t index);
    void record(std::int64_t index, const Request& r, StepTag tag, Int comm, const RemapPlan* plan);

    EngineOptions opts_;
    Mapping mapping_;
    ComponentPartition components_;
    CostLedger ledger_;
    std::vector<EventLogEntry> log_;
    RemapObserver observer_;
    int phase_ = 0;
    std::int64_t served_ = 0;
};

StepOutcome serve_request(Engine& e, const Request& r);

} // namespace repart
