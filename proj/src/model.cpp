#include "repart/model.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>

#include "repart/errors.hpp"

namespace repart {

Instance::Instance(int k_, int l_) : k(k_), l(l_) {
    if (k < 1)
        throw InputError("k must be at least 1, got " + std::to_string(k));
    if (l < 2)
        throw InputError("l must be at least 2, got " + std::to_string(l));
    Int n;
    if (__builtin_mul_overflow(static_cast<Int>(k), static_cast<Int>(l), &n) || n > (1 << 24))
        throw ResourceLimitError("instance too large");
}

void validate_request(const Instance& inst, const Request& r) {
    if (r.u < 0 || r.u >= inst.n() || r.v < 0 || r.v >= inst.n())
        throw InputError("request (" + std::to_string(r.u) + "," + std::to_string(r.v) +
                         ") out of range for n=" + std::to_string(inst.n()));
    if (r.u == r.v)
        throw InputError("request endpoints must differ, got " + std::to_string(r.u) + " twice");
}

// ---------------------------------------------------------------------------

Mapping::Mapping(const Instance& inst) : inst_(inst), assignment_(static_cast<std::size_t>(inst.n())) {
    for (NodeId v = 0; v < inst.n(); ++v)
        assignment_[static_cast<std::size_t>(v)] = v / inst.k;
}

Mapping::Mapping(const Instance& inst, std::vector<ClusterId> assignment)
    : inst_(inst), assignment_(std::move(assignment)) {
    if (static_cast<int>(assignment_.size()) != inst.n())
        throw InputError("mapping has " + std::to_string(assignment_.size()) + " entries, expected " +
                         std::to_string(inst.n()));
    std::vector<int> load(static_cast<std::size_t>(inst.l), 0);
    for (ClusterId c : assignment_) {
        if (c < 0 || c >= inst.l)
            throw InputError("cluster id " + std::to_string(c) + " out of range");
        ++load[static_cast<std::size_t>(c)];
    }
    for (ClusterId c = 0; c < inst.l; ++c)
        if (load[static_cast<std::size_t>(c)] != inst.k)
            throw InputError("cluster " + std::to_string(c) + " holds " +
                             std::to_string(load[static_cast<std::size_t>(c)]) + " nodes, expected " +
                             std::to_string(inst.k));
}

std::vector<NodeId> Mapping::members(ClusterId c) const {
    std::vector<NodeId> out;
    for (NodeId v = 0; v < inst_.n(); ++v)
        if (assignment_[static_cast<std::size_t>(v)] == c)
            out.push_back(v);
    return out;
}

void Mapping::apply(std::span<const Move> moves) {
    std::vector<ClusterId> next = assignment_;
    for (const Move& mv : moves) {
        if (mv.node < 0 || mv.node >= inst_.n() || next[static_cast<std::size_t>(mv.node)] != mv.from)
            throw InvariantError("move of node " + std::to_string(mv.node) + " does not match the mapping");
        next[static_cast<std::size_t>(mv.node)] = mv.to;
    }
    try {
        *this = Mapping(inst_, std::move(next));
    } catch (const InputError& e) {
        throw InvariantError(std::string("moves break mapping validity: ") + e.what());
    }
}

int Mapping::distance(const Mapping& other) const {
    int d = 0;
    for (std::size_t i = 0; i < assignment_.size(); ++i)
        d += assignment_[i] != other.assignment_[i];
    return d;
}

// ---------------------------------------------------------------------------

ComponentPartition::ComponentPartition(int n) : parent_(static_cast<std::size_t>(n)), size_(static_cast<std::size_t>(n)) {
    reset();
}

void ComponentPartition::reset() {
    std::iota(parent_.begin(), parent_.end(), 0);
    std::fill(size_.begin(), size_.end(), 1);
    components_ = node_count();
}

void ComponentPartition::check(NodeId v) const {
    if (v < 0 || v >= node_count())
        throw InputError("node id " + std::to_string(v) + " out of range");
}

NodeId ComponentPartition::find(NodeId v) const {
    check(v);
    NodeId root = v;
    while (parent_[static_cast<std::size_t>(root)] != root)
        root = parent_[static_cast<std::size_t>(root)];
    while (parent_[static_cast<std::size_t>(v)] != root) {
        NodeId next = parent_[static_cast<std::size_t>(v)];
        parent_[static_cast<std::size_t>(v)] = root;
        v = next;
    }
    return root;
}

MergeOutcome ComponentPartition::merge(NodeId u, NodeId v) {
    NodeId a = find(u);
    NodeId b = find(v);
    if (a == b)
        return AlreadyJoined{};
    auto& sa = size_[static_cast<std::size_t>(a)];
    auto& sb = size_[static_cast<std::size_t>(b)];
    if (sa < sb || (sa == sb && b < a))
        std::swap(a, b);
    parent_[static_cast<std::size_t>(b)] = a;
    size_[static_cast<std::size_t>(a)] += size_[static_cast<std::size_t>(b)];
    --components_;
    return Merged{size_[static_cast<std::size_t>(a)]};
}

std::vector<NodeId> ComponentPartition::canonical_labels() const {
    const int n = node_count();
    std::vector<NodeId> min_of_root(static_cast<std::size_t>(n), n);
    for (NodeId v = 0; v < n; ++v) {
        auto& m = min_of_root[static_cast<std::size_t>(find(v))];
        m = std::min(m, v);
    }
    std::vector<NodeId> out(static_cast<std::size_t>(n));
    for (NodeId v = 0; v < n; ++v)
        out[static_cast<std::size_t>(v)] = min_of_root[static_cast<std::size_t>(find(v))];
    return out;
}

MergeOutcome merge_components(ComponentPartition& p, NodeId u, NodeId v) { return p.merge(u, v); }

// ---------------------------------------------------------------------------

ClusterComponents cluster_components(const ComponentPartition& p, const Mapping& m) {
    const Instance& inst = m.instance();
    if (p.node_count() != inst.n())
        throw InvariantError("partition and mapping disagree on node count");

    // root -> cluster -> slice, iterated in root order for determinism
    std::map<NodeId, std::map<ClusterId, ComponentSlice>> by_root;
    for (NodeId v = 0; v < inst.n(); ++v) {
        NodeId r = p.find(v);
        auto& slice = by_root[r][m.cluster_of(v)];
        if (slice.local_size == 0) {
            slice.root = r;
            slice.min_node = v;
            slice.size = p.size_of(v);
        }
        ++slice.local_size;
    }

    ClusterComponents out;
    out.per_cluster.resize(static_cast<std::size_t>(inst.l));
    for (auto& [root, clusters] : by_root) {
        if (clusters.size() >= 3)
            throw InvariantError("component of node " + std::to_string(root) + " spans " +
                                 std::to_string(clusters.size()) + " clusters");
        NodeId min_node = inst.n();
        for (auto& [c, s] : clusters)
            min_node = std::min(min_node, s.min_node);
        for (auto& [c, s] : clusters) {
            s.min_node = min_node;
            out.per_cluster[static_cast<std::size_t>(c)].push_back(s);
        }
    }
    for (auto& list : out.per_cluster)
        std::sort(list.begin(), list.end(),
                  [](const ComponentSlice& a, const ComponentSlice& b) { return a.min_node < b.min_node; });
    return out;
}

Census component_size_census(const ComponentPartition& p, const Mapping& m) {
    ClusterComponents cc = cluster_components(p, m);
    Census census;
    census.sizes.resize(cc.per_cluster.size());
    for (std::size_t c = 0; c < cc.per_cluster.size(); ++c) {
        for (const ComponentSlice& s : cc.per_cluster[c]) {
            if (s.local_size == s.size) {
                census.sizes[c].push_back(s.size);
                continue;
            }
            if (census.spanning && census.spanning->root != s.root)
                throw InvariantError("more than one component spans clusters");
            if (!census.spanning)
                census.spanning = SpanningComponent{s.root, s.size, static_cast<ClusterId>(c), -1};
            else
                census.spanning->cluster_b = static_cast<ClusterId>(c);
        }
        std::sort(census.sizes[c].rbegin(), census.sizes[c].rend());
    }
    return census;
}

// ---------------------------------------------------------------------------

CostLedger::CostLedger() { phases_.push_back(PhaseCost{}); }

void CostLedger::charge_communication(Int amount) {
    communication_ = checked_add(communication_, amount);
    phases_.back().communication += amount;
}

void CostLedger::charge_migration(Int moved_nodes) {
    migration_ = checked_add(migration_, moved_nodes);
    phases_.back().migration += moved_nodes;
}

void CostLedger::record_merge() { ++phases_.back().merges; }

void CostLedger::record_remap(int affected_clusters) {
    auto& ph = phases_.back();
    ++ph.remap_events;
    ph.max_affected = std::max(ph.max_affected, affected_clusters);
}

void CostLedger::note_request(std::int64_t index) { phases_.back().end_request = index + 1; }

void CostLedger::close_phase(std::int64_t trigger) {
    PhaseCost& cur = phases_.back();
    cur.end_request = trigger + 1;
    cur.completed = true;
    PhaseCost next;
    next.phase = cur.phase + 1;
    next.first_request = trigger;
    next.end_request = trigger + 1;
    phases_.push_back(next);
}

bool CostLedger::consistent() const {
    Int c = 0, m = 0;
    for (const auto& ph : phases_) {
        c += ph.communication;
        m += ph.migration;
    }
    return c == communication_ && m == migration_;
}

} // namespace repart
