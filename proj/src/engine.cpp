#include "repart/engine.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "repart/errors.hpp"

namespace repart {

std::string_view to_string(Algorithm a) {
    switch (a) {
    case Algorithm::comp_min:
        return "comp-min";
    case Algorithm::comp_any:
        return "comp-any";
    }
    return "?";
}

Algorithm parse_algorithm(std::string_view name) {
    if (name == "comp-min")
        return Algorithm::comp_min;
    if (name == "comp-any")
        return Algorithm::comp_any;
    throw InputError("unknown algorithm '" + std::string(name) + "' (expected comp-min or comp-any)");
}

std::string_view to_string(StepTag t) {
    switch (t) {
    case StepTag::free:
        return "free";
    case StepTag::paid_merge_same_cluster:
        return "paid-merge-same-cluster";
    case StepTag::paid_remap:
        return "paid-remap";
    case StepTag::phase_reset:
        return "phase-reset";
    }
    return "?";
}

// ---------------------------------------------------------------------------

MergeSituation describe_merge(const ComponentPartition& p, const Mapping& m, NodeId u, NodeId v) {
    MergeSituation s;
    s.cluster_a = m.cluster_of(u);
    s.cluster_b = m.cluster_of(v);
    if (s.cluster_a == s.cluster_b)
        throw InvariantError("describe_merge: endpoints share a cluster");
    Census census = component_size_census(p, m);
    if (census.spanning)
        throw InvariantError("describe_merge: component invariant does not hold");

    const int size_a = p.size_of(u);
    const int size_b = p.size_of(v);
    s.merged_size = size_a + size_b;
    for (ClusterId c = 0; c < static_cast<ClusterId>(census.sizes.size()); ++c) {
        auto& sizes = census.sizes[static_cast<std::size_t>(c)];
        if (c == s.cluster_a || c == s.cluster_b) {
            const int drop = c == s.cluster_a ? size_a : size_b;
            sizes.erase(std::find(sizes.begin(), sizes.end(), drop));
            (c == s.cluster_a ? s.others_a : s.others_b) = std::move(sizes);
        } else {
            s.untouched.push_back(std::move(sizes));
        }
    }
    return s;
}

bool feasibility_exists(const Instance& inst, const MergeSituation& s) {
    if (s.merged_size > inst.k)
        return false;
    const ConfigSpace& space = config_space(inst.k);
    Configuration pseudo = pseudo_configuration(inst.k, s.others_a, s.others_b, s.merged_size);
    SystemState st = build_state(s.untouched, pseudo, space);
    return solve_any_target(ConfigMatrix(space, pseudo), st.u).has_value();
}

std::optional<TargetChoice> graver_min_target(const ConfigMatrix& a, const SystemState& s, const GraverBasis& g) {
    const std::size_t pc = a.pseudo_index();
    std::optional<TargetChoice> best;
    for (const IntVec& e : g.elements) {
        if (e[pc] != 1)
            continue;
        IntVec y = subtracted(s.x, e);
        if (!is_nonnegative(y))
            continue;
        Int d = norm1(e);
        if (!best || d < best->distance || (d == best->distance && colex_less(y, best->target)))
            best = TargetChoice{std::move(y), d, e};
    }
    return best;
}

// ---------------------------------------------------------------------------

namespace {

struct Pooled {
    NodeId root;
    NodeId min_node;
    int size;
};

// Node-weighted retention of a cluster's own components under config t.
Int retention(const IntVec& own_counts, const IntVec& t) {
    Int r = 0;
    for (std::size_t i = 0; i < t.size(); ++i)
        r += std::min(own_counts[i], t[i]) * static_cast<Int>(i + 1);
    return r;
}

} // namespace

RemapPlan realize_plan(const Mapping& m, const ComponentPartition& merged, NodeId u, NodeId v,
                       const ConfigMatrix& a, const SystemState& s, const TargetChoice& choice) {
    const Instance& inst = m.instance();
    const int k = inst.k;
    const std::size_t pc = a.pseudo_index();
    const IntVec& y = choice.target;
    if (!is_valid_target(y, a, s.u))
        throw InvariantError("realize_plan: " + to_string(y) + " is not a valid target");

    RemapPlan plan;
    plan.pseudo = a.pseudo();
    plan.x = s.x;
    plan.target = y;
    plan.graver_element = choice.graver_element;
    plan.distance = norm1(subtracted(s.x, y));

    const ClusterId ca = m.cluster_of(u);
    const ClusterId cb = m.cluster_of(v);
    const NodeId ab_root = merged.find(u);
    if (merged.find(v) != ab_root || ca == cb)
        throw InvariantError("realize_plan: u and v must be merged across two clusters");
    const int ab_size = merged.size_of(u);

    ClusterComponents cc = cluster_components(merged, m);
    const std::size_t l = static_cast<std::size_t>(inst.l);

    // own components per cluster (S_ab excluded) and their size counts
    std::vector<std::vector<Pooled>> own(l);
    std::vector<IntVec> own_counts(l, IntVec(static_cast<std::size_t>(k), 0));
    std::vector<int> ab_overlap(l, 0);
    for (std::size_t c = 0; c < l; ++c) {
        for (const ComponentSlice& sl : cc.per_cluster[c]) {
            if (sl.root == ab_root) {
                ab_overlap[c] = sl.local_size;
                continue;
            }
            if (sl.local_size != sl.size)
                throw InvariantError("realize_plan: a second component spans clusters");
            own[c].push_back({sl.root, sl.min_node, sl.size});
            ++own_counts[c][static_cast<std::size_t>(sl.size - 1)];
        }
    }

    // Untouched clusters: min(x_c, y_c) per configuration, lowest ids first.
    std::map<std::size_t, std::vector<ClusterId>> by_config;
    for (ClusterId c = 0; c < inst.l; ++c) {
        if (c == ca || c == cb)
            continue;
        auto idx = config_space(k).index_of(own_counts[static_cast<std::size_t>(c)]);
        if (!idx || *idx >= pc)
            throw InvariantError("realize_plan: cluster " + std::to_string(c) + " has no configuration");
        by_config[*idx].push_back(c);
    }
    std::vector<bool> fixed(l, false);
    std::vector<std::size_t> targets;  // configuration indices still to hand out
    for (std::size_t j = 0; j < pc; ++j) {
        const auto& group = by_config[j];
        if (static_cast<Int>(group.size()) != s.x[j])
            throw InvariantError("realize_plan: state vector disagrees with the mapping");
        const Int keep = std::min(s.x[j], y[j]);
        for (Int i = 0; i < keep; ++i)
            fixed[static_cast<std::size_t>(group[static_cast<std::size_t>(i)])] = true;
        for (Int i = keep; i < y[j]; ++i)
            targets.push_back(j);
    }
    std::vector<ClusterId> affected;
    for (ClusterId c = 0; c < inst.l; ++c)
        if (!fixed[static_cast<std::size_t>(c)])
            affected.push_back(c);
    if (affected.size() != targets.size() || 2 * static_cast<Int>(affected.size()) != plan.distance + 1)
        throw InvariantError("realize_plan: affected clusters do not match ||x - y||_1");

    std::vector<std::optional<std::size_t>> assigned(l);
    auto take_target = [&](std::size_t pos) {
        std::size_t j = targets[pos];
        targets.erase(targets.begin() + static_cast<long>(pos));
        return j;
    };

    // Home of S_ab: the participant and configuration retaining the most nodes,
    // then the larger overlap, then the lower cluster id.
    ClusterId home = -1;
    {
        Int best_score = -1;
        int best_overlap = -1;
        std::size_t best_pos = 0;
        for (ClusterId c : {std::min(ca, cb), std::max(ca, cb)}) {
            const auto ci = static_cast<std::size_t>(c);
            for (std::size_t pos = 0; pos < targets.size(); ++pos) {
                IntVec t = a.column(targets[pos]);
                if (t[static_cast<std::size_t>(ab_size - 1)] == 0)
                    continue;
                --t[static_cast<std::size_t>(ab_size - 1)];
                Int score = ab_overlap[ci] + retention(own_counts[ci], t);
                if (score > best_score || (score == best_score && ab_overlap[ci] > best_overlap)) {
                    best_score = score;
                    best_overlap = ab_overlap[ci];
                    best_pos = pos;
                    home = c;
                }
            }
        }
        if (home < 0)
            throw InvariantError("realize_plan: no target configuration holds the merged component");
        assigned[static_cast<std::size_t>(home)] = take_target(best_pos);
    }

    // Greedy assignment of the remaining configurations.
    while (!targets.empty()) {
        Int best_score = -1;
        ClusterId best_c = -1;
        std::size_t best_pos = 0;
        for (ClusterId c : affected) {
            const auto ci = static_cast<std::size_t>(c);
            if (assigned[ci])
                continue;
            for (std::size_t pos = 0; pos < targets.size(); ++pos) {
                Int score = retention(own_counts[ci], a.column(targets[pos]));
                if (score > best_score) {
                    best_score = score;
                    best_c = c;
                    best_pos = pos;
                }
            }
        }
        assigned[static_cast<std::size_t>(best_c)] = take_target(best_pos);
    }

    // Fill slots: S_ab at home, own components where they fit, the rest pooled.
    std::map<NodeId, ClusterId> destination;  // component root -> cluster
    std::vector<IntVec> free_slots(l);
    std::vector<Pooled> displaced;
    for (ClusterId c : affected) {
        const auto ci = static_cast<std::size_t>(c);
        free_slots[ci] = a.column(*assigned[ci]);
        if (c == home) {
            --free_slots[ci][static_cast<std::size_t>(ab_size - 1)];
            destination[ab_root] = c;
        }
        for (const Pooled& comp : own[ci]) {
            auto& slot = free_slots[ci][static_cast<std::size_t>(comp.size - 1)];
            if (slot > 0) {
                --slot;
                destination[comp.root] = c;
            } else {
                displaced.push_back(comp);
            }
        }
    }
    std::sort(displaced.begin(), displaced.end(),
              [](const Pooled& p1, const Pooled& p2) { return p1.min_node < p2.min_node; });
    for (const Pooled& comp : displaced) {
        bool placed = false;
        for (ClusterId c : affected) {
            auto& slot = free_slots[static_cast<std::size_t>(c)][static_cast<std::size_t>(comp.size - 1)];
            if (slot > 0) {
                --slot;
                destination[comp.root] = c;
                placed = true;
                break;
            }
        }
        if (!placed)
            throw InvariantError("realize_plan: no slot left for a component of size " + std::to_string(comp.size));
    }

    std::vector<bool> touched(l, false);
    for (NodeId node = 0; node < inst.n(); ++node) {
        const ClusterId from = m.cluster_of(node);
        if (fixed[static_cast<std::size_t>(from)])
            continue;
        const ClusterId to = destination.at(merged.find(node));
        if (to != from) {
            plan.moves.push_back({node, from, to});
            touched[static_cast<std::size_t>(from)] = true;
            touched[static_cast<std::size_t>(to)] = true;
        }
    }
    for (ClusterId c : affected)
        if (!touched[static_cast<std::size_t>(c)])
            throw InvariantError("realize_plan: affected cluster " + std::to_string(c) + " is unchanged");
    plan.affected = std::move(affected);
    return plan;
}

RemapPlan min_remap_plan(const Mapping& m, const ComponentPartition& merged, NodeId u, NodeId v,
                         const EngineOptions& opts) {
    const int k = m.instance().k;
    const ConfigSpace& space = config_space(k);

    Census census = component_size_census(merged, m);
    if (!census.spanning || census.spanning->root != merged.find(u))
        throw InvariantError("min_remap_plan: merged component does not span two clusters");
    const ClusterId ca = m.cluster_of(u);
    const ClusterId cb = m.cluster_of(v);
    std::vector<std::vector<int>> untouched;
    for (ClusterId c = 0; c < m.instance().l; ++c)
        if (c != ca && c != cb)
            untouched.push_back(census.sizes[static_cast<std::size_t>(c)]);

    Configuration pseudo = pseudo_configuration(k, census.sizes[static_cast<std::size_t>(ca)],
                                                census.sizes[static_cast<std::size_t>(cb)], census.spanning->size);
    ConfigMatrix a(space, pseudo);
    SystemState st = build_state(untouched, pseudo, space);

    std::optional<TargetChoice> choice;
    if (opts.algorithm == Algorithm::comp_any) {
        if (auto y = solve_any_target(a, st.u))
            choice = TargetChoice{*y, norm1(subtracted(st.x, *y)), std::nullopt};
    } else if (k <= opts.graver_max_k) {
        if (!solve_any_target(a, st.u))
            throw InvariantError("min_remap_plan: merge is infeasible");
        auto basis = cached_graver(a, opts.graver_max_k);
        choice = graver_min_target(a, st, *basis);
        if (!choice)
            throw InvariantError("min_remap_plan: no Graver element yields a target although one exists");
    } else if (auto best = brute_force_min_target(st.x, a, st.u, opts.search_budget)) {
        choice = TargetChoice{best->y, best->distance, std::nullopt};
    }
    if (!choice)
        throw InvariantError("min_remap_plan: merge is infeasible");
    return realize_plan(m, merged, u, v, a, st, *choice);
}

// ---------------------------------------------------------------------------

Engine::Engine(const Instance& inst, EngineOptions opts) : Engine(Mapping(inst), opts) {}

Engine::Engine(Mapping initial, EngineOptions opts)
    : opts_(opts), mapping_(std::move(initial)), components_(mapping_.instance().n()) {}

void Engine::record(std::int64_t index, const Request& r, StepTag tag, Int comm, const RemapPlan* plan) {
    EventLogEntry e;
    e.phase = phase_;
    e.request = index;
    e.pair = r;
    e.tag = tag;
    e.communication = comm;
    if (plan) {
        e.moves = static_cast<Int>(plan->moves.size());
        e.affected = plan->affected_count();
        if (plan->graver_element)
            e.graver_norm = norm1(*plan->graver_element);
    }
    log_.push_back(e);
}

std::optional<RemapPlan> Engine::try_remap(NodeId u, NodeId v, std::int64_t index) {
    const Instance& inst = instance();
    MergeSituation situation = describe_merge(components_, mapping_, u, v);
    if (!feasibility_exists(inst, situation))
        return std::nullopt;

    ComponentPartition merged = components_;
    merged.merge(u, v);
    RemapPlan plan = min_remap_plan(mapping_, merged, u, v, opts_);
    if (observer_) {
        const ConfigSpace& space = config_space(inst.k);
        ConfigMatrix a(space, plan.pseudo);
        SystemState st = build_state(situation.untouched, plan.pseudo, space);
        observer_(RemapContext{mapping_, merged, u, v, a, st, plan, phase_, index});
    }
    components_ = std::move(merged);
    mapping_.apply(plan.moves);
    ledger_.record_merge();
    ledger_.record_remap(plan.affected_count());
    ledger_.charge_migration(static_cast<Int>(plan.moves.size()));
    return plan;
}

StepOutcome Engine::serve(const Request& r) {
    validate_request(instance(), r);
    const std::int64_t index = served_++;
    ledger_.note_request(index);

    StepOutcome out;
    if (components_.same(r.u, r.v)) {
        record(index, r, StepTag::free, 0, nullptr);
        return out;
    }
    if (mapping_.cluster_of(r.u) == mapping_.cluster_of(r.v)) {
        components_.merge(r.u, r.v);
        ledger_.record_merge();
        out.tag = StepTag::paid_merge_same_cluster;
        record(index, r, out.tag, 0, nullptr);
        return out;
    }

    ledger_.charge_communication(1);
    out.communication = 1;
    if (auto plan = try_remap(r.u, r.v, index)) {
        out.tag = StepTag::paid_remap;
        out.migration = static_cast<Int>(plan->moves.size());
        record(index, r, out.tag, 1, &*plan);
        out.plan = std::move(plan);
        return out;
    }

    // No valid mapping keeps the merged component together: new phase, and
    // the request is served again from singleton components.
    out.tag = StepTag::phase_reset;
    record(index, r, out.tag, 1, nullptr);
    ledger_.close_phase(index);
    ++phase_;
    components_.reset();
    // From singletons the merge is feasible unless k = 1, where nothing can merge.
    if (auto plan = try_remap(r.u, r.v, index)) {
        out.migration = static_cast<Int>(plan->moves.size());
        record(index, r, StepTag::paid_remap, 0, &*plan);
        out.plan = std::move(plan);
    }
    return out;
}

void Engine::check_invariants() const {
    try {
        Mapping copy(mapping_.instance(), {mapping_.assignment().begin(), mapping_.assignment().end()});
    } catch (const InputError& e) {
        throw InvariantError(std::string("mapping invalid: ") + e.what());
    }
    Census census = component_size_census(components_, mapping_);
    if (census.spanning)
        throw InvariantError("component invariant violated: component of node " +
                             std::to_string(census.spanning->root) + " spans two clusters");
    if (!ledger_.consistent())
        throw InvariantError("cost ledger totals disagree with phase rows");
}

StepOutcome serve_request(Engine& e, const Request& r) { return e.serve(r); }

} // namespace repart
