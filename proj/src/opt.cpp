#include "repart/opt.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <string>
#include <unordered_map>

#include "repart/errors.hpp"

namespace repart {

namespace {

void check_guard(const Instance& inst) {
    if (inst.n() > kMaxOptNodes)
        throw ResourceLimitError("offline optimum needs n <= " + std::to_string(kMaxOptNodes) + ", got n=" +
                                 std::to_string(inst.n()));
}

// Assignments whose cluster loads are all k, or all k except one k+1 and one
// k-1. Single-node moves inside this set realize every mapping-to-mapping
// transition at exactly its Hamming cost: decompose the difference into
// cycles and walk each cycle one node at a time.
class TransitionGraph {
public:
    explicit TransitionGraph(const Instance& inst) : inst_(inst) {
        std::vector<ClusterId> cur;
        std::vector<int> load(static_cast<std::size_t>(inst.l), 0);
        enumerate(cur, load);
        for (std::size_t i = 0; i < states_.size(); ++i)
            index_.emplace(encode(states_[i]), static_cast<int>(i));

        offsets_.push_back(0);
        for (const auto& s : states_) {
            std::vector<ClusterId> next = s;
            for (std::size_t v = 0; v < next.size(); ++v) {
                const ClusterId orig = next[v];
                for (ClusterId c = 0; c < inst.l; ++c) {
                    if (c == orig)
                        continue;
                    next[v] = c;
                    auto it = index_.find(encode(next));
                    if (it != index_.end())
                        edges_.push_back(it->second);
                }
                next[v] = orig;
            }
            offsets_.push_back(edges_.size());
        }
    }

    std::size_t size() const { return states_.size(); }
    bool valid(std::size_t i) const { return valid_[i]; }
    const std::vector<ClusterId>& state(std::size_t i) const { return states_[i]; }
    int index_of(std::span<const ClusterId> a) const { return index_.at(encode(a)); }

    // Multi-source shortest paths with unit edge weights.
    void relax(std::vector<Int>& dist) const {
        using Item = std::pair<Int, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        for (std::size_t i = 0; i < dist.size(); ++i)
            if (dist[i] != kInf)
                pq.emplace(dist[i], static_cast<int>(i));
        while (!pq.empty()) {
            auto [d, i] = pq.top();
            pq.pop();
            if (d != dist[static_cast<std::size_t>(i)])
                continue;
            for (std::size_t e = offsets_[static_cast<std::size_t>(i)]; e < offsets_[static_cast<std::size_t>(i) + 1]; ++e) {
                auto& target = dist[static_cast<std::size_t>(edges_[e])];
                if (d + 1 < target) {
                    target = d + 1;
                    pq.emplace(d + 1, edges_[e]);
                }
            }
        }
    }

    static constexpr Int kInf = std::numeric_limits<Int>::max() / 4;

private:
    std::uint64_t encode(std::span<const ClusterId> a) const {
        std::uint64_t code = 0;
        for (ClusterId c : a)
            code = code * static_cast<std::uint64_t>(inst_.l) + static_cast<std::uint64_t>(c);
        return code;
    }

    void enumerate(std::vector<ClusterId>& cur, std::vector<int>& load) {
        if (static_cast<int>(cur.size()) == inst_.n()) {
            int over = 0, under = 0;
            for (int x : load) {
                over += x == inst_.k + 1;
                under += x == inst_.k - 1;
            }
            const bool balanced = over == 0 && under == 0;
            if (balanced || (over == 1 && under == 1 && over + under + count_at_k(load) == inst_.l)) {
                states_.push_back(cur);
                valid_.push_back(balanced);
            }
            return;
        }
        for (ClusterId c = 0; c < inst_.l; ++c) {
            auto& x = load[static_cast<std::size_t>(c)];
            if (x > inst_.k)
                continue;
            if (x == inst_.k && std::count(load.begin(), load.end(), inst_.k + 1) > 0)
                continue;
            ++x;
            cur.push_back(c);
            enumerate(cur, load);
            cur.pop_back();
            --x;
        }
    }

    int count_at_k(const std::vector<int>& load) const {
        return static_cast<int>(std::count(load.begin(), load.end(), inst_.k));
    }

    Instance inst_;
    std::vector<std::vector<ClusterId>> states_;
    std::vector<bool> valid_;
    std::unordered_map<std::uint64_t, int> index_;
    std::vector<std::size_t> offsets_;
    std::vector<int> edges_;
};

void enumerate_mappings(const Instance& inst, std::vector<ClusterId>& cur, std::vector<int>& load,
                        std::vector<Mapping>& out) {
    if (static_cast<int>(cur.size()) == inst.n()) {
        out.emplace_back(inst, cur);
        return;
    }
    for (ClusterId c = 0; c < inst.l; ++c) {
        auto& x = load[static_cast<std::size_t>(c)];
        if (x == inst.k)
            continue;
        ++x;
        cur.push_back(c);
        enumerate_mappings(inst, cur, load, out);
        cur.pop_back();
        --x;
    }
}

} // namespace

std::vector<Mapping> enumerate_valid_mappings(const Instance& inst) {
    check_guard(inst);
    std::vector<Mapping> out;
    std::vector<ClusterId> cur;
    std::vector<int> load(static_cast<std::size_t>(inst.l), 0);
    enumerate_mappings(inst, cur, load, out);
    return out;
}

Int opt_cost(const Instance& inst, const Mapping& initial, std::span<const Request> requests) {
    check_guard(inst);
    if (!(initial.instance() == inst))
        throw InputError("initial mapping belongs to a different instance");
    for (const Request& r : requests)
        validate_request(inst, r);
    // With k = 1 every pair is always split and moving never helps.
    if (inst.k == 1)
        return static_cast<Int>(requests.size());

    TransitionGraph graph(inst);
    std::vector<Int> f(graph.size(), TransitionGraph::kInf);
    f[static_cast<std::size_t>(graph.index_of(initial.assignment()))] = 0;
    for (const Request& r : requests) {
        for (std::size_t i = 0; i < f.size(); ++i)
            if (!graph.valid(i))
                f[i] = TransitionGraph::kInf;
        graph.relax(f);
        for (std::size_t i = 0; i < f.size(); ++i) {
            const auto& s = graph.state(i);
            if (graph.valid(i) && s[static_cast<std::size_t>(r.u)] != s[static_cast<std::size_t>(r.v)])
                ++f[i];
        }
    }
    Int best = TransitionGraph::kInf;
    for (std::size_t i = 0; i < f.size(); ++i)
        if (graph.valid(i))
            best = std::min(best, f[i]);
    return best;
}

std::vector<bool> opt_per_phase_lower_bound(const Instance& inst, std::span<const Request> requests,
                                            std::span<const RequestRange> phases) {
    check_guard(inst);
    for (const Request& r : requests)
        validate_request(inst, r);
    const std::vector<Mapping> mappings = enumerate_valid_mappings(inst);
    std::vector<bool> out;
    for (const RequestRange& ph : phases) {
        if (ph.first < 0 || ph.end > static_cast<std::int64_t>(requests.size()) || ph.first > ph.end)
            throw InputError("phase range outside the request list");
        bool every_mapping_pays = true;
        for (const Mapping& m : mappings) {
            bool splits = false;
            for (std::int64_t i = ph.first; i < ph.end && !splits; ++i) {
                const Request& r = requests[static_cast<std::size_t>(i)];
                splits = m.cluster_of(r.u) != m.cluster_of(r.v);
            }
            if (!splits) {
                every_mapping_pays = false;
                break;
            }
        }
        out.push_back(every_mapping_pays);
    }
    return out;
}

} // namespace repart
