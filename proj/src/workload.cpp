#include "repart/workload.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "repart/errors.hpp"
#include "repart/rng.hpp"

namespace repart {

std::string_view to_string(GeneratorKind kind) {
    switch (kind) {
    case GeneratorKind::uniform_random:
        return "uniform-random";
    case GeneratorKind::merge_chain:
        return "merge-chain";
    case GeneratorKind::split_probe:
        return "split-probe";
    }
    return "?";
}

GeneratorKind parse_generator_kind(std::string_view name) {
    if (name == "uniform-random")
        return GeneratorKind::uniform_random;
    if (name == "merge-chain")
        return GeneratorKind::merge_chain;
    if (name == "split-probe")
        return GeneratorKind::split_probe;
    throw InputError("unknown generator kind '" + std::string(name) +
                     "' (expected uniform-random, merge-chain or split-probe)");
}

std::optional<Request> StaticSource::next(const Mapping&) {
    if (pos_ == requests_.size())
        return std::nullopt;
    return requests_[pos_++];
}

namespace {

class UniformRandomSource : public RequestSource {
public:
    UniformRandomSource(const Instance& inst, const GeneratorSpec& spec)
        : n_(static_cast<std::uint64_t>(inst.n())), left_(spec.length), rng_(spec.seed) {}

    std::optional<Request> next(const Mapping&) override {
        if (left_ <= 0)
            return std::nullopt;
        --left_;
        auto u = static_cast<NodeId>(rng_.below(n_));
        auto v = static_cast<NodeId>(rng_.below(n_ - 1));
        if (v >= u)
            ++v;
        return Request{std::min(u, v), std::max(u, v)};
    }

private:
    std::uint64_t n_;
    std::int64_t left_;
    SplitMix64 rng_;
};

// Tracks the components its own requests create. Prefers merges that fit in
// one cluster (each one forces a remap); when none is left it merges the
// largest split pair anyway, which eventually overflows and ends the phase.
class MergeChainSource : public RequestSource {
public:
    MergeChainSource(const Instance& inst, const GeneratorSpec& spec)
        : k_(inst.k), tracked_(inst.n()), left_(spec.length) {}

    std::optional<Request> next(const Mapping& m) override {
        if (left_ <= 0)
            return std::nullopt;
        --left_;
        auto pick = choose(m);
        if (!pick) {
            tracked_.reset();
            pick = choose(m);
        }
        if (!pick)
            return std::nullopt;
        tracked_.merge(pick->u, pick->v);
        return pick;
    }

private:
    std::optional<Request> choose(const Mapping& m) const {
        std::map<NodeId, std::pair<NodeId, int>> reps;  // root -> (min node, size)
        for (NodeId v = 0; v < tracked_.node_count(); ++v) {
            NodeId r = tracked_.find(v);
            if (!reps.count(r))
                reps[r] = {v, tracked_.size_of(v)};
        }
        std::vector<std::pair<NodeId, int>> comps;
        for (auto& [root, rep] : reps)
            comps.push_back(rep);
        std::sort(comps.begin(), comps.end());

        std::optional<Request> fitting, any;
        int fitting_size = 0, any_size = 0;
        for (std::size_t i = 0; i < comps.size(); ++i) {
            for (std::size_t j = i + 1; j < comps.size(); ++j) {
                const auto [a, sa] = comps[i];
                const auto [b, sb] = comps[j];
                if (m.cluster_of(a) == m.cluster_of(b))
                    continue;
                const int total = sa + sb;
                if (total <= k_ && total > fitting_size) {
                    fitting_size = total;
                    fitting = Request{a, b};
                }
                if (total > any_size) {
                    any_size = total;
                    any = Request{a, b};
                }
            }
        }
        return fitting ? fitting : any;
    }

    int k_;
    ComponentPartition tracked_;
    std::int64_t left_;
};

class SplitProbeSource : public RequestSource {
public:
    explicit SplitProbeSource(const GeneratorSpec& spec) : left_(spec.length) {}

    std::optional<Request> next(const Mapping& m) override {
        if (left_ <= 0)
            return std::nullopt;
        --left_;
        const int n = m.instance().n();
        for (NodeId u = 0; u < n; ++u)
            for (NodeId v = u + 1; v < n; ++v)
                if (m.cluster_of(u) != m.cluster_of(v))
                    return Request{u, v};
        return std::nullopt;
    }

private:
    std::int64_t left_;
};

} // namespace

std::unique_ptr<RequestSource> make_generator(const Instance& inst, const GeneratorSpec& spec) {
    if (spec.length < 0)
        throw InputError("workload length must be nonnegative");
    switch (spec.kind) {
    case GeneratorKind::uniform_random:
        return std::make_unique<UniformRandomSource>(inst, spec);
    case GeneratorKind::merge_chain:
        return std::make_unique<MergeChainSource>(inst, spec);
    case GeneratorKind::split_probe:
        return std::make_unique<SplitProbeSource>(spec);
    }
    throw InputError("unknown generator kind");
}

// ---------------------------------------------------------------------------

Mapping Workload::initial_mapping() const {
    if (initial)
        return Mapping(instance, *initial);
    return Mapping(instance);
}

std::unique_ptr<RequestSource> Workload::open() const {
    if (auto* list = std::get_if<std::vector<Request>>(&source))
        return std::make_unique<StaticSource>(*list);
    return make_generator(instance, std::get<GeneratorSpec>(source));
}

bool Workload::adaptive() const {
    auto* spec = std::get_if<GeneratorSpec>(&source);
    return spec && spec->kind != GeneratorKind::uniform_random;
}

Workload generate_workload(GeneratorKind kind, const Instance& inst, std::int64_t length, std::uint64_t seed) {
    if (length < 0)
        throw InputError("workload length must be nonnegative");
    return Workload{inst, std::nullopt, GeneratorSpec{kind, length, seed}};
}

namespace {

int as_int(const nlohmann::json& j, const char* what) {
    if (!j.is_number_integer())
        throw InputError(std::string(what) + " must be an integer");
    auto v = j.get<std::int64_t>();
    if (v < INT32_MIN || v > INT32_MAX)
        throw InputError(std::string(what) + " out of range");
    return static_cast<int>(v);
}

} // namespace

Workload parse_workload(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError(std::string("workload is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("k") || !doc.contains("l") || !doc.contains("requests"))
        throw InputError("workload needs the keys k, l and requests");

    Workload w{Instance(as_int(doc["k"], "k"), as_int(doc["l"], "l")), std::nullopt, std::vector<Request>{}};

    std::map<std::string, NodeId> labels;
    if (doc.contains("nodes")) {
        const auto& nodes = doc["nodes"];
        if (!nodes.is_array() || static_cast<int>(nodes.size()) != w.instance.n())
            throw InputError("nodes must list exactly n labels");
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (!nodes[i].is_string() || !labels.emplace(nodes[i].get<std::string>(), static_cast<NodeId>(i)).second)
                throw InputError("node labels must be distinct strings");
        }
    }
    auto endpoint = [&](const nlohmann::json& j) -> NodeId {
        if (j.is_string()) {
            auto it = labels.find(j.get<std::string>());
            if (it == labels.end())
                throw InputError("unknown node label '" + j.get<std::string>() + "'");
            return it->second;
        }
        return as_int(j, "node id");
    };

    if (doc.contains("initial") && !doc["initial"].is_null()) {
        const auto& init = doc["initial"];
        if (!init.is_array())
            throw InputError("initial must be an array of cluster ids");
        std::vector<ClusterId> assignment;
        for (const auto& c : init)
            assignment.push_back(as_int(c, "cluster id"));
        Mapping(w.instance, assignment);  // validates
        w.initial = std::move(assignment);
    }

    const auto& reqs = doc["requests"];
    if (!reqs.is_array())
        throw InputError("requests must be an array");
    auto& list = std::get<std::vector<Request>>(w.source);
    for (const auto& r : reqs) {
        if (!r.is_array() || r.size() != 2)
            throw InputError("each request must be a pair [u, v]");
        Request req{endpoint(r[0]), endpoint(r[1])};
        validate_request(w.instance, req);
        list.push_back(req);
    }
    return w;
}

Workload load_workload_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open workload file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_workload(ss.str());
}

std::string workload_to_json(const Workload& w) {
    const auto* list = std::get_if<std::vector<Request>>(&w.source);
    if (!list)
        throw InputError("only static workloads can be written out");
    nlohmann::ordered_json doc;
    doc["k"] = w.instance.k;
    doc["l"] = w.instance.l;
    if (w.initial)
        doc["initial"] = *w.initial;
    auto reqs = nlohmann::ordered_json::array();
    for (const Request& r : *list)
        reqs.push_back({r.u, r.v});
    doc["requests"] = std::move(reqs);
    return doc.dump();
}

} // namespace repart
