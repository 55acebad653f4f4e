#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "repart/model.hpp"

namespace repart {

enum class GeneratorKind {
    uniform_random,  // i.i.d. unordered pairs
    merge_chain,     // merges the largest pair of components in different clusters
    split_probe,     // always the lowest-id pair currently split
};

std::string_view to_string(GeneratorKind kind);
/// Throws InputError for unknown kinds.
GeneratorKind parse_generator_kind(std::string_view name);

/// Produces requests one at a time. Adaptive sources see the current mapping
/// and nothing else.
class RequestSource {
public:
    virtual ~RequestSource() = default;
    /// Empty once the source is exhausted.
    virtual std::optional<Request> next(const Mapping& current) = 0;
};

class StaticSource : public RequestSource {
public:
    explicit StaticSource(std::vector<Request> requests) : requests_(std::move(requests)) {}
    std::optional<Request> next(const Mapping&) override;

private:
    std::vector<Request> requests_;
    std::size_t pos_ = 0;
};

struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::uniform_random;
    std::int64_t length = 0;
    std::uint64_t seed = 0;
};

std::unique_ptr<RequestSource> make_generator(const Instance& inst, const GeneratorSpec& spec);

struct Workload {
    Instance instance;
    std::optional<std::vector<ClusterId>> initial;
    std::variant<std::vector<Request>, GeneratorSpec> source;

    Mapping initial_mapping() const;
    std::unique_ptr<RequestSource> open() const;
    bool adaptive() const;
};

/// Throws InputError for a negative length.
Workload generate_workload(GeneratorKind kind, const Instance& inst, std::int64_t length, std::uint64_t seed);

/// {"k", "l", "initial"?, "requests": [[u, v], ...]}. When a "nodes" list of
/// labels is present, request endpoints may be given as labels; they are
/// mapped to their position in that list. Throws InputError on any defect.
Workload parse_workload(std::string_view json_text);
Workload load_workload_file(const std::string& path);
/// Static workloads only; throws InputError for generator-backed ones.
std::string workload_to_json(const Workload& w);

} // namespace repart
