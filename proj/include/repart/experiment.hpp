#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "repart/engine.hpp"
#include "repart/workload.hpp"

namespace repart {

struct ExperimentOptions {
    Algorithm algorithm = Algorithm::comp_min;
    bool compute_opt = false;
    /// Per event: Graver scan against brute force, target norms, affected
    /// count. Per phase: cost bound and (with compute_opt) the OPT >= 1
    /// certificate. Any violation throws InvariantError.
    bool verify = false;
    int graver_max_k = kDefaultGraverMaxK;
};

struct PhaseRow {
    PhaseCost cost;
    std::optional<bool> opt_certified;  // completed phases, with compute_opt
};

struct Report {
    Instance instance;
    Algorithm algorithm = Algorithm::comp_min;
    std::optional<GeneratorSpec> generator;
    std::vector<Request> requests;  // as served
    Int communication = 0;
    Int migration = 0;
    std::vector<PhaseRow> phases;
    std::map<int, std::int64_t> affected_histogram;  // affected clusters -> remap events
    int f_obs = 0;
    /// (l k - 1)(1 + k f_obs): the cost ceiling of any single phase.
    Int phase_bound = 0;
    std::optional<Int> graver_max_norm1;
    std::optional<Int> max_delta;
    std::optional<Int> opt_cost;
    std::vector<EventLogEntry> events;

    Int total() const { return communication + migration; }
};

/// Throws ResourceLimitError when compute_opt is set and n exceeds the OPT guard.
Report run_experiment(const Workload& w, const ExperimentOptions& opts);

/// "p/q" in lowest terms.
std::string exact_ratio(Int num, Int den);
/// Six decimals, rounded half up.
std::string decimal_ratio(Int num, Int den);

nlohmann::ordered_json report_to_json(const Report& r);
std::string report_to_csv(const Report& r);
/// One JSON object per line.
std::string event_log_jsonl(const std::vector<EventLogEntry>& events);

} // namespace repart
