#include "repart/experiment.hpp"

#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "repart/errors.hpp"
#include "repart/graver.hpp"
#include "repart/opt.hpp"

namespace repart {

namespace {

// Per-event checks and Graver statistics, fed by the engine observer.
class EventAuditor {
public:
    EventAuditor(const ExperimentOptions& opts, const Instance& inst) : opts_(opts), inst_(inst) {}

    void operator()(const RemapContext& ctx) {
        const bool graver_path = opts_.algorithm == Algorithm::comp_min && inst_.k <= opts_.graver_max_k;
        if (graver_path)
            collect_stats(ctx.matrix);
        if (!opts_.verify)
            return;

        const RemapPlan& plan = ctx.plan;
        const std::string where = "request " + std::to_string(ctx.request) + ": ";
        if (norm1(plan.target) != inst_.l)
            throw InvariantError(where + "target " + to_string(plan.target) + " does not have norm l");
        if (plan.distance % 2 != 1 || plan.distance < 3)
            throw InvariantError(where + "distance " + std::to_string(plan.distance) + " is not odd and >= 3");
        if (2 * static_cast<Int>(plan.affected_count()) != plan.distance + 1)
            throw InvariantError(where + "affected clusters do not equal (||x - y||_1 + 1) / 2");
        std::map<ClusterId, int> leaving;
        for (const auto& mv : plan.moves)
            if (++leaving[mv.from] > inst_.k)
                throw InvariantError(where + "more than k nodes leave a cluster");
        if (opts_.algorithm == Algorithm::comp_min) {
            auto best = brute_force_min_target(ctx.state.x, ctx.matrix, ctx.state.u);
            if (!best || best->distance != plan.distance)
                throw InvariantError(where + "Graver scan distance " + std::to_string(plan.distance) +
                                     " differs from brute force");
        }
    }

    std::optional<Int> max_norm1() const { return max_norm1_; }
    std::optional<Int> max_delta() const { return max_delta_; }

private:
    void collect_stats(const ConfigMatrix& a) {
        if (!seen_.insert(a.pseudo()).second)
            return;
        auto basis = cached_graver(a, opts_.graver_max_k);
        max_norm1_ = std::max(max_norm1_.value_or(0), basis->max_norm1());
        if (a.k() <= kDefaultSubdeterminantMaxK)
            max_delta_ = std::max(max_delta_.value_or(0), max_subdeterminant(a));
    }

    const ExperimentOptions& opts_;
    Instance inst_;
    std::set<Configuration> seen_;
    std::optional<Int> max_norm1_;
    std::optional<Int> max_delta_;
};

} // namespace

Report run_experiment(const Workload& w, const ExperimentOptions& opts) {
    const Instance& inst = w.instance;
    if (opts.compute_opt && inst.n() > kMaxOptNodes)
        throw ResourceLimitError("--opt needs n <= " + std::to_string(kMaxOptNodes));

    const Mapping initial = w.initial_mapping();
    EngineOptions eo;
    eo.algorithm = opts.algorithm;
    eo.graver_max_k = opts.graver_max_k;
    Engine engine(initial, eo);
    EventAuditor auditor(opts, inst);
    engine.set_observer(std::ref(auditor));

    Report rep;
    rep.instance = inst;
    rep.algorithm = opts.algorithm;
    if (auto* spec = std::get_if<GeneratorSpec>(&w.source))
        rep.generator = *spec;

    auto source = w.open();
    while (auto r = source->next(engine.mapping())) {
        rep.requests.push_back(*r);
        engine.serve(*r);
        if (opts.verify)
            engine.check_invariants();
    }

    const CostLedger& ledger = engine.ledger();
    rep.communication = ledger.communication();
    rep.migration = ledger.migration();
    rep.events = engine.log();
    for (const auto& e : rep.events)
        if (e.tag == StepTag::paid_remap) {
            ++rep.affected_histogram[e.affected];
            rep.f_obs = std::max(rep.f_obs, e.affected);
        }
    rep.phase_bound = checked_mul(inst.n() - 1, 1 + static_cast<Int>(inst.k) * rep.f_obs);
    rep.graver_max_norm1 = auditor.max_norm1();
    rep.max_delta = auditor.max_delta();

    std::vector<RequestRange> completed;
    for (const PhaseCost& ph : ledger.phases()) {
        rep.phases.push_back(PhaseRow{ph, std::nullopt});
        if (ph.completed)
            completed.push_back({ph.first_request, ph.end_request});
    }

    if (opts.compute_opt) {
        rep.opt_cost = opt_cost(inst, initial, rep.requests);
        auto certs = opt_per_phase_lower_bound(inst, rep.requests, completed);
        std::size_t next = 0;
        for (auto& row : rep.phases)
            if (row.cost.completed)
                row.opt_certified = certs[next++];
    }

    if (opts.verify) {
        if (!ledger.consistent())
            throw InvariantError("ledger totals disagree with phase rows");
        for (const auto& row : rep.phases) {
            if (row.cost.total() > rep.phase_bound)
                throw InvariantError("phase " + std::to_string(row.cost.phase) + " cost " +
                                     std::to_string(row.cost.total()) + " exceeds the bound " +
                                     std::to_string(rep.phase_bound));
            if (row.cost.merges > inst.n() - 1)
                throw InvariantError("phase " + std::to_string(row.cost.phase) + " has more than n - 1 merges");
            if (row.opt_certified == false)
                throw InvariantError("completed phase " + std::to_string(row.cost.phase) +
                                     " admits a mapping that splits none of its requests");
        }
    }
    return rep;
}

std::string exact_ratio(Int num, Int den) {
    if (den == 0)
        throw InputError("ratio with zero denominator");
    Int g = std::gcd(num, den);
    return std::to_string(num / g) + "/" + std::to_string(den / g);
}

std::string decimal_ratio(Int num, Int den) {
    if (den <= 0 || num < 0)
        throw InputError("decimal_ratio expects num >= 0 and den > 0");
    constexpr Int scale = 1'000'000;
    Int whole = num / den;
    Int frac = ((num % den) * scale * 2 + den) / (2 * den);
    if (frac == scale) {
        ++whole;
        frac = 0;
    }
    std::string f = std::to_string(frac);
    return std::to_string(whole) + "." + std::string(6 - f.size(), '0') + f;
}

nlohmann::ordered_json report_to_json(const Report& r) {
    nlohmann::ordered_json j;
    j["instance"] = {{"k", r.instance.k}, {"l", r.instance.l}, {"n", r.instance.n()}};
    j["algorithm"] = std::string(to_string(r.algorithm));
    if (r.generator)
        j["workload"] = {{"source", "generator"},
                         {"kind", std::string(to_string(r.generator->kind))},
                         {"length", r.generator->length},
                         {"seed", r.generator->seed}};
    else
        j["workload"] = {{"source", "static"}};
    j["requests"] = r.requests.size();
    j["totals"] = {{"communication", r.communication}, {"migration", r.migration}, {"total", r.total()}};

    auto phases = nlohmann::ordered_json::array();
    for (const auto& row : r.phases) {
        nlohmann::ordered_json p;
        p["phase"] = row.cost.phase;
        p["first_request"] = row.cost.first_request;
        p["end_request"] = row.cost.end_request;
        p["completed"] = row.cost.completed;
        p["communication"] = row.cost.communication;
        p["migration"] = row.cost.migration;
        p["total"] = row.cost.total();
        p["merges"] = row.cost.merges;
        p["remap_events"] = row.cost.remap_events;
        p["max_affected"] = row.cost.max_affected;
        p["bound"] = r.phase_bound;
        if (row.opt_certified)
            p["opt_at_least_one"] = *row.opt_certified;
        phases.push_back(std::move(p));
    }
    j["phases"] = std::move(phases);

    auto hist = nlohmann::ordered_json::array();
    for (const auto& [affected, count] : r.affected_histogram)
        hist.push_back({{"affected", affected}, {"events", count}});
    j["remap_histogram"] = std::move(hist);
    j["f_obs"] = r.f_obs;
    j["phase_bound"] = r.phase_bound;

    nlohmann::ordered_json g;
    g["max_g_norm1"] = r.graver_max_norm1 ? nlohmann::ordered_json(*r.graver_max_norm1) : nullptr;
    g["max_delta"] = r.max_delta ? nlohmann::ordered_json(*r.max_delta) : nullptr;
    j["graver"] = std::move(g);

    if (r.opt_cost) {
        nlohmann::ordered_json o;
        o["cost"] = *r.opt_cost;
        if (*r.opt_cost > 0) {
            o["ratio"] = exact_ratio(r.total(), *r.opt_cost);
            o["ratio_decimal"] = decimal_ratio(r.total(), *r.opt_cost);
        } else {
            o["ratio"] = nullptr;
            o["ratio_decimal"] = nullptr;
        }
        j["opt"] = std::move(o);
    }
    return j;
}

std::string report_to_csv(const Report& r) {
    std::ostringstream out;
    out << "phase,first_request,end_request,completed,communication,migration,total,merges,remap_events,"
           "max_affected,bound,opt_at_least_one\n";
    for (const auto& row : r.phases) {
        const PhaseCost& c = row.cost;
        out << c.phase << ',' << c.first_request << ',' << c.end_request << ',' << (c.completed ? 1 : 0) << ','
            << c.communication << ',' << c.migration << ',' << c.total() << ',' << c.merges << ','
            << c.remap_events << ',' << c.max_affected << ',' << r.phase_bound << ',';
        if (row.opt_certified)
            out << (*row.opt_certified ? 1 : 0);
        out << '\n';
    }
    return out.str();
}

std::string event_log_jsonl(const std::vector<EventLogEntry>& events) {
    std::string out;
    for (const auto& e : events) {
        nlohmann::ordered_json j;
        j["phase"] = e.phase;
        j["request"] = e.request;
        j["pair"] = {e.pair.u, e.pair.v};
        j["outcome-tag"] = std::string(to_string(e.tag));
        j["comm-cost"] = e.communication;
        j["moves"] = e.moves;
        j["affected"] = e.affected;
        j["g-norm"] = e.graver_norm ? nlohmann::ordered_json(*e.graver_norm) : nullptr;
        out += j.dump();
        out += '\n';
    }
    return out;
}

} // namespace repart
