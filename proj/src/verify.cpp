#include "repart/verify.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "repart/engine.hpp"
#include "repart/errors.hpp"
#include "repart/graver.hpp"
#include "repart/rng.hpp"

namespace repart {

bool VerifyReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

std::vector<CheckResult> VerifyReport::failures() const {
    std::vector<CheckResult> out;
    std::copy_if(checks.begin(), checks.end(), std::back_inserter(out), [](const CheckResult& c) { return !c.passed; });
    return out;
}

std::int64_t count_partitions(int n, int m) {
    if (n < 0 || m < 0)
        throw InputError("count_partitions needs nonnegative arguments");
    // table[j] = partitions of j into parts drawn from 1..part so far
    std::vector<std::int64_t> table(static_cast<std::size_t>(n) + 1, 0);
    table[0] = 1;
    for (int part = 1; part <= std::min(n, m); ++part)
        for (int j = part; j <= n; ++j)
            table[static_cast<std::size_t>(j)] += table[static_cast<std::size_t>(j - part)];
    return table[static_cast<std::size_t>(n)];
}

namespace {

std::string subject(int k, const Configuration& pseudo) {
    return "k=" + std::to_string(k) + " pseudo=" + to_string(pseudo);
}

class Recorder {
public:
    explicit Recorder(std::vector<CheckResult>& out) : out_(out) {}

    // One row per (tag, subject); the first failure's witness is kept.
    void fail(const std::string& tag, const std::string& subj, const std::string& witness) {
        CheckResult& row = row_for(tag, subj);
        if (row.passed) {
            row.passed = false;
            row.witness = witness;
        }
    }
    void pass(const std::string& tag, const std::string& subj) { row_for(tag, subj); }

private:
    CheckResult& row_for(const std::string& tag, const std::string& subj) {
        auto key = std::make_pair(tag, subj);
        auto it = index_.find(key);
        if (it != index_.end())
            return out_[it->second];
        index_.emplace(key, out_.size());
        out_.push_back(CheckResult{tag, subj, true, ""});
        return out_.back();
    }

    std::vector<CheckResult>& out_;
    std::map<std::pair<std::string, std::string>, std::size_t> index_;
};

void check_graver_properties(const GraverBasis& g, const ConfigMatrix& a, Recorder& rec, const std::string& subj) {
    const std::string tag = "graver-basis";
    rec.pass(tag, subj);
    for (const IntVec& e : g.elements) {
        if (is_zero(e))
            rec.fail(tag, subj, "zero element");
        if (!is_zero(a.multiply(e)))
            rec.fail(tag, subj, to_string(e) + " is not in the kernel");
        if (!g.contains(negated(e)))
            rec.fail(tag, subj, "negation of " + to_string(e) + " missing");
        for (const IntVec& f : g.elements)
            if (f != e && sqsubseteq(f, e))
                rec.fail(tag, subj, to_string(f) + " lies conformally below " + to_string(e));
    }
}

void fuzz_decompositions(const GraverBasis& g, const ConfigMatrix& a, int count, SplitMix64& rng, Recorder& rec,
                         const std::string& subj, std::int64_t& done) {
    const std::string tag = "decomposition";
    rec.pass(tag, subj);
    const std::vector<IntVec> basis = kernel_lattice_basis(a);
    int made = 0;
    for (int attempt = 0; made < count && attempt < 200 * count; ++attempt) {
        IntVec h(a.q(), 0);
        for (const IntVec& b : basis) {
            const Int c = rng.between(-3, 3);
            for (std::size_t i = 0; i < h.size(); ++i)
                h[i] = checked_add(h[i], checked_mul(c, b[i]));
        }
        if (is_zero(h) || norm_inf(h) > 20)
            continue;
        ++made;
        std::vector<IntVec> parts;
        try {
            parts = decompose(h, a, g);
        } catch (const std::exception& e) {
            rec.fail(tag, subj, to_string(h) + ": " + e.what());
            continue;
        }
        IntVec sum(h.size(), 0);
        for (const IntVec& p : parts) {
            if (!g.contains(p))
                rec.fail(tag, subj, to_string(h) + ": term " + to_string(p) + " is not a basis element");
            if (!sqsubseteq(p, h))
                rec.fail(tag, subj, to_string(h) + ": term " + to_string(p) + " is not conformal");
            sum = added(sum, p);
        }
        if (sum != h)
            rec.fail(tag, subj, to_string(h) + ": terms sum to " + to_string(sum));
    }
    done += made;
    if (made < count)
        rec.fail(tag, subj, "only " + std::to_string(made) + " kernel vectors generated");
}

// Runs all three target solvers on one state and cross-checks them.
void compare_solvers(const ConfigMatrix& a, const SystemState& s, int l, const GraverBasis& g, Recorder& rec,
                     const std::string& subj, std::int64_t& feasible) {
    auto any = solve_any_target(a, s.u);
    auto brute = brute_force_min_target(s.x, a, s.u);
    auto scan = graver_min_target(a, s, g);
    const std::string where = "x=" + to_string(s.x);
    if (!any) {
        if (brute || scan)
            rec.fail("min-remap", subj, where + ": solvers disagree on feasibility");
        return;
    }
    ++feasible;
    if (!brute || !scan) {
        rec.fail("min-remap", subj, where + ": solvers disagree on feasibility");
        return;
    }
    for (const IntVec* y : {&*any, &brute->y, &scan->target}) {
        if (!is_valid_target(*y, a, s.u))
            rec.fail("target-norm", subj, where + ": invalid target " + to_string(*y));
        if (norm1(*y) != l)
            rec.fail("target-norm", subj, where + ": target " + to_string(*y) + " has norm " +
                                              std::to_string(norm1(*y)));
    }
    if (brute->distance != scan->distance || brute->y != scan->target)
        rec.fail("min-remap", subj, where + ": Graver scan gives " + to_string(scan->target) + " at " +
                                        std::to_string(scan->distance) + ", brute force " + to_string(brute->y) +
                                        " at " + std::to_string(brute->distance));
}

// Every multiset of `clusters` configurations, as counts over the space.
template <class F>
void for_each_multiset(std::size_t kinds, Int clusters, IntVec& cur, std::size_t i, F&& f) {
    if (i + 1 == kinds) {
        cur[i] = clusters;
        f(cur);
        return;
    }
    for (Int c = clusters; c >= 0; --c) {
        cur[i] = c;
        for_each_multiset(kinds, clusters - c, cur, i + 1, f);
    }
}

SystemState state_from_counts(const ConfigMatrix& a, const IntVec& counts) {
    IntVec x = counts;
    x.push_back(1);
    IntVec u = a.multiply(x);
    return SystemState{std::move(x), std::move(u)};
}

} // namespace

VerifyReport verify_suite(int k_max, const VerifyOptions& opts) {
    if (k_max < 1)
        throw InputError("k-max must be at least 1");
    if (k_max > kMaxVerifyK)
        throw ResourceLimitError("verify is limited to k-max <= " + std::to_string(kMaxVerifyK));

    VerifyReport rep;
    rep.k_max = k_max;
    Recorder rec(rep.checks);
    SplitMix64 rng(opts.seed);

    for (int k = 1; k <= k_max; ++k) {
        VerifyLevel level;
        level.k = k;
        const ConfigSpace& space = config_space(k);
        level.configurations = space.size();
        const std::string ksubj = "k=" + std::to_string(k);

        const auto expected = count_partitions(k, k);
        if (static_cast<std::int64_t>(space.size()) == expected)
            rec.pass("partition-count", ksubj);
        else
            rec.fail("partition-count", ksubj, std::to_string(space.size()) + " configurations, expected " +
                                                   std::to_string(expected));

        const auto pseudos = enumerate_pseudo_configurations(k);
        level.pseudo_configurations = pseudos.size();
        std::vector<std::pair<ConfigMatrix, std::shared_ptr<const GraverBasis>>> matrices;
        for (const Configuration& pc : pseudos) {
            ConfigMatrix a(space, pc);
            const std::string subj = subject(k, pc);
            auto g = cached_graver(a, kMaxVerifyK);
            const BoundReport b = certify_bounds(*g, a, kMaxVerifyK);
            level.max_g_norm1 = std::max(level.max_g_norm1, b.max_norm1);
            level.max_delta = std::max(level.max_delta, b.delta);
            if (b.delta_ok)
                rec.pass("determinant-bound", subj);
            else
                rec.fail("determinant-bound", subj, "delta " + std::to_string(b.delta) + " > " +
                                                        std::to_string(b.ceil_e_k));
            if (b.norm_inf_ok)
                rec.pass("graver-norm-bound", subj);
            else
                rec.fail("graver-norm-bound", subj, "max |g_i| " + std::to_string(b.max_norm_inf) + " > " +
                                                        std::to_string(b.q_delta));
            check_graver_properties(*g, a, rec, subj);
            fuzz_decompositions(*g, a, opts.decompositions_per_pseudo, rng, rec, subj, level.decompositions);
            rec.pass("target-norm", subj);
            rec.pass("min-remap", subj);
            matrices.emplace_back(std::move(a), std::move(g));
        }

        if (k <= opts.exhaustive_max_k) {
            for (auto& [a, g] : matrices) {
                const std::string subj = subject(k, a.pseudo());
                for (int l = 2; l <= opts.exhaustive_max_l; ++l) {
                    IntVec counts(space.size(), 0);
                    for_each_multiset(space.size(), l - 2, counts, 0, [&](const IntVec& c) {
                        compare_solvers(a, state_from_counts(a, c), l, *g, rec, subj, level.remap_states);
                    });
                }
            }
        } else {
            int found = 0;
            for (int attempt = 0; found < opts.sampled_states_per_k && attempt < 50 * opts.sampled_states_per_k;
                 ++attempt) {
                auto& [a, g] = matrices[rng.below(matrices.size())];
                const int l = static_cast<int>(rng.between(2, opts.sampled_max_l));
                IntVec counts(space.size(), 0);
                for (int i = 0; i < l - 2; ++i)
                    ++counts[rng.below(space.size())];
                const SystemState s = state_from_counts(a, counts);
                if (!solve_any_target(a, s.u))
                    continue;
                ++found;
                compare_solvers(a, s, l, *g, rec, subject(k, a.pseudo()), level.remap_states);
            }
        }
        rep.levels.push_back(level);
    }
    return rep;
}

nlohmann::ordered_json verify_to_json(const VerifyReport& r) {
    nlohmann::ordered_json j;
    j["k_max"] = r.k_max;
    j["passed"] = r.passed();
    auto levels = nlohmann::ordered_json::array();
    for (const VerifyLevel& l : r.levels)
        levels.push_back({{"k", l.k},
                          {"configurations", l.configurations},
                          {"pseudo_configurations", l.pseudo_configurations},
                          {"max_g_norm1", l.max_g_norm1},
                          {"max_delta", l.max_delta},
                          {"ceil_e_k", ceil_exp(l.k)},
                          {"decompositions", l.decompositions},
                          {"remap_states", l.remap_states}});
    j["levels"] = std::move(levels);
    std::map<std::string, std::pair<int, int>> tally;  // tag -> (passed, total)
    for (const CheckResult& c : r.checks) {
        auto& t = tally[c.tag];
        t.first += c.passed;
        ++t.second;
    }
    auto checks = nlohmann::ordered_json::object();
    for (const auto& [tag, t] : tally)
        checks[tag] = {{"passed", t.first}, {"total", t.second}};
    j["checks"] = std::move(checks);
    auto failures = nlohmann::ordered_json::array();
    for (const CheckResult& c : r.failures())
        failures.push_back({{"tag", c.tag}, {"subject", c.subject}, {"witness", c.witness}});
    j["failures"] = std::move(failures);
    return j;
}

nlohmann::ordered_json configs_report(int k) {
    const ConfigSpace& space = config_space(k);
    nlohmann::ordered_json j;
    j["k"] = k;
    j["count"] = space.size();
    auto list = nlohmann::ordered_json::array();
    for (const Configuration& c : space.configurations())
        list.push_back(c);
    j["configurations"] = std::move(list);
    return j;
}

Configuration parse_pseudo(int k, const std::string& text) {
    Configuration c;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(item, &used);
        } catch (const std::exception&) {
            throw InputError("pseudo entry '" + item + "' is not an integer");
        }
        if (used != item.size() && item.find_first_not_of(" \t", used) != std::string::npos)
            throw InputError("pseudo entry '" + item + "' is not an integer");
        if (v < 0)
            throw InputError("pseudo entries must be nonnegative");
        c.push_back(v);
    }
    if (static_cast<int>(c.size()) != k)
        throw InputError("pseudo needs exactly k=" + std::to_string(k) + " entries, got " + std::to_string(c.size()));
    if (nd(c) != 2 * static_cast<Int>(k))
        throw InputError("pseudo " + to_string(c) + " must have weighted size 2k=" + std::to_string(2 * k));
    return c;
}

nlohmann::ordered_json graver_report(int k, const Configuration& pseudo) {
    if (k > kMaxVerifyK)
        throw ResourceLimitError("graver is limited to k <= " + std::to_string(kMaxVerifyK));
    ConfigMatrix a(config_space(k), pseudo);
    auto g = cached_graver(a, kMaxVerifyK);
    const BoundReport b = certify_bounds(*g, a, kMaxVerifyK);

    nlohmann::ordered_json j;
    j["k"] = k;
    j["pseudo"] = pseudo;
    j["q"] = a.q();
    auto cols = nlohmann::ordered_json::array();
    for (std::size_t c = 0; c < a.q(); ++c)
        cols.push_back(a.column(c));
    j["columns"] = std::move(cols);
    j["size"] = g->elements.size();
    j["max_norm1"] = b.max_norm1;
    j["max_norm_inf"] = b.max_norm_inf;
    j["delta"] = b.delta;
    j["q_delta"] = b.q_delta;
    j["ceil_e_k"] = b.ceil_e_k;
    j["bounds_ok"] = b.passed();
    auto elems = nlohmann::ordered_json::array();
    for (const IntVec& e : g->elements)
        elems.push_back(e);
    j["elements"] = std::move(elems);
    return j;
}

} // namespace repart
