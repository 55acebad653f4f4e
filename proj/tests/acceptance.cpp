// Acceptance run: one [PASS]/[FAIL] line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#include "oracles.hpp"
#include "repart/config.hpp"
#include "repart/engine.hpp"
#include "repart/experiment.hpp"
#include "repart/graver.hpp"
#include "repart/opt.hpp"
#include "repart/rng.hpp"
#include "repart/workload.hpp"

using namespace repart;

namespace {

struct Outcome {
    bool passed = true;
    std::string detail;

    void fail(const std::string& why) {
        if (passed)
            detail = why;
        passed = false;
    }
};

template <class F>
void for_each_pseudo(int k_max, F&& f) {
    for (int k = 1; k <= k_max; ++k)
        for (const IntVec& pc : oracle::configurations(k, 2 * k))
            f(k, pc, ConfigMatrix(config_space(k), pc));
}

Outcome partition_counts() {
    Outcome o;
    const std::int64_t expected[] = {1, 2, 3, 5, 7, 11, 15, 22, 30, 42};
    const auto start = std::chrono::steady_clock::now();
    for (int k = 1; k <= 10; ++k) {
        const auto n = static_cast<std::int64_t>(ConfigSpace(k).size());
        if (n != oracle::partitions(k, k) || n != expected[k - 1])
            o.fail("k=" + std::to_string(k) + " gave " + std::to_string(n));
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= 1.0)
        o.fail("took " + std::to_string(secs) + " s");
    if (o.passed)
        o.detail = "1,2,3,5,7,11,15,22,30,42 for k=1..10";
    return o;
}

Outcome determinant_bound() {
    Outcome o;
    int matrices = 0;
    for_each_pseudo(5, [&](int k, const IntVec& pc, const ConfigMatrix& a) {
        const Int delta = max_subdeterminant(a);
        const Int cofactor = oracle::max_subdet(oracle::matrix_columns(k, pc));
        const auto bound = static_cast<Int>(std::ceil(std::exp(static_cast<long double>(k))));
        if (delta != cofactor)
            o.fail("pseudo " + to_string(pc) + ": Bareiss " + std::to_string(delta) + " vs cofactor " +
                   std::to_string(cofactor));
        if (delta > bound)
            o.fail("pseudo " + to_string(pc) + ": delta " + std::to_string(delta) + " > " + std::to_string(bound));
        ++matrices;
    });
    if (o.passed)
        o.detail = std::to_string(matrices) + " matrices, k<=5";
    return o;
}

Outcome graver_norm_bound() {
    Outcome o;
    std::size_t elements = 0;
    for_each_pseudo(5, [&](int k, const IntVec& pc, const ConfigMatrix& a) {
        auto g = cached_graver(a);
        const Int qd = static_cast<Int>(a.q()) * oracle::max_subdet(oracle::matrix_columns(k, pc));
        for (const IntVec& e : g->elements)
            for (Int v : e)
                if (std::abs(v) > qd)
                    o.fail("pseudo " + to_string(pc) + ": element " + to_string(e) + " exceeds " + std::to_string(qd));
        elements += g->elements.size();
    });
    if (o.passed)
        o.detail = std::to_string(elements) + " elements, k<=5";
    return o;
}

Outcome graver_equals_box() {
    Outcome o;
    int matrices = 0;
    for_each_pseudo(3, [&](int k, const IntVec& pc, const ConfigMatrix& a) {
        const auto cols = oracle::matrix_columns(k, pc);
        const auto box = oracle::graver_by_box(cols, static_cast<Int>(cols.size()) * oracle::max_subdet(cols));
        const auto g = compute_graver(a);
        if (std::set<IntVec>(g.elements.begin(), g.elements.end()) != box)
            o.fail("pseudo " + to_string(pc) + ": " + std::to_string(g.elements.size()) + " vs " +
                   std::to_string(box.size()) + " elements");
        ++matrices;
    });
    if (o.passed)
        o.detail = std::to_string(matrices) + " matrices, k<=3";
    return o;
}

Outcome decomposition() {
    Outcome o;
    SplitMix64 rng(500);
    int done = 0;
    for_each_pseudo(4, [&](int, const IntVec& pc, const ConfigMatrix& a) {
        auto g = cached_graver(a);
        const auto basis = kernel_lattice_basis(a);
        int made = 0;
        while (made < 500) {
            IntVec h(a.q(), 0);
            for (const IntVec& b : basis) {
                const Int c = rng.between(-3, 3);
                for (std::size_t i = 0; i < h.size(); ++i)
                    h[i] += c * b[i];
            }
            if (is_zero(h) || norm_inf(h) > 20)
                continue;
            ++made;
            IntVec sum(h.size(), 0);
            for (const IntVec& p : decompose(h, a, *g)) {
                if (!oracle::conformal_leq(p, h) || !g->contains(p))
                    o.fail("pseudo " + to_string(pc) + ": bad term " + to_string(p) + " of " + to_string(h));
                sum = added(sum, p);
            }
            if (sum != h)
                o.fail("pseudo " + to_string(pc) + ": terms do not sum to " + to_string(h));
        }
        done += made;
    });
    if (o.passed)
        o.detail = std::to_string(done) + " vectors, 500 per pseudo, k<=4";
    return o;
}

// Runs a random simulation and hands every remap to `f`.
template <class F>
void simulate(const Instance& inst, GeneratorKind kind, std::int64_t len, std::uint64_t seed, F&& f) {
    Engine eng(inst);
    eng.set_observer([&](const RemapContext& ctx) { f(ctx); });
    auto src = make_generator(inst, GeneratorSpec{kind, len, seed});
    while (auto r = src->next(eng.mapping()))
        eng.serve(*r);
    eng.check_invariants();
}

Outcome target_norms() {
    Outcome o;
    SplitMix64 rng(6);
    std::int64_t events = 0;
    for (int sim = 0; sim < 1000; ++sim) {
        const Instance inst(static_cast<int>(rng.between(1, 4)), static_cast<int>(rng.between(2, 8)));
        const auto kind = static_cast<GeneratorKind>(rng.below(3));
        simulate(inst, kind, 30, rng.next(), [&](const RemapContext& ctx) {
            auto any = solve_any_target(ctx.matrix, ctx.state.u);
            auto brute = brute_force_min_target(ctx.state.x, ctx.matrix, ctx.state.u);
            const IntVec* none = nullptr;
            for (const IntVec* y : {any ? &*any : none, brute ? &brute->y : none, &ctx.plan.target}) {
                if (!y)
                    o.fail("solver found no target for a feasible merge");
                else if (norm1(*y) != inst.l)
                    o.fail("target " + to_string(*y) + " has norm " + std::to_string(norm1(*y)));
            }
            ++events;
        });
    }
    if (o.passed)
        o.detail = std::to_string(events) + " remap events, 1000 simulations, k<=4, l<=8";
    return o;
}

Outcome min_remap_oracles() {
    Outcome o;
    std::int64_t states = 0, sampled = 0, third = 0;

    // Exhaustive: every pseudo and every multiset of untouched configurations.
    for_each_pseudo(3, [&](int k, const IntVec& pc, const ConfigMatrix& a) {
        auto g = cached_graver(a);
        const std::size_t kinds = config_space(k).size();
        for (int l = 2; l <= 5; ++l) {
            IntVec x(a.q(), 0);
            x.back() = 1;
            std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
                if (i + 1 == kinds) {
                    x[i] = left;
                    const SystemState s{x, a.multiply(x)};
                    auto brute = brute_force_min_target(s.x, a, s.u);
                    auto scan = graver_min_target(a, s, *g);
                    if (brute.has_value() != scan.has_value() || (brute && brute->distance != scan->distance))
                        o.fail("pseudo " + to_string(pc) + " x=" + to_string(x) + ": distances differ");
                    states += brute.has_value();
                    return;
                }
                for (int c = left; c >= 0; --c) {
                    x[i] = c;
                    rec(i + 1, left - c);
                }
            };
            rec(0, l - 2);
        }
    });

    // Sampled: remap events from simulations at k = 4.
    SplitMix64 rng(7);
    while (sampled < 1000) {
        const Instance inst(4, static_cast<int>(rng.between(2, 6)));
        simulate(inst, static_cast<GeneratorKind>(rng.below(3)), 25, rng.next(), [&](const RemapContext& ctx) {
            auto brute = brute_force_min_target(ctx.state.x, ctx.matrix, ctx.state.u);
            if (!brute || brute->distance != ctx.plan.distance)
                o.fail("k=4 event: Graver distance " + std::to_string(ctx.plan.distance) + " vs brute force");
            ++sampled;
        });
    }

    // Third oracle: fewest changed clusters over all component-preserving mappings.
    const std::pair<int, int> shapes[] = {{2, 2}, {2, 3}, {2, 4}, {3, 2}, {4, 2}};
    for (auto [k, l] : shapes)
        for (std::uint64_t seed = 0; seed < 30; ++seed)
            simulate(Instance(k, l), static_cast<GeneratorKind>(seed % 3), 20, seed, [&](const RemapContext& ctx) {
                std::vector<int> assign(ctx.mapping.assignment().begin(), ctx.mapping.assignment().end());
                const int best = oracle::min_changed_clusters(k, l, assign, ctx.merged.canonical_labels());
                if ((ctx.plan.distance + 1) / 2 != best || ctx.plan.affected_count() != best)
                    o.fail("k=" + std::to_string(k) + " l=" + std::to_string(l) + ": distance " +
                           std::to_string(ctx.plan.distance) + ", oracle " + std::to_string(best) + " clusters");
                ++third;
            });

    if (o.passed)
        o.detail = std::to_string(states) + " exhaustive states, " + std::to_string(sampled) + " k=4 events, " +
                   std::to_string(third) + " n<=8 events";
    return o;
}

Outcome k2_two_clusters() {
    Outcome o;
    for (const IntVec& pc : oracle::configurations(2, 4)) {
        auto g = compute_graver(ConfigMatrix(config_space(2), pc));
        for (const IntVec& e : g.elements)
            if (norm1(e) != 3)
                o.fail("pseudo " + to_string(pc) + " has element " + to_string(e));
    }
    std::int64_t events = 0;
    for (int l = 2; l <= 10; ++l)
        for (std::uint64_t seed = 0; seed < 20; ++seed)
            simulate(Instance(2, l), static_cast<GeneratorKind>(seed % 3), 80, seed, [&](const RemapContext& ctx) {
                if (ctx.plan.affected_count() != 2)
                    o.fail("l=" + std::to_string(l) + ": remap affected " + std::to_string(ctx.plan.affected_count()));
                ++events;
            });
    if (o.passed)
        o.detail = std::to_string(events) + " remap events, all affecting 2 clusters";
    return o;
}

Outcome phase_bound() {
    Outcome o;
    SplitMix64 rng(9);
    int phases = 0, certified = 0;
    for (int sim = 0; sim < 300; ++sim) {
        const int k = static_cast<int>(rng.between(1, 5));
        const int l = static_cast<int>(rng.between(2, 6));
        const bool small = k * l <= 8;
        ExperimentOptions opts;
        opts.algorithm = sim % 2 ? Algorithm::comp_any : Algorithm::comp_min;
        opts.compute_opt = small;
        const auto kind = static_cast<GeneratorKind>(rng.below(3));
        const Report rep = run_experiment(generate_workload(kind, Instance(k, l), 60, rng.next()), opts);
        const Int bound = static_cast<Int>(l * k - 1) * (1 + static_cast<Int>(k) * rep.f_obs);
        if (bound != rep.phase_bound)
            o.fail("reported bound differs");
        std::vector<RequestRange> done;
        for (const auto& row : rep.phases) {
            ++phases;
            if (row.cost.total() > bound)
                o.fail("phase cost " + std::to_string(row.cost.total()) + " > " + std::to_string(bound));
            if (row.cost.completed)
                done.push_back({row.cost.first_request, row.cost.end_request});
        }
        if (!small)
            continue;
        // Independent recheck: every valid mapping splits some request of each completed phase.
        const auto maps = oracle::all_mappings(k, l);
        for (const RequestRange& ph : done) {
            bool all_split = true;
            for (const auto& m : maps) {
                bool split = false;
                for (auto i = ph.first; i < ph.end && !split; ++i) {
                    const Request& r = rep.requests[static_cast<std::size_t>(i)];
                    split = m[static_cast<std::size_t>(r.u)] != m[static_cast<std::size_t>(r.v)];
                }
                all_split = all_split && split;
            }
            if (!all_split)
                o.fail("completed phase without an offline cost");
            ++certified;
        }
        for (const auto& row : rep.phases)
            if (row.cost.completed && row.opt_certified != true)
                o.fail("opt_per_phase_lower_bound returned false");
    }
    if (o.passed)
        o.detail = std::to_string(phases) + " phases within bound, " + std::to_string(certified) +
                   " completed phases certified";
    return o;
}

Outcome golden() {
    Outcome o;
    const char* text = R"({"k": 2, "l": 2, "nodes": ["a", "b", "c", "d"], "initial": [0, 0, 1, 1],
                           "requests": [["a", "c"], ["a", "c"], ["a", "c"], ["a", "c"], ["a", "c"]]})";
    ExperimentOptions opts;
    opts.compute_opt = true;
    opts.verify = true;
    const Report rep = run_experiment(parse_workload(text), opts);
    const std::string first = report_to_json(rep).dump();
    const std::string second = report_to_json(run_experiment(parse_workload(text), opts)).dump();
    const auto j = report_to_json(rep);
    if (rep.total() != 3)
        o.fail("COMP cost " + std::to_string(rep.total()));
    if (!rep.opt_cost || *rep.opt_cost != 2)
        o.fail("OPT cost wrong");
    if (oracle::opt(2, 2, {0, 0, 1, 1}, rep.requests) != 2)
        o.fail("oracle OPT disagrees");
    if (j["opt"]["ratio"] != "3/2")
        o.fail("ratio " + j["opt"]["ratio"].dump());
    if (first != second)
        o.fail("report JSON differs between runs");
    if (o.passed)
        o.detail = "COMP 3, OPT 2, ratio 3/2, identical JSON";
    return o;
}

} // namespace

int main() {
    struct Criterion {
        const char* name;
        Outcome (*run)();
    };
    const Criterion criteria[] = {
        {"partition counts", partition_counts},
        {"determinant bound", determinant_bound},
        {"Graver infinity-norm bound", graver_norm_bound},
        {"Graver basis equals box enumeration", graver_equals_box},
        {"conformal decomposition", decomposition},
        {"valid-target norm", target_norms},
        {"min-remap oracle equality", min_remap_oracles},
        {"k=2 remaps affect two clusters", k2_two_clusters},
        {"per-phase bound and OPT certificates", phase_bound},
        {"end-to-end golden", golden},
    };
    int failed = 0, index = 0;
    for (const auto& c : criteria) {
        ++index;
        Outcome o;
        const auto start = std::chrono::steady_clock::now();
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] %2d %s: %s (%.2f s)\n", o.passed ? "PASS" : "FAIL", index, c.name, o.detail.c_str(), secs);
        failed += !o.passed;
    }
    std::printf("%d/%d criteria passed\n", index - failed, index);
    return failed == 0 ? 0 : 1;
}
