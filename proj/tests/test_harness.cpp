#include "doctest.h"
#include "oracles.hpp"
#include "repart/errors.hpp"
#include "repart/experiment.hpp"
#include "repart/verify.hpp"
#include "repart/workload.hpp"

using namespace repart;

namespace {

std::vector<Request> drain(const Workload& w) {
    auto src = w.open();
    Mapping m = w.initial_mapping();
    std::vector<Request> out;
    while (auto r = src->next(m))
        out.push_back(*r);
    return out;
}

const char* kSwap = R"({"k": 2, "l": 2, "nodes": ["a", "b", "c", "d"], "initial": [0, 0, 1, 1],
                        "requests": [["a", "c"], ["a", "c"], ["a", "c"], ["a", "c"], ["a", "c"]]})";

} // namespace

TEST_CASE("uniform-random is deterministic per seed") {
    const Instance inst(3, 3);
    auto w1 = generate_workload(GeneratorKind::uniform_random, inst, 200, 42);
    auto w2 = generate_workload(GeneratorKind::uniform_random, inst, 200, 42);
    auto w3 = generate_workload(GeneratorKind::uniform_random, inst, 200, 43);
    const auto r1 = drain(w1);
    CHECK(r1.size() == 200);
    CHECK(r1 == drain(w2));
    CHECK(r1 != drain(w3));
    for (const Request& r : r1) {
        CHECK(r.u < r.v);
        CHECK(r.v < inst.n());
    }
    CHECK_FALSE(w1.adaptive());
    CHECK_THROWS_AS(generate_workload(GeneratorKind::uniform_random, inst, -1, 0), InputError);
    CHECK_THROWS_AS(parse_generator_kind("zipf"), InputError);
}

TEST_CASE("split-probe always requests a split pair") {
    const Instance inst(2, 2);
    Engine eng(inst);
    auto src = make_generator(inst, GeneratorSpec{GeneratorKind::split_probe, 30, 0});
    while (auto r = src->next(eng.mapping())) {
        CHECK(eng.mapping().cluster_of(r->u) != eng.mapping().cluster_of(r->v));
        StepOutcome out = eng.serve(*r);
        CHECK(out.communication == 1);
        CHECK((out.tag == StepTag::paid_remap || out.tag == StepTag::phase_reset));
    }
    CHECK(eng.requests_served() == 30);
}

TEST_CASE("merge-chain forces a phase reset") {
    for (int k = 2; k <= 4; ++k) {
        const Instance inst(k, 2);
        auto w = generate_workload(GeneratorKind::merge_chain, inst, inst.n(), 1);
        Report rep = run_experiment(w, {});
        CAPTURE(k);
        CHECK(rep.phases.size() >= 2);
        CHECK(rep.phases.front().cost.completed);
    }
}

TEST_CASE("workload files") {
    Workload w = parse_workload(kSwap);
    CHECK(w.instance == Instance(2, 2));
    CHECK(drain(w) == std::vector<Request>(5, Request{0, 2}));
    CHECK(parse_workload(workload_to_json(w)).initial == w.initial);
    CHECK(workload_to_json(parse_workload(workload_to_json(w))) == workload_to_json(w));

    CHECK_THROWS_AS(parse_workload("{"), InputError);
    CHECK_THROWS_AS(parse_workload(R"({"k": 2, "l": 2})"), InputError);
    CHECK_THROWS_AS(parse_workload(R"({"k": 2, "l": 2, "requests": [[0, 4]]})"), InputError);
    CHECK_THROWS_AS(parse_workload(R"({"k": 2, "l": 2, "requests": [[1, 1]]})"), InputError);
    CHECK_THROWS_AS(parse_workload(R"({"k": 2, "l": 2, "requests": [[0]]})"), InputError);
    CHECK_THROWS_AS(parse_workload(R"({"k": 2, "l": 2, "initial": [0, 0, 0, 1], "requests": []})"), InputError);
    CHECK_THROWS_AS(parse_workload(R"({"k": 0, "l": 2, "requests": []})"), InputError);
    CHECK_THROWS_AS(parse_workload(R"({"k": 2, "l": 2, "nodes": ["a"], "requests": []})"), InputError);
    CHECK_THROWS_AS(load_workload_file("/nonexistent/workload.json"), InputError);
    CHECK_THROWS_AS(workload_to_json(generate_workload(GeneratorKind::split_probe, Instance(2, 2), 3, 0)),
                    InputError);
}

TEST_CASE("golden swap report") {
    ExperimentOptions opts;
    opts.compute_opt = true;
    opts.verify = true;
    const Report rep = run_experiment(parse_workload(kSwap), opts);
    CHECK(rep.total() == 3);
    REQUIRE(rep.opt_cost);
    CHECK(*rep.opt_cost == 2);
    const auto j = report_to_json(rep);
    CHECK(j["opt"]["ratio"] == "3/2");
    CHECK(j["opt"]["ratio_decimal"] == "1.500000");
    CHECK(j["f_obs"] == 2);
    CHECK(j["phase_bound"] == 15);
    CHECK(j["graver"]["max_g_norm1"] == 3);
    CHECK(j.dump() == report_to_json(run_experiment(parse_workload(kSwap), opts)).dump());

    const std::string log = event_log_jsonl(rep.events);
    CHECK(log.rfind(R"({"phase":0,"request":0,"pair":[0,2],"outcome-tag":"paid-remap","comm-cost":1,"moves":2,)"
                    R"("affected":2,"g-norm":3})",
                    0) == 0);
    CHECK(std::count(log.begin(), log.end(), '\n') == 5);
}

TEST_CASE("empty workload gives a zero report") {
    const ExperimentOptions opts{Algorithm::comp_min, true, true};
    const Report rep = run_experiment(parse_workload(R"({"k": 2, "l": 3, "requests": []})"), opts);
    CHECK(rep.total() == 0);
    CHECK(rep.opt_cost == 0);
    CHECK(rep.f_obs == 0);
    const auto j = report_to_json(rep);
    CHECK(j["opt"]["ratio"].is_null());
    CHECK(rep.phases.size() == 1);
}

TEST_CASE("ratios") {
    CHECK(exact_ratio(3, 2) == "3/2");
    CHECK(exact_ratio(10, 4) == "5/2");
    CHECK(exact_ratio(0, 7) == "0/1");
    CHECK(decimal_ratio(3, 2) == "1.500000");
    CHECK(decimal_ratio(2, 3) == "0.666667");
    CHECK(decimal_ratio(1, 3) == "0.333333");
    CHECK(decimal_ratio(1, 8000000) == "0.000000");
    CHECK(decimal_ratio(1, 2000000) == "0.000001");
    CHECK(decimal_ratio(1999999, 1000000) == "1.999999");
    CHECK(decimal_ratio(19999999, 10000000) == "2.000000");
    CHECK_THROWS_AS(exact_ratio(1, 0), InputError);
}

TEST_CASE("csv report") {
    Report rep = run_experiment(generate_workload(GeneratorKind::merge_chain, Instance(2, 2), 6, 0), {});
    const std::string csv = report_to_csv(rep);
    CHECK(csv.rfind("phase,first_request,end_request,completed", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(rep.phases.size() + 1));
}

TEST_CASE("verified experiments across generators and algorithms") {
    for (auto alg : {Algorithm::comp_min, Algorithm::comp_any})
        for (auto kind : {GeneratorKind::uniform_random, GeneratorKind::merge_chain, GeneratorKind::split_probe})
            for (std::uint64_t seed = 0; seed < 4; ++seed) {
                ExperimentOptions opts{alg, true, true};
                Report rep = run_experiment(generate_workload(kind, Instance(2, 4), 40, seed), opts);
                for (const auto& row : rep.phases) {
                    CHECK(row.cost.total() <= rep.phase_bound);
                    if (row.cost.completed)
                        CHECK(row.opt_certified == true);
                }
                CHECK(rep.total() >= *rep.opt_cost);
            }
    CHECK_THROWS_AS(run_experiment(generate_workload(GeneratorKind::uniform_random, Instance(2, 5), 5, 0),
                                   ExperimentOptions{Algorithm::comp_min, true, false}),
                    ResourceLimitError);
}

TEST_CASE("verify suite") {
    VerifyReport r2 = verify_suite(2);
    CHECK(r2.passed());
    REQUIRE(r2.levels.size() == 2);
    CHECK(r2.levels[1].max_g_norm1 == 3);
    CHECK(r2.levels[1].pseudo_configurations == 3);
    VerifyReport r3 = verify_suite(3);
    CHECK(r3.passed());
    CHECK(r3.levels[2].configurations == 3);
    CHECK_THROWS_AS(verify_suite(6), ResourceLimitError);
    CHECK_THROWS_AS(verify_suite(0), InputError);
    for (int n = 0; n <= 12; ++n)
        CHECK(count_partitions(n, n) == oracle::partitions(n, n));
}

TEST_CASE("configs and graver reports") {
    CHECK(configs_report(4)["count"] == 5);
    CHECK(parse_pseudo(2, "2,1") == IntVec{2, 1});
    CHECK_THROWS_AS(parse_pseudo(2, "2,2"), InputError);
    CHECK_THROWS_AS(parse_pseudo(2, "2"), InputError);
    CHECK_THROWS_AS(parse_pseudo(2, "x,1"), InputError);
    CHECK_THROWS_AS(parse_pseudo(2, "-2,3"), InputError);
    const auto g = graver_report(2, IntVec{2, 1});
    CHECK(g["size"] == 2);
    CHECK(g["bounds_ok"] == true);
    CHECK_THROWS_AS(graver_report(6, enumerate_pseudo_configurations(6)[0]), ResourceLimitError);
}
