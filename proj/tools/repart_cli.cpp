// repart: command-line front end for the repartitioning engine.
//
//   repart configs --k K
//   repart graver --k K --pseudo "c1,...,ck"
//   repart simulate --workload FILE | --gen KIND --len N --seed S --k K --l L
//                   [--algorithm comp-min|comp-any] [--opt] [--verify]
//                   [--format json|csv] [--events FILE]
//   repart opt --workload FILE
//   repart verify --k-max K
//
// Exit codes: 0 success, 1 bad input, 2 resource limit, 3 invariant failure.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "repart/errors.hpp"
#include "repart/experiment.hpp"
#include "repart/opt.hpp"
#include "repart/verify.hpp"
#include "repart/workload.hpp"

namespace {

enum Exit { ok = 0, input_error = 1, resource_limit = 2, invariant_failure = 3 };

struct SimulateArgs {
    std::string workload;
    std::string gen;
    std::int64_t len = 0;
    std::uint64_t seed = 0;
    int k = 0;
    int l = 0;
    std::string algorithm = "comp-min";
    bool opt = false;
    bool verify = false;
    std::string format = "json";
    std::string events;
};

int run_simulate(const SimulateArgs& a) {
    using namespace repart;
    Workload w = [&] {
        if (!a.workload.empty()) {
            if (!a.gen.empty())
                throw InputError("--workload and --gen are mutually exclusive");
            return load_workload_file(a.workload);
        }
        if (a.gen.empty())
            throw InputError("simulate needs --workload FILE or --gen KIND");
        if (a.k == 0 || a.l == 0)
            throw InputError("--gen needs --k and --l");
        return generate_workload(parse_generator_kind(a.gen), Instance(a.k, a.l), a.len, a.seed);
    }();

    ExperimentOptions opts;
    opts.algorithm = parse_algorithm(a.algorithm);
    opts.compute_opt = a.opt;
    opts.verify = a.verify;
    const Report rep = run_experiment(w, opts);

    if (!a.events.empty()) {
        std::ofstream out(a.events);
        if (!out)
            throw InputError("cannot write event log '" + a.events + "'");
        out << event_log_jsonl(rep.events);
    }
    if (a.format == "csv")
        std::cout << report_to_csv(rep);
    else
        std::cout << report_to_json(rep).dump(2) << '\n';
    return ok;
}

int run_opt(const std::string& path) {
    using namespace repart;
    const Workload w = load_workload_file(path);
    const auto* list = std::get_if<std::vector<Request>>(&w.source);
    const Int cost = opt_cost(w.instance, w.initial_mapping(), *list);
    nlohmann::ordered_json j;
    j["k"] = w.instance.k;
    j["l"] = w.instance.l;
    j["requests"] = list->size();
    j["opt"] = cost;
    std::cout << j.dump(2) << '\n';
    return ok;
}

int run_verify(int k_max) {
    const repart::VerifyReport rep = repart::verify_suite(k_max);
    std::cout << repart::verify_to_json(rep).dump(2) << '\n';
    for (const auto& f : rep.failures())
        std::cerr << "FAIL [" << f.tag << "] " << f.subject << ": " << f.witness << '\n';
    return rep.passed() ? ok : invariant_failure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Online repartitioning of communicating nodes into fixed-size clusters"};
    app.require_subcommand(1);

    int configs_k = 0;
    auto* configs = app.add_subcommand("configs", "List the configurations for cluster size k");
    configs->add_option("--k", configs_k, "Cluster size")->required()->check(CLI::Range(1, 12));

    int graver_k = 0;
    std::string pseudo;
    auto* graver = app.add_subcommand("graver", "Graver basis and bound certificate for one pseudo configuration");
    graver->add_option("--k", graver_k, "Cluster size")->required()->check(CLI::Range(1, 12));
    graver->add_option("--pseudo", pseudo, "Pseudo configuration \"c1,...,ck\" with weighted size 2k")->required();

    SimulateArgs sim;
    auto* simulate = app.add_subcommand("simulate", "Run the online engine on a workload");
    auto* wl = simulate->add_option("--workload", sim.workload, "Workload JSON file");
    auto* gen = simulate->add_option("--gen", sim.gen, "Generator: uniform-random, merge-chain, split-probe");
    wl->excludes(gen);
    simulate->add_option("--len", sim.len, "Generated workload length")->check(CLI::NonNegativeNumber);
    simulate->add_option("--seed", sim.seed, "Generator seed");
    simulate->add_option("--k", sim.k, "Cluster size");
    simulate->add_option("--l", sim.l, "Number of clusters");
    simulate->add_option("--algorithm", sim.algorithm, "comp-min or comp-any")
        ->check(CLI::IsMember({"comp-min", "comp-any"}));
    simulate->add_flag("--opt", sim.opt, "Compute the offline optimum (n <= 9)");
    simulate->add_flag("--verify", sim.verify, "Cross-check every remap and phase");
    simulate->add_option("--format", sim.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    simulate->add_option("--events", sim.events, "Write the per-request event log (JSON lines)");

    std::string opt_workload;
    auto* opt = app.add_subcommand("opt", "Offline optimum of a static workload (n <= 9)");
    opt->add_option("--workload", opt_workload, "Workload JSON file")->required();

    int k_max = 0;
    auto* verify = app.add_subcommand("verify", "Certify the structural properties for all k <= k-max");
    verify->add_option("--k-max", k_max, "Largest cluster size (<= 5)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : input_error;
    }

    try {
        if (*configs) {
            std::cout << repart::configs_report(configs_k).dump(2) << '\n';
            return ok;
        }
        if (*graver) {
            std::cout << repart::graver_report(graver_k, repart::parse_pseudo(graver_k, pseudo)).dump(2) << '\n';
            return ok;
        }
        if (*simulate)
            return run_simulate(sim);
        if (*opt)
            return run_opt(opt_workload);
        if (*verify)
            return run_verify(k_max);
    } catch (const repart::InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return input_error;
    } catch (const repart::ResourceLimitError& e) {
        std::cerr << "resource limit: " << e.what() << '\n';
        return resource_limit;
    } catch (const repart::InvariantError& e) {
        std::cerr << "invariant violated: " << e.what() << '\n';
        return invariant_failure;
    }
    return ok;
}
