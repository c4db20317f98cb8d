// Command-line front end.
//
// Exit codes: 0 success / property holds, 1 invalid input (unreadable,
// malformed or failing validation, bad usage), 2 precondition failure
// (mechanism/input mismatch, search bound refused, invalid pairing),
// 3 property violated.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "matchmech/io.hpp"
#include "matchmech/mechanisms.hpp"
#include "matchmech/metrics.hpp"
#include "matchmech/oracle.hpp"
#include "matchmech/simharness.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fs = std::filesystem;
using namespace matchmech;

namespace {

enum Exit : int { ok = 0, invalid_input = 1, precondition = 2, violated = 3 };

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ProblemInstance load_valid_instance(const std::string& path) {
    ProblemInstance instance = parse_instance(read_json_file(path));
    const auto violations = validate_instance(instance);
    if (!violations.empty()) {
        std::cerr << to_json(violations).dump(2) << '\n';
        throw InputError("instance '" + path + "' failed validation");
    }
    return instance;
}

// -- allocate ---------------------------------------------------------------

struct AllocateArgs {
    std::string mechanism;
    std::string input;
    std::string output;
    std::string endowment;
    std::uint64_t seed = 0;
};

int cmd_allocate(const AllocateArgs& args) {
    const auto kind = *parse_mechanism(args.mechanism);
    const ProblemInstance instance = load_valid_instance(args.input);
    std::optional<Endowment> endowment;
    if (!args.endowment.empty()) {
        endowment = parse_endowment(read_json_file(args.endowment));
    }
    RandomSource src(args.seed);
    MechanismRun run = run_mechanism(kind, instance, src, endowment);
    write_json_file(args.output, to_json(AllocationDocument{std::move(run.allocation), std::move(run.endowment),
                                                            args.seed}));
    return ok;
}

// -- verify -----------------------------------------------------------------

struct VerifyArgs {
    std::string check;
    std::string input;
    std::string allocation;
    std::string endowment;
    std::optional<std::size_t> bound;
};

ProbeReport verify_category(const VerifyArgs& args, const CategoryInstance& cat, const CategoryAllocation& alloc,
                            const CategoryEndowment* endowment) {
    ProbeReport report;
    report.category = cat.id;
    if (args.check == "blocking" || args.check == "core") {
        report.property = args.check == "core" ? "core" : "no_blocking_coalition";
        report.bound = args.bound.value_or(bounds::blocking);
        if (auto c = find_blocking_coalition(cat, alloc, report.bound)) {
            report.holds = false;
            report.witness = *c;
        } else if (args.check == "core" && endowment != nullptr) {
            if (auto e = find_endowment_blocking_coalition(cat, *endowment, alloc, report.bound)) {
                report.holds = false;
                report.witness = *e;
            }
        }
    } else if (args.check == "pareto") {
        report.property = "pareto_optimal";
        report.bound = args.bound.value_or(bounds::pareto);
        auto result = is_pareto_optimal(cat, alloc, report.bound);
        report.holds = result.optimal;
        if (result.witness) {
            report.witness = *result.witness;
        }
    } else {
        report.property = "strategyproof";
        report.bound = args.bound.value_or(bounds::misreport);
        if (endowment == nullptr) {
            throw PreconditionError(cat.id, "strategyproofness probe needs the TOAM endowment");
        }
        for (const auto& p : cat.patients) {
            if (auto m = strategyproofness_probe(cat, *endowment, p.id, report.bound)) {
                report.holds = false;
                report.witness = *m;
                break;
            }
        }
    }
    return report;
}

int cmd_verify(const VerifyArgs& args) {
    const ProblemInstance instance = load_valid_instance(args.input);
    AllocationDocument doc = parse_allocation(read_json_file(args.allocation));
    if (!args.endowment.empty()) {
        doc.endowment = parse_endowment(read_json_file(args.endowment));
    }
    try {
        for (const auto& cat : instance.categories) {
            (void)to_assignment(cat, find_category(doc.allocation, cat.id));
        }
    } catch (const PreconditionError& e) {
        throw InputError(std::string("allocation does not fit the instance: ") + e.what());
    }

    Json reports = Json::array();
    bool holds = true;
    for (const auto& cat : instance.categories) {
        const CategoryEndowment* endowment = doc.endowment ? &find_category(*doc.endowment, cat.id) : nullptr;
        const ProbeReport report = verify_category(args, cat, find_category(doc.allocation, cat.id), endowment);
        holds = holds && report.holds;
        reports.push_back(to_json(report));
    }
    const Json out = {{"check", args.check}, {"verdict", holds ? "holds" : "violated"}, {"reports", reports}};
    std::cout << out.dump(2) << '\n';
    return holds ? ok : violated;
}

// -- simulate ---------------------------------------------------------------

struct SimulateArgs {
    int scenario = 1;
    int row = 1;
    std::vector<std::string> mechanisms;
    std::vector<std::string> variation{"none"};
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
    std::string out;
    bool timing = false;
    int threads = 0;
};

int cmd_simulate(const SimulateArgs& args) {
    ExperimentConfig config;
    config.specs.push_back(table_ii(args.scenario, args.row));
    for (const auto& m : args.mechanisms) {
        config.mechanisms.push_back(*parse_mechanism(m));
    }
    for (const auto& v : args.variation) {
        config.levels.push_back(*parse_variation(v));
    }
    config.trials = args.trials;
    config.base_seed = args.seed;
    config.timing = args.timing;
#ifdef _OPENMP
    if (args.threads > 0) {
        omp_set_num_threads(args.threads);
    }
#endif

    const ExperimentResult result = run_experiment(config);
    fs::create_directories(args.out);
    {
        std::ofstream csv(fs::path(args.out) / "results.csv", std::ios::binary);
        if (!csv) {
            throw InputError("cannot write into '" + args.out + "'");
        }
        write_csv(csv, result);
    }
    write_json_file(fs::path(args.out) / "summary.json", summary_json(summarize(result)));
    return ok;
}

// -- metrics / validate -----------------------------------------------------

int cmd_metrics(const std::string& input, const std::string& allocation) {
    const ProblemInstance instance = load_valid_instance(input);
    const AllocationDocument doc = parse_allocation(read_json_file(allocation));
    std::cout << to_json(compute_metrics(instance, doc.allocation)).dump(2) << '\n';
    return ok;
}

int cmd_validate(const std::string& input) {
    const ProblemInstance instance = parse_instance(read_json_file(input));
    const auto violations = validate_instance(instance);
    if (!violations.empty()) {
        std::cerr << to_json(violations).dump(2) << '\n';
        return invalid_input;
    }
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Doctor-patient allocation mechanisms, oracles and simulations"};
    app.require_subcommand(1);

    const std::vector<std::string> mechanism_names{"ranpam", "toam", "toam-icomp"};
    const std::vector<std::string> variation_names{"none", "small", "medium", "large"};

    AllocateArgs allocate;
    auto* allocate_cmd = app.add_subcommand("allocate", "Run a mechanism on an instance file");
    allocate_cmd->add_option("--mechanism", allocate.mechanism)->required()->check(CLI::IsMember(mechanism_names));
    allocate_cmd->add_option("--input", allocate.input)->required();
    allocate_cmd->add_option("--seed", allocate.seed)->required();
    allocate_cmd->add_option("--output", allocate.output)->required();
    allocate_cmd->add_option("--endowment", allocate.endowment, "Endowment file (toam only)");

    VerifyArgs verify;
    auto* verify_cmd = app.add_subcommand("verify", "Check an allocation with the exhaustive oracles");
    verify_cmd->add_option("--check", verify.check)
        ->required()
        ->check(CLI::IsMember({"core", "pareto", "blocking", "strategyproof"}));
    verify_cmd->add_option("--input", verify.input)->required();
    verify_cmd->add_option("--allocation", verify.allocation)->required();
    verify_cmd->add_option("--endowment", verify.endowment);
    verify_cmd->add_option("--bound", verify.bound, "Override the search bound");

    SimulateArgs simulate;
    auto* simulate_cmd = app.add_subcommand("simulate", "Run a simulation sweep on one table row");
    simulate_cmd->add_option("--scenario", simulate.scenario)->required()->check(CLI::Range(1, 4));
    simulate_cmd->add_option("--row", simulate.row)->required()->check(CLI::Range(1, kTableRows));
    simulate_cmd->add_option("--mechanisms", simulate.mechanisms)
        ->required()
        ->delimiter(',')
        ->check(CLI::IsMember(mechanism_names));
    simulate_cmd->add_option("--variation", simulate.variation)
        ->delimiter(',')
        ->check(CLI::IsMember(variation_names));
    simulate_cmd->add_option("--trials", simulate.trials)->required();
    simulate_cmd->add_option("--seed", simulate.seed)->required();
    simulate_cmd->add_option("--out", simulate.out)->required();
    simulate_cmd->add_flag("--timing", simulate.timing, "Record wall-clock runtime (output no longer reproducible)");
    simulate_cmd->add_option("--threads", simulate.threads, "OpenMP threads (0 = runtime default)");

    std::string metrics_input;
    std::string metrics_allocation;
    auto* metrics_cmd = app.add_subcommand("metrics", "Score an allocation against true preferences");
    metrics_cmd->add_option("--input", metrics_input)->required();
    metrics_cmd->add_option("--allocation", metrics_allocation)->required();

    std::string validate_input;
    auto* validate_cmd = app.add_subcommand("validate", "Check an instance file");
    validate_cmd->add_option("--input", validate_input)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return invalid_input;
    }

    try {
        if (*allocate_cmd) return cmd_allocate(allocate);
        if (*verify_cmd) return cmd_verify(verify);
        if (*simulate_cmd) return cmd_simulate(simulate);
        if (*metrics_cmd) return cmd_metrics(metrics_input, metrics_allocation);
        return cmd_validate(validate_input);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return invalid_input;
    } catch (const FormatError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return invalid_input;
    } catch (const IntegrityError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return invalid_input;
    } catch (const PreconditionError& e) {
        std::cerr << "precondition failed: " << e.what() << '\n';
        return precondition;
    } catch (const BoundError& e) {
        std::cerr << "refused: " << e.what() << '\n';
        return precondition;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return invalid_input;
    }
}
