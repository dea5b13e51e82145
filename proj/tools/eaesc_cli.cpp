// eaesc: scenario runner for the operator laboratory and the space calculus.
#include <algorithm>
#include <fstream>
#include <future>
#include <iostream>

#include "CLI11.hpp"

#include "eaesc/exact_linalg.hpp"
#include "eaesc/scenario.hpp"

using eaesc::cli::Flags;
using eaesc::cli::Json;
using eaesc::cli::Report;

namespace {

int run_command(const std::vector<std::string>& files, std::vector<std::string> builtins, const Flags& flags,
                const std::string& json_path, bool parallel, bool quiet) {
    if (std::find(builtins.begin(), builtins.end(), "all") != builtins.end()) {
        builtins.erase(std::remove(builtins.begin(), builtins.end(), "all"), builtins.end());
        for (const auto& n : eaesc::cli::list_scenarios()) builtins.push_back(n);
    }
    std::vector<std::function<Report()>> jobs;
    for (const auto& f : files) jobs.push_back([f, &flags] { return eaesc::cli::run_file(f, flags); });
    for (const auto& b : builtins) jobs.push_back([b, &flags] { return eaesc::cli::run_builtin(b, flags); });
    if (jobs.empty()) {
        std::cerr << "run: give scenario files or --builtin <name|all>\n";
        return 2;
    }

    std::vector<Report> reports;
    if (parallel) {
        std::vector<std::future<Report>> fs;
        for (auto& j : jobs) fs.push_back(std::async(std::launch::async, j));
        for (auto& f : fs) reports.push_back(f.get());
    } else {
        for (auto& j : jobs) reports.push_back(j());
    }

    int code = 0;
    int passed = 0;
    for (const auto& r : reports) {
        if (!quiet || !r.pass) std::cout << r.text;
        code = std::max(code, r.exit_code);
        passed += r.pass;
    }
    if (reports.size() > 1)
        std::cout << "summary: " << passed << "/" << reports.size() << " scenarios passed\n";

    if (!json_path.empty()) {
        Json out;
        if (reports.size() == 1) {
            out = reports.front().json;
        } else {
            out["reports"] = Json::array();
            for (const auto& r : reports) out["reports"].push_back(r.json);
            out["pass"] = passed == int(reports.size());
        }
        std::ofstream f(json_path, std::ios::binary);
        if (!f) {
            std::cerr << "cannot write " << json_path << "\n";
            return std::max(code, 1);
        }
        f << out.dump(2) << "\n";
    }
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact Schur coupling / equivalence after extension laboratory"};
    app.require_subcommand(1);

    Flags flags;
    std::string tolerance = flags.numeric_tolerance;
    std::string json_path;
    bool parallel = false, no_realize = false, quiet = false;
    std::vector<std::string> files, builtins;

    auto* run = app.add_subcommand("run", "Run scenario files or builtin scenarios");
    run->add_option("files", files, "Scenario JSON files");
    run->add_option("--builtin", builtins, "Builtin scenario name, or 'all' (repeatable)");
    run->add_option("--verify-window", flags.verify_window, "Coordinates checked by sc_verify / eae_verify")
        ->check(CLI::PositiveNumber);
    run->add_option("--numeric-tolerance", tolerance, "Singular value cut for the numeric backend, as p/q");
    run->add_option("--json", json_path, "Write the machine report here");
    run->add_flag("--parallel", parallel, "Evaluate scenarios concurrently");
    run->add_flag("--no-realize", no_realize, "Skip the operator-model cross-check of space verdicts");
    run->add_flag("--quiet", quiet, "Print only failing scenarios and the summary");

    auto* list = app.add_subcommand("list", "List builtin scenarios");
    auto* desc = app.add_subcommand("describe", "Print the citation of an operation");
    std::string op;
    desc->add_option("op", op, "Operation name")->required();
    auto* exp = app.add_subcommand("export", "Print a builtin scenario as JSON");
    std::string exp_name;
    exp->add_option("name", exp_name, "Builtin scenario name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    if (*list) {
        for (const auto& n : eaesc::cli::list_scenarios()) std::cout << n << "\n";
        return 0;
    }
    if (*desc) {
        if (auto d = eaesc::cli::describe(op)) {
            std::cout << op << ": " << *d << "\n";
            return 0;
        }
        std::cerr << "describe: unknown operation \"" << op << "\"\n";
        return 1;
    }
    if (*exp) {
        if (auto j = eaesc::cli::builtin_json(exp_name)) {
            std::cout << j->dump(2) << "\n";
            return 0;
        }
        std::cerr << "export: no builtin scenario named \"" << exp_name << "\"\n";
        return 1;
    }

    try {
        if (eaesc::parse_scalar(tolerance) <= 0) throw eaesc::SchemaError("must be positive");
    } catch (const std::exception& e) {
        std::cerr << "--numeric-tolerance: " << e.what() << "\n";
        return 2;
    }
    flags.numeric_tolerance = tolerance;
    flags.realize = !no_realize;
    return run_command(files, builtins, flags, json_path, parallel, quiet);
}
