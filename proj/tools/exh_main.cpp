#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "exh/cli.hpp"
#include "exh/cli_dispatch.hpp"

namespace {

struct Overrides {
    std::string format;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> horizon;
    std::optional<std::uint64_t> budget;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw exh::ConfigError("/", "cannot open config file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

int run_one(const std::string& expected_op, const std::string& target,
            const std::string& config_path, const Overrides& ov) {
    exh::cli::RunConfig config = exh::cli::parse_config(read_file(config_path));
    if (!expected_op.empty()) {
        if (config.op != expected_op)
            throw exh::ConfigError("/op", "config op \"" + config.op +
                                              "\" does not match the subcommand \"" +
                                              expected_op + "\"");
        if (!target.empty() && config.target != target)
            throw exh::ConfigError("/target", "config target \"" + config.target +
                                                  "\" does not match \"" + target + "\"");
    }
    if (!ov.format.empty()) config.output = ov.format;
    if (ov.seed) config.seed = *ov.seed;
    if (ov.horizon) config.horizon = *ov.horizon;
    if (ov.budget) config.budget = *ov.budget;

    exh::cli::ResultRecord record = exh::cli::dispatch(config);
    std::cout << exh::cli::emit(record, config.output);
    return record.exit_hint;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exh: exact computation with submeasure-presented ideals"};
    app.require_subcommand(1);

    Overrides ov;
    std::string config_path;
    std::string target;

    struct SubSpec {
        const char* name;
        const char* desc;
        bool has_target;
    };
    const SubSpec subs[] = {
        {"eval", "evaluate a submeasure on a finite set", false},
        {"axioms", "submeasure axiom sweep over preset families", false},
        {"tallness", "singleton-value profile and tail maxima", false},
        {"tails", "truncated tail matrix of a submeasure on a set", false},
        {"member", "finite-horizon membership verdict", false},
        {"metric", "symmetric-difference distance of two finite sets", false},
        {"series-sum", "partial sum of a vector sequence over a finite set", false},
        {"modulus", "subset-norm modulus over a window (target: absval-sweep)", true},
        {"represent", "representation builders (targets: ellinf, ellinf-sweep, c0-normal, "
                      "gdensity, gdensity-sweep, envelope, envelope-sweep)", true},
        {"rademacher", "block vectors and checks (targets: vectors, phi, checks)", true},
        {"witness", "witness-style checkers (targets: summable-like, density-like, "
                    "trace-family, covering, heavy-branch, bm)", true},
        {"phi-family", "family-generated submeasures (target: cross-sweep)", true},
        {"run", "run whatever operation the config names", false},
    };

    for (const auto& spec : subs) {
        auto* sub = app.add_subcommand(spec.name, spec.desc);
        if (spec.has_target)
            sub->add_option("target", target, "operation target within the subcommand");
        sub->add_option("--config", config_path, "path to the json config document")
            ->required();
        sub->add_option("--format", ov.format, "override the output format (json|csv|table)");
        sub->add_option("--seed", ov.seed, "override the seed");
        sub->add_option("--horizon", ov.horizon, "override the horizon");
        sub->add_option("--budget", ov.budget, "override the enumeration budget");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        auto* sub = app.get_subcommands().front();
        std::string name = sub->get_name();
        return run_one(name == "run" ? "" : name, target, config_path, ov);
    } catch (const exh::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const exh::BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
