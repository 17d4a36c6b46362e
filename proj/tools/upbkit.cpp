// upbkit command-line driver. Exit codes: 0 success, 1 invalid config,
// 2 numerical guard tripped, 3 certification failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "upbkit/cli/commands.hpp"

namespace {

enum ExitCode { kOk = 0, kInvalidConfig = 1, kNumerical = 2, kCertification = 3 };

struct Flags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> restarts;
    std::optional<double> tol;
    std::string out_path;
};

upbkit::cli::ExperimentConfig load(const std::string& command, const Flags& flags) {
    nlohmann::json doc = nlohmann::json::object();
    if (!flags.config_path.empty()) {
        std::ifstream in(flags.config_path);
        if (!in) throw upbkit::InvalidArgument("cannot open config file '" + flags.config_path + "'");
        try {
            doc = nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw upbkit::InvalidArgument(std::string("config is not valid JSON: ") + e.what());
        }
    }
    if (flags.seed) doc["seed"] = *flags.seed;
    if (doc.contains("command") && doc.at("command") != command)
        throw upbkit::InvalidArgument("config is for command '" + doc.at("command").get<std::string>() +
                                      "', not '" + command + "'");
    upbkit::cli::ExperimentConfig cfg = upbkit::cli::parse_config(doc);
    cfg.command = command;
    if (flags.restarts) cfg.restarts = *flags.restarts;
    if (flags.tol) {
        cfg.tolerances.rank_tol = *flags.tol;
        cfg.tolerances.ppt_tol = *flags.tol;
    }
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"upbkit: bound-entangled states from unextendible product bases"};
    app.require_subcommand(1);
    Flags flags;

    const std::map<std::string, std::string> help = {
        {"build", "construct the three-qubit UPB and its state; spectrum, rank and PPT table"},
        {"certify", "certify unextendibility by seesaw and build the UPB witness"},
        {"perturb-scan", "first-order vs exact partial-transpose spectra under noise"},
        {"rank-mixtures", "ranks of UPB-state mixtures"},
        {"subspace-hunt", "search subspaces for product vectors"},
        {"witness-radius", "witness detection radius along a local-noise direction"},
    };
    for (const std::string& name : upbkit::cli::command_names()) {
        CLI::App* sub = app.add_subcommand(name, help.at(name));
        sub->add_option("--config", flags.config_path, "JSON config file")->check(CLI::ExistingFile);
        sub->add_option("--seed", flags.seed, "64-bit seed (overrides config)");
        sub->add_option("--out", flags.out_path, "write the report here instead of stdout");
        sub->add_option("--restarts", flags.restarts, "seesaw restarts (overrides config)");
        sub->add_option("--tol", flags.tol, "rank and PPT tolerance (overrides config)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kInvalidConfig;
    }

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        const nlohmann::json report = upbkit::cli::make_report(load(command, flags));
        upbkit::cli::validate_report(report);
        const std::string text = report.dump(2) + "\n";
        if (flags.out_path.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(flags.out_path);
            if (!out) throw upbkit::InvalidArgument("cannot write '" + flags.out_path + "'");
            out << text;
        }
    } catch (const upbkit::InvalidArgument& e) {
        std::cerr << "upbkit: invalid configuration: " << e.what() << "\n";
        return kInvalidConfig;
    } catch (const upbkit::NumericalError& e) {
        std::cerr << "upbkit: numerical guard: " << e.what() << "\n";
        return kNumerical;
    } catch (const upbkit::CertificationError& e) {
        std::cerr << "upbkit: certification failed: " << e.what() << "\n";
        return kCertification;
    }
    return kOk;
}
