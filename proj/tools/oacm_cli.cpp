#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "oacm/acceptance.hpp"
#include "oacm/run.hpp"

namespace {

oacm::RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file: " + path);
    std::stringstream buf;
    buf << is.rdbuf();
    return oacm::parse_config(buf.str());
}

oacm::Mode parse_mode(const std::string& name) {
    if (name == "deterministic") return oacm::Mode::Deterministic;
    if (name == "salt") return oacm::Mode::SALT;
    if (name == "lasalt") return oacm::Mode::LASALT;
    if (name == "sam") return oacm::Mode::SAM;
    throw std::runtime_error("unknown mode: " + name);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"coupled atmosphere-ocean pseudospectral simulator"};
    app.require_subcommand(1);

    std::string config_path, output_dir, mode_name;
    uint64_t seed = 0;
    int members = 0;
    bool have_seed = false;

    auto add_common = [&](CLI::App* sub, bool config_required) {
        auto* c = sub->add_option("--config", config_path, "config document path");
        if (config_required) c->required();
        sub->add_option("--output", output_dir, "output directory override");
        sub->add_option("--seed", seed, "RNG seed override")
            ->each([&](const std::string&) { have_seed = true; });
        sub->add_option("--mode", mode_name, "dynamics mode override");
        sub->add_option("--members", members, "ensemble size override");
    };

    CLI::App* cmd_run = app.add_subcommand("run", "integrate the configured model");
    add_common(cmd_run, true);
    CLI::App* cmd_verify =
        app.add_subcommand("verify", "run the desk-scale verification criteria");
    int only_criterion = 0;
    cmd_verify->add_option("--criterion", only_criterion, "run a single criterion (1-12)");
    CLI::App* cmd_diag =
        app.add_subcommand("diag", "recompute diagnostics from run snapshots");
    cmd_diag->add_option("--output", output_dir, "run output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed()) {
            oacm::RunConfig cfg = load_config(config_path);
            if (have_seed) cfg.seed = seed;
            if (!output_dir.empty()) cfg.output_dir = output_dir;
            if (!mode_name.empty()) cfg.mode = parse_mode(mode_name);
            if (members > 0) cfg.members = members;
            const oacm::RunResult res = oacm::run(cfg);
            std::cout << "wrote " << res.csv_path << "\n";
            std::cout << "t_end=" << res.t_end << " rows=" << res.records.size()
                      << " frozen=" << res.frozen_count << "\n";
            if (res.blowup_t)
                std::cout << "blowup t=" << *res.blowup_t << "\n";
            return 0;
        }
        if (cmd_verify->parsed()) {
            std::vector<oacm::CriterionResult> results;
            if (only_criterion > 0)
                results.push_back(oacm::run_criterion(only_criterion));
            else
                results = oacm::run_all_criteria();
            bool all = true;
            for (const auto& r : results) {
                printf("%s  criterion_%02d  %s  [%s]\n", r.pass ? "PASS" : "FAIL", r.id,
                       r.name.c_str(), r.detail.c_str());
                all = all && r.pass;
            }
            return all ? 0 : 1;
        }
        if (cmd_diag->parsed()) {
            const auto records = oacm::diag_recompute(output_dir);
            std::cout << "recomputed " << records.size() << " rows in " << output_dir
                      << "/diagnostics_recomputed.csv\n";
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
