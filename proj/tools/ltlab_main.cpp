#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ltlab/experiments.hpp"

namespace {

int run_command(const std::string& config_path, const std::string& out_dir,
                long long seed_override) {
    namespace ex = ltlab::experiments;
    try {
        ex::ExperimentConfig config = ex::parse_config_file(config_path);
        if (seed_override >= 0) config.seed = static_cast<std::uint64_t>(seed_override);
        const std::filesystem::path out =
            out_dir.empty() ? std::filesystem::path("ltlab_out") / config.experiment
                            : std::filesystem::path(out_dir);
        const int status = ex::run_and_write(config, out);
        std::cout << config.experiment << ": " << (status == 0 ? "PASS" : "FAIL")
                  << " (artifacts in " << out.string() << ")\n";
        return status;
    } catch (const ex::ConfigError& err) {
        std::cerr << "config error: " << err.what() << '\n';
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    }
}

int list_command(const std::string& filter) {
    for (const auto& info : ltlab::experiments::registry()) {
        if (!filter.empty() && info.name.find(filter) == std::string::npos) continue;
        std::cout << info.name << "  -  " << info.description << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ltlab: local time of semimartingales, numerically"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    long long seed_override = -1;
    auto* run = app.add_subcommand("run", "run one experiment from a config file");
    run->add_option("--config", config_path, "key = value config file")->required();
    run->add_option("--out", out_dir, "output directory (default ltlab_out/<experiment>)");
    run->add_option("--seed", seed_override, "override the config seed");

    std::string filter;
    auto* list = app.add_subcommand("list", "list registered experiments");
    list->add_option("filter", filter, "substring filter");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) return run_command(config_path, out_dir, seed_override);
    return list_command(filter);
}
