#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "semispec/report.hpp"

namespace {

int run(const std::string& subcommand, const std::string& config_path, bool check,
        const std::string& out_dir, int jobs) {
    using namespace semispec;
    RunConfig cfg;
    try {
        cfg = load_config(config_path);
    } catch (const Error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    Table table;
    bool check_failed = false;
    try {
        if (subcommand == "spectrum")
            table = run_spectrum(cfg, jobs, &check_failed);
        else if (subcommand == "phases")
            table = run_phases(cfg, jobs, &check_failed);
        else if (subcommand == "weyl")
            table = run_weyl(cfg, jobs, &check_failed);
        else if (subcommand == "tunnel")
            table = run_tunnel(cfg, jobs, &check_failed);
        else if (subcommand == "splitting")
            table = run_splitting(cfg, jobs, &check_failed);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 3;
    }

    // render fully before touching the filesystem; a failed run leaves no
    // partial files behind
    const std::string csv = render_csv(table, cfg, subcommand);
    const std::string json = render_json(table, cfg, subcommand);

    std::filesystem::create_directories(out_dir);
    const std::string base = out_dir + "/" + subcommand;
    {
        std::ofstream f(base + ".csv", std::ios::trunc);
        f << csv;
    }
    {
        std::ofstream f(base + ".json", std::ios::trunc);
        f << json;
    }
    std::cout << base << ".csv\n" << base << ".json\n";

    if (check && check_failed) {
        std::cerr << "check failed\n";
        return 4;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"semiclassical spectrum analysis for 1-D multi-well potentials"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";
    bool check = false;
    int jobs = 1;

    for (const char* name : {"spectrum", "phases", "weyl", "tunnel", "splitting"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_flag("--check", check, "exit 4 when the run's own checks fail");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--jobs", jobs, "parallel hbar jobs")->check(CLI::PositiveNumber);
    }

    CLI11_PARSE(app, argc, argv);
    return run(app.get_subcommands().front()->get_name(), config_path, check, out_dir, jobs);
}
