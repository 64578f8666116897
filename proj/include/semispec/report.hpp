#pragma once

#include <string>
#include <vector>

#include "semispec/semiclassics.hpp"
#include "semispec/tunneling.hpp"

namespace semispec {

// Configuration for one CLI run, parsed from a JSON file.
struct RunConfig {
    PotentialModel model;
    Interval window{};
    Interval domain{};
    std::vector<double> hbars;
    int explicit_n = 0; // 0: automatic grid
    double c_r = 5.0;
    double c_f = 3.0;
    int quad_level_cap = 12;
    double tunnel_lambda = 0.0;
    bool has_tunnel_lambda = false;
    std::string hash; // FNV-1a of the canonical config text
    QuadratureOptions quad() const { return {1e-11, quad_level_cap}; }
};

RunConfig load_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

// Flat report table; every cell is already formatted. The same rows are
// emitted as CSV (with a # header block) and as full-precision JSON.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

std::string format_full(double v); // shortest round-trip decimal

// Subcommand drivers. check_failed is set when --check semantics fail.
Table run_spectrum(const RunConfig& cfg, int jobs, bool* check_failed);
Table run_phases(const RunConfig& cfg, int jobs, bool* check_failed);
Table run_weyl(const RunConfig& cfg, int jobs, bool* check_failed);
Table run_tunnel(const RunConfig& cfg, int jobs, bool* check_failed);
Table run_splitting(const RunConfig& cfg, int jobs, bool* check_failed);

std::string render_csv(const Table& t, const RunConfig& cfg, const std::string& subcommand);
std::string render_json(const Table& t, const RunConfig& cfg, const std::string& subcommand);

} // namespace semispec
