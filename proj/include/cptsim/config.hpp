#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "cptsim/scan.hpp"

namespace cpt {

/// Sweep settings shared by the CLI subcommands.
struct ScanSettings {
    double detuning_start_mhz = -300.0;
    double detuning_stop_mhz = 1100.0;
    std::size_t detuning_points = 57;
    RamanGrid raman;
    std::vector<double> intensities_mw_cm2{0.25, 0.5, 1.0, 2.0, 3.0, 4.0, 5.0};
    /// `power`: false scans the configured laser and cell only; true runs
    /// default_power_variants().
    bool standard_variants = false;
    double polarization_detuning_mhz = 408.0;
    /// Raman detuning (Hz) for `propagate` and `coeffs`, from the main dark resonance.
    double raman_offset_hz = 0.0;

    std::vector<double> detunings_mhz() const;
};

struct RunConfig {
    Experiment experiment;
    ScanSettings scan;
    std::string output;  ///< CSV path; empty writes to stdout
    std::vector<std::string> sections;  ///< sections present in the source text

    bool has_section(const std::string& name) const;
};

/// One `section.key = value` pair of the effective configuration.
using ConfigEntry = std::pair<std::string, std::string>;

/// INI-style text: `[section]` headers, `key = value` lines, `#` or `;`
/// comments. Unknown sections or keys and invalid values throw ConfigError
/// naming the key path and line.
RunConfig parse_config_text(const std::string& text, const std::string& source = "<config>");
/// Also accepts a CSV written by write_csv and reads its header.
RunConfig parse_config_file(const std::string& path);

/// Every key with its effective value, in ordinary-frequency units.
std::vector<ConfigEntry> effective_config(const RunConfig& cfg);
std::string to_config_text(const RunConfig& cfg);

/// Result table of one scan.
struct CsvTable {
    std::vector<ConfigEntry> run;  ///< written as `# run.key=value`
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

void write_csv(std::ostream& os, const RunConfig& cfg, const CsvTable& table);

/// Rebuilds the configuration from the `# section.key=value` header of a CSV
/// written by write_csv. `run.*` entries are ignored.
RunConfig config_from_csv(const std::string& csv_text);

}  // namespace cpt
