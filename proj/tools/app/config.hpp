// JSON run configuration for the command-line tool.
#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "leocrlb/analysis.hpp"
#include "leocrlb/scenario.hpp"

namespace leocrlb::app {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class OutputFormat { Csv, Json };

struct RunConfig {
    ScenarioTemplate scenario;  // SNRs stored linear
    double snr_db_leo_rx{20.0};
    double snr_db_bs_rx{20.0};
    double snr_db_leo_bs{20.0};

    ParamCase param_case{ParamCase::WithBsObservations};
    std::uint64_t seed{1};
    int n_trials{5};
    double pd_rel_tol{kDefaultPdRelTol};
    int threads{0};

    SweepGrid grid;  // identifiability grid; empty axes take the scenario counts
    SweepAxis sweep_axis{SweepAxis::NAnt};
    std::vector<double> sweep_values;

    std::string out;
    OutputFormat format{OutputFormat::Csv};

    SweepOptions sweep_options() const;
    /// Grid with empty axes filled from the scenario counts.
    SweepGrid effective_grid() const;
    /// Re-derives linear SNRs from the dB fields.
    void sync_snr();
};

/// Throws ConfigError with line/column for parse errors and the field name for
/// validation errors. Unknown keys are rejected.
RunConfig load_config(const std::filesystem::path& path);
RunConfig load_config_text(const std::string& text);
RunConfig load_config_json(const nlohmann::ordered_json& j);

/// Warnings for values outside the usual range (not errors).
std::vector<std::string> config_warnings(const RunConfig& cfg);

/// Reloadable configuration with every default made explicit.
nlohmann::ordered_json effective_config_json(const RunConfig& cfg);

/// Quantities derived from the configuration, for the echo block.
nlohmann::ordered_json derived_config_json(const RunConfig& cfg);

OutputFormat output_format_from_string(const std::string& s);
const char* to_string(OutputFormat f);

}  // namespace leocrlb::app
