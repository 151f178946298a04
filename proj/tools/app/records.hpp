// Flat result rows and their CSV, JSON and table renderings.
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "leocrlb/analysis.hpp"

namespace leocrlb::app {

/// One output row. Identifiability rows leave the bound columns empty.
/// LEO offset columns hold the largest bound over the LEOs; the JSON form
/// also lists every LEO.
struct ResultRecord {
    std::string command;
    std::string axis;   // empty outside sweeps
    double value{0.0};  // axis value
    CellConfig cell;
    double slot_spacing_s{0.0};
    double carrier_freq_hz{0.0};
    double snr_db_leo_rx{0.0};
    double snr_db_bs_rx{0.0};
    double snr_db_leo_bs{0.0};
    std::string param_case;
    int n_trials{0};
    int pd_trials{0};
    bool is_pd{false};
    IdentifiabilityVerdict worst;
    bool has_bounds{false};
    CrlbReport bounds;
};

const std::vector<std::string>& csv_columns();

/// 9 significant digits; "inf"/"-inf"/"nan" for non-finite values.
std::string format_number(double v);

/// RFC 4180: CRLF line ends, fields quoted when needed.
void write_csv(std::ostream& os, const std::vector<ResultRecord>& records);

nlohmann::ordered_json records_json(const std::vector<ResultRecord>& records);

void write_table(std::ostream& os, const std::vector<ResultRecord>& records);

}  // namespace leocrlb::app
