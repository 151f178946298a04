#include "records.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <ostream>

namespace leocrlb::app {

using json = nlohmann::ordered_json;

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

double max_of(const std::vector<double>& v) {
    return v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::vector<std::string> row_fields(const ResultRecord& r) {
    std::vector<std::string> f = {
        r.command,
        r.axis,
        r.axis.empty() ? "" : format_number(r.value),
        std::to_string(r.cell.n_leo),
        std::to_string(r.cell.n_bs),
        std::to_string(r.cell.n_slots),
        std::to_string(r.cell.n_ant),
        format_number(r.slot_spacing_s),
        format_number(r.carrier_freq_hz),
        format_number(r.snr_db_leo_rx),
        format_number(r.snr_db_bs_rx),
        format_number(r.snr_db_leo_bs),
        r.param_case,
        std::to_string(r.n_trials),
        std::to_string(r.pd_trials),
        r.is_pd ? "true" : "false",
        format_number(r.worst.min_eigenvalue),
        format_number(r.worst.max_eigenvalue),
        format_number(r.worst.condition_number),
    };
    if (r.has_bounds) {
        f.push_back(format_number(r.bounds.position));
        f.push_back(format_number(r.bounds.velocity));
        f.push_back(format_number(r.bounds.orientation));
        f.push_back(format_number(max_of(r.bounds.leo_position_offset)));
        f.push_back(format_number(max_of(r.bounds.leo_velocity_offset)));
    } else {
        f.insert(f.end(), 5, "");
    }
    return f;
}

}  // namespace

const std::vector<std::string>& csv_columns() {
    static const std::vector<std::string> cols = {
        "command",          "axis",           "value",           "n_leo",
        "n_bs",             "n_slots",        "n_ant",           "slot_spacing_s",
        "carrier_freq_hz",  "snr_db_leo_rx",  "snr_db_bs_rx",    "snr_db_leo_bs",
        "case",             "n_trials",       "pd_trials",       "is_pd",
        "min_eigenvalue",   "max_eigenvalue", "condition_number", "pos_bound_m",
        "vel_bound_mps",    "orient_bound_rad", "leo_pos_offset_bound_m", "leo_vel_offset_bound_mps"};
    return cols;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

void write_csv(std::ostream& os, const std::vector<ResultRecord>& records) {
    const auto write_row = [&](const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) os << ',';
            os << csv_field(fields[i]);
        }
        os << "\r\n";
    };
    write_row(csv_columns());
    for (const auto& r : records) write_row(row_fields(r));
}

json records_json(const std::vector<ResultRecord>& records) {
    json arr = json::array();
    for (const auto& r : records) {
        json j;
        j["command"] = r.command;
        if (!r.axis.empty()) {
            j["axis"] = r.axis;
            j["value"] = r.value;
        }
        j["n_leo"] = r.cell.n_leo;
        j["n_bs"] = r.cell.n_bs;
        j["n_slots"] = r.cell.n_slots;
        j["n_ant"] = r.cell.n_ant;
        j["slot_spacing_s"] = r.slot_spacing_s;
        j["carrier_freq_hz"] = r.carrier_freq_hz;
        j["snr_db"] = {{"leo_rx", r.snr_db_leo_rx}, {"bs_rx", r.snr_db_bs_rx}, {"leo_bs", r.snr_db_leo_bs}};
        j["case"] = r.param_case;
        j["n_trials"] = r.n_trials;
        j["pd_trials"] = r.pd_trials;
        j["is_pd"] = r.is_pd;
        j["min_eigenvalue"] = r.worst.min_eigenvalue;
        j["max_eigenvalue"] = r.worst.max_eigenvalue;
        j["condition_number"] = number_or_null(r.worst.condition_number);
        j["scaling"] = r.worst.scaling;
        j["rel_tol"] = r.worst.rel_tol;
        if (r.has_bounds) {
            json b;
            b["pos_bound_m"] = number_or_null(r.bounds.position);
            b["vel_bound_mps"] = number_or_null(r.bounds.velocity);
            b["orient_bound_rad"] = number_or_null(r.bounds.orientation);
            json pb = json::array();
            json vb = json::array();
            for (double v : r.bounds.leo_position_offset) pb.push_back(number_or_null(v));
            for (double v : r.bounds.leo_velocity_offset) vb.push_back(number_or_null(v));
            b["leo_pos_offset_bound_m"] = pb;
            b["leo_vel_offset_bound_mps"] = vb;
            j["bounds"] = b;
        }
        arr.push_back(j);
    }
    return arr;
}

void write_table(std::ostream& os, const std::vector<ResultRecord>& records) {
    const auto cell = [](const std::string& s, int w) {
        std::string out = s.size() >= static_cast<std::size_t>(w) ? s : std::string(static_cast<std::size_t>(w) - s.size(), ' ') + s;
        return out + ' ';
    };
    const auto short_num = [](double v) {
        if (!std::isfinite(v)) return format_number(v);
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3g", v);
        return std::string(buf);
    };
    os << cell("N_B", 4) << cell("N_Q", 4) << cell("N_K", 4) << cell("N_U", 4);
    if (!records.empty() && !records.front().axis.empty()) os << cell(records.front().axis, 16);
    os << cell("PD", 6) << cell("ratio", 10) << cell("pos[m]", 10) << cell("vel[m/s]", 10)
       << cell("ori[rad]", 10) << cell("leo_p[m]", 10) << cell("leo_v[m/s]", 10) << '\n';
    for (const auto& r : records) {
        os << cell(std::to_string(r.cell.n_leo), 4) << cell(std::to_string(r.cell.n_bs), 4)
           << cell(std::to_string(r.cell.n_slots), 4) << cell(std::to_string(r.cell.n_ant), 4);
        if (!r.axis.empty()) os << cell(short_num(r.value), 16);
        os << cell(std::to_string(r.pd_trials) + "/" + std::to_string(r.n_trials), 6)
           << cell(short_num(r.worst.eigen_ratio()), 10);
        if (r.has_bounds) {
            os << cell(short_num(r.bounds.position), 10) << cell(short_num(r.bounds.velocity), 10)
               << cell(short_num(r.bounds.orientation), 10)
               << cell(short_num(max_of(r.bounds.leo_position_offset)), 10)
               << cell(short_num(max_of(r.bounds.leo_velocity_offset)), 10);
        } else {
            os << cell("-", 10) << cell("-", 10) << cell("-", 10) << cell("-", 10) << cell("-", 10);
        }
        os << '\n';
    }
}

}  // namespace leocrlb::app
