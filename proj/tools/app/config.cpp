#include "config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "leocrlb/signal.hpp"

namespace leocrlb::app {

using json = nlohmann::ordered_json;

namespace {

const std::set<std::string> kKnownKeys = {
    "n_leo", "n_bs", "n_slots", "n_ant", "slot_spacing_s", "carrier_freq_hz", "eff_bandwidth_hz", "bcc",
    "rms_duration_s", "observation_time_s", "snr_db", "case", "gain_model", "seed", "n_trials",
    "pd_rel_tol", "threads", "leo_range_m", "receiver_radius_m", "bs_radius_m", "leo_speed_mps",
    "receiver_speed_mps", "direction_perturbation_rad", "array_extent_wavelengths", "grid", "sweep",
    "out", "format"};

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw ConfigError("config field '" + field + "': " + what);
}

double get_number(const json& j, const std::string& key) {
    const json& v = j.at(key);
    if (!v.is_number()) fail(key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(key, "must be finite");
    return d;
}

int get_count(const json& v, const std::string& field) {
    if (!v.is_number_integer()) fail(field, "expected an integer");
    const auto n = v.get<std::int64_t>();
    if (n < 1) fail(field, "must be >= 1");
    if (n > 1000000) fail(field, "unreasonably large");
    return static_cast<int>(n);
}

double positive(const json& j, const std::string& key) {
    const double d = get_number(j, key);
    if (!(d > 0.0)) fail(key, "must be > 0");
    return d;
}

std::vector<int> count_list(const json& v, const std::string& field) {
    if (!v.is_array() || v.empty()) fail(field, "expected a non-empty array of integers");
    std::vector<int> out;
    for (const auto& e : v) out.push_back(get_count(e, field));
    return out;
}

std::string get_string(const json& j, const std::string& key) {
    const json& v = j.at(key);
    if (!v.is_string()) fail(key, "expected a string");
    return v.get<std::string>();
}

}  // namespace

SweepOptions RunConfig::sweep_options() const {
    SweepOptions o;
    o.seed = seed;
    o.n_trials = n_trials;
    o.param_case = param_case;
    o.rel_tol = pd_rel_tol;
    o.threads = threads;
    return o;
}

SweepGrid RunConfig::effective_grid() const {
    SweepGrid g = grid;
    if (g.n_leo.empty()) g.n_leo = {scenario.n_leo};
    if (g.n_bs.empty()) g.n_bs = {scenario.n_bs};
    if (g.n_slots.empty()) g.n_slots = {scenario.n_slots};
    if (g.n_ant.empty()) g.n_ant = {scenario.n_ant};
    return g;
}

void RunConfig::sync_snr() {
    scenario.snr_leo_rx = snr_from_db(snr_db_leo_rx);
    scenario.snr_bs_rx = snr_from_db(snr_db_bs_rx);
    scenario.snr_leo_bs = snr_from_db(snr_db_leo_bs);
}

OutputFormat output_format_from_string(const std::string& s) {
    if (s == "csv") return OutputFormat::Csv;
    if (s == "json") return OutputFormat::Json;
    fail("format", "expected 'csv' or 'json', got '" + s + "'");
}

const char* to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

RunConfig load_config_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, _] : j.items()) {
        if (!kKnownKeys.count(key)) fail(key, "unknown key");
    }

    RunConfig c;
    ScenarioTemplate& t = c.scenario;
    if (j.contains("n_leo")) t.n_leo = get_count(j["n_leo"], "n_leo");
    if (j.contains("n_bs")) t.n_bs = get_count(j["n_bs"], "n_bs");
    if (j.contains("n_slots")) t.n_slots = get_count(j["n_slots"], "n_slots");
    if (j.contains("n_ant")) t.n_ant = get_count(j["n_ant"], "n_ant");
    if (j.contains("slot_spacing_s")) t.slot_spacing = positive(j, "slot_spacing_s");
    if (j.contains("carrier_freq_hz")) t.carrier_freq = positive(j, "carrier_freq_hz");
    if (j.contains("eff_bandwidth_hz")) t.eff_bandwidth = positive(j, "eff_bandwidth_hz");
    if (j.contains("bcc")) {
        t.bcc = get_number(j, "bcc");
        if (t.bcc < -1.0 || t.bcc > 1.0) fail("bcc", "must lie in [-1, 1]");
    }
    if (j.contains("rms_duration_s") && j.contains("observation_time_s")) {
        fail("rms_duration_s", "give either rms_duration_s or observation_time_s, not both");
    }
    if (j.contains("rms_duration_s")) t.rms_duration = positive(j, "rms_duration_s");
    if (j.contains("observation_time_s")) {
        t.rms_duration = rms_duration_for_window(positive(j, "observation_time_s"));
    }

    if (j.contains("snr_db")) {
        const json& s = j["snr_db"];
        if (s.is_number()) {
            const double v = get_number(j, "snr_db");
            c.snr_db_leo_rx = c.snr_db_bs_rx = c.snr_db_leo_bs = v;
        } else if (s.is_object()) {
            for (const auto& [key, _] : s.items()) {
                if (key != "leo_rx" && key != "bs_rx" && key != "leo_bs") fail("snr_db." + key, "unknown key");
            }
            if (s.contains("leo_rx")) c.snr_db_leo_rx = get_number(s, "leo_rx");
            if (s.contains("bs_rx")) c.snr_db_bs_rx = get_number(s, "bs_rx");
            if (s.contains("leo_bs")) c.snr_db_leo_bs = get_number(s, "leo_bs");
        } else {
            fail("snr_db", "expected a number or an object {leo_rx, bs_rx, leo_bs}");
        }
    }
    c.sync_snr();

    if (j.contains("case")) {
        const std::string s = get_string(j, "case");
        if (s == "with_bs_observations") {
            c.param_case = ParamCase::WithBsObservations;
        } else if (s == "receiver_only") {
            c.param_case = ParamCase::ReceiverOnly;
        } else {
            fail("case", "expected 'with_bs_observations' or 'receiver_only'");
        }
    }
    if (j.contains("gain_model")) {
        const std::string s = get_string(j, "gain_model");
        if (s == "shared") {
            t.gain_model = GainModel::Shared;
        } else if (s == "per_observation") {
            t.gain_model = GainModel::PerObservation;
        } else {
            fail("gain_model", "expected 'shared' or 'per_observation'");
        }
    }
    if (j.contains("seed")) {
        const json& v = j["seed"];
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
            fail("seed", "expected a non-negative integer");
        }
        c.seed = v.get<std::uint64_t>();
    }
    if (j.contains("n_trials")) c.n_trials = get_count(j["n_trials"], "n_trials");
    if (j.contains("pd_rel_tol")) {
        c.pd_rel_tol = get_number(j, "pd_rel_tol");
        if (!(c.pd_rel_tol > 0.0 && c.pd_rel_tol < 1.0)) fail("pd_rel_tol", "must lie in (0, 1)");
    }
    if (j.contains("threads")) {
        const json& v = j["threads"];
        if (!v.is_number_integer() || v.get<std::int64_t>() < 0) fail("threads", "expected an integer >= 0");
        c.threads = static_cast<int>(v.get<std::int64_t>());
    }
    if (j.contains("leo_range_m")) t.leo_range = positive(j, "leo_range_m");
    if (j.contains("receiver_radius_m")) t.receiver_radius = positive(j, "receiver_radius_m");
    if (j.contains("bs_radius_m")) t.bs_radius = positive(j, "bs_radius_m");
    if (j.contains("leo_speed_mps")) t.leo_speed = positive(j, "leo_speed_mps");
    if (j.contains("receiver_speed_mps")) t.receiver_speed = positive(j, "receiver_speed_mps");
    if (j.contains("direction_perturbation_rad")) {
        t.direction_perturbation = get_number(j, "direction_perturbation_rad");
        if (t.direction_perturbation < 0.0) fail("direction_perturbation_rad", "must be >= 0");
    }
    if (j.contains("array_extent_wavelengths")) t.array_extent_wavelengths = positive(j, "array_extent_wavelengths");

    if (j.contains("grid")) {
        const json& g = j["grid"];
        if (!g.is_object()) fail("grid", "expected an object");
        for (const auto& [key, value] : g.items()) {
            if (key == "n_leo") {
                c.grid.n_leo = count_list(value, "grid.n_leo");
            } else if (key == "n_bs") {
                c.grid.n_bs = count_list(value, "grid.n_bs");
            } else if (key == "n_slots") {
                c.grid.n_slots = count_list(value, "grid.n_slots");
            } else if (key == "n_ant") {
                c.grid.n_ant = count_list(value, "grid.n_ant");
            } else {
                fail("grid." + key, "unknown key");
            }
        }
    }
    if (j.contains("sweep")) {
        const json& s = j["sweep"];
        if (!s.is_object()) fail("sweep", "expected an object");
        for (const auto& [key, _] : s.items()) {
            if (key != "axis" && key != "values") fail("sweep." + key, "unknown key");
        }
        if (s.contains("axis")) {
            try {
                c.sweep_axis = sweep_axis_from_string(get_string(s, "axis"));
            } catch (const std::invalid_argument& e) {
                fail("sweep.axis", e.what());
            }
        }
        if (s.contains("values")) {
            const json& v = s["values"];
            if (!v.is_array() || v.empty()) fail("sweep.values", "expected a non-empty array of numbers");
            for (const auto& e : v) {
                if (!e.is_number() || !std::isfinite(e.get<double>())) fail("sweep.values", "expected numbers");
                c.sweep_values.push_back(e.get<double>());
            }
        }
    }
    if (j.contains("out")) c.out = get_string(j, "out");
    if (j.contains("format")) c.format = output_format_from_string(get_string(j, "format"));
    return c;
}

RunConfig load_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    return load_config_json(j);
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_config_text(ss.str());
}

std::vector<std::string> config_warnings(const RunConfig& cfg) {
    std::vector<std::string> out;
    const double fc = cfg.scenario.carrier_freq;
    if (fc < 1e9 || fc > 1e11) out.push_back("carrier_freq_hz outside [1e9, 1e11]");
    return out;
}

json effective_config_json(const RunConfig& c) {
    const ScenarioTemplate& t = c.scenario;
    json j;
    j["n_leo"] = t.n_leo;
    j["n_bs"] = t.n_bs;
    j["n_slots"] = t.n_slots;
    j["n_ant"] = t.n_ant;
    j["slot_spacing_s"] = t.slot_spacing;
    j["carrier_freq_hz"] = t.carrier_freq;
    j["eff_bandwidth_hz"] = t.eff_bandwidth;
    j["bcc"] = t.bcc;
    j["rms_duration_s"] = t.rms_duration;
    j["snr_db"] = {{"leo_rx", c.snr_db_leo_rx}, {"bs_rx", c.snr_db_bs_rx}, {"leo_bs", c.snr_db_leo_bs}};
    j["case"] = to_string(c.param_case);
    j["gain_model"] = to_string(t.gain_model);
    j["seed"] = c.seed;
    j["n_trials"] = c.n_trials;
    j["pd_rel_tol"] = c.pd_rel_tol;
    j["threads"] = c.threads;
    j["leo_range_m"] = t.leo_range;
    j["receiver_radius_m"] = t.receiver_radius;
    j["bs_radius_m"] = t.bs_radius;
    j["leo_speed_mps"] = t.leo_speed;
    j["receiver_speed_mps"] = t.receiver_speed;
    j["direction_perturbation_rad"] = t.direction_perturbation;
    j["array_extent_wavelengths"] = t.array_extent_wavelengths;
    const SweepGrid g = c.effective_grid();
    j["grid"] = {{"n_leo", g.n_leo}, {"n_bs", g.n_bs}, {"n_slots", g.n_slots}, {"n_ant", g.n_ant}};
    json sweep;
    sweep["axis"] = to_string(c.sweep_axis);
    if (!c.sweep_values.empty()) sweep["values"] = c.sweep_values;
    j["sweep"] = sweep;
    if (!c.out.empty()) j["out"] = c.out;
    j["format"] = to_string(c.format);
    return j;
}

json derived_config_json(const RunConfig& c) {
    const ScenarioTemplate& t = c.scenario;
    json j;
    j["snr_linear"] = {{"leo_rx", t.snr_leo_rx}, {"bs_rx", t.snr_bs_rx}, {"leo_bs", t.snr_leo_bs}};
    j["wavelength_m"] = kSpeedOfLight / t.carrier_freq;
    j["array_half_width_m"] = t.array_extent_wavelengths * kSpeedOfLight / t.carrier_freq;
    j["rms_duration_s"] = t.rms_duration;
    return j;
}

}  // namespace leocrlb::app
