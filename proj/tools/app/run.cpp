#include "run.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "leocrlb/errors.hpp"

namespace leocrlb::app {

using json = nlohmann::ordered_json;

namespace {

double to_db(double linear) { return 10.0 * std::log10(linear); }

ResultRecord base_record(const std::string& command, const ScenarioTemplate& t, ParamCase pc) {
    ResultRecord r;
    r.command = command;
    r.cell = {t.n_leo, t.n_bs, t.n_slots, t.n_ant};
    r.slot_spacing_s = t.slot_spacing;
    r.carrier_freq_hz = t.carrier_freq;
    r.snr_db_leo_rx = to_db(t.snr_leo_rx);
    r.snr_db_bs_rx = to_db(t.snr_bs_rx);
    r.snr_db_leo_bs = to_db(t.snr_leo_bs);
    r.param_case = to_string(pc);
    return r;
}

void check_finite(const CrlbReport& b) {
    const auto bad = [](double v) { return std::isnan(v); };
    bool any = bad(b.position) || bad(b.velocity) || bad(b.orientation);
    for (double v : b.leo_position_offset) any = any || bad(v);
    for (double v : b.leo_velocity_offset) any = any || bad(v);
    if (any) throw NumericalError("bound evaluation produced NaN");
}

}  // namespace

Command command_from_string(const std::string& s) {
    if (s == "bound") return Command::Bound;
    if (s == "identifiability") return Command::Identifiability;
    if (s == "sweep") return Command::Sweep;
    throw ConfigError("unknown command '" + s + "'");
}

const char* to_string(Command c) {
    switch (c) {
        case Command::Bound: return "bound";
        case Command::Identifiability: return "identifiability";
        case Command::Sweep: return "sweep";
    }
    return "?";
}

RunResult run_command(const RunConfig& cfg, Command command) {
    RunResult result;
    const SweepOptions opts = cfg.sweep_options();

    switch (command) {
        case Command::Bound: {
            ResultRecord r = base_record("bound", cfg.scenario, cfg.param_case);
            r.n_trials = cfg.n_trials;
            r.has_bounds = true;
            const double axis_value = cfg.scenario.n_ant;
            const auto recs = parameter_sweep(SweepAxis::NAnt, std::span<const double>(&axis_value, 1),
                                              cfg.scenario, opts);
            const SweepRecord& s = recs.front();
            r.pd_trials = s.pd_trials;
            r.is_pd = s.pd_trials == s.n_trials;
            r.worst = s.worst;
            r.bounds = s.mean;
            check_finite(r.bounds);
            if (!r.is_pd) {
                std::ostringstream os;
                os << "not identifiable: " << (s.n_trials - s.pd_trials) << " of " << s.n_trials
                   << " trials failed; worst scaled eigenvalues min " << s.worst.min_eigenvalue << " max "
                   << s.worst.max_eigenvalue << " (threshold " << s.worst.rel_tol << " relative)";
                result.diagnostics = os.str();
                result.exit_code = kExitNotIdentifiable;
            }
            result.records.push_back(std::move(r));
            break;
        }
        case Command::Identifiability: {
            for (const auto& c : identifiability_sweep(cfg.effective_grid(), cfg.scenario, opts)) {
                ScenarioTemplate t = cfg.scenario;
                t.n_leo = c.config.n_leo;
                t.n_bs = c.config.n_bs;
                t.n_slots = c.config.n_slots;
                t.n_ant = c.config.n_ant;
                ResultRecord r = base_record("identifiability", t, cfg.param_case);
                r.n_trials = c.n_trials;
                r.pd_trials = c.pd_trials;
                r.is_pd = c.is_pd;
                r.worst = c.worst;
                result.records.push_back(std::move(r));
            }
            break;
        }
        case Command::Sweep: {
            if (cfg.sweep_values.empty()) throw ConfigError("config field 'sweep.values': required for sweep");
            std::vector<SweepRecord> recs;
            try {
                recs = parameter_sweep(cfg.sweep_axis, cfg.sweep_values, cfg.scenario, opts);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("config field 'sweep.values': ") + e.what());
            }
            for (const auto& s : recs) {
                ResultRecord r = base_record("sweep", s.tpl, cfg.param_case);
                r.axis = to_string(s.axis);
                r.value = s.value;
                r.n_trials = s.n_trials;
                r.pd_trials = s.pd_trials;
                r.is_pd = s.pd_trials == s.n_trials;
                r.worst = s.worst;
                r.has_bounds = true;
                r.bounds = s.mean;
                check_finite(r.bounds);
                result.records.push_back(std::move(r));
            }
            break;
        }
    }
    return result;
}

std::string render_output(const RunConfig& cfg, Command command, const RunResult& result) {
    std::ostringstream os;
    if (cfg.format == OutputFormat::Csv) {
        write_csv(os, result.records);
    } else {
        json doc;
        doc["command"] = to_string(command);
        doc["effective_config"] = effective_config_json(cfg);
        doc["derived"] = derived_config_json(cfg);
        doc["records"] = records_json(result.records);
        os << doc.dump(2) << '\n';
    }
    return os.str();
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App cli{"Fisher information and Cramer-Rao bounds for LEO-aided 9D localization"};
    std::string config_path;
    std::string command_name = "bound";
    std::uint64_t seed = 0;
    std::string out_path;
    std::string format;
    std::string axis;
    std::vector<double> values;
    int threads = -1;
    cli.add_option("--config", config_path, "JSON configuration file");
    cli.add_option("--command", command_name, "bound | identifiability | sweep")
        ->check(CLI::IsMember({"bound", "identifiability", "sweep"}));
    auto* seed_opt = cli.add_option("--seed", seed, "Base seed for scenario generation");
    cli.add_option("--out", out_path, "Output file (default: standard output)");
    cli.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    cli.add_option("--axis", axis, "Sweep axis: n_ant | carrier_freq_hz | slot_spacing_s | snr_db");
    cli.add_option("--values", values, "Sweep values")->delimiter(',');
    cli.add_option("--threads", threads, "Worker threads (0 = all cores)");

    try {
        cli.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << cli.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    }

    RunConfig cfg;
    Command command = Command::Bound;
    try {
        if (!config_path.empty()) cfg = load_config(config_path);
        command = command_from_string(command_name);
        if (*seed_opt) cfg.seed = seed;
        if (!out_path.empty()) cfg.out = out_path;
        if (!format.empty()) cfg.format = output_format_from_string(format);
        if (!axis.empty()) {
            try {
                cfg.sweep_axis = sweep_axis_from_string(axis);
            } catch (const std::invalid_argument& e) {
                throw ConfigError(std::string("--axis: ") + e.what());
            }
        }
        if (!values.empty()) cfg.sweep_values = values;
        if (threads >= 0) cfg.threads = threads;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    }
    for (const auto& w : config_warnings(cfg)) err << "warning: " << w << '\n';

    RunResult result;
    try {
        result = run_command(cfg, command);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << '\n';
        return kExitConfig;
    }

    const std::string rendered = render_output(cfg, command, result);
    std::ostream& table = cfg.out.empty() ? err : out;
    table << "effective config: " << effective_config_json(cfg).dump() << '\n';
    table << "derived: " << derived_config_json(cfg).dump() << '\n';
    write_table(table, result.records);
    if (cfg.out.empty()) {
        out << rendered;
    } else {
        std::ofstream f(cfg.out, std::ios::binary);
        if (!f || !(f << rendered)) {
            err << "config error: cannot write output file '" << cfg.out << "'\n";
            return kExitConfig;
        }
    }
    if (!result.diagnostics.empty()) err << result.diagnostics << '\n';
    return result.exit_code;
}

}  // namespace leocrlb::app
