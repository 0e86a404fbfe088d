// Copyright 2026 The latbal authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// latbal command line tool.
//
// Balancing workflow on netlist files:
//   latbal initial   all-zero latency configuration artifacts
//   latbal synchro   analysis run -> measured per-path delays
//   latbal final     verify a delay assignment leaves no inequality
//
// Generator back ends (report/VHDL level, netlist-free):
//   latbal latreadgen <markers> <package_file> <package_name> <function_name>
//   latbal lateqgen   <entity> <out_file> <T_TYPE>...
//
// Fixture export:
//   latbal ex1       example detector system as a netlist file
//
// Exit codes: 0 success, 1 balancing/verification failure, 2 bad usage or
// unreadable/malformed input.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "latbal/latbal.hpp"

namespace {

constexpr int kExitFailure = 1;  // measurement/verification failed
constexpr int kExitUsage = 2;    // bad arguments or malformed input

latbal::Netlist load_netlist_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw latbal::Error("cannot open netlist file " + path);
    latbal::Netlist n = latbal::load_netlist(in);
    latbal::require_valid(n, path.c_str());
    return n;
}

latbal::DelayAssignment load_assignment_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw latbal::Error("cannot open delay assignment " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw latbal::ParseError(path + ": " + e.what());
    }
    if (!j.is_object())
        throw latbal::ParseError(path + ": delay assignment must be a JSON object");
    latbal::DelayAssignment d;
    for (const auto& [id, delays] : j.items()) {
        if (!delays.is_array())
            throw latbal::ParseError(path + ": delays for \"" + id + "\" must be an array");
        std::uint32_t p = 0;
        for (const auto& v : delays) {
            if (!v.is_number_integer() || v.get<std::int64_t>() < 0)
                throw latbal::ParseError(path + ": delay of \"" + id +
                                         "\" path " + std::to_string(p) +
                                         " must be a non-negative integer");
            d.set(id, p++, v.get<std::uint32_t>());
        }
    }
    return d;
}

std::ofstream open_out(const std::string& path, const char* what) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw latbal::Error(std::string("cannot write ") + what + " to " + path);
    return out;
}

// Default marker report location: latrep.txt in LATBAL_REPORT_DIR (or the
// working directory), unless --report says otherwise.
std::filesystem::path default_report_path() {
    if (const char* dir = std::getenv("LATBAL_REPORT_DIR"))
        return std::filesystem::path(dir) / "latrep.txt";
    return std::filesystem::path("latrep.txt");
}

void print_assignment_table(const latbal::DelayAssignment& d, std::ostream& os) {
    for (const auto& [id, delays] : d.entries()) {
        os << id << ": [";
        for (std::size_t i = 0; i < delays.size(); ++i) os << (i ? ", " : "") << delays[i];
        os << "]\n";
    }
}

void write_artifacts(const latbal::DelayAssignment& for_json,
                     const latbal::DelayAssignment& for_package, const std::string& json_path,
                     const std::string& package_path, const std::string& package_name,
                     const std::string& function_name, bool package_to_stdout_if_unset) {
    if (!json_path.empty()) {
        auto out = open_out(json_path, "delay assignment");
        latbal::emit_assignment_json(for_json, out);
    }
    if (!package_path.empty()) {
        auto out = open_out(package_path, "latency package");
        latbal::emit_latency_package(for_package, package_name, function_name, out);
    } else if (package_to_stdout_if_unset && json_path.empty()) {
        latbal::emit_latency_package(for_package, package_name, function_name, std::cout);
    }
}

struct CommonOpts {
    std::string netlist;
    std::uint64_t cycles = 200;
    std::uint32_t window = latbal::MarkerWindow::kDefaultSize;
    std::uint64_t seed = 1;

    latbal::RunOptions run_options() const {
        latbal::RunOptions o;
        o.cycles = cycles;
        o.window = latbal::MarkerWindow(window);
        o.seed = seed;
        return o;
    }
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_sim) {
    cmd->add_option("--netlist", o.netlist, "Netlist file (latbal-netlist-1 JSON)")
        ->required();
    if (with_sim) {
        cmd->add_option("--cycles", o.cycles, "Simulated cycles")->capture_default_str();
        cmd->add_option("--window", o.window, "Marker wraparound window (power of two)")
            ->capture_default_str();
        cmd->add_option("--seed", o.seed, "Stimulus seed")->capture_default_str();
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"latbal: automatic latency balancing for pipelined dataflow designs"};
    app.require_subcommand(1);

    // --- initial ---------------------------------------------------------
    CommonOpts init_opts;
    std::string init_json, init_pkg;
    std::string init_pkg_name = "lateq_read_pkg", init_fn_name = "lateq_read_delays";
    CLI::App* cmd_initial =
        app.add_subcommand("initial", "Emit the all-zero latency configuration");
    add_common(cmd_initial, init_opts, false);
    cmd_initial->add_option("--json", init_json, "Write the assignment as JSON here");
    cmd_initial->add_option("--package", init_pkg, "Write the VHDL package here");
    cmd_initial->add_option("--package-name", init_pkg_name)->capture_default_str();
    cmd_initial->add_option("--function-name", init_fn_name)->capture_default_str();

    // --- synchro ---------------------------------------------------------
    CommonOpts syn_opts;
    std::string syn_json, syn_pkg, syn_report;
    std::string syn_pkg_name = "lateq_read_pkg", syn_fn_name = "lateq_read_delays";
    bool syn_oracle = false;
    CLI::App* cmd_synchro = app.add_subcommand(
        "synchro", "Analysis run: measure per-path delays that balance every LCEQ");
    add_common(cmd_synchro, syn_opts, true);
    cmd_synchro->add_option("--report", syn_report,
                            "Marker report file (default: $LATBAL_REPORT_DIR/latrep.txt)");
    cmd_synchro->add_option("--json", syn_json, "Write measured delays as JSON here");
    cmd_synchro->add_option("--package", syn_pkg,
                            "Write the full latency configuration package here");
    cmd_synchro->add_option("--package-name", syn_pkg_name)->capture_default_str();
    cmd_synchro->add_option("--function-name", syn_fn_name)->capture_default_str();
    cmd_synchro->add_flag("--oracle", syn_oracle,
                          "Cross-check measured delays against static analysis");

    // --- final -----------------------------------------------------------
    CommonOpts fin_opts;
    std::string fin_delays;
    CLI::App* cmd_final = app.add_subcommand(
        "final", "Final test: verify the (configured + given) delays leave no inequality");
    add_common(cmd_final, fin_opts, true);
    cmd_final->add_option("--delays", fin_delays,
                          "Additional per-path delays (JSON from synchro) to apply on top of "
                          "the netlist's configured delays");

    // --- latreadgen ------------------------------------------------------
    std::string lrg_markers, lrg_package, lrg_pkg_name, lrg_fn_name, lrg_json;
    std::uint32_t lrg_window = latbal::MarkerWindow::kDefaultSize;
    bool lrg_initial = false;
    CLI::App* cmd_latreadgen = app.add_subcommand(
        "latreadgen", "Generate the latency configuration package from a marker report");
    cmd_latreadgen->add_option("markers_file", lrg_markers, "Marker report from an analysis run")
        ->required();
    cmd_latreadgen->add_option("package_file", lrg_package, "Output VHDL package file")
        ->required();
    cmd_latreadgen->add_option("package_name", lrg_pkg_name, "VHDL package name")->required();
    cmd_latreadgen->add_option("function_name", lrg_fn_name, "VHDL function name")->required();
    cmd_latreadgen->add_flag("--initial", lrg_initial,
                             "Ignore the report; emit the all-zero configuration");
    cmd_latreadgen->add_option("--json", lrg_json, "Also write the assignment as JSON here");
    cmd_latreadgen->add_option("--window", lrg_window, "Marker wraparound window")
        ->capture_default_str();

    // --- lateqgen --------------------------------------------------------
    std::string leg_entity, leg_out;
    std::vector<std::string> leg_types, leg_use;
    CLI::App* cmd_lateqgen =
        app.add_subcommand("lateqgen", "Generate an LCEQ entity for the given path types");
    cmd_lateqgen->add_option("entity", leg_entity, "Entity name")->required();
    cmd_lateqgen->add_option("out_file", leg_out, "Output VHDL file")->required();
    cmd_lateqgen->add_option("types", leg_types, "Path record types (T_<NAME>, one per path)")
        ->required()
        ->expected(-2);
    cmd_lateqgen->add_option("--use", leg_use, "Additional work-library packages to use");

    // --- ex1 -------------------------------------------------------------
    latbal::Ex1Params ex1;
    std::string ex1_out;
    CLI::App* cmd_ex1 =
        app.add_subcommand("ex1", "Export the example detector system as a netlist");
    cmd_ex1->add_option("--channels", ex1.n_channels)->capture_default_str();
    cmd_ex1->add_option("--side-chans", ex1.n_side_chans)->capture_default_str();
    cmd_ex1->add_option("--ins-cmp", ex1.ins_in_cmp)->capture_default_str();
    cmd_ex1->add_option("--ins-add", ex1.ins_in_add)->capture_default_str();
    cmd_ex1->add_option("--out", ex1_out, "Output netlist file (stdout when unset)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (app.got_subcommand(cmd_initial)) {
            load_netlist_file(init_opts.netlist);  // reject broken inputs up front
            latbal::DelayAssignment zero;
            write_artifacts(zero, zero, init_json, init_pkg, init_pkg_name, init_fn_name, true);
            return 0;
        }

        if (app.got_subcommand(cmd_synchro)) {
            latbal::Netlist n = load_netlist_file(syn_opts.netlist);
            latbal::RunOptions opt = syn_opts.run_options();
            opt.report_path = syn_report.empty() ? default_report_path()
                                                 : std::filesystem::path(syn_report);
            opt.oracle_check = syn_oracle;
            latbal::SynchroResult r = latbal::run_synchro(n, opt);
            print_assignment_table(r.additional, std::cout);
            // JSON carries what was measured (feed to `latbal final --delays`);
            // the package carries the design's full configuration.
            write_artifacts(r.additional, r.total, syn_json, syn_pkg, syn_pkg_name, syn_fn_name,
                            false);
            if (syn_oracle) {
                if (!r.oracle_agrees) {
                    std::cerr << "oracle cross-check failed: static analysis disagrees with "
                                 "measured delays\n";
                    return kExitFailure;
                }
                std::cout << "oracle cross-check: ok\n";
            }
            return 0;
        }

        if (app.got_subcommand(cmd_final)) {
            latbal::Netlist n = load_netlist_file(fin_opts.netlist);
            latbal::DelayAssignment additional;
            if (!fin_delays.empty()) additional = load_assignment_file(fin_delays);
            latbal::FinalResult r = latbal::run_final(n, additional, fin_opts.run_options());
            if (!r.passed) {
                for (const latbal::InequalityEvent& ev : r.outcome.inequality_events)
                    std::cerr << "final test failed at cycle " << ev.cycle << ": "
                              << latbal::format_inequality(ev) << "\n";
                return kExitFailure;
            }
            std::cout << "final test passed (" << r.outcome.cycles_run << " cycles)\n";
            for (const latbal::SinkTrace& s : r.outcome.sink_traces) {
                std::size_t valid = 0;
                for (const latbal::Token& t : s.tokens)
                    if (t.marker.valid()) ++valid;
                std::cout << "sink " << s.name << ": " << valid << " valid samples\n";
            }
            return 0;
        }

        if (app.got_subcommand(cmd_latreadgen)) {
            latbal::DelayAssignment d;
            if (!lrg_initial) {
                std::ifstream in(lrg_markers, std::ios::binary);
                if (!in)
                    throw latbal::Error("cannot open marker report " + lrg_markers);
                d = latbal::compute_delays(in, latbal::MarkerWindow(lrg_window));
            }
            {
                auto out = open_out(lrg_package, "latency package");
                latbal::emit_latency_package(d, lrg_pkg_name, lrg_fn_name, out);
            }
            if (!lrg_json.empty()) {
                auto out = open_out(lrg_json, "delay assignment");
                latbal::emit_assignment_json(d, out);
            }
            return 0;
        }

        if (app.got_subcommand(cmd_lateqgen)) {
            std::string text = latbal::generate_lceq(latbal::LceqSpec{leg_entity, leg_types},
                                                     leg_use);
            auto out = open_out(leg_out, "LCEQ entity");
            out << text;
            return 0;
        }

        if (app.got_subcommand(cmd_ex1)) {
            latbal::Netlist n = latbal::build_ex1(ex1);
            if (ex1_out.empty()) {
                latbal::save_netlist(n, std::cout);
            } else {
                auto out = open_out(ex1_out, "netlist");
                latbal::save_netlist(n, out);
            }
            return 0;
        }
    } catch (const latbal::InconsistentLatencyError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    } catch (const latbal::NoValidSamplesError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    } catch (const latbal::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    return kExitUsage;  // unreachable: require_subcommand(1)
}
