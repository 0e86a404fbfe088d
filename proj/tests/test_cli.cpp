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

// End-to-end tests against the real binary (path injected by the build).

#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "latbal/fixtures.hpp"
#include "latbal/netlist_json.hpp"
#include "testutil.hpp"

using namespace latbal;
namespace fs = std::filesystem;

namespace {

const char* cli() { return LATBAL_CLI_PATH; }

bool contains(const std::string& text, const std::string& needle) {
    return text.find(needle) != std::string::npos;
}

void write_netlist_file(const fs::path& p, const Netlist& n) {
    std::ostringstream os;
    save_netlist(n, os);
    testutil::spit(p, os.str());
}

struct CliFixture {
    fs::path dir = testutil::scratch_dir("cli");

    testutil::ExecResult run(const std::vector<std::string>& args,
                             const std::map<std::string, std::string>& env = {}) {
        std::vector<std::string> argv{cli()};
        argv.insert(argv.end(), args.begin(), args.end());
        return testutil::run_process(argv, dir, env);
    }

    ~CliFixture() {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
};

}  // namespace

TEST_CASE("usage errors exit with code 2") {
    CliFixture fx;
    REQUIRE(fx.run({}).exit_code == 2);                    // subcommand required
    REQUIRE(fx.run({"frobnicate"}).exit_code == 2);        // unknown subcommand
    REQUIRE(fx.run({"synchro"}).exit_code == 2);           // --netlist required
    REQUIRE(fx.run({"--help"}).exit_code == 0);            // help is not an error

    auto r = fx.run({"synchro", "--netlist", "missing.json"});
    REQUIRE(r.exit_code == 2);
    REQUIRE(contains(r.err, "error:"));

    testutil::spit(fx.dir / "broken.json", "{\"version\": \"nope\"}");
    REQUIRE(fx.run({"synchro", "--netlist", "broken.json"}).exit_code == 2);

    // Structurally invalid netlists are rejected up front, too.
    testutil::spit(fx.dir / "invalid.json",
                   R"({"version": "latbal-netlist-1",
                       "nodes": [{"id": "x", "kind": "sink"}], "edges": []})");
    REQUIRE(fx.run({"synchro", "--netlist", "invalid.json"}).exit_code == 2);
}

TEST_CASE("initial emits the all-zero configuration") {
    CliFixture fx;
    write_netlist_file(fx.dir / "net.json", build_two_branch());

    auto r = fx.run({"initial", "--netlist", "net.json"});
    REQUIRE(r.exit_code == 0);
    REQUIRE(contains(r.out, "package lateq_read_pkg is"));
    REQUIRE(contains(r.out, "return 0;"));

    r = fx.run({"initial", "--netlist", "net.json", "--json", "zero.json", "--package",
                "zero.vhd", "--package-name", "my_pkg"});
    REQUIRE(r.exit_code == 0);
    REQUIRE(testutil::slurp(fx.dir / "zero.json") == "{}\n");
    REQUIRE(contains(testutil::slurp(fx.dir / "zero.vhd"), "package my_pkg is"));
}

TEST_CASE("the full synchro/final loop balances a netlist") {
    CliFixture fx;
    write_netlist_file(fx.dir / "net.json", build_two_branch());

    // Unbalanced: the final test trips with the canonical message.
    auto fail = fx.run({"final", "--netlist", "net.json"});
    REQUIRE(fail.exit_code == 1);
    REQUIRE(contains(fail.err, "final test failed at cycle 2"));
    REQUIRE(contains(fail.err, "EQ inequal latencies: out0=0, out1=-1"));

    // Synchro measures the one missing delay.
    auto syn = fx.run({"synchro", "--netlist", "net.json", "--json", "delays.json",
                       "--package", "cfg.vhd", "--report", "rep.txt", "--oracle"});
    REQUIRE(syn.exit_code == 0);
    REQUIRE(contains(syn.out, "EQ: [4, 0]"));
    REQUIRE(contains(syn.out, "oracle cross-check: ok"));
    REQUIRE(contains(testutil::slurp(fx.dir / "delays.json"), "\"EQ\""));
    REQUIRE(contains(testutil::slurp(fx.dir / "cfg.vhd"),
                     "if LEQ_ID = \"EQ\" and NUM = 0 then"));
    REQUIRE(contains(testutil::slurp(fx.dir / "rep.txt"), "EQ end\n"));

    // Final with the measured delays passes.
    auto fin = fx.run({"final", "--netlist", "net.json", "--delays", "delays.json"});
    REQUIRE(fin.exit_code == 0);
    REQUIRE(contains(fin.out, "final test passed (200 cycles)"));
    REQUIRE(contains(fin.out, "sink out:"));
}

TEST_CASE("synchro JSON is the additional delay, the package the total") {
    CliFixture fx;
    // Preconfigure 1 of the 4 cycles the fast path needs.
    DelayAssignment pre;
    pre.set("EQ", 0, 1);
    write_netlist_file(fx.dir / "net.json", apply_delays(build_two_branch(), pre));

    auto syn = fx.run({"synchro", "--netlist", "net.json", "--json", "add.json", "--package",
                       "cfg.vhd"});
    REQUIRE(syn.exit_code == 0);
    REQUIRE(contains(syn.out, "EQ: [3, 0]"));             // measured on top
    REQUIRE(contains(testutil::slurp(fx.dir / "add.json"), "3"));
    REQUIRE(contains(testutil::slurp(fx.dir / "cfg.vhd"), "return 4;"));  // configured total

    REQUIRE(fx.run({"final", "--netlist", "net.json", "--delays", "add.json"}).exit_code == 0);
}

TEST_CASE("the report lands in LATBAL_REPORT_DIR by default") {
    CliFixture fx;
    write_netlist_file(fx.dir / "net.json", build_two_branch());
    fs::create_directories(fx.dir / "reports");

    auto r = fx.run({"synchro", "--netlist", "net.json"},
                    {{"LATBAL_REPORT_DIR", (fx.dir / "reports").string()}});
    REQUIRE(r.exit_code == 0);
    std::string report = testutil::slurp(fx.dir / "reports" / "latrep.txt");
    REQUIRE(contains(report, "EQ 0 "));
    REQUIRE(contains(report, "EQ end\n"));

    // Without the variable it defaults to ./latrep.txt.
    REQUIRE(fx.run({"synchro", "--netlist", "net.json"}).exit_code == 0);
    REQUIRE(fs::exists(fx.dir / "latrep.txt"));
}

TEST_CASE("measurement failures exit with code 1") {
    CliFixture fx;
    // 25 cycles of depth: 10 simulated cycles never warm the block up.
    write_netlist_file(fx.dir / "deep.json", build_deep_chain(25));
    auto r = fx.run({"synchro", "--netlist", "deep.json", "--cycles", "10"});
    REQUIRE(r.exit_code == 1);
    REQUIRE(contains(r.err, "never produced a fully-initialized cycle group"));

    // Runs beyond half the window are refused up front (usage, not failure).
    auto wrap = fx.run({"synchro", "--netlist", "deep.json", "--cycles", "40",
                        "--window", "64"});
    REQUIRE(wrap.exit_code == 2);
    REQUIRE(contains(wrap.err, "error:"));
}

TEST_CASE("latreadgen turns a report file into the package") {
    CliFixture fx;
    testutil::spit(fx.dir / "markers.txt",
                   "TOP:EQ1 0 17\n"
                   "TOP:EQ1 1 13\n"
                   "TOP:EQ1 end\n"
                   "TOP:EQ1 0 18\n"
                   "TOP:EQ1 1 14\n"
                   "TOP:EQ1 end\n");

    auto r = fx.run({"latreadgen", "markers.txt", "pkg.vhd", "lat_pkg", "lateq_read_delays",
                     "--json", "d.json"});
    REQUIRE(r.exit_code == 0);
    std::string pkg = testutil::slurp(fx.dir / "pkg.vhd");
    REQUIRE(contains(pkg, "package lat_pkg is"));
    REQUIRE(contains(pkg, "if LEQ_ID = \"TOP:EQ1\" and NUM = 0 then"));
    REQUIRE(contains(pkg, "return 4;"));
    REQUIRE(contains(testutil::slurp(fx.dir / "d.json"), "\"TOP:EQ1\""));

    // --initial ignores the report entirely (it may not even exist).
    auto init = fx.run({"latreadgen", "no_such_file.txt", "init.vhd", "lat_pkg",
                        "lateq_read_delays", "--initial"});
    REQUIRE(init.exit_code == 0);
    REQUIRE(!contains(testutil::slurp(fx.dir / "init.vhd"), "elsif"));

    // A truncated report is a usage-level failure.
    testutil::spit(fx.dir / "trunc.txt", "EQ 0 17\n");
    REQUIRE(fx.run({"latreadgen", "trunc.txt", "t.vhd", "lat_pkg", "f"}).exit_code == 2);
    // Inconsistent measurements are a verification failure.
    testutil::spit(fx.dir / "drift.txt",
                   "EQ 0 5\nEQ 1 5\nEQ end\nEQ 0 6\nEQ 1 7\nEQ end\n");
    REQUIRE(fx.run({"latreadgen", "drift.txt", "t.vhd", "lat_pkg", "f"}).exit_code == 1);
}

TEST_CASE("lateqgen writes the entity for the given path types") {
    CliFixture fx;
    auto r = fx.run({"lateqgen", "my_eq", "my_eq.vhd", "T_RAW_MRK", "T_POS_MRK",
                     "--use", "my_types"});
    REQUIRE(r.exit_code == 0);
    std::string vhdl = testutil::slurp(fx.dir / "my_eq.vhd");
    REQUIRE(contains(vhdl, "entity my_eq is"));
    REQUIRE(contains(vhdl, "din0  : in  T_RAW_MRK;"));
    REQUIRE(contains(vhdl, "use work.my_types.all;"));

    // Fewer than two path types is a usage error.
    REQUIRE(fx.run({"lateqgen", "my_eq", "x.vhd", "T_ONLY"}).exit_code == 2);
    // Bad type names are rejected before anything is written.
    REQUIRE(fx.run({"lateqgen", "my_eq", "x.vhd", "T_A", "NOT_A_TYPE"}).exit_code == 2);
}

TEST_CASE("ex1 exports a loadable netlist that balances") {
    CliFixture fx;
    auto r = fx.run({"ex1", "--channels", "32", "--side-chans", "3", "--ins-cmp", "2",
                     "--ins-add", "3", "--out", "ex1.json"});
    REQUIRE(r.exit_code == 0);

    auto syn = fx.run({"synchro", "--netlist", "ex1.json", "--oracle"});
    REQUIRE(syn.exit_code == 0);
    REQUIRE(contains(syn.out, "EQ1: [5, 0]"));
    REQUIRE(contains(syn.out, "EQ2: [4, 1, 0]"));

    // Invalid parameters are a usage error.
    REQUIRE(fx.run({"ex1", "--channels", "4", "--side-chans", "3"}).exit_code == 2);

    // Without --out the netlist goes to stdout.
    auto dump = fx.run({"ex1", "--channels", "16", "--side-chans", "2"});
    REQUIRE(dump.exit_code == 0);
    REQUIRE(contains(dump.out, "\"latbal-netlist-1\""));
}
