#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "test_support.hpp"

namespace {

struct cli_result {
    int status = -1;
    std::string out;
};

// Runs the CLI with stderr folded into stdout.
cli_result run_cli(const std::string& args) {
    std::string cmd = std::string(DNET_CLI_BIN) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    cli_result r;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, pipe))
        r.out.append(buf, n);
    int rc = pclose(pipe);
    r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return r;
}

std::string fixture(const std::string& f) {
    return std::string(DNET_FIXTURE_DIR) + "/" + f;
}

} // namespace

TEST_CASE("resolve prints the accepted set") {
    cli_result r = run_cli("resolve " + fixture("omap44xx-mem.dn") + " VA9_0 0x20000000");
    CHECK(r.status == 0);
    CHECK(r.out == "L3 @ 0x80000000\n");

    cli_result dec = run_cli("resolve " + fixture("omap44xx-mem.dn") + " VA9_0 536870912");
    CHECK(dec.out == "L3 @ 0x80000000\n");
}

TEST_CASE("resolve reports loops with a cycle witness and exit code 2") {
    cli_result r = run_cli("resolve " + fixture("toys/self-loop.dn") + " A 0x0");
    CHECK(r.status == 2);
    CHECK(r.out.find("(A,0x0) -> (A,0x0)") != std::string::npos);
}

TEST_CASE("check distinguishes clean models from loops and parse errors") {
    CHECK(run_cli("check " + fixture("omap44xx-mem.dn")).status == 0);
    cli_result loop = run_cli("check " + fixture("toys/overlay-cycle.dn"));
    CHECK(loop.status == 2);
    CHECK(loop.out.find("loop") != std::string::npos);
    CHECK(run_cli("check " + fixture("toys/shift-escape.dn")).status == 0);

    auto tmp = std::filesystem::temp_directory_path() / "dn-bad.dn";
    std::ofstream(tmp) << "A is accept [0x-";
    CHECK(run_cli("check " + tmp.string()).status == 1);
    std::filesystem::remove(tmp);
}

TEST_CASE("flatten output is byte-stable and well-formed") {
    std::string cmd = "flatten " + fixture("desktop-mem.dn") + " --observer PC_0";
    cli_result a = run_cli(cmd);
    cli_result b = run_cli(cmd);
    CHECK(a.status == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("{\"observer\": \"PC_0\", \"pieces\": [") != std::string::npos);
    CHECK(a.out.find("\"dest_base\": \"0x0\"") != std::string::npos);

    cli_result all = run_cli("flatten " + fixture("desktop-mem.dn"));
    CHECK(all.status == 0);
    CHECK(all.out.find("\"observer\": \"GFX\"") != std::string::npos);

    CHECK(run_cli("flatten " + fixture("toys/self-loop.dn")).status == 2);
}

TEST_CASE("split emits concrete syntax that is view-equivalent") {
    cli_result split = run_cli("split " + fixture("desktop-mem.dn"));
    REQUIRE(split.status == 0);
    CHECK(split.out.find("PC_0_acc is accept [0xfee00000-0xfee0ffff]") !=
          std::string::npos);

    auto tmp = std::filesystem::temp_directory_path() / "dn-split.dn";
    std::ofstream(tmp) << split.out;
    cli_result equiv =
        run_cli("equiv " + fixture("desktop-mem.dn") + " " + tmp.string() +
                " --auto-split-map");
    CHECK(equiv.status == 0);
    std::filesystem::remove(tmp);
}

TEST_CASE("equiv exits 3 and names a counterexample for distinct views") {
    auto tmp = std::filesystem::temp_directory_path() / "dn-neq.dn";
    std::ofstream(tmp) << "GFX is accept [0x0-0xfffffe]\n"; // one address short
    cli_result r = run_cli("equiv " + fixture("desktop-mem.dn") + " " + tmp.string() +
                           " --observers GFX");
    CHECK(r.status == 3);
    CHECK(r.out.find("observer GFX @ 0xffffff") != std::string::npos);
    std::filesystem::remove(tmp);
}

TEST_CASE("rank prints a well-formed ranking as JSON") {
    cli_result r = run_cli("rank " + fixture("desktop-mem.dn") + " PC_0 0xc2000000");
    CHECK(r.status == 0);
    CHECK(r.out.find("{\"ranks\": [") == 0);
    CHECK(r.out.find("\"node\": \"GFX\", \"addr\": \"0x0\", \"rank\": 0") !=
          std::string::npos);
    CHECK(run_cli("rank " + fixture("toys/self-loop.dn") + " A 3").status == 2);
}

TEST_CASE("dot export labels vertices with symbolic names") {
    cli_result r = run_cli("dot " + fixture("desktop-mem.dn"));
    CHECK(r.status == 0);
    CHECK(r.out.find("digraph") != std::string::npos);
    CHECK(r.out.find("[label=\"PC_0\"]") != std::string::npos);
    CHECK(r.out.find("0xc2000000-0xc2ffffff") != std::string::npos);
}

TEST_CASE("usage and io errors use the documented exit codes") {
    CHECK(run_cli("frobnicate").status == 64);
    CHECK(run_cli("resolve").status == 64);
    CHECK(run_cli("check /nonexistent/file.dn").status == 74);
}

TEST_CASE("dangling references require the escape hatch") {
    auto tmp = std::filesystem::temp_directory_path() / "dn-dangling.dn";
    std::ofstream(tmp) << "A is over B\n";
    CHECK(run_cli("check " + tmp.string()).status == 1);
    CHECK(run_cli("--allow-dangling check " + tmp.string()).status == 0);
    cli_result r = run_cli("--allow-dangling resolve " + tmp.string() + " A 0x5");
    CHECK(r.status == 0);
    CHECK(r.out.empty());
    std::filesystem::remove(tmp);
}

TEST_CASE("warnings for duplicate declarations go to the error stream") {
    auto tmp = std::filesystem::temp_directory_path() / "dn-dup.dn";
    std::ofstream(tmp) << "A is accept [0-0]\nA is accept [1-1]\n";
    cli_result r = run_cli("check " + tmp.string());
    CHECK(r.status == 0);
    CHECK(r.out.find("duplicate declaration") != std::string::npos);
    std::filesystem::remove(tmp);
}
